"""Quantum states of linear systems, derived from their classical modes.

The pipeline: reduce a general quadratic Hamiltonian to normal form,
find the classical eigenmodes, build the stationary Gaussian shape
matrix from a mode selection, then construct ground, excited, and
coherent states and verify them on grids.
"""

from .classical import (DriveProjection, ModeSet, compute_modes,
                        default_timestep, evolve_driven, fit_coefficients,
                        project_drive, stability_matrix, trajectory)
from .errors import (BlowUp, ComplexFrequency, DefectiveSpectrum,
                     DegenerateUnresolved, FormMismatch, GridMismatch,
                     LinsysQuantaError, NonSymmetricInput, NoPhysicalState,
                     NotPositiveDefinite, OrderTooLarge, RelationViolation,
                     SignalDomainExceeded, SingularBasis, SingularD,
                     SingularModeBasis, TruncationTooLarge)
from .hermite import (hermite_box, hermite_from_generating,
                      hermite_from_rodrigues, hermite_value,
                      orthogonality_integral)
from .model import (GeneralHamiltonian, NormalForm, hamiltonian_value,
                    load_model, parse_model, reduce)
from .packet import (PacketPath, PacketState, make_packet, norm_factor,
                     packet_value, propagate, pulsating_shape_1d)
from .riccati import (LinearPair, RiccatiPath, StationaryShape,
                      integrate_linear_pair, integrate_riccati, k_from_pair,
                      riccati_rhs, select_modes, solve_algebraic)
from .signals import QuadraticDrop, TimeSignal
from .states import (CoherentState, GroundState, SpectrumBasis,
                     StationaryState, build_basis, coherent_center,
                     coherent_forms, coherent_value, coordinates, energy,
                     expand_coherent, indices_up_to, make_ground,
                     normalized_on_grid, psi0, psi_n, reconstruct_expansion,
                     stationary_state)
from .verify import (Grid, apply_hamiltonian, eigen_residual, gram_matrix,
                     grid_norm, inner_product, sample, stationary_grid)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
