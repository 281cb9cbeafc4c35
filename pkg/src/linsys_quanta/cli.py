"""Command-line front end.

Subcommands cover the whole pipeline: reduce, modes, ground, spectrum,
states, evolve, coherent, verify, hermite-eval.  Structured results go
to stdout as JSON, grids and time series as CSV.  With --out DIR every
artifact is also written into DIR together with rendered figures.
Errors exit 2 (no physical state), 3 (input validation), or 4
(numerical failure) and print a machine-readable JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import classical, hermite, model, packet, report, riccati, states, verify
from .errors import LinsysQuantaError

log = logging.getLogger("linsys_quanta")


def _configure_logging() -> None:
    name = os.environ.get("LINSYS_QUANTA_LOG", "WARNING").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------- helpers

def _fmt(v) -> str:
    return format(float(v), ".17g")


def _cnum(z) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _cvec(v) -> list:
    return [[float(z.real), float(z.imag)]
            for z in np.asarray(v, dtype=complex)]


def _rmat(M) -> list:
    return [[float(x) for x in row] for row in np.asarray(M, dtype=float)]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _parse_floats(text: str, dim: int, name: str) -> np.ndarray:
    parts = [p for p in text.split(",") if p.strip()]
    vals = [float(p) for p in parts]
    if len(vals) == 1 and dim > 1:
        vals = vals * dim
    if len(vals) != dim:
        raise ValueError(f"{name} needs {dim} comma-separated values")
    return np.asarray(vals, dtype=float)


def _parse_complexes(text: str, dim: int, name: str) -> np.ndarray:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    vals = [complex(p) for p in parts]
    if len(vals) == 1 and dim > 1:
        vals = vals * dim
    if len(vals) != dim:
        raise ValueError(f"{name} needs {dim} comma-separated values")
    return np.asarray(vals, dtype=complex)


class _Sink:
    """Optional output directory; silently inactive when --out is absent."""

    def __init__(self, out):
        self.dir = Path(out) if out else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    @property
    def active(self) -> bool:
        return self.dir is not None

    def write(self, name: str, text: str) -> None:
        if self.dir is not None:
            (self.dir / name).write_text(text)

    def path(self, name: str) -> str:
        return str(self.dir / name)


def _load_nf(args) -> model.NormalForm:
    return model.reduce(model.load_model(args.model))


def _stationary(nf: model.NormalForm, hbar: float):
    ms = classical.compute_modes(nf)
    shape = riccati.select_modes(ms)
    gs = states.make_ground(shape.K0, mass=nf.mass, hbar=hbar)
    basis = states.build_basis(ms, shape.selection, shape.K0, hbar=hbar)
    return ms, shape, gs, basis


def _default_tmax(ms: classical.ModeSet) -> float:
    w = [abs(f.real) for f in ms.freqs if abs(f.real) > 1e-12]
    return 2.0 * np.pi / min(w) if w else 10.0


def _state_tag(n) -> str:
    return "-".join(str(v) for v in n)


# ---------------------------------------------------------------- commands

def cmd_reduce(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    payload = {
        "dim": nf.dim,
        "mass": nf.mass,
        "Omega": _rmat(nf.Omega),
        "V": _rmat(nf.V),
        "O": _rmat(nf.O),
        "g": nf.g.to_json(),
        "dropped_value_t0": float(nf.dropped.value(0.0)) + 0.0,
    }
    print(_dump(payload))
    sink.write("reduce.json", json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_modes(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    ms = classical.compute_modes(nf)
    payload = {
        "freqs": [_cnum(w) for w in ms.freqs],
        "amps": [{"R": _cvec(ms.R[i]), "P": _cvec(ms.P[i])}
                 for i in range(len(ms.freqs))],
        "pairing": [int(v) for v in ms.pairing],
    }
    print(_dump(payload))
    sink.write("modes.json", json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_ground(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    ms = classical.compute_modes(nf)
    shape = riccati.select_modes(ms)
    resid = float(np.max(np.abs(riccati.riccati_rhs(shape.K0, nf))))
    payload = {
        "K0": {"re": _rmat(shape.K0.real), "im": _rmat(shape.K0.imag)},
        "selection": [int(i) for i in shape.selection],
        "residual": resid,
        "min_eig_re_K0": shape.re_min_eig,
        "tr_im_K0": shape.tr_im,
        "omega0": float(np.trace(shape.K0.real)) / 2.0,
    }
    print(_dump(payload))
    sink.write("ground.json", json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_spectrum(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    max_total = 3 if args.max_total is None else args.max_total
    _, _, _, basis = _stationary(nf, args.hbar)
    entries = [{"index": list(n), "energy": states.energy(basis, n)}
               for n in states.indices_up_to(nf.dim, max_total)]
    print(_dump(entries))
    sink.write("spectrum.json", json.dumps(entries, indent=2, sort_keys=True))
    if sink.active:
        report.save_spectrum(sink.path("spectrum.png"), entries)
    return 0


def cmd_states(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    max_total = 2 if args.max_total is None else args.max_total
    _, shape, gs, basis = _stationary(nf, args.hbar)
    grid = verify.stationary_grid(shape.K0, nf.mass, args.hbar,
                                  max_total=max_total,
                                  points=args.grid_points)
    header = [f"r{j}" for j in range(nf.dim)] + ["re", "im"]
    coords = grid.mesh().reshape(-1, nf.dim)
    for n in states.indices_up_to(nf.dim, max_total):
        st = states.stationary_state(basis, n)
        st = states.normalized_on_grid(basis, gs, st, grid)
        field = verify.sample(lambda r: states.psi_n(basis, gs, st, r), grid)
        flat = field.reshape(-1)
        rows = [[_fmt(c) for c in coords[k]]
                + [_fmt(flat[k].real), _fmt(flat[k].imag)]
                for k in range(flat.size)]
        tag = _state_tag(n)
        text = _csv(header, rows)
        print(f"# state {tag} energy={_fmt(st.energy)}")
        sys.stdout.write(text)
        sink.write(f"state_{tag}.csv", text)
        if sink.active:
            report.save_state(sink.path(f"state_{tag}.png"), grid, field,
                              f"n={tuple(n)} E={st.energy:.6g}")
    return 0


def _evolve_csv(path: packet.PacketPath, dim: int) -> str:
    header = ["t"]
    pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
    for i, j in pairs:
        header += [f"K_re_{i}_{j}", f"K_im_{i}_{j}"]
    header += [f"R_{i}" for i in range(dim)]
    header += [f"P_{i}" for i in range(dim)]
    header += ["normN", "phase"]
    rows = []
    for k in range(len(path.t)):
        row = [_fmt(path.t[k])]
        for i, j in pairs:
            row += [_fmt(path.K[k, i, j].real), _fmt(path.K[k, i, j].imag)]
        row += [_fmt(v) for v in path.R[k]]
        row += [_fmt(v) for v in path.P[k]]
        row += [_fmt(path.normN[k]), _fmt(path.phase[k])]
        rows.append(row)
    return _csv(header, rows)


def cmd_evolve(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    ms = classical.compute_modes(nf)
    shape = riccati.select_modes(ms)
    K_init = args.k0 * shape.K0
    r0 = _parse_floats(args.r0, nf.dim, "--r0")
    p0 = _parse_floats(args.p0, nf.dim, "--p0")
    state = packet.make_packet(K_init, mass=nf.mass, hbar=args.hbar,
                               R=r0, P=p0)
    dt = args.dt if args.dt is not None else classical.default_timestep(nf)
    tmax = args.tmax if args.tmax is not None else _default_tmax(ms)
    path = packet.propagate(state, nf, (0.0, tmax), dt)
    text = _evolve_csv(path, nf.dim)
    sys.stdout.write(text)
    sink.write("evolution.csv", text)
    if sink.active:
        report.save_evolution(sink.path("evolution.png"), path.t, path.K,
                              path.R, path.P, path.normN)
    return 0


def cmd_coherent(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    ms, shape, gs, basis = _stationary(nf, args.hbar)
    lam = _parse_complexes(args.lam, nf.dim, "--lam")
    cs = states.CoherentState(lam=lam, phi0=args.phi0)
    tmax = args.tmax if args.tmax is not None else _default_tmax(ms)
    times = np.linspace(0.0, tmax, 201)
    centers = [states.coherent_center(basis, cs, t) for t in times]
    Rs = np.array([c[0] for c in centers])
    Ps = np.array([c[1] for c in centers])

    # pointwise agreement of the two evaluation routes on a coarse probe
    probe_grid = verify.stationary_grid(shape.K0, nf.mass, args.hbar,
                                        max_total=2, points=9)
    probe = probe_grid.mesh().reshape(-1, nf.dim)
    gap = 0.0
    for t in np.linspace(0.0, tmax, 9):
        direct, factored = states.coherent_forms(cs, basis, gs, nf,
                                                 float(t), probe)
        scale = max(float(np.max(np.abs(direct))), 1e-300)
        gap = max(gap, float(np.max(np.abs(direct - factored))) / scale)

    header = ["t"] + [f"R_{i}" for i in range(nf.dim)] \
        + [f"P_{i}" for i in range(nf.dim)]
    rows = [[_fmt(times[k])] + [_fmt(v) for v in Rs[k]]
            + [_fmt(v) for v in Ps[k]] for k in range(len(times))]
    text = _csv(header, rows)
    sys.stdout.write(text)

    max_total = 6 if args.max_total is None else args.max_total
    coeffs = states.expand_coherent(cs, basis, gs, max_total, t=0.0)
    payload = {
        "lambda": _cvec(lam),
        "phi0": args.phi0,
        "form_agreement_gap": gap,
        "truncation": max_total,
        "coefficients": [{"index": list(n), "re": c.real, "im": c.imag}
                         for n, c in sorted(coeffs.items())],
    }
    sink.write("coherent.csv", text)
    sink.write("coherent_coeffs.json",
               json.dumps(payload, indent=2, sort_keys=True))
    if sink.active:
        report.save_coherent(sink.path("coherent.png"), times, Rs, Ps)
    print(_dump({"form_agreement_gap": gap, "truncation": max_total}))
    return 0


def cmd_verify(args) -> int:
    nf = _load_nf(args)
    sink = _Sink(args.out)
    max_total = 2 if args.max_total is None else args.max_total
    _, shape, gs, basis = _stationary(nf, args.hbar)
    grid = verify.stationary_grid(shape.K0, nf.mass, args.hbar,
                                  max_total=max_total,
                                  points=args.grid_points)
    rows = []
    fields = []
    for n in states.indices_up_to(nf.dim, max_total):
        st = states.stationary_state(basis, n)
        st = states.normalized_on_grid(basis, gs, st, grid)
        field = verify.sample(lambda r: states.psi_n(basis, gs, st, r), grid)
        resid = verify.eigen_residual(nf, field, st.energy, grid,
                                      hbar=args.hbar)
        norm_err = abs(verify.grid_norm(field, grid) - 1.0)
        rows.append({"index": list(n), "energy": st.energy,
                     "residual": resid, "norm_error": norm_err})
        fields.append(field)
    gram = verify.gram_matrix(fields, grid)
    off = gram - np.eye(len(fields))
    max_off = float(np.max(np.abs(off)))

    # hermiticity spot check with seeded random interior bumps
    rng = np.random.default_rng(args.seed)
    mesh = grid.mesh()
    bumps = []
    for _ in range(2):
        center = rng.uniform(-0.3, 0.3, size=nf.dim) * np.asarray(grid.extent)
        width = 0.2 * np.asarray(grid.extent)
        quad = np.sum(((mesh - center) / width) ** 2, axis=-1)
        bumps.append(np.exp(-quad) * (1.0 + 0.1j * rng.standard_normal()))
    ha = verify.apply_hamiltonian(nf, bumps[0], grid, hbar=args.hbar)
    hb = verify.apply_hamiltonian(nf, bumps[1], grid, hbar=args.hbar)
    lhs = verify.inner_product(bumps[0], hb, grid)
    rhs = verify.inner_product(ha, bumps[1], grid)
    herm = abs(lhs - rhs) / (verify.grid_norm(bumps[0], grid)
                             * verify.grid_norm(bumps[1], grid))

    lines = [f"{'index':<12}{'energy':>14}{'residual':>14}{'norm_error':>14}"]
    for row in rows:
        lines.append(f"{str(tuple(row['index'])):<12}"
                     f"{row['energy']:>14.6e}{row['residual']:>14.3e}"
                     f"{row['norm_error']:>14.3e}")
    lines.append(f"max |Gram - I| off-diagonal: {max_off:.3e}")
    lines.append(f"hermiticity gap: {herm:.3e}")
    table = "\n".join(lines)
    payload = {
        "states": rows,
        "max_gram_offdiag": max_off,
        "hermiticity_gap": herm,
        "grid": {"extent": list(grid.extent), "points": list(grid.points)},
    }
    print(table)
    print(_dump(payload))
    sink.write("verify.txt", table + "\n")
    sink.write("verify.json", json.dumps(payload, indent=2, sort_keys=True))
    if sink.active:
        report.save_verify(sink.path("verify.png"), rows)
    return 0


def cmd_hermite_eval(args) -> int:
    sink = _Sink(args.out)
    raw = args.gamma.strip()
    if not raw.startswith("["):
        raw = Path(raw).read_text()
    gamma = np.asarray(json.loads(raw), dtype=float)
    n = tuple(int(v) for v in args.index.split(","))
    dim = gamma.shape[0]
    if args.x is not None:
        xraw = args.x.strip()
        if not xraw.startswith("["):
            xraw = Path(xraw).read_text()
        x = np.asarray(json.loads(xraw), dtype=float)
        if x.ndim == 1 and dim == 1:
            x = x[:, None]
    elif dim == 1:
        x = np.linspace(-3.0, 3.0, 121)[:, None]
    else:
        raise ValueError("--x is required when gamma is not 1x1")
    values = np.atleast_1d(hermite.hermite_value(gamma, n, x))
    header = [f"x{j}" for j in range(dim)] + ["re", "im"]
    rows = [[_fmt(c) for c in x[k]]
            + [_fmt(values[k].real), _fmt(values[k].imag)]
            for k in range(x.shape[0])]
    text = _csv(header, rows)
    sys.stdout.write(text)
    sink.write("hermite.csv", text)
    if sink.active and dim == 1:
        report.save_hermite(sink.path("hermite.png"), x[:, 0], values,
                            f"H_{n[0]}")
    return 0


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--hbar", type=float, default=1.0,
                        help="Planck constant (default 1)")
    shared.add_argument("--dt", type=float, default=None,
                        help="integrator step override")
    shared.add_argument("--tmax", type=float, default=None,
                        help="propagation horizon override")
    shared.add_argument("--grid-points", type=int, default=None,
                        help="points per grid axis (odd, >= 5)")
    shared.add_argument("--max-total", type=int, default=None,
                        help="largest total excitation order")
    shared.add_argument("--out", default=None,
                        help="directory for files and figures")
    shared.add_argument("--seed", type=int, default=0,
                        help="seed for randomized checks")

    parser = argparse.ArgumentParser(
        prog="linsys-quanta",
        description="Quantum states of linear systems from classical data")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, with_model=True):
        sp = sub.add_parser(name, parents=[shared], help=help_text)
        if with_model:
            sp.add_argument("model", help="path to a model JSON file")
        sp.set_defaults(func=func)
        return sp

    add("reduce", cmd_reduce, "reduce a general model to normal form")
    add("modes", cmd_modes, "classical eigenmodes of the reduced system")
    add("ground", cmd_ground, "stationary Gaussian shape matrix")
    add("spectrum", cmd_spectrum, "stationary-state energies")
    add("states", cmd_states, "sample stationary states on a grid")
    sp = add("evolve", cmd_evolve, "propagate a Gaussian packet")
    sp.add_argument("--k0", type=float, default=1.0,
                    help="initial shape as a multiple of the stationary one")
    sp.add_argument("--r0", default="0", help="initial center position")
    sp.add_argument("--p0", default="0", help="initial center momentum")
    sp = add("coherent", cmd_coherent, "coherent state on a trajectory")
    sp.add_argument("--lam", default="0.4",
                    help="per-mode amplitudes, comma-separated complex")
    sp.add_argument("--phi0", type=float, default=0.0, help="global phase")
    add("verify", cmd_verify, "grid residuals and Gram matrix")
    sp = add("hermite-eval", cmd_hermite_eval,
             "evaluate a polynomial (debugging aid)", with_model=False)
    sp.add_argument("--gamma", required=True,
                    help="matrix as inline JSON or a file path")
    sp.add_argument("--index", required=True, help="multi-index, e.g. 2,1")
    sp.add_argument("--x", default=None,
                    help="points as inline JSON or a file path")
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    log.info("command %s", args.command)
    try:
        return args.func(args)
    except LinsysQuantaError as exc:
        print(_dump({"error": type(exc).__name__, "code": exc.exit_code,
                     "message": str(exc)}))
        return exc.exit_code
    except (ValueError, KeyError, OSError) as exc:
        print(_dump({"error": type(exc).__name__, "code": 3,
                     "message": str(exc)}))
        return 3


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
