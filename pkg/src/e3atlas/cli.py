"""Command-line interface.

Subcommands mirror the library surface: invariants, classify, synthesize,
representative, concurrence, orbit-dim, verify (membership|lu|permutation),
mesh (bubble|tetra|circle), and random.  Every subcommand takes --json to
emit exactly one machine-readable document on stdout; diagnostics go to
stderr.  Exit codes: 0 success, 1 input or usage error, 2 when a queried
invariant vector fails membership, 3 when a verification run records
failures.  E3_ATLAS_TOL overrides the default tolerance; flags win.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import analysis, geomexport, invariants, orbitspace, qstate
from .errors import AtlasError, NotInOrbitSpaceError

_TOL_ENV = "E3_ATLAS_TOL"


# ---------------------------------------------------------------------------
# output formatting: 17 significant digits in JSON, 6 in human mode
# ---------------------------------------------------------------------------


def _jfloat(x: float) -> str:
    x = float(x)
    if math.isfinite(x):
        return format(x, ".17g")
    return json.dumps("inf" if x > 0 else "-inf" if x < 0 else "nan")


def _jval(v, indent: int) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _jfloat(v)
    if isinstance(v, str):
        return json.dumps(v)
    if v is None:
        return "null"
    if isinstance(v, dict):
        if not v:
            return "{}"
        pad = "  " * (indent + 1)
        items = [f"{pad}{json.dumps(str(k))}: {_jval(val, indent + 1)}"
                 for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_jval(x, indent) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def _emit_json(doc: dict) -> None:
    sys.stdout.write(_jval(doc, 0) + "\n")


def _h(x: float) -> str:
    return format(float(x), ".6g")


def _hvec(vals) -> str:
    return "(" + ", ".join(_h(v) for v in vals) + ")"


def _tol(ns, fallback: float) -> float:
    if getattr(ns, "tol", None) is not None:
        return ns.tol
    env = os.environ.get(_TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise ValueError(f"bad {_TOL_ENV} value {env!r}") from None
    return fallback


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _cmd_invariants(ns) -> int:
    state = qstate.load_state3(ns.infile)
    iv = invariants.invariants_I(state)
    beta = invariants.invariants_J_from_I(iv)
    if ns.json:
        _emit_json({"I": list(iv.as_tuple()), "J": list(beta.as_tuple())})
    else:
        if ns.raw_i:
            print("I = " + _hvec(iv.as_tuple()))
        print("J = " + _hvec(beta.as_tuple()))
    return 0


def _beta_argument(ns) -> invariants.Beta:
    if ns.beta is not None:
        return invariants.Beta(*ns.beta)
    with open(ns.infile, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "beta" in obj:
        return invariants.Beta.from_array(obj["beta"])
    if isinstance(obj, dict) and "amplitudes" in obj:
        return invariants.invariants_J(qstate.state3_from_json(obj))
    raise ValueError("input file must carry a 'beta' or 'amplitudes' key")


def _cmd_classify(ns) -> int:
    beta = _beta_argument(ns)
    tol = _tol(ns, orbitspace.DEFAULT_TOL)
    report = orbitspace.membership(beta, tol)
    if not report.in_x:
        violated = list(report.violated())
        if ns.json:
            _emit_json({"in_orbit_space": False, "violated": violated,
                        "residuals": report.residuals})
        else:
            print("not in orbit space; violated: " + ", ".join(violated))
        return 2
    cell = orbitspace.classify(beta, tol)
    if ns.json:
        _emit_json({"in_orbit_space": True, "cell": cell.name,
                    "acin_type": cell.acin_type, "slocc": cell.slocc_class,
                    "orbit_dim": cell.orbit_dimension,
                    "residuals": report.residuals})
    else:
        print(f"cell {cell.name}: acin type {cell.acin_type}, "
              f"SLOCC {cell.slocc_class}, orbit dimension {cell.orbit_dimension}")
    return 0


def _standard_state_doc(chi: invariants.StandardState) -> dict:
    return {
        "lam0": chi.lam0,
        "c1": [chi.c1.real, chi.c1.imag],
        "lam2": chi.lam2,
        "lam3": chi.lam3,
        "lam4": chi.lam4,
    }


def _cmd_synthesize(ns) -> int:
    beta = invariants.Beta(*ns.beta)
    tol = _tol(ns, orbitspace.DEFAULT_TOL)
    result = orbitspace.synthesize(beta, tol)
    qstate.save_state(ns.out, result.state.embed())
    achieved = invariants.j_of_standard(result.state)
    if ns.json:
        _emit_json({"case_label": result.case_label,
                    "standard_state": _standard_state_doc(result.state),
                    "J": list(achieved.as_tuple()), "out": ns.out})
    else:
        print(f"case {result.case_label}")
        chi = result.state
        print(f"lam0 = {_h(chi.lam0)}, c1 = {_h(chi.c1.real)}{chi.c1.imag:+.6g}j, "
              f"lam2 = {_h(chi.lam2)}, lam3 = {_h(chi.lam3)}, lam4 = {_h(chi.lam4)}")
        print(f"wrote {ns.out}")
    return 0


def _cmd_representative(ns) -> int:
    state = qstate.load_state3(ns.infile)
    tol = _tol(ns, orbitspace.DEFAULT_TOL)
    result = orbitspace.canonical_representative(state, tol)
    qstate.save_state(ns.out, result.state.embed())
    beta = invariants.j_of_standard(result.state)
    if ns.json:
        _emit_json({"case_label": result.case_label,
                    "standard_state": _standard_state_doc(result.state),
                    "J": list(beta.as_tuple()), "out": ns.out})
    else:
        print(f"case {result.case_label}")
        print("J = " + _hvec(beta.as_tuple()))
        print(f"wrote {ns.out}")
    return 0


def _cmd_concurrence(ns) -> int:
    state = qstate.load_state2(ns.infile)
    c = invariants.concurrence(state)
    cell = orbitspace.classify_two_qubit(c, _tol(ns, orbitspace.DEFAULT_TOL))
    if ns.json:
        _emit_json({"concurrence": c, "cell": cell.name,
                    "slocc": cell.slocc_class, "orbit_dim": cell.orbit_dimension})
    else:
        print(f"C = {_h(c)}")
        print(f"cell {cell.name}: SLOCC {cell.slocc_class}, "
              f"orbit dimension {cell.orbit_dimension}")
    return 0


def _cmd_orbit_dim(ns) -> int:
    with open(ns.infile, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    amps = obj.get("amplitudes") if isinstance(obj, dict) else None
    if not isinstance(amps, list):
        raise ValueError("state JSON must carry an 'amplitudes' array")
    if len(amps) == 8:
        result = analysis.orbit_dimension3(qstate.state3_from_json(obj), ns.rank_tol)
        qubits = 3
    elif len(amps) == 4:
        result = analysis.orbit_dimension2(qstate.state2_from_json(obj), ns.rank_tol)
        qubits = 2
    else:
        raise ValueError("'amplitudes' must have 8 (three qubits) or 4 (two qubits) entries")
    if ns.json:
        _emit_json({"qubits": qubits, "dimension": result.dimension,
                    "singular_values": list(result.singular_values),
                    "gap": result.gap, "indeterminate": result.indeterminate})
    else:
        print(f"orbit dimension {result.dimension} ({qubits} qubits)")
        print("singular values: " + _hvec(result.singular_values))
    return 0


def _print_report(report, as_json: bool) -> int:
    if as_json:
        _emit_json(report.to_json_dict())
    else:
        print(f"samples {report.samples}, tol {_h(report.tol)}")
        print("worst violations:")
        for name, v in report.worst.items():
            print(f"  {name}: {_h(v)}")
        print(f"failures: {len(report.failures)}")
        for f in report.failures[:20]:
            print(f"  {f}")
    return 3 if report.failures else 0


def _cmd_verify_membership(ns) -> int:
    report = analysis.monte_carlo_membership(ns.samples, ns.seed,
                                             _tol(ns, 1e-9), workers=ns.threads)
    return _print_report(report, ns.json)


def _cmd_verify_lu(ns) -> int:
    report = analysis.check_lu_invariance(ns.trials, ns.seed, _tol(ns, 1e-10))
    return _print_report(report, ns.json)


def _cmd_verify_permutation(ns) -> int:
    report = analysis.monte_carlo_permutation(ns.trials, ns.seed, _tol(ns, 1e-10))
    return _print_report(report, ns.json)


def _write_mesh(ns, geometry, kind: str, **name_kwargs) -> int:
    fmt = ns.format
    if fmt is None:
        fmt = "obj" if (ns.out or "").endswith(".obj") else "csv"
    out = ns.out or geomexport.default_mesh_filename(kind, fmt, **name_kwargs)
    data = geomexport.emit_mesh(geometry, fmt)
    with open(out, "wb") as fh:
        fh.write(data)
    n = geometry.points.shape[0]
    doc = {"kind": kind, "out": out, "points": n, "format": fmt}
    for key in ("max_residual", "beta5_range", "binding_lower_bound"):
        if key in geometry.meta:
            doc[key] = geometry.meta[key]
    if ns.json:
        _emit_json(doc)
    else:
        print(f"wrote {out} ({n} points)")
    return 0


def _cmd_mesh_bubble(ns) -> int:
    cloud = geomexport.sample_bubble_surface(ns.resolution)
    return _write_mesh(ns, cloud, "bubble", resolution=ns.resolution)


def _cmd_mesh_tetra(ns) -> int:
    cloud = geomexport.sample_tetrahedron(ns.beta4, ns.resolution)
    return _write_mesh(ns, cloud, "tetra", resolution=ns.resolution, beta4=ns.beta4)


def _cmd_mesh_circle(ns) -> int:
    curve = geomexport.sample_fiber_circle(ns.beta1, ns.beta2, ns.beta3,
                                           ns.beta4, ns.resolution)
    return _write_mesh(ns, curve, "circle", beta4=ns.beta4,
                       base=(ns.beta1, ns.beta2, ns.beta3))


def _cmd_random(ns) -> int:
    if ns.n < 1:
        raise ValueError("--n must be >= 1")
    os.makedirs(ns.out_dir, exist_ok=True)
    files = []
    for i in range(ns.n):
        state = qstate.haar_random_state3(qstate.child_seed(ns.seed, i))
        name = f"state_{i:04d}.json"
        qstate.save_state(os.path.join(ns.out_dir, name), state)
        files.append(name)
    if ns.json:
        _emit_json({"out_dir": ns.out_dir, "count": ns.n, "seed": ns.seed,
                    "files": files})
    else:
        print(f"wrote {ns.n} states to {ns.out_dir}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(p, tol=True):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    if tol:
        p.add_argument("--tol", type=float, default=None,
                       help="zero/equality tolerance (default 1e-9, env E3_ATLAS_TOL)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="e3atlas",
                     description="Local-unitary invariants and the orbit space "
                                 "of two- and three-qubit pure states.")
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)

    p = sub.add_parser("invariants", help="invariant vectors of a state file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--raw-I", dest="raw_i", action="store_true",
                   help="also print the raw I vector")
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_invariants)

    p = sub.add_parser("classify", help="cell of an invariant vector")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--in", dest="infile")
    g.add_argument("--beta", nargs=6, type=float, metavar=("B1", "B2", "B3", "B4", "B5", "B6"))
    _add_common(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("synthesize", help="standard state for an invariant vector")
    p.add_argument("--beta", nargs=6, type=float, required=True,
                   metavar=("B1", "B2", "B3", "B4", "B5", "B6"))
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("representative", help="canonical state on the same orbit")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_representative)

    p = sub.add_parser("concurrence", help="two-qubit concurrence and cell")
    p.add_argument("--in", dest="infile", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_concurrence)

    p = sub.add_parser("orbit-dim", help="orbit dimension by tangent rank")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--rank-tol", dest="rank_tol", type=float, default=1e-8)
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_orbit_dim)

    pv = sub.add_parser("verify", help="Monte Carlo verification suites")
    vsub = pv.add_subparsers(dest="mode", parser_class=_Parser)
    p = vsub.add_parser("membership")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker cap")
    _add_common(p)
    p.set_defaults(handler=_cmd_verify_membership)
    p = vsub.add_parser("lu")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=_cmd_verify_lu)
    p = vsub.add_parser("permutation")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=_cmd_verify_permutation)

    pm = sub.add_parser("mesh", help="export orbit-space geometry")
    msub = pm.add_subparsers(dest="kind", parser_class=_Parser)
    p = msub.add_parser("bubble")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--format", choices=("csv", "obj"), default=None)
    p.add_argument("--out", default=None)
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_mesh_bubble)
    p = msub.add_parser("tetra")
    p.add_argument("--beta4", type=float, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--format", choices=("csv", "obj"), default=None)
    p.add_argument("--out", default=None)
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_mesh_tetra)
    p = msub.add_parser("circle")
    p.add_argument("--beta4", type=float, required=True)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--beta2", type=float, required=True)
    p.add_argument("--beta3", type=float, required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--format", choices=("csv", "obj"), default=None)
    p.add_argument("--out", default=None)
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_mesh_circle)

    p = sub.add_parser("random", help="write Haar-random state files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    _add_common(p, tol=False)
    p.set_defaults(handler=_cmd_random)

    return parser


def run(argv) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as err:  # --help
        return 0 if err.code in (0, None) else 1
    handler = getattr(ns, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return handler(ns)
    except NotInOrbitSpaceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (AtlasError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
