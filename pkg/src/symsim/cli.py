"""Command-line front end.

Exit codes: 0 simulable / success, 1 not simulable, 2 usage or input error,
3 computation error (budget exceeded, oracle disagreement, ...).
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__
from .closure import decompose, lie_closure, oracle_verdict
from .errors import (
    BadArity,
    DimensionMismatch,
    EmptyGeneratorSet,
    IndexOutOfRange,
    NotSkewHermitian,
    ParseError,
    SymsimError,
    UnknownFixture,
)
from .fileformat import instance_file_for, parse_instance_file
from .instances import FIXTURES, central_spin_couplings, central_spin_instance, example_fixture
from .linalg import DEFAULT_MODULAR_THRESHOLD, MODES
from .report import ReportDocument, digest, matrix_to_json
from .symmetry import (
    center_of_commutant,
    central_projections,
    commutant,
    commutant_dimension,
    decide,
    quadratic_commutant,
    quadratic_commutant_dimension,
)

EXIT_SIMULABLE = 0
EXIT_NOT_SIMULABLE = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3

_INPUT_ERRORS = (
    ParseError,
    IndexOutOfRange,
    NotSkewHermitian,
    DimensionMismatch,
    EmptyGeneratorSet,
    BadArity,
    UnknownFixture,
)


class _OracleDisagreement(SymsimError):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(path: str):
    data = _read(path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"input is not UTF-8: {e.reason}", e.start) from None
    f = parse_instance_file(text)
    return f, f.to_instance(), digest(data), f"{f.mode} {f.size}"


def _emit(doc: ReportDocument, fmt: str) -> None:
    sys.stdout.write(doc.to_json() if fmt == "json" else doc.to_human())


def _timings(args, t):
    return t if args.timings else None


# ---------------------------------------------------------------------------
# decide


def decide_result(rep, oracle=None) -> dict:
    ranks = rep.projection_ranks
    result = {
        "verdict": rep.verdict,
        "condition_a": {
            "status": rep.condition_a,
            "dim_p": rep.quadratic_dims[0],
            "dim_pq": rep.quadratic_dims[1],
        },
        "condition_b": {
            "status": rep.condition_b,
            "rank_restricted": None if ranks is None else ranks[0],
            "rank_full": None if ranks is None else ranks[1],
            "center_dim": rep.center_dim,
        },
        "linear": {"dim_p": rep.linear_dims[0], "dim_pq": rep.linear_dims[1]},
        "failure_witness": rep.failure_witness,
        "arithmetic": {
            "monte_carlo": rep.monte_carlo,
            "quadratic_ranks": {
                "P": rep.quadratic_ranks[0].to_dict(),
                "P+Q": rep.quadratic_ranks[1].to_dict(),
            },
        },
    }
    if rep.projections is not None:
        result["condition_b"]["t_full"] = matrix_to_json(rep.projections.t_full)
        result["condition_b"]["t_restricted"] = matrix_to_json(rep.projections.t_restricted)
    if oracle is not None:
        result["oracle"] = {
            "verdict": oracle.verdict,
            "dim_p": oracle.dim_p,
            "dim_pq": oracle.dim_pq,
            "agrees": oracle.verdict == rep.verdict,
        }
    return result


def cmd_decide(args) -> int:
    _, inst, dg, system = _load(args.path)
    t0 = time.perf_counter()
    rep = decide(inst, args.mode, force_condition_b=args.force_condition_b, threshold=args.threshold)
    timings = dict(rep.timings, total=time.perf_counter() - t0)
    oracle = None
    if args.oracle:
        t1 = time.perf_counter()
        oracle = oracle_verdict(inst, args.max_dim)
        timings["oracle"] = time.perf_counter() - t1
    doc = ReportDocument("decide", dg, system, decide_result(rep, oracle), _timings(args, timings))
    _emit(doc, args.format)
    if oracle is not None and oracle.verdict != rep.verdict:
        raise _OracleDisagreement(f"symmetry test says {rep.verdict}, Lie closure says {oracle.verdict}")
    return EXIT_SIMULABLE if rep.simulable else EXIT_NOT_SIMULABLE


# ---------------------------------------------------------------------------
# closure


def closure_row(gens, dim, mode="auto", max_dim=None, threshold=DEFAULT_MODULAR_THRESHOLD) -> dict:
    """Closure dimension and symmetry counts for the generator set ``gens``."""
    lie = lie_closure(gens, max_dim)
    dec = decompose(lie)
    quad, qrank = quadratic_commutant_dimension(gens, dim, mode, threshold=threshold)
    lin, _ = commutant_dimension(gens, dim, "exact")
    center = center_of_commutant(gens, dim)
    proj = central_projections(center, gens, [], "exact")
    return {
        "lie_dim": lie.dim,
        "semisimple_dim": dec.semisimple_dim,
        "center_dim": dec.center_dim,
        "generation_depth": lie.generation_depth,
        "quadratic_dim": quad,
        "quadratic_rank": qrank.to_dict(),
        "linear_dim": lin,
        "commutant_center_dim": len(center),
        "projection_rank": proj.rank_full.rank,
    }


def cmd_closure(args) -> int:
    _, inst, dg, system = _load(args.path)
    timings = {}
    rows = {}
    t0 = time.perf_counter()
    rows["P"] = closure_row(list(inst.p_set), inst.dim, args.mode, args.max_dim, args.threshold)
    timings["P"] = time.perf_counter() - t0
    if inst.q_set:
        t0 = time.perf_counter()
        rows["P+Q"] = closure_row(list(inst.generators), inst.dim, args.mode, args.max_dim, args.threshold)
        timings["P+Q"] = time.perf_counter() - t0
    doc = ReportDocument("closure", dg, system, {"rows": rows}, _timings(args, timings))
    _emit(doc, args.format)
    return 0


# ---------------------------------------------------------------------------
# symmetries


def _sparse_listing(m) -> list:
    return [[i, j, str(v)] for (i, j), v in sorted(m.items())]


def cmd_symmetries(args) -> int:
    _, inst, dg, system = _load(args.path)
    gens = list(inst.generators if args.with_q else inst.p_set)
    kinds = [k for k in ("linear", "quadratic", "center") if getattr(args, k)] or ["linear"]
    out = {}
    t = {}
    for kind in kinds:
        t0 = time.perf_counter()
        if kind == "linear":
            basis = list(commutant(gens, inst.dim).basis)
        elif kind == "quadratic":
            basis = list(quadratic_commutant(gens, inst.dim).basis)
        else:
            basis = center_of_commutant(gens, inst.dim)
        t[kind] = time.perf_counter() - t0
        out[kind] = {"dim": len(basis), "basis": [_sparse_listing(b) for b in basis]}
    result = {"generators": "P+Q" if args.with_q else "P", "symmetries": out}
    _emit(ReportDocument("symmetries", dg, system, result, _timings(args, t)), args.format)
    return 0


# ---------------------------------------------------------------------------
# generate


def _couplings(text: str):
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid coupling list {text!r}") from None


def cmd_generate(args) -> int:
    if args.kind == "central-spin":
        if args.n is None:
            raise BadArity("central-spin needs --n")
        if args.couplings is not None:
            couplings = args.couplings
        else:
            couplings = central_spin_couplings(args.n, args.case)
        inst = central_spin_instance(args.n, couplings)
    else:
        inst = example_fixture(args.kind)
    text = instance_file_for(inst).format()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p, *, ranks=True, oracle=False):
    p.add_argument("path", help="instance file ('-' for stdin)")
    p.add_argument("--format", choices=("human", "json"), default="human", help="report format")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    if ranks:
        p.add_argument("--mode", choices=MODES, default="auto",
                       help="rank arithmetic for the quadratic symmetries (default: auto)")
        p.add_argument("--threshold", type=int, default=DEFAULT_MODULAR_THRESHOLD,
                       help="auto mode switches to modular ranks above this many matrix cells")
        p.add_argument("--max-dim", type=int, default=None,
                       help="abort the Lie closure beyond this dimension (default d^2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symsim",
        description="Decide Hamiltonian simulability from linear and quadratic symmetries.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="does P simulate Q?")
    _add_common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force Lie closure")
    p.add_argument("--force-condition-b", action="store_true",
                   help="evaluate condition (B) even when condition (A) fails")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("closure", help="Lie closure and symmetry counts (one row per generator set)")
    _add_common(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("symmetries", help="list symmetry bases in canonical form")
    _add_common(p, ranks=False)
    p.add_argument("--linear", action="store_true", help="commutant basis (default)")
    p.add_argument("--quadratic", action="store_true", help="tensor-square commutant basis")
    p.add_argument("--center", action="store_true", help="center of the commutant")
    p.add_argument("--with-q", action="store_true", help="use P u Q instead of P")
    p.set_defaults(func=cmd_symmetries)

    p = sub.add_parser("generate", help="write a fixture instance file")
    p.add_argument("kind", choices=sorted(FIXTURES) + ["central-spin"])
    p.add_argument("--n", type=int, help="number of spins (central-spin)")
    p.add_argument("--case", choices=("a", "b"), default="a",
                   help="a: all J_k = 1; b: J_k = 2 for even k, 1 otherwise")
    p.add_argument("--couplings", type=_couplings, help="explicit J_2..J_n, comma separated")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as e:
        print(f"symsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"symsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SymsimError as e:
        print(f"symsim: error: {e}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
