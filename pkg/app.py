"""
Command-line front end: verification suites, sweeps and the discrepancy report.

    python3 app.py verify braid --phi 0.7 --sign plus
    python3 app.py kaon threshold --epsilon 1.0
    python3 app.py lattice converge --potential harmonic --dx 0.08,0.04,0.02 --format csv
    python3 app.py report --format csv --out report.csv

stdout carries only the serialized result; status lines go to stderr.
Exit status: 0 success, 1 verification failure, 2 usage error.
"""
import argparse
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import braid_qybe as bq
import entanglement as ent
import gates
import kaon
import qlattice as ql
import susyqm
from config import DEFAULT_SEED, Tolerances, load_tolerances
from core_linalg import (DomainError, InvalidStateError, NonPhysicalStateError, VerificationError,
                         hermitian_eigen, is_unitary)
from discrepancy import QYBE_POINTS, build_report
from export_data import export, to_csv, to_json
from findings import emit_report
from gates import TwoQubitState

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------
# CONFIGURATION
# ---------------------------------------------------------------------
@dataclass
class RunConfig:
    command: str
    action: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    tolerances: Tolerances = field(default_factory=Tolerances)
    fmt: str = "json"
    out: Optional[str] = None
    seed: int = DEFAULT_SEED
    quiet: bool = False


class UsageError(Exception):
    pass


class VerbResult(NamedTuple):
    payload: Dict[str, Any]
    failed: List[str]
    table: Optional[Tuple[Sequence[str], List[tuple]]] = None


def status(config: RunConfig, message: str) -> None:
    if not config.quiet:
        print(message, file=sys.stderr)


@contextmanager
def blame(*flags: str) -> Iterator[None]:
    """Report an out-of-domain argument as a usage error on the given flags."""
    try:
        yield
    except (DomainError, InvalidStateError) as e:
        raise UsageError(f"{'/'.join(flags)}: {type(e).__name__}: {e}") from e


# ---------------------------------------------------------------------
# ARGUMENT TYPES
# ---------------------------------------------------------------------
def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: '{text}'")


def parse_complex_list(text: str) -> List[complex]:
    return [parse_complex(t) for t in text.split(",") if t.strip()]


def parse_float_list(text: str) -> List[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: '{text}'")
    if not values:
        raise argparse.ArgumentTypeError(f"expected at least one number, got '{text}'")
    return values


def parse_tol(text: str) -> Tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got '{text}'")
    name, value = text.split("=", 1)
    return name.strip(), value.strip()


def _labeled(states) -> List[Dict[str, complex]]:
    return [s.labeled() for s in states]


# ---------------------------------------------------------------------
# VERBS
# ---------------------------------------------------------------------
def verify_braid(cfg: RunConfig) -> VerbResult:
    p, tol = cfg.params, cfg.tolerances
    b = bq.bgr_eight_vertex(p["sign"], p["phi"], p["convention"])
    braid = bq.check_braid_relation(b.matrix, tol.exact_tol)
    far = bq.check_far_commutativity(b.matrix, tol.exact_tol)
    unitary = is_unitary(b.matrix, tol.exact_tol)
    if b.convention is bq.BraidConvention.PRINTED:
        family = bq.verbatim_family(b.sign, b.phi)
    else:
        family = bq.yang_baxter_family(b)
    grid = bq.qybe_grid(family, QYBE_POINTS, QYBE_POINTS)
    failed = [name for name, ok in (("braid_relation", braid.ok), ("far_commutativity", far.ok),
                                    ("unitarity", unitary.ok), ("qybe", grid.max() < tol.qybe_tol)) if not ok]
    return VerbResult({
        "sign": b.sign.label, "phi": b.phi, "convention": b.convention.value,
        "braid_residual": braid.residual,
        "far_commutativity_residual": far.residual,
        "unitarity": {"ok": unitary.ok, "residual": unitary.residual},
        "eigenvalues": list(b.eigenvalues()),
        "eigenvalue_certificates": list(b.eigenvalue_certificates()),
        "qybe_points": list(QYBE_POINTS),
        "qybe_residual_grid": grid,
    }, failed)


def verify_qybe(cfg: RunConfig) -> VerbResult:
    p, tol = cfg.params, cfg.tolerances
    b = bq.bgr_eight_vertex(p["sign"], p["phi"])
    families: Dict[str, bq.RFamily] = {
        "corrected": bq.yang_baxter_family(b),
        "verbatim": bq.verbatim_family(b.sign, b.phi),
        "trig": lambda x: bq.r_trig(b.sign, math.atan(x), b.phi),
    }
    points = p["points"]
    with blame("--points"):
        grid = bq.qybe_grid(families[p["form"]], points, points)
    worst = float(grid.max())
    rows = [(x, y, grid[i, j]) for i, x in enumerate(points) for j, y in enumerate(points)]
    return VerbResult({"form": p["form"], "sign": b.sign.label, "phi": b.phi,
                       "points": list(points), "qybe_residual_grid": grid, "max_residual": worst},
                      [] if worst < tol.qybe_tol else ["qybe"],
                      (("x", "y", "residual"), rows))


def verify_clifford(cfg: RunConfig) -> VerbResult:
    table = gates.clifford_table()
    rows = [(mu, nu, r) for (mu, nu), r in sorted(table.items())]
    return VerbResult({"anticommutators": [{"mu": mu, "nu": nu, "residual": r} for mu, nu, r in rows]},
                      [f"clifford_{mu}{nu}" for mu, nu, r in rows if r != 0.0],
                      (("mu", "nu", "residual"), rows))


def gates_decompose_cnot(cfg: RunConfig) -> VerbResult:
    d = gates.cnot_decomposition(cfg.params["variant"])
    failed = []
    if d.variant == "corrected" and not d.reproduces_cnot:
        failed.append("cnot_decomposition")
    return VerbResult({
        "variant": d.variant,
        "frobenius_distance": d.report.frobenius_distance,
        "best_global_phase": d.report.best_global_phase,
        "max_entry_deviation": d.report.max_entry_deviation,
        "reproduces_cnot": d.reproduces_cnot,
        "unitarity_residuals": d.unitarity,
        "assembled": d.assembled,
    }, failed)


def gates_sqrt_not(cfg: RunConfig) -> VerbResult:
    report = susyqm.sqrt_not_correspondence()
    failed = [k for k in ("anticommutator_with_grading", "sqrt_squared_error", "sqrt_sqrt_on_one_error")
              if report[k] >= 1e-15]
    return VerbResult({"sqrt_not": gates.sqrt_not(), **report}, failed)


def bell(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    states = ent.bell_states(p["sign"], p["phi"])
    row = ent.bell_entropy_table(p["sign"], [p["phi"]])[0]
    failed = [] if max(abs(s - 1.0) for s in row["entropies"]) < 1e-10 else ["bell_entropy"]
    return VerbResult({"sign": p["sign"], "phi": p["phi"], "states": _labeled(states),
                       "entropies": row["entropies"],
                       "orthonormality_residual": row["orthonormality_residual"]}, failed)


def entangle_check(cfg: RunConfig) -> VerbResult:
    with blame("--amps"):
        state = TwoQubitState(cfg.params["amps"], tol=1e-9)
    result = ent.is_decomposable(state, cfg.tolerances.decomposable_tol)
    return VerbResult({"amplitudes": state.labeled(), "decomposable": result.decomposable,
                       "witness": result.witness,
                       "entanglement_entropy": ent.entanglement_entropy(state)}, [])


def kaon_states(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    pairs = kaon.kaon_bell_states()
    deformed = kaon.deformed_kaon_states(p["sign"], p["phi"])
    return VerbResult({"bell": kaon.state_table(pairs), "deformed": kaon.state_table(deformed),
                       "deformed_entropies": [ent.entanglement_entropy(s) for s in deformed]}, [])


def kaon_mixture(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    with blame("--epsilon", "--lambda"):
        m = kaon.KaonMixture(p["epsilon"], p["lam"])
    try:
        rho = kaon.rho_mixture(m)
    except NonPhysicalStateError as e:
        return VerbResult({"error": str(e), "eigenvalues": e.eigenvalues}, ["rho_mixture_physical"])
    big_m = kaon.horodecki_M(m)
    return VerbResult({"epsilon": m.epsilon, "lambda": m.lam, "t": m.t, "rho": rho.matrix,
                       "eigenvalues": hermitian_eigen(rho.matrix).eigenvalues,
                       "horodecki_M": big_m, "bell_violation": big_m > 1.0,
                       "min_partial_transpose_eigenvalue": kaon.min_partial_transpose_eigenvalue(rho)}, [])


def kaon_threshold(cfg: RunConfig) -> VerbResult:
    with blame("--epsilon"):
        thr = kaon.violation_threshold(cfg.params["epsilon"], cfg.tolerances.bisection_xtol)
    return VerbResult({"paper_lambda": thr.paper_lambda, "derived_lambda": thr.derived_lambda,
                       "t": thr.t, "disagreement": thr.disagreement,
                       "ppt_threshold": kaon.ppt_threshold(cfg.params["epsilon"])}, [])


def kaon_lambda_from_eta(cfg: RunConfig) -> VerbResult:
    eta = cfg.params["eta"]
    with blame("--eta"):
        lam = kaon.lambda_from_eta(eta)
    return VerbResult({"eta": eta, "lambda": lam}, [])


def kaon_boundary(cfg: RunConfig) -> VerbResult:
    with blame("--v"):
        b = kaon.entanglement_boundary(cfg.params["v"], xtol=cfg.tolerances.bisection_xtol)
    return VerbResult({"v": b.v, "alpha_star": b.alpha_star, "paper_criterion": b.paper_criterion,
                       "paper_reading": b.paper_reading, "paper_admissible": b.paper_admissible,
                       "max_gap": b.max_gap, "max_gap_alpha": b.max_gap_alpha}, [])


def kaon_source(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    with blame("--alpha", "--v"):
        src = kaon.ContaminatedSource(p["alpha"], p["v"])
    r = kaon.contaminated_source(src, p["random_block"])
    return VerbResult({"alpha": r.source.alpha, "v": r.source.v, "random_block": r.random_block,
                       "layout": list(r.layout), "operator": r.operator, "eigenvalues": r.eigenvalues,
                       "physical": r.physical, "entropy": r.entropy, "formula_entropy": r.formula_entropy,
                       "vanishing_term_norm": r.vanishing_term_norm, "diagnostics": r.diagnostics}, [])


def lattice_solve(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    with blame("--a", "--b", "--n"):
        problem = ql.LatticeProblem.on_interval(p["a"], p["b"], p["n"], p["potential"])
    with blame("--k"):
        spectrum = ql.solve_lattice_schrodinger(problem, p["k"])
    rows = [(k, float(e)) for k, e in enumerate(spectrum.energies)]
    return VerbResult({"potential": p["potential"], "dx0": problem.dx0, "n_points": problem.n_points,
                       "energies": spectrum.energies}, [], (("level", "energy"), rows))


def lattice_converge(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    with blame("--dx"):
        rows = ql.continuum_limit_study(p["potential"], p["dx"])
    bad = [r for r in rows[1:] if r.observed_order is None or abs(r.observed_order - 2.0) > 0.2]
    return VerbResult({"potential": p["potential"], "rows": rows},
                      ["observed_order"] if bad else [],
                      (ql.ConvergenceRow._fields, [tuple(r) for r in rows]))


def qderiv(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    n, q2, y = p["n"], p["q2"], p["y"]
    f = lambda s: s ** n  # noqa: E731
    with blame("--q2", "--y"):
        value = ql.q_derivative(f, q2, y)
        expected = ql.q_number(n, q2) * y ** (n - 1)
        left = {form: ql.q_left_derivative(f, q2, y, form) for form in ("printed", "backward")}
    residual = abs(value - expected)
    return VerbResult({"n": n, "q2": q2, "y": y, "q_derivative": value, "expected": expected,
                       "residual": residual,
                       "left_printed": left["printed"], "left_backward": left["backward"]},
                      [] if residual < 1e-12 * max(1.0, abs(expected)) else ["q_derivative"])


def susy_spectrum(cfg: RunConfig) -> VerbResult:
    p = cfg.params
    with blame("--n", "--x-min", "--x-max"):
        problem = susyqm.superpotential_problem(p["potential"], p["x_min"], p["x_max"], p["n"], p["c"])
    pair = susyqm.build_susy_pair(problem)
    report = susyqm.spectrum_degeneracy_report(pair, p["floor"], p["tol_rel"], p["levels"])
    inter = susyqm.check_intertwining(pair)
    rows = [(lp.k, lp.e0, lp.e1, lp.rel_gap) for lp in report.pairs]
    failed = ["degeneracy"] if report.unmatched else []
    return VerbResult({"potential": p["potential"], "n": problem.n_points, "dx": problem.dx,
                       "levels": report.pairs, "zero_modes": report.zero_modes,
                       "h1_below_floor": report.h1_below_floor,
                       "min_eigenvalue": report.min_eigenvalue,
                       "intertwining": inter}, failed, (("k", "E0", "E1", "rel_gap"), rows))


VERBS: Dict[Tuple[str, Optional[str]], Callable[[RunConfig], VerbResult]] = {
    ("verify", "braid"): verify_braid,
    ("verify", "qybe"): verify_qybe,
    ("verify", "clifford"): verify_clifford,
    ("gates", "decompose-cnot"): gates_decompose_cnot,
    ("gates", "sqrt-not"): gates_sqrt_not,
    ("bell", None): bell,
    ("entangle", "check"): entangle_check,
    ("kaon", "states"): kaon_states,
    ("kaon", "mixture"): kaon_mixture,
    ("kaon", "threshold"): kaon_threshold,
    ("kaon", "lambda-from-eta"): kaon_lambda_from_eta,
    ("kaon", "boundary"): kaon_boundary,
    ("kaon", "source"): kaon_source,
    ("lattice", "solve"): lattice_solve,
    ("lattice", "converge"): lattice_converge,
    ("qderiv", None): qderiv,
    ("susy", "spectrum"): susy_spectrum,
}


# ---------------------------------------------------------------------
# RUN
# ---------------------------------------------------------------------
def run(config: RunConfig) -> Tuple[int, str]:
    """Dispatch one verb; returns (exit status, serialized output)."""
    logger.debug("running %s %s with %s", config.command, config.action or "", config.params)
    verb = VERBS.get((config.command, config.action))
    if verb is None:
        raise UsageError(f"unknown verb '{config.command} {config.action or ''}'".strip())
    result = verb(config)
    if config.fmt == "csv":
        if result.table is None:
            raise UsageError(f"--format csv is only available for tabular verbs, not '{config.command}'")
        text = to_csv(*result.table)
    else:
        text = to_json({**result.payload, "failed": result.failed})
    for name in result.failed:
        status(config, f"❌ check failed: {name}")
    return (1 if result.failed else 0), text


def run_report(config: RunConfig) -> int:
    """Run every suite and write the discrepancy report; returns the exit status."""
    status(config, "🔄 Running all verification suites...")
    report = build_report(config.tolerances, config.seed)
    code = emit_report(report, config.fmt, config.out)
    status(config, f"{'❌' if code else '✅'} {len(report.findings)} findings, "
                   f"{len(report.failed)} failed checks")
    return code


# ---------------------------------------------------------------------
# ARGUMENT PARSING
# ---------------------------------------------------------------------
def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--config", default=None, help="dotenv file with tolerance overrides")
    common.add_argument("--tol", type=parse_tol, action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--quiet", action="store_true")
    return common


def _braid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="app.py", description="Braid / QYBE quantum-information checks")
    verbs = parser.add_subparsers(dest="command", required=True)

    def group(name: str):
        sub = verbs.add_parser(name)
        return sub.add_subparsers(dest="action", required=True)

    verify = group("verify")
    p = verify.add_parser("braid", parents=[common])
    _braid_args(p)
    p.add_argument("--convention", choices=[c.value for c in bq.BraidConvention], default="normalized")
    p = verify.add_parser("qybe", parents=[common])
    _braid_args(p)
    p.add_argument("--form", choices=("corrected", "verbatim", "trig"), default="corrected")
    p.add_argument("--points", type=parse_float_list, default=list(QYBE_POINTS))
    verify.add_parser("clifford", parents=[common])

    gate = group("gates")
    p = gate.add_parser("decompose-cnot", parents=[common])
    p.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    gate.add_parser("sqrt-not", parents=[common])

    p = verbs.add_parser("bell", parents=[common])
    _braid_args(p)

    p = group("entangle").add_parser("check", parents=[common])
    p.add_argument("--amps", type=parse_complex_list, required=True,
                   help="four amplitudes over |00>,|01>,|10>,|11>, e.g. 0.5,0.5,0.5,-0.5")

    k = group("kaon")
    p = k.add_parser("states", parents=[common])
    _braid_args(p)
    p = k.add_parser("mixture", parents=[common])
    p.add_argument("--epsilon", type=parse_complex, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p = k.add_parser("threshold", parents=[common])
    p.add_argument("--epsilon", type=parse_complex, required=True)
    p = k.add_parser("lambda-from-eta", parents=[common])
    p.add_argument("--eta", type=float, required=True)
    p = k.add_parser("boundary", parents=[common])
    p.add_argument("--v", type=float, required=True)
    p = k.add_parser("source", parents=[common])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--random-block", choices=kaon.RANDOM_BLOCKS, default="printed")

    lat = group("lattice")
    p = lat.add_parser("solve", parents=[common])
    p.add_argument("--potential", choices=tuple(ql.POTENTIALS), default="harmonic")
    p.add_argument("--a", type=float, default=-8.0)
    p.add_argument("--b", type=float, default=8.0)
    p.add_argument("--n", type=int, default=1601)
    p.add_argument("--k", type=int, default=5)
    p = lat.add_parser("converge", parents=[common])
    p.add_argument("--potential", choices=tuple(ql.POTENTIALS), default="harmonic")
    p.add_argument("--dx", type=parse_float_list, default=[0.08, 0.04, 0.02])

    p = verbs.add_parser("qderiv", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q2", type=float, required=True)
    p.add_argument("--y", type=float, default=0.7)

    p = group("susy").add_parser("spectrum", parents=[common])
    p.add_argument("--potential", choices=("linear", "zero", "constant"), default="linear")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1001)
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--floor", type=float, default=0.5)
    p.add_argument("--tol-rel", type=float, default=1e-3)
    p.add_argument("--levels", type=int, default=5)

    verbs.add_parser("report", parents=[common])
    return parser


GLOBAL_KEYS = {"command", "action", "fmt", "out", "seed", "config", "tol", "verbose", "quiet"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        tolerances = load_tolerances(args.config, dict(args.tol))
    except (KeyError, ValueError, FileNotFoundError) as e:
        flag = "--config" if args.config and not args.tol else "--tol"
        raise UsageError(f"{flag}: {e}")
    params = {k: v for k, v in vars(args).items() if k not in GLOBAL_KEYS}
    return RunConfig(command=args.command, action=getattr(args, "action", None), params=params,
                     tolerances=tolerances, fmt=args.fmt, out=args.out, seed=args.seed,
                     quiet=args.quiet)


# ---------------------------------------------------------------------
# MAIN ENTRY POINT
# ---------------------------------------------------------------------
def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        if config.command == "report":
            return run_report(config)
        code, text = run(config)
    except UsageError as e:
        print(f"❌ Usage error: {e}", file=sys.stderr)
        return 2
    except VerificationError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    export(text, config.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
