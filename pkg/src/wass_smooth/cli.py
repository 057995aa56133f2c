"""Command-line front end.

Subcommands
-----------
bound   : evaluate one smoothing inequality at a parameter or optimize it
oracle  : exact / enclosed Wasserstein values for discrete inputs
design  : spherical design residual checks and corollary verification
suite   : seeded randomized soundness experiments, CSV output

Measures are JSON files ({"space": "torus"|"sphere", "dim": d,
"points": [[...], ...], "weights": [...]}, weights optional), the literal
name `vol` ({"space":..., "dim":..., "uniform": true} works too), or a
named design fixture (octahedron, icosahedron, ...).

Exit codes: 0 success, 1 I/O error, 2 hypothesis violation or invalid
configuration, 3 failed design check.  Error text goes to stderr; stdout
carries only complete JSON/CSV payloads.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as B
from . import designs as D
from . import measures as M
from . import oracle as O
from .errors import NotADesign, WassSmoothError
from .soundness import CSV_HEADER, SPACES, run_suite

_DESIGN_NAMES = ("tetrahedron", "octahedron", "cube", "icosahedron")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_measure(spec: str, like: M.Measure | None = None) -> M.Measure:
    if spec == "vol":
        if like is None:
            raise CliError("`vol` needs the space/dim of the other measure", 2)
        return M.UniformVol(like.space, like.dim)
    if spec in _DESIGN_NAMES:
        return D.known_design(spec)
    try:
        with open(spec) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read measure file {spec!r}: {exc}", 1)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {spec!r}: {exc}", 1)
    return M.measure_from_json(obj)


def _load_pair(mu_spec: str, nu_spec: str):
    if mu_spec == "vol" and nu_spec == "vol":
        raise CliError("at most one measure may be `vol` without a file", 2)
    if mu_spec == "vol":
        nu = _load_measure(nu_spec)
        return _load_measure("vol", like=nu), nu
    mu = _load_measure(mu_spec)
    return mu, _load_measure(nu_spec, like=mu)


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise CliError(f"invalid p value {text!r}", 2)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------

_TORUS_BOUNDS = ("torus-jackson", "torus-heat", "torus-winf")
_SPHERE_BOUNDS = ("sphere-projection", "sphere-heat", "sphere-winf")
_MANIFOLD_BOUNDS = ("manifold-le2", "manifold-gt2")


def _bound_parser(sub):
    p = sub.add_parser("bound", help="evaluate a smoothing inequality")
    p.add_argument("inequality",
                   choices=_TORUS_BOUNDS + _SPHERE_BOUNDS + _MANIFOLD_BOUNDS)
    p.add_argument("--mu", required=True, help="measure file, `vol`, or fixture name")
    p.add_argument("--nu", required=True)
    p.add_argument("--p", default="1", help="exponent (use `inf` for the supremum bounds)")
    p.add_argument("--c", type=float, default=0.0, help="density lower-bound assertion")
    p.add_argument("--b", type=float, default=0.0, help="ball-mass assertion")
    p.add_argument("--r", type=float, default=0.0, help="ball radius of the b assertion")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--param", type=float, help="evaluate at this smoothing parameter")
    group.add_argument("--optimize", nargs=2, type=float, metavar=("LO", "HI"),
                       help="grid-optimize over this parameter range")
    p.add_argument("--grid", type=int, default=64, help="grid size for --optimize")
    p.add_argument("--max-points", type=int, default=1_000_000,
                   help="lattice point cap for torus tables")
    p.add_argument("--max-degree", type=int, default=10_000,
                   help="degree cap for sphere energy tables")
    p.add_argument("--tail-rtol", type=float, default=1e-12,
                   help="relative tail target of the truncation certificates")
    p.add_argument("--verify-br", action="store_true",
                   help="empirically check the (b, r) ball-mass assertion on nu")
    # manifold constants
    p.add_argument("--ricci-a", type=float, default=0.0,
                   help="A with Ricci curvature >= -(d-1)A")
    p.add_argument("--diam", type=float, default=0.0, help="manifold diameter")
    p.add_argument("--k-weyl", type=float, default=0.0, help="pointwise Weyl constant")
    p.add_argument("--k-poincare", type=float, default=0.0, help="Poincare constant")
    p.add_argument("--spectrum", help="JSON spectrum {eigenvalues, diffs} for manifold bounds")
    p.add_argument("--max-norm", type=float, default=4.0,
                   help="initial torus window (auto-expands under tail rules)")


def _check_ball_hypothesis(nu: M.Measure, r: float, b: float) -> None:
    """Empirical covering check: every radius-r ball needs nu-mass >= b.

    For a discrete measure this can only hold with b at most the minimum
    atom weight and r at least the covering radius of the support; both are
    estimated on a deterministic dense sample.
    """
    if not isinstance(nu, M.DiscreteMeasure):
        return
    if b > float(nu.weights.min()) + 1e-12:
        raise CliError(
            f"b = {b:g} exceeds the minimum atom weight {float(nu.weights.min()):g}", 2)
    metric = O.metric_for(nu)
    rng = np.random.default_rng(987_001)
    if nu.space == "torus":
        probes = rng.random((200_000, nu.dim))
    else:
        probes = rng.normal(size=(200_000, nu.dim + 1))
        probes /= np.linalg.norm(probes, axis=1)[:, None]
    dmin = metric.pairwise(probes, nu.points).min(axis=1)
    covering = float(dmin.max())
    if covering > r:
        raise CliError(
            f"sampled covering radius {covering:g} exceeds r = {r:g}: "
            "the ball-mass hypothesis fails", 2)


def _run_bound(args) -> int:
    mu, nu = _load_pair(args.mu, args.nu)
    M.same_space(mu, nu)
    p = _parse_p(args.p)
    name = args.inequality
    is_winf = name.endswith("winf")
    if math.isinf(p) and not is_winf:
        raise CliError("requires p < ∞ (p = inf routes to the *-winf bounds)", 2)
    if is_winf and not math.isinf(p):
        raise CliError("requires p = inf for the supremum-norm bounds", 2)
    if args.verify_br:
        _check_ball_hypothesis(nu, args.r, args.b)

    lo, hi = (args.param, args.param) if args.param is not None else args.optimize
    if lo > hi:
        raise CliError("requires LO <= HI in --optimize", 2)
    d = mu.dim

    if name in _TORUS_BOUNDS and mu.space != "torus":
        raise CliError("requires torus measures", 2)
    if name in _SPHERE_BOUNDS and mu.space != "sphere":
        raise CliError("requires sphere measures", 2)

    integer = False
    if name == "torus-jackson":
        params = B.BoundParams(p=p, c=args.c, b=args.b, r=args.r, d=d)
        table = M.torus_diff_table(mu, nu, hi * math.sqrt(d) + 1e-9,
                                   M.JacksonWindow(), max_points=args.max_points)
        evaluator = lambda h: B.bound_torus_jackson(table, params, int(h))
        integer = True
    elif name == "torus-heat":
        params = B.BoundParams(p=p, c=args.c, b=args.b, r=args.r, d=d)
        rule = M.HeatRule(t=lo, q0=params.q0, rtol=args.tail_rtol)
        table = M.torus_diff_table(mu, nu, args.max_norm, rule,
                                   max_points=args.max_points)
        evaluator = lambda t: B.bound_torus_heat(table, params, t)
    elif name == "torus-winf":
        rule = M.WinfRule(T=lo, rtol=args.tail_rtol)
        table = M.torus_diff_table(mu, nu, args.max_norm, rule,
                                   max_points=args.max_points)
        evaluator = lambda T: B.bound_torus_winf(table, args.c, args.b, args.r, d, T)
    elif name == "sphere-projection":
        params = B.BoundParams(p=p, c=args.c, b=args.b, r=args.r, d=d)
        seq = M.sphere_energy_seq(mu, nu, max(int(math.floor(hi)), 1),
                                  M.ProjectionWindow(), max_degree=args.max_degree)
        evaluator = lambda L: B.bound_sphere_projection(seq, params, int(L))
        integer = True
    elif name == "sphere-heat":
        params = B.BoundParams(p=p, c=args.c, b=args.b, r=args.r, d=d)
        rule = M.HeatRule(t=lo, q0=params.q0, rtol=args.tail_rtol)
        seq = M.sphere_energy_seq(mu, nu, 8, rule, max_degree=args.max_degree)
        evaluator = lambda t: B.bound_sphere_heat(seq, params, t)
    elif name == "sphere-winf":
        rule = M.WinfRule(T=lo, rtol=args.tail_rtol)
        seq = M.sphere_energy_seq(mu, nu, 8, rule, max_degree=args.max_degree)
        evaluator = lambda T: B.bound_sphere_winf(seq, args.c, args.b, args.r, d, T)
    else:
        evaluator = _manifold_evaluator(args, mu, nu, p, lo)

    if args.param is not None:
        x = int(args.param) if integer else args.param
        report = evaluator(x)
        if not report.valid:
            print(report.reason, file=sys.stderr)
            return 2
    else:
        rng = ((int(math.ceil(lo)), int(math.floor(hi))) if integer else (lo, hi))
        _, report = B.optimize_bound(evaluator, rng, grid=args.grid, integer=integer)
    _emit(report.to_json())
    return 0


def _manifold_evaluator(args, mu, nu, p, lo):
    mconst = B.ManifoldConstants(ricci_a=args.ricci_a, diam=args.diam,
                                 k_weyl=args.k_weyl, k_poincare=args.k_poincare)
    if args.spectrum:
        try:
            with open(args.spectrum) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read spectrum {args.spectrum!r}: {exc}", 1)
        diff = M.GenericSpectrumDiff(np.asarray(obj["eigenvalues"], dtype=float),
                                     np.asarray(obj["diffs"], dtype=float))
        d = int(obj.get("dim", mu.dim))
    else:
        if mu.space != "torus":
            raise CliError("manifold bounds need --spectrum or torus measures", 2)
        rule = M.HeatRule(t=lo, q0=2.0, rtol=args.tail_rtol)
        diff = M.generic_diff_from_torus(mu, nu, args.max_norm, rule,
                                         max_points=args.max_points)
        d = mu.dim
    params = B.BoundParams(p=p, c=args.c, b=args.b, r=args.r, d=d)
    if args.inequality == "manifold-le2":
        return lambda t: B.bound_manifold_heat_p_le2(diff, params, mconst, t)
    return lambda t: B.bound_manifold_heat_p_gt2(diff, params, mconst, t)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def _oracle_parser(sub):
    p = sub.add_parser("oracle", help="exact / enclosed Wasserstein values")
    p.add_argument("method",
                   choices=("circle-w1", "circle-wp", "discrete", "bottleneck", "vs-vol"))
    p.add_argument("--mu", help="first measure (not used by vs-vol)")
    p.add_argument("--nu", required=True)
    p.add_argument("--p", default="1")
    p.add_argument("--m", type=int, default=2000, help="quantization resolution for vs-vol")
    p.add_argument("--plan", action="store_true", help="include the transport plan")


def _run_oracle(args) -> int:
    p = _parse_p(args.p)
    if args.method == "vs-vol":
        nu = _load_measure(args.nu)
        if not isinstance(nu, M.DiscreteMeasure):
            raise CliError("vs-vol requires a discrete nu", 2)
        result = O.wp_vs_vol_enclosure(nu, p, args.m)
    else:
        if not args.mu:
            raise CliError("requires --mu", 2)
        mu, nu = _load_pair(args.mu, args.nu)
        if args.method == "circle-w1":
            result = O.circle_w1(mu, nu)
        elif args.method == "circle-wp":
            result = O.circle_wp(mu, nu, p)
        elif args.method == "discrete":
            result = O.discrete_wp(mu, nu, p)
        else:
            result = O.discrete_winf(mu, nu)
    payload = result.to_json()
    if not args.plan:
        payload.pop("plan", None)
    _emit(payload)
    return 0


# ---------------------------------------------------------------------------
# design
# ---------------------------------------------------------------------------

def _design_parser(sub):
    p = sub.add_parser("design", help="spherical design verification")
    p.add_argument("action", choices=("check", "verify"))
    p.add_argument("--points", required=True, help="measure file or fixture name")
    p.add_argument("--t", type=int, required=True, help="claimed design strength")
    p.add_argument("--tol", type=float, default=D.DEFAULT_DESIGN_TOL)
    p.add_argument("--p", default="1")
    p.add_argument("--m", type=int, default=2000)


def _run_design(args) -> int:
    points = _load_measure(args.points)
    if not isinstance(points, M.DiscreteMeasure):
        raise CliError("designs are finite point sets", 2)
    if args.action == "check":
        report = D.design_check(points, args.t, tol=args.tol)
        _emit(report.to_json())
        return 0 if report.is_design else 3
    report = D.corollary_verify(points, args.t, _parse_p(args.p), args.m)
    _emit(report.to_json())
    return 0


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

def _suite_parser(sub):
    p = sub.add_parser("suite", help="randomized soundness experiments")
    p.add_argument("experiment", choices=("soundness",))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--space", required=True, choices=SPACES)
    p.add_argument("--p", default="1,2", help="comma-separated exponents")
    p.add_argument("--out", help="write the CSV here as well as stdout")
    p.add_argument("--threads", type=int, default=0,
                   help="instance parallelism (default WASS_SMOOTH_THREADS or 1)")


def _run_suite_cmd(args) -> int:
    try:
        p_values = [float(tok) for tok in args.p.split(",") if tok]
    except ValueError:
        raise CliError(f"invalid --p list {args.p!r}", 2)
    rows, violations = run_suite(args.space, args.n, args.seed, p_values,
                                 threads=args.threads)
    lines = [CSV_HEADER] + [row.csv() for row in rows]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {args.out!r}: {exc}", 1)
    return 0 if violations == 0 else 4


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wass-smooth",
        description="Fourier-analytic Wasserstein bounds with exact oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _bound_parser(sub)
    _oracle_parser(sub)
    _design_parser(sub)
    _suite_parser(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bound":
            return _run_bound(args)
        if args.command == "oracle":
            return _run_oracle(args)
        if args.command == "design":
            return _run_design(args)
        return _run_suite_cmd(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except NotADesign as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except WassSmoothError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
