"""Command-line front-end.

    qextend <command> --config run.json --out DIR [--depth N] [--eps E]

Commands: ratio, reach, dense, cover, solve, verify, propagate,
counterexample.  Every run writes ``result.json`` (sorted keys, no
timestamps) plus command-specific CSV/SVG files.  Exit status: 0 success,
2 negative verdict (no solution / refuted), 1 error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

from . import plots
from .errors import ConfigParse, InconsistentAtOne, InconsistentInverse, QExtendError
from .extend import cover, uncovered_rows
from .intervals import Interval, parse_interval, parse_union
from .qdiff import (
    BumpSpec,
    GridFunction,
    build_bump_solution,
    expression_map,
    extend_cocycle,
    fit_power_form,
    geometric_grid,
    lattice_grid,
    parse_expression,
    propagate,
    residual,
    uniform_grid,
    zero_cocycle,
)
from .qdiff.cocycle import as_real
from .reach import DEFAULT_POINT_BUDGET, Corridor, density_gap, is_dense_evidence, limit_ratio, reach
from .scales import (
    ScaleSet,
    as_scale,
    harmonic_family,
    make_scale_set,
    power_shift_family,
    scale_set_to_json,
    scale_to_json,
)

COMMANDS = ("ratio", "reach", "dense", "cover", "solve", "verify", "propagate", "counterexample")
BUDGET_ENV = "QEXTEND_POINT_BUDGET"

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


@dataclass
class Budgets:
    max_depth: int = 40
    eps: float = 0.01
    point_budget: int = DEFAULT_POINT_BUDGET
    piece_budget: int = 10**5

    def __post_init__(self) -> None:
        if self.max_depth < 1 or self.eps <= 0 or self.point_budget < 1 or self.piece_budget < 1:
            raise ConfigParse("budgets must be positive")


@dataclass
class RunConfig:
    command: str
    inputs: dict
    output_dir: Path
    seed: int = 0
    budgets: Budgets = field(default_factory=Budgets)


@dataclass
class Outcome:
    result: dict
    status: int = EXIT_OK
    tables: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)
    figures: dict[str, Callable[[Path], Any]] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# config parsing


def _load_json(path: Path) -> dict:
    try:
        # decimals are read exactly so that 0.5 means 1/2
        return json.loads(path.read_text(), parse_float=Fraction)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParse(f"cannot read {path}: {exc}") from None


def _env_budget() -> Optional[int]:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return None
    try:
        val = int(raw)
    except ValueError:
        raise ConfigParse(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if val < 1:
        raise ConfigParse(f"{BUDGET_ENV} must be positive")
    return val


def build_config(args: argparse.Namespace) -> RunConfig:
    data = _load_json(Path(args.config)) if args.config else {}
    if not isinstance(data, dict):
        raise ConfigParse("the config must be a JSON object")
    cmd = args.command
    if "command" in data and data["command"] != cmd:
        raise ConfigParse(f"config is for {data['command']!r}, not {cmd!r}")
    if cmd not in COMMANDS:
        raise ConfigParse(f"unknown command {cmd!r}")
    b = dict(data.get("budgets", {}))
    try:
        budgets = Budgets(
            max_depth=int(b.get("max_depth", 40)),
            eps=float(b.get("eps", 0.01)),
            point_budget=int(b.get("point_budget", DEFAULT_POINT_BUDGET)),
            piece_budget=int(b.get("piece_budget", 10**5)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigParse(f"bad budgets: {exc}") from None
    env = _env_budget()
    if env is not None:
        budgets.point_budget = env
    if args.depth is not None:
        budgets.max_depth = args.depth
    if args.eps is not None:
        budgets.eps = args.eps
    Budgets(**vars(budgets))  # re-validate overrides
    inputs = data.get("inputs", {k: v for k, v in data.items() if k not in ("command", "budgets", "seed")})
    return RunConfig(cmd, dict(inputs), Path(args.out), int(data.get("seed", 0)), budgets)


def _require(inputs: Mapping, key: str):
    if key not in inputs:
        raise ConfigParse(f"missing input {key!r}")
    return inputs[key]


def _scalar(x):
    """Scale inputs: JSON numbers, strings like "2^(1/3)", or Scale objects."""
    if isinstance(x, float):
        return Fraction(str(x))
    return x


def parse_T(obj) -> ScaleSet:
    try:
        if isinstance(obj, Mapping) and "family" in obj:
            fam, depth = obj["family"], int(obj["depth"])
            if fam == "power_shift":
                return power_shift_family(_scalar(obj["c"]), depth)
            if fam == "harmonic":
                return harmonic_family(depth)
            raise ConfigParse(f"unknown family {fam!r}")
        if isinstance(obj, Mapping) and "generators" in obj:
            return make_scale_set(
                [_scalar(g) for g in obj["generators"]],
                [_scalar(c) for c in obj.get("limit_points", ())],
                obj.get("truncation"),
            )
        if isinstance(obj, (list, tuple)):
            return make_scale_set([_scalar(g) for g in obj])
    except (TypeError, KeyError) as exc:
        raise ConfigParse(f"bad generator set: {exc}") from None
    raise ConfigParse("T must be a list of scales or an object with 'generators' or 'family'")


def _interval(obj) -> Interval:
    if isinstance(obj, str):
        return parse_interval(obj)
    if isinstance(obj, Mapping):
        return Interval.from_json(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return Interval(as_real(obj[0]), as_real(obj[1]), True, True)
    raise ConfigParse(f"cannot read interval {obj!r}")


def _corridor(obj) -> Corridor:
    if isinstance(obj, Mapping) and "ratio" in obj:
        return Corridor.symmetric(_scalar(obj["ratio"]))
    if isinstance(obj, Mapping):
        return Corridor(_scalar(obj["gamma_minus"]), _scalar(obj["gamma_plus"]))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return Corridor(_scalar(obj[0]), _scalar(obj[1]))
    raise ConfigParse("corridor must be [gamma_minus, gamma_plus] or {'ratio': r}")


def _cocycle(inputs: Mapping, T: ScaleSet):
    p = _require(inputs, "p")
    c = _require(inputs, "c")
    if isinstance(c, Mapping):
        given = {as_scale(_scalar(k)): v for k, v in c.items()}
    else:
        given = {as_scale(_scalar(e["t"])): e["c"] for e in c}
    return extend_cocycle(T, given, p)


# ---------------------------------------------------------------------------
# JSON helpers


def clean(obj):
    """Make a result JSON-safe: Fractions as ints/floats, ±inf as strings, NaN as null."""
    if isinstance(obj, Mapping):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else float(obj)
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "+inf" if obj > 0 else "-inf"
        return obj
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return "+inf" if x == math.inf else repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# commands


def cmd_ratio(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    b = limit_ratio(
        T,
        max_depth=cfg.budgets.max_depth,
        eps=cfg.budgets.eps,
        bisect_steps=int(cfg.inputs.get("bisect_steps", 8)),
        point_budget=min(cfg.budgets.point_budget, 10**6),
    )
    res = b.to_json()
    res["verdict"] = "exact" if b.conclusive else "bracket"
    res["T"] = scale_set_to_json(T)
    return Outcome(res)


def cmd_reach(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    corr = _corridor(_require(cfg.inputs, "corridor"))
    depth = int(cfg.inputs.get("depth", cfg.budgets.max_depth))
    res_eps = float(cfg.inputs.get("resolution", 0.0 if T.is_exact else cfg.budgets.eps))
    R = reach(T, corr, depth, res_eps, cfg.budgets.point_budget)
    g = density_gap(R)
    out = {
        "verdict": "saturated" if R.saturated else "depth-limited",
        "corridor": corr.to_json(),
        "depth": R.depth,
        "resolution": R.resolution,
        "mode": R.mode,
        "exact": R.exact,
        "saturated": R.saturated,
        "points": len(R),
        "gap_ratio": float(g.ratio),
        "gap_witness": [scale_to_json(g.lo), scale_to_json(g.hi)],
    }
    if "exclude" in cfg.inputs:
        lo, hi = (as_scale(_scalar(v)) for v in cfg.inputs["exclude"])
        hits = [p for p in R.points if lo < p < hi]
        out["exclude"] = {"lo": scale_to_json(lo), "hi": scale_to_json(hi), "points_inside": len(hits)}
    return Outcome(
        out,
        tables={"reach.csv": (["value", "log_value", "depth_first_reached"], R.to_rows())},
        figures={"reach.svg": lambda p: plots.reach_rug(R, p)},
    )


def cmd_dense(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    corr = _corridor(_require(cfg.inputs, "corridor"))
    v = is_dense_evidence(
        T, corr, eps=cfg.budgets.eps, max_depth=cfg.budgets.max_depth, point_budget=min(cfg.budgets.point_budget, 10**6)
    )
    out = v.to_json()
    out["corridor"] = corr.to_json()
    return Outcome(out)


def cmd_cover(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    I = _interval(_require(cfg.inputs, "I"))
    U = parse_union(_require(cfg.inputs, "U"))
    rounds = int(cfg.inputs.get("max_rounds", cfg.budgets.max_depth))
    r = cover(U, T, I, max_rounds=rounds, eps=cfg.budgets.eps, piece_budget=cfg.budgets.piece_budget)
    out = r.to_json()
    out["verdict"] = "covered" if r.covered_within_eps else ("fixpoint" if r.converged else "round-limited")
    out["I"] = I.to_json()
    rows = [(lo, hi, str(lc).lower(), str(hc).lower(), repr(ll)) for lo, hi, lc, hc, ll in uncovered_rows(r)]
    return Outcome(
        out,
        tables={"uncovered.csv": (["lo", "hi", "lo_closed", "hi_closed", "log_length"], rows)},
        figures={"coverage.svg": lambda p: plots.coverage_strip(r, I, p)},
    )


def cmd_solve(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    I = _interval(cfg.inputs["I"]) if "I" in cfg.inputs else None
    try:
        c = _cocycle(cfg.inputs, T)
    except (InconsistentAtOne, InconsistentInverse) as exc:
        return Outcome(
            {"verdict": "no continuous solution", "reason": exc.name, "detail": str(exc), "remedy": exc.remedy},
            EXIT_NEGATIVE,
        )
    f = fit_power_form(T, c, I)
    out: dict = {"cocycle": c.to_json()}
    if I is not None:
        b = limit_ratio(T, bisect_steps=0)
        out["ratio_condition"] = {"ratio": I.ratio, "lower": b.lower, "upper": b.upper, "conclusive": b.conclusive}
    if f is None:
        out["verdict"] = "no continuous solution"
        out["reason"] = "no single coefficient a fits c(t) for all t"
        return Outcome(out, EXIT_NEGATIVE)
    out["verdict"] = "power form"
    out["solution"] = f.to_json()
    out["family"] = f"{_num(f.a)}*log(x) + b" if f.kind == "log" else f"{_num(f.a)}*x^{_num(f.p)} + b"
    return Outcome(out)


def _grid_points(spec: Mapping, I: Interval, T: ScaleSet) -> list:
    kind = spec.get("kind", "lattice")
    n = int(spec.get("n", 50))
    if kind == "uniform":
        return uniform_grid(I, n)
    if kind == "geometric":
        return geometric_grid(I, n)
    if kind == "lattice":
        return lattice_grid(I, T, uniform_grid(I, n), int(spec.get("depth", 3)))
    raise ConfigParse(f"unknown grid kind {kind!r}")


def cmd_verify(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    I = _interval(_require(cfg.inputs, "I"))
    c = _cocycle(cfg.inputs, T)
    expr = parse_expression(str(_require(cfg.inputs, "phi")), cfg.inputs.get("params"))
    xs = _grid_points(cfg.inputs.get("grid", {}), I, T)
    G = GridFunction.sample(lambda x: expr(x=x), xs, I)
    rep = residual(G, T, c, I)
    tol = float(cfg.inputs.get("tol", 1e-9))
    out = rep.to_json()
    ok = rep.max_residual <= tol
    out.update({"verdict": "solution" if ok else "refuted", "tol": tol, "grid_points": len(G)})
    return Outcome(out, EXIT_OK if ok else EXIT_NEGATIVE, tables={"grid.csv": (["x", "value", "provenance"], G.to_rows())})


def _gmap(inputs: Mapping, T: ScaleSet):
    g = inputs.get("g", {"zero": True})
    if "expr" in g:
        return expression_map(str(g["expr"]), g.get("params")), f"expression {g['expr']}"
    if "c" in g:
        return _cocycle(g, T), "affine y + c(t) x^p"
    return zero_cocycle(T), "identity (c = 0)"


def cmd_propagate(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    I = _interval(_require(cfg.inputs, "I"))
    U = _interval(_require(cfg.inputs, "U"))
    seed_spec = _require(cfg.inputs, "seed")
    expr = parse_expression(str(seed_spec["expr"]), seed_spec.get("params"))
    xs = uniform_grid(U, int(seed_spec.get("n", 21)))
    seed = GridFunction.sample(lambda x: expr(x=x), xs, U)
    g, gdesc = _gmap(cfg.inputs, T)
    depth = int(cfg.inputs.get("depth", 10))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = propagate(seed, g, T, I, depth)
    tol = float(cfg.inputs.get("tol", 1e-9))
    out = r.to_json()
    out["g"] = gdesc
    out["warnings"] = [str(w.message) for w in caught]
    if "expect" in cfg.inputs:
        ref = parse_expression(str(cfg.inputs["expect"]))
        out["max_error"] = max((float(abs(v - ref(x=x))) for x, v in zip(r.grid.xs, r.grid.values)), default=0.0)
    ok = r.max_discrepancy <= tol
    out.update({"verdict": "consistent" if ok else "path-inconsistent", "tol": tol})
    return Outcome(
        out, EXIT_OK if ok else EXIT_NEGATIVE, tables={"grid.csv": (["x", "value", "provenance"], r.grid.to_rows())}
    )


def cmd_counterexample(cfg: RunConfig) -> Outcome:
    T = parse_T(_require(cfg.inputs, "T"))
    I = _interval(_require(cfg.inputs, "I"))
    if "supports" in cfg.inputs:
        supports = [tuple(as_real(v) for v in s) for s in cfg.inputs["supports"]]
    else:
        supports = [tuple(as_real(v) for v in _require(cfg.inputs, "base"))]
    spec = BumpSpec(tuple(supports), str(cfg.inputs.get("shape", "parabola")))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sol = build_bump_solution(
            I, T, spec, depth=int(cfg.inputs.get("depth", 8)), check_samples=int(cfg.inputs.get("samples", 10**4))
        )
    rep = sol.residual
    out = {
        "verdict": "nonconstant solution",
        "shape": spec.shape,
        "supports": [[_num(a), _num(b)] for a, b in sol.supports],
        "support": sol.support.to_json(),
        "residual": rep.to_json() if rep is not None else None,
        "ratio": sol.ratio,
        "limit_ratio": {"lower": sol.bracket.lower, "upper": sol.bracket.upper, "conclusive": sol.bracket.conclusive},
        "warnings": [str(w.message) for w in caught],
    }
    ys = uniform_grid(I, 1001)
    rows = [(_num(x), _num(sol.phi(x)), "bump") for x in ys]
    return Outcome(
        out,
        tables={"phi.csv": (["x", "value", "provenance"], rows)},
        figures={"bump.svg": lambda p: plots.bump_curve(sol.phi, I, sol.supports, p, links=_links(sol.supports, T))},
    )


def _links(supports, T: ScaleSet) -> list:
    """Pairs of copies with ``B = t A`` for a generator ``t``."""
    gens = [g.value if g.is_exact else float(g) for g in T.generators if g != 1]
    have = set(supports)
    return [(A, (A[0] * t, A[1] * t)) for A in supports for t in gens if (A[0] * t, A[1] * t) in have]


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "ratio": cmd_ratio,
    "reach": cmd_reach,
    "dense": cmd_dense,
    "cover": cmd_cover,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "propagate": cmd_propagate,
    "counterexample": cmd_counterexample,
}


def run(cfg: RunConfig, svg: bool = True) -> int:
    """Dispatch one command and write its artifacts; returns the exit status."""
    outcome = HANDLERS[cfg.command](cfg)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    result = {"command": cfg.command, "seed": cfg.seed, "exit_status": outcome.status, **outcome.result}
    (cfg.output_dir / "result.json").write_text(dumps(result))
    for name, (header, rows) in outcome.tables.items():
        with open(cfg.output_dir / name, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    if svg:
        for name, draw in outcome.figures.items():
            draw(cfg.output_dir / name)
    return outcome.status


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qextend", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--depth", type=int, help="override budgets.max_depth")
    parser.add_argument("--eps", type=float, help="override budgets.eps")
    parser.add_argument("--no-svg", action="store_true", help="skip SVG plots")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        status = run(cfg, svg=not args.no_svg)
    except QExtendError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        print(f"remedy: {exc.remedy}", file=sys.stderr)
        _write_error(args, exc.name, str(exc), exc.remedy)
        return EXIT_ERROR
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        _write_error(args, type(exc).__name__, str(exc), "check the config inputs")
        return EXIT_ERROR
    result = json.loads((Path(args.out) / "result.json").read_text())
    print(f"{args.command}: {result.get('verdict')} (exit {status})")
    return status


def _write_error(args: argparse.Namespace, name: str, detail: str, remedy: str) -> None:
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        err = {"command": args.command, "verdict": "error", "exit_status": EXIT_ERROR, "error": name, "detail": detail, "remedy": remedy}
        (out / "result.json").write_text(dumps(err))
    except OSError:
        pass


if __name__ == "__main__":
    sys.exit(main())
