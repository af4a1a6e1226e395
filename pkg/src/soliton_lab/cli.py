"""Command line front-end: classify reductions, solve scenarios, run verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import Grid, count_peaks, export_csv, fields, measure_velocity, residual
from .expsum import evaluate
from .spectral import Family, Kind, ReductionSpec, classification_json, direction_of, predict_velocity
from .suites import DEFAULT_SEED, SUITES
from .tauforms import Mode, SolutionSpec, tau_closed

OUTPUTS = ("csv", "residual", "peaks", "velocity")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
POSITIVITY_IMAG_TOL = 1e-10


class ScenarioError(ValueError):
    """A scenario file that does not parse or validate; carries a location."""


def _line_of(text: str, needle: str) -> int | None:
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def _fail(path: str, text: str, where: str, msg: str, needle: str | None = None) -> ScenarioError:
    line = _line_of(text, needle) if needle else None
    loc = f"{path}:{line}" if line else path
    return ScenarioError(f"{loc}: {where}: {msg}")


def _parse_scenario(obj: dict, where: str, path: str, text: str, grid_override: Grid | None) -> dict:
    if not isinstance(obj, dict):
        raise _fail(path, text, where, "scenario must be a JSON object")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise _fail(path, text, where, "missing string field 'name'")
    try:
        spec = SolutionSpec.from_dict(obj["spec"])
    except KeyError as exc:
        raise _fail(path, text, f"{where}.spec", f"missing field {exc}", f'"{name}"') from exc
    except (ValueError, TypeError) as exc:
        raise _fail(path, text, f"{where}.spec", str(exc), f'"{name}"') from exc
    try:
        pair = tau_closed(spec)
    except ValueError as exc:
        # point at the offending phase when the message names one
        raw = [str(q.get("eps", "0")) for q in obj["spec"]["params"]]
        hit = next((e for e in raw if f"eps = {e}*pi" in str(exc)), None)
        needle = f'"{hit}"' if hit else f'"{name}"'
        raise _fail(path, text, f"{where}.spec", str(exc), needle) from exc
    try:
        grid = grid_override or Grid.parse(obj.get("grid", "-10:10:201,-5:5:101"))
    except ValueError as exc:
        raise _fail(path, text, f"{where}.grid", str(exc), '"grid"') from exc
    outputs = obj.get("outputs", ["csv"])
    bad = [o for o in outputs if o not in OUTPUTS]
    if not outputs or bad:
        raise _fail(path, text, f"{where}.outputs",
                    f"need at least one of {list(OUTPUTS)}, got {outputs}", '"outputs"')
    expect = obj.get("expect", {})
    if not isinstance(expect, dict):
        raise _fail(path, text, f"{where}.expect", "must be an object")
    window = obj.get("velocity_window", [-1.0, 1.0])
    peaks_at = obj.get("peaks_at", sorted({float(t) for t in expect.get("peaks", {})}) or [0.0])
    return {"name": name, "spec": spec, "pair": pair, "grid": grid, "outputs": list(outputs), "expect": expect,
            "velocity_window": [float(window[0]), float(window[1])],
            "peaks_at": [float(t) for t in peaks_at]}


def load_scenarios(path: str, grid_override: Grid | None = None) -> list[dict]:
    """Read a scenario file: one scenario object or {"scenarios": [...]}."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if isinstance(doc, dict) and "scenarios" in doc:
        items = doc["scenarios"]
        if not isinstance(items, list) or not items:
            raise ScenarioError(f"{path}: 'scenarios' must be a non-empty list")
        return [_parse_scenario(s, f"scenarios[{i}]", path, text, grid_override)
                for i, s in enumerate(items)]
    return [_parse_scenario(doc, "scenario", path, text, grid_override)]


def _tkey(t: float) -> str:
    return format(t, "g")


def run_scenario(sc: dict, out_dir: Path) -> dict:
    """Build the solution, write requested artifacts and return the summary record."""
    spec, grid = sc["spec"], sc["grid"]
    pair = sc["pair"]
    X, T = grid.mesh()
    tau_hat = evaluate(pair.physical, X, T)
    scale = float(np.abs(tau_hat).max())
    positive = bool(np.all(tau_hat.real > 0)
                    and np.abs(tau_hat.imag).max() <= POSITIVITY_IMAG_TOL * scale)
    field = fields(pair.physical, grid)
    summary = {"name": sc["name"], "family": f"{spec.equation.value}/{spec.mode.value}",
               "n": spec.n, "spec": spec.to_dict(), "grid": str(grid),
               "tau_hat_positive": positive, "tau_hat_min": float(tau_hat.real.min()),
               "excluded_points": int(field.excluded.sum())}
    checks = [("tau_hat_positive", positive)]
    kind = lambda p: Kind.PERIODIC if spec.mode in (Mode.PERIODIC1, Mode.PERIODIC2) else Kind.SOLITON
    chan_v = [predict_velocity(p.k, p.eps, spec.m, kind(p)) for p in spec.params]
    summary["channel_velocities"] = chan_v
    summary["channel_directions"] = [direction_of(v).value for v in chan_v]

    if "csv" in sc["outputs"]:
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / f"{sc['name']}.csv"
        export_csv(field, target)
        summary["csv"] = str(target)
    if "residual" in sc["outputs"] and spec.governing_equation:
        rep = residual(pair.physical, spec.governing_equation, grid)
        summary["residual"] = {"equation": rep.equation, "max_rel_residual": rep.max_rel_residual}
    if "peaks" in sc["outputs"]:
        summary["peaks"] = {_tkey(t): count_peaks(field, t) for t in sc["peaks_at"]}
    if "velocity" in sc["outputs"] and len(spec.params) == 1:
        t0, t1 = sc["velocity_window"]
        v = measure_velocity(spec, t0, t1)
        summary["velocity"] = {"measured": v, "predicted": chan_v[0],
                               "direction": direction_of(v if abs(v) > 1e-6 else 0.0).value}

    exp = sc["expect"]
    for t, want in exp.get("peaks", {}).items():
        got = summary.get("peaks", {}).get(_tkey(float(t)))
        checks.append((f"peaks at t={t}", got == want))
    if "direction" in exp:
        checks.append(("direction", summary.get("velocity", {}).get("direction") == exp["direction"]))
    if "channel_directions" in exp:
        checks.append(("channel_directions", summary["channel_directions"] == exp["channel_directions"]))
    if "max_residual" in exp:
        checks.append(("residual", summary.get("residual", {}).get("max_rel_residual", np.inf)
                       < exp["max_residual"]))
    summary["checks"] = {name: ok for name, ok in checks}
    summary["ok"] = all(ok for _, ok in checks)
    return summary


def cmd_classify(args) -> int:
    try:
        spec = ReductionSpec(args.n, Family(args.family), args.m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(classification_json(spec))
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        override = Grid.parse(args.grid) if args.grid else None
        scenarios = load_scenarios(args.scenario, override)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    results = [run_scenario(sc, out_dir) for sc in scenarios]
    doc = results[0] if len(results) == 1 else {"scenarios": results}
    print(json.dumps(doc, indent=2))
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_FAIL


def cmd_verify(args) -> int:
    results = SUITES[args.suite](seed=args.seed)
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print(f"{args.suite}: {len(results) - failed} passed, {failed} failed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soliton-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="list admissible root distributions of an n-reduction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--m", type=int, choices=(3, 5), default=None,
                   help="dispersion power (default 3, or 5 when n = 3)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="build the solutions of a scenario file and export data")
    p.add_argument("scenario")
    p.add_argument("--out", default=".", help="directory for CSV output")
    p.add_argument("--grid", help='override the grid, e.g. --grid=-10:10:201,-5:5:101')
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
