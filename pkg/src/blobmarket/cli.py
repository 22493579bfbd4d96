"""Command line front end.

Usage::

    blobmarket {policy,equilibrium,merge,bargain,simulate,sweep} --scenario FILE [options]

Exit codes: 0 success, 2 invalid input, 3 no deal or infeasible target,
1 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence

from .bargaining import BargainInput, NoDeal, nash_split
from .cost_model import (
    MarketParams,
    Rollup,
    blob_policy,
    capped_blob_policy,
    choose_strategy,
    indifference_price,
    l1_policy,
)
from .equilibrium import solve_equilibrium, solve_equilibrium_capped
from .errors import BlobMarketError, InfeasibleTargetError, InvalidParameterError, NumericalError
from .merging import merge_price
from .simulate import SimConfig, run

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_INVALID = 2
EXIT_NO_DEAL = 3

PARAM_FIELDS = {"a", "G", "P0", "P1", "k", "U", "B_floor"}
TOP_FIELDS = {"params", "rollups", "merge", "bargain", "simulate"}
BARGAIN_FIELDS = {"f", "price", "new_price", "R", "ids"}
SIM_FIELDS = {"rollup", "horizon", "arrival", "seed", "blob_price"}
SWEEP_BARGAIN = {"f", "price", "new_price"}


class ScenarioError(InvalidParameterError):
    pass


class NoDealError(BlobMarketError):
    pass


@dataclass
class Scenario:
    params: MarketParams
    rollups: List[Rollup]
    merge: Optional[List[Any]] = None
    bargain: Optional[Dict[str, Any]] = None
    simulate: Optional[Dict[str, Any]] = None
    notices: Sequence[str] = ()


def _reject_unknown(section: str, data: Dict[str, Any], allowed: set) -> None:
    extra = sorted(set(data) - allowed)
    if extra:
        raise ScenarioError(f"{section}: unknown field(s) {', '.join(extra)}")


def _number(section: str, name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{section}.{name}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"{section}.{name}: must be finite")
    return float(value)


def parse_scenario(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    _reject_unknown("scenario", data, TOP_FIELDS)
    if "params" not in data or "rollups" not in data:
        raise ScenarioError("scenario needs both 'params' and 'rollups'")

    raw = data["params"]
    if not isinstance(raw, dict):
        raise ScenarioError("params must be an object")
    _reject_unknown("params", raw, PARAM_FIELDS)
    missing = sorted({"a", "G", "P0", "P1", "k"} - set(raw))
    if missing:
        raise ScenarioError(f"params: missing {', '.join(missing)}")
    values = {
        key: (None if val is None and key == "U" else _number("params", key, val))
        for key, val in raw.items()
    }
    try:
        params = MarketParams(**values)
    except InvalidParameterError as exc:
        raise ScenarioError(f"params: {exc}") from None

    rows = data["rollups"]
    if not isinstance(rows, list) or not rows:
        raise ScenarioError("rollups must be a non-empty list")
    rollups = []
    for n, row in enumerate(rows):
        where = f"rollups[{n}]"
        if not isinstance(row, dict):
            raise ScenarioError(f"{where}: expected an object")
        _reject_unknown(where, row, {"id", "rate"})
        rate = _number(where, "rate", row.get("rate"))
        if rate <= 0:
            raise ScenarioError(f"{where}: rate must be positive")
        rollups.append(Rollup(str(row.get("id", n)), rate))
    ids = [r.id for r in rollups]
    if len(set(ids)) != len(ids):
        raise ScenarioError("rollups: ids must be unique")

    ordered = sorted(rollups, key=lambda r: (-r.rate, r.id))
    notices = []
    if ordered != rollups:
        notices.append("rollups were not sorted by decreasing rate; sorted on load")

    merge = data.get("merge")
    if merge is not None:
        if not (isinstance(merge, list) and len(merge) == 2):
            raise ScenarioError("merge: expected a list of two rollup ids")
        merge = [str(x) for x in merge]
    bargain = data.get("bargain")
    if bargain is not None:
        if not isinstance(bargain, dict):
            raise ScenarioError("bargain must be an object")
        _reject_unknown("bargain", bargain, BARGAIN_FIELDS)
    sim = data.get("simulate")
    if sim is not None:
        if not isinstance(sim, dict):
            raise ScenarioError("simulate must be an object")
        _reject_unknown("simulate", sim, SIM_FIELDS)
    return Scenario(params, ordered, merge, bargain, sim, notices)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    return parse_scenario(data)


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _check_finite(rows: List[Dict[str, Any]]) -> None:
    for row in rows:
        for key, val in row.items():
            if isinstance(val, float) and not math.isfinite(val):
                raise NumericalError(f"non-finite value in output field {key}")


def emit(rows: List[Dict[str, Any]], csv_path: Optional[str], out=None) -> None:
    out = out or sys.stdout
    _check_finite(rows)
    if not rows:
        return
    cols = list(rows[0])
    table = [[_fmt(row.get(c, "")) for c in cols] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in table)) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)), file=out)
    for r in table:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)), file=out)
    if csv_path:
        write_csv(rows, csv_path)


def write_csv(rows: List[Dict[str, Any]], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def _policy_row(rollup: Rollup, policy) -> Dict[str, Any]:
    return {
        "id": rollup.id,
        "rate": rollup.rate,
        "venue": policy.venue.value,
        "interval": policy.interval,
        "per_tx_cost": policy.per_tx_cost,
        "batch_size": policy.batch_size,
    }


def _equilibrium(sc: Scenario):
    if sc.params.U is not None:
        return solve_equilibrium_capped(sc.rollups, sc.params)
    return solve_equilibrium(sc.rollups, sc.params)


def cmd_equilibrium(sc: Scenario, args) -> List[Dict[str, Any]]:
    eq = _equilibrium(sc)
    print(f"blob price B = {eq.price:.6g}")
    print(f"threshold n* = {eq.threshold} of {len(eq.rollups)}")
    print(f"blob rate = {eq.blob_rate:.6g} (target k = {sc.params.k:.6g})")
    return [_policy_row(r, p) for r, p in zip(eq.rollups, eq.policies)]


def cmd_policy(sc: Scenario, args) -> List[Dict[str, Any]]:
    price = args.blob_price if args.blob_price is not None else _equilibrium(sc).price
    print(f"blob price B = {price:.6g}")
    rows = []
    for r in sc.rollups:
        blob = capped_blob_policy(r, price, sc.params) if sc.params.U is not None else blob_policy(r, price, sc.params)
        l1 = l1_policy(r, sc.params)
        chosen = choose_strategy(r, price, sc.params)
        rows.append(
            {
                "id": r.id,
                "rate": r.rate,
                "indifference_price": indifference_price(r, sc.params),
                "blob_interval": blob.interval,
                "blob_per_tx": blob.per_tx_cost,
                "l1_interval": l1.interval,
                "l1_per_tx": l1.per_tx_cost,
                "venue": chosen.venue.value,
            }
        )
    return rows


def _merge_ids(sc: Scenario, args) -> List[str]:
    ids = args.merge or sc.merge or (sc.bargain or {}).get("ids")
    if not ids:
        raise ScenarioError("merge needs two rollup ids (--merge A B or scenario 'merge')")
    return [str(x) for x in ids]


def cmd_merge(sc: Scenario, args) -> List[Dict[str, Any]]:
    i, j = _merge_ids(sc, args)
    out = merge_price(sc.rollups, i, j, sc.params)
    row = {
        "case": out.case.value,
        "old_price": out.old_price,
        "new_price": out.new_price,
        "price_ratio": out.price_ratio,
        "joint_interval": out.joint_interval,
        "joint_per_tx": out.joint_per_tx,
        "joint_size": out.joint_size,
        "large_solo_per_tx": out.large_solo_per_tx,
        "profitable": out.profitable,
        "frozen_set_consistent": out.frozen_set_consistent,
    }
    if not out.profitable:
        emit([row], args.csv)
        raise NoDealError("merge is not profitable for the large rollup")
    return [row]


def _bargain_input(sc: Scenario, args, overrides: Optional[Dict[str, float]] = None) -> BargainInput:
    opts = dict(sc.bargain or {})
    for key, flag in (("f", args.f), ("price", args.price), ("new_price", args.new_price)):
        if flag is not None:
            opts[key] = flag
    opts.update(overrides or {})
    if args.merge:
        opts["ids"] = args.merge
    elif sc.merge and "ids" not in opts:
        opts["ids"] = sc.merge
    if {"f", "price", "new_price"} <= set(opts):
        R = opts.get("R", sc.rollups[0].rate)
        return BargainInput(R=R, f=opts["f"], B=opts["price"], B_N=opts["new_price"], a=sc.params.a)
    if opts.get("ids"):
        i, j = [str(x) for x in opts["ids"]]
        out = merge_price(sc.rollups, i, j, sc.params)
        if not out.profitable:
            raise NoDealError("merge is not profitable for the large rollup")
        rates = sorted((r.rate for r in sc.rollups if r.id in (i, j)), reverse=True)
        return BargainInput(R=rates[0], f=rates[1] / rates[0], B=out.old_price, B_N=out.new_price, a=sc.params.a)
    raise ScenarioError("bargain needs --f, --price and --new-price, or two rollup ids")


def _bargain_row(inp: BargainInput) -> Dict[str, Any]:
    res = nash_split(inp)
    if isinstance(res, NoDeal):
        raise NoDealError(res.reason)
    return {
        "f": inp.f,
        "price": inp.B,
        "new_price": inp.B_N,
        "B1": res.B1,
        "B2": res.B2,
        "B1_proportional": res.B1_pr,
        "Tr_L": res.Tr_L,
        "Tr_S": res.Tr_S,
        "Tr_J": res.Tr_J,
        "Tr_JL": res.Tr_JL,
        "Tr_JS": res.Tr_JS,
        "I_L": res.I_L,
        "I_S": res.I_S,
    }


def cmd_bargain(sc: Scenario, args) -> List[Dict[str, Any]]:
    row = _bargain_row(_bargain_input(sc, args))
    print(f"B1 = {row['B1']:.6g}  B2 = {row['B2']:.6g}  I_L = {100 * row['I_L']:.3g}%  I_S = {100 * row['I_S']:.3g}%")
    return [row]


def cmd_simulate(sc: Scenario, args) -> List[Dict[str, Any]]:
    opts = dict(sc.simulate or {})
    if args.seed is not None:
        opts["seed"] = args.seed
        opts.setdefault("arrival", "poisson")
    if args.horizon is not None:
        opts["horizon"] = args.horizon
    if args.blob_price is not None:
        opts["blob_price"] = args.blob_price
    rid = str(opts.get("rollup", sc.rollups[0].id))
    by_id = {r.id: r for r in sc.rollups}
    if rid not in by_id:
        raise ScenarioError(f"simulate: unknown rollup id {rid!r}")
    rollup = by_id[rid]
    price = opts.get("blob_price")
    if price is None:
        price = _equilibrium(sc).price
    policy = choose_strategy(rollup, price, sc.params)
    if sc.params.U is not None and policy.venue.value == "blob":
        policy = capped_blob_policy(rollup, price, sc.params)
    if policy.interval <= 0:
        raise ScenarioError("policy interval is zero: continuous posting cannot be simulated")
    horizon = opts.get("horizon", 1000 * policy.interval)
    cfg = SimConfig(
        rate=rollup.rate,
        policy=policy,
        params=sc.params,
        horizon=float(horizon),
        blob_price=float(price),
        arrival=opts.get("arrival", "uniform"),
        seed=int(opts.get("seed", 0)),
    )
    rep = run(cfg)
    return [
        {
            "id": rid,
            "venue": policy.venue.value,
            "interval": policy.interval,
            "posts": rep.posts,
            "transactions": rep.transactions,
            "total_posting_cost": rep.total_posting_cost,
            "total_delay_cost": rep.total_delay_cost,
            "realized_per_tx": rep.realized_per_tx_cost,
            "closed_form_per_tx": rep.closed_form_per_tx_cost,
            "relative_error": rep.relative_error,
        }
    ]


def sweep_points(lo: float, hi: float, step: float) -> List[float]:
    if step <= 0 or hi < lo:
        raise ScenarioError("sweep needs LO <= HI and STEP > 0")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def sweep_row(sc: Scenario, args, field: str, value: float) -> Dict[str, Any]:
    """One sweep point; also used to recompute rows read back from CSV."""
    if field in SWEEP_BARGAIN:
        row = _bargain_row(_bargain_input(sc, args, {field: value}))
        return {"field": field, "value": value, **row}
    if field in PARAM_FIELDS:
        try:
            sub = replace(sc, params=replace(sc.params, **{field: value}))
        except InvalidParameterError as exc:
            raise ScenarioError(str(exc)) from None
        eq = _equilibrium(sub)
        return {
            "field": field,
            "value": value,
            "price": eq.price,
            "threshold": eq.threshold,
            "blob_rate": eq.blob_rate,
        }
    raise ScenarioError(f"cannot sweep field {field!r}")


def cmd_sweep(sc: Scenario, args) -> List[Dict[str, Any]]:
    if not args.sweep:
        raise ScenarioError("sweep needs --sweep FIELD LO HI STEP")
    field, lo, hi, step = args.sweep
    try:
        lo, hi, step = float(lo), float(hi), float(step)
    except ValueError:
        raise ScenarioError("sweep bounds must be numbers") from None
    return [sweep_row(sc, args, field, v) for v in sweep_points(lo, hi, step)]


COMMANDS = {
    "policy": cmd_policy,
    "equilibrium": cmd_equilibrium,
    "merge": cmd_merge,
    "bargain": cmd_bargain,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blobmarket", description="Blob market economics analyses.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--scenario", required=True, metavar="PATH", help="JSON scenario file")
    p.add_argument("--csv", metavar="PATH", help="also write the rows to a CSV file")
    p.add_argument("--blob-price", type=float, metavar="X", help="fixed blob price for policy/simulate")
    p.add_argument("--merge", nargs=2, metavar=("A", "B"), help="ids of the rollups to merge")
    p.add_argument("--f", type=float, help="small-to-large rate ratio for bargain")
    p.add_argument("--price", type=float, metavar="B", help="blob price before the merge")
    p.add_argument("--new-price", type=float, metavar="BN", help="blob price after the merge")
    p.add_argument("--seed", type=int, help="seed for Poisson arrivals")
    p.add_argument("--horizon", type=float, help="simulated time span")
    p.add_argument(
        "--sweep", nargs=4, metavar=("FIELD", "LO", "HI", "STEP"),
        help="vary one parameter (f, price, new_price or a market parameter)",
    )
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        for note in sc.notices:
            print(f"notice: {note}", file=sys.stderr)
        rows = COMMANDS[args.command](sc, args)
        emit(rows, args.csv)
    except (NoDealError, InfeasibleTargetError) as exc:
        print(f"no deal: {exc}", file=sys.stderr)
        return EXIT_NO_DEAL
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidParameterError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
