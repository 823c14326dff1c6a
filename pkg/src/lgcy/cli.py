"""Batch front-end: pair ingestion, series dumps, verification runs.

Exit codes: 0 success, 1 check failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import shipped_pairs
from .cohseries import Orders
from .genfun import (
    IdentityError,
    fjrw_i_function,
    i_function_x,
    i_function_y,
    serialize_series,
)
from .lgmodel import LGPair, load_pair
from .verify import ALL_CHECKS, recommended_orders, run_checks


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgcy",
        description="Exact genus-zero series engine for Fermat LG pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--pair", required=True,
                       help="path to a pair file, or a shipped pair name")
        p.add_argument("--T", type=int, default=8, help="t-total-degree order")
        p.add_argument("--lambda-order", type=int, default=4, dest="lam_order")
        p.add_argument("--z-min", type=int, default=None)
        p.add_argument("--z-max", type=int, default=None)
        p.add_argument("--format", choices=("table", "structured"),
                       default="table")
        p.add_argument("--dump", default=None,
                       help="directory to write structured series files")

    describe = sub.add_parser("describe", help="sector census and flags")
    add_common(describe)

    ifun = sub.add_parser("ifun", help="emit a truncated I-function")
    add_common(ifun)
    ifun.add_argument("--side", choices=("lg", "cy", "fjrw"), required=True)

    verify = sub.add_parser("verify", help="run named identity checks")
    add_common(verify)
    verify.add_argument("--checks", default="all",
                        help="comma list of checks, or 'all'")
    verify.add_argument("--self-test", action="store_true",
                        help="inject one fault per check and require detection")
    return parser


def _load(pair_arg: str) -> LGPair:
    catalog = shipped_pairs()
    if pair_arg in catalog:
        return catalog[pair_arg]
    path = Path(pair_arg)
    if not path.exists():
        raise FileNotFoundError(f"pair file not found: {pair_arg}")
    return load_pair(path)


def _orders(args, pair: LGPair) -> Orders:
    if args.T < 0 or args.lam_order < 0:
        raise ValueError("truncation orders must be non-negative")
    base = recommended_orders(pair, args.T, args.lam_order)
    z_min = args.z_min if args.z_min is not None else base.z_window[0]
    z_max = args.z_max if args.z_max is not None else base.z_window[1]
    return Orders(t_order=args.T, lam_order=args.lam_order,
                  z_min=z_min, z_max=z_max)


def _emit(payload: dict, args) -> None:
    if args.format == "structured":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for line in _tabulate(payload):
        print(line)


def _tabulate(payload: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_tabulate(value, prefix + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{prefix}{key}: [{len(value)} entries]")
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def cmd_describe(args) -> int:
    pair = _load(args.pair)
    sectors = []
    for g in pair.group.elements:
        sectors.append({
            "exps": list(g.exps),
            "age": str(g.age()),
            "fixedDim": g.fixed_dim(),
            "narrow": pair.is_narrow(g),
        })
    samples = []
    j2 = pair.grading ** 2
    for c in pair.valid_twists()[:2]:
        for insertions in ([pair.grading] * 3, [j2, j2, j2]):
            samples.append({
                "c": c,
                "insertions": [list(g.exps) for g in insertions],
                "nonempty": pair.is_nonempty(c, 0, insertions),
                "degrees": [str(pair.line_bundle_degree(c, j, 0, insertions))
                            for j in range(pair.fermat.n_variables)],
            })
    payload = {
        "pair": pair.name,
        "weights": list(pair.fermat.weights),
        "degree": pair.fermat.degree,
        "groupOrder": len(pair.group),
        "period": pair.period,
        "calabiYau": pair.is_calabi_yau,
        "sl": pair.is_sl,
        "narrowCount": len(pair.narrow_sectors()),
        "grading": list(pair.grading.exps),
        "sectors": sectors,
        "moduliSamples": samples,
    }
    _emit(payload, args)
    if args.dump:
        _write_dump(args.dump, f"{pair.name}-describe.json", payload)
    return 0


def cmd_ifun(args) -> int:
    pair = _load(args.pair)
    orders = _orders(args, pair)
    if args.side == "lg":
        series = i_function_x(pair, orders)
    elif args.side == "cy":
        series = i_function_y(pair, orders)
    else:
        series = fjrw_i_function(pair, orders)
    payload = serialize_series(series)
    if args.format == "structured":
        _emit(payload, args)
    else:
        tokens = " ".join(f"{name}^{exp}" for name, exp in series.tokens) or "-"
        print(f"side={args.side} pair={pair.name} terms={len(series.terms)} "
              f"tokens={tokens}")
        for term in payload["terms"]:
            print(f"  sector {tuple(term['sector'])}  z^{term['z']}  "
                  f"deg {tuple(term['degree'])}:  {term['value']['display']}")
    if args.dump:
        _write_dump(args.dump, f"{pair.name}-ifun-{args.side}.json", payload)
    return 0


def cmd_verify(args) -> int:
    pair = _load(args.pair)
    orders = _orders(args, pair)
    names = ALL_CHECKS if args.checks == "all" else \
        tuple(name.strip() for name in args.checks.split(","))
    for name in names:
        if name not in ALL_CHECKS:
            raise ValueError(f"unknown check {name!r}; known: {', '.join(ALL_CHECKS)}")
    if args.self_test:
        return _self_test(pair, orders, args)
    reports = run_checks(pair, names, orders)
    payload = {"pair": pair.name, "reports": [r.to_dict() for r in reports]}
    _emit(payload, args)
    if args.format == "table":
        for r in reports:
            print(f"{r.status.upper():4}  {r.check}  [{r.elapsed_ms} ms]")
    if args.dump:
        _write_dump(args.dump, f"{pair.name}-verify.json", payload)
    return 0 if all(r.ok() for r in reports) else 1


def _self_test(pair: LGPair, orders: Orders, args) -> int:
    """Inject one fault per check; every injection must be detected."""
    from . import verify as v
    from .genfun import i_function_x, h_factorization, untwisted_j_oracle
    from .transforms import u_bar

    small = Orders(t_order=min(orders.t_order, 5),
                   lam_order=min(orders.lam_order, 3))
    oracle = untwisted_j_oracle(pair, 0, small)
    key_oracle = sorted(oracle.terms)[len(oracle.terms) // 2]
    ix = i_function_x(pair, v.recommended_orders(pair, small.t_order, small.lam_order))
    _, hx = h_factorization(pair, ix, "x")
    pushed = u_bar(pair, small.lam_order).apply(hx)
    key_cont = sorted(pushed.terms)[len(pushed.terms) // 2]
    g_in = pair.grading.exps
    g_out = pair.identity.exps
    attempts = [
        v.check_oracle_equivalence(pair, n_max=4,
                                   _tamper=sorted(untwisted_j_oracle(pair, 0, Orders(t_order=4, lam_order=0)).terms)[0]),
        v.check_mlk_untwisted(pair, pair.valid_twists()[-1], small, _tamper=key_oracle),
        v.check_mlk_operator(pair, _tamper_sector=pair.grading.exps),
        v.check_gamma_factorization(pair, small, _tamper_side="x"),
        v.check_continuation(pair, v.recommended_orders(pair, small.t_order, small.lam_order),
                             _tamper=key_cont),
        v.check_rctc_conditions(pair, 4, _tamper_block=(g_in, g_out)),
        v.check_fjrw_pipeline(pair, small,
                              _tamper=(pair.identity.exps, 1,
                                       tuple(0 for _ in ix.variables)),
                              _tamper_stage="result"),
        v.check_kernel_compatibility(pair, small,
                                     _tamper=(g_out, 0, tuple([1] + [0] * (len(ix.variables) - 1)))),
        v.check_residue_lemma(pair, _tamper=True),
    ]
    detected = sum(1 for r in attempts if not r.ok())
    payload = {
        "pair": pair.name,
        "injected": len(attempts),
        "detected": detected,
        "reports": [r.to_dict() for r in attempts],
    }
    _emit(payload, args)
    print(f"self-test: {detected}/{len(attempts)} injected faults detected")
    return 0 if detected == len(attempts) else 1


def _write_dump(directory: str, filename: str, payload: dict) -> None:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    (path / filename).write_text(json.dumps(payload, indent=2, sort_keys=True))


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "describe":
            return cmd_describe(args)
        if args.command == "ifun":
            return cmd_ifun(args)
        if args.command == "verify":
            return cmd_verify(args)
    except (FileNotFoundError, ValueError, KeyError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except IdentityError as err:
        print(f"identity failure: {err} {err.witness}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
