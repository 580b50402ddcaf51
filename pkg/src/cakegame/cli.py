"""Experiment harness CLI.

Subcommands: simulate (one game), sweep (horizon grid with a log-log
rate fit), stackelberg (value computation), adversary (emit hard
instances as density files), rw (query protocol run). Exit codes: 0 ok,
2 config error, 3 contract violation, 4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import adversarial
from .alice_strategies import (FixedCutsAlice, KCutMyopicAlice, KCutRobustAlice,
                               TwoCutMyopicAlice, TwoCutRobustAlice, power,
                               poly_over_polylog)
from .bob_strategies import BudgetSwitchBob, MyopicBob, PretendSpikedBob
from .engine import history_to_csv, history_to_json, regret_report, run_game
from .errors import ContractError, ResourceBudgetError
from .rw_query import QueryOracle, rw_eps_stackelberg, rw_lower_bound_fixture
from .stackelberg import stackelberg_bruteforce, stackelberg_exact
from .valuations import load_density, save_density, uniform_density


def resolve_density(spec: str, seed=None):
    """Density from a name (uniform, center-heavy, random) or a file path."""
    if spec == "uniform":
        return uniform_density()
    if spec == "center-heavy":
        return adversarial.center_heavy_example()
    if spec == "random":
        return adversarial.random_mild_density(seed)
    try:
        return load_density(spec)
    except FileNotFoundError:
        raise SystemExit2(f"density file not found: {spec}")


class SystemExit2(Exception):
    """Config problem: exits with status 2."""


def build_alice(args, T: int, k: int):
    name = args.alice
    if name == "fixed":
        if not args.cuts:
            raise SystemExit2("--alice fixed needs --cuts")
        return FixedCutsAlice(tuple(float(c) for c in args.cuts.split(",")))
    if name == "2cut-myopic":
        return TwoCutMyopicAlice(T, eps_override=args.eps_override)
    if name == "kcut-myopic":
        return KCutMyopicAlice(T, k)
    if name == "2cut-robust":
        return TwoCutRobustAlice(T, _rate(args, default_log_power=5.0))
    if name == "kcut-robust":
        return KCutRobustAlice(T, k, _rate(args, default_log_power=6.0))
    raise SystemExit2(f"unknown strategy {name!r}")


def _rate(args, default_log_power: float):
    if args.rate_kind == "power":
        if args.alpha is None:
            raise SystemExit2("--rate-kind power needs --alpha")
        return power(args.alpha)
    if args.rate_kind == "polylog":
        return poly_over_polylog(args.log_power or default_log_power)
    raise SystemExit2(f"unknown rate kind {args.rate_kind!r}")


def build_bob(args, k: int, vB):
    name = args.bob
    if name == "myopic":
        return MyopicBob(vB), vB
    if name == "pretend":
        params = adversarial.SpikeParams(k, args.bob_w, args.bob_z)
        bob = PretendSpikedBob(params, args.bob_n)
        return bob, bob.density
    if name == "budget":
        if not args.bob_pretend:
            raise SystemExit2("--bob budget needs --bob-pretend density")
        pretend = resolve_density(args.bob_pretend)
        return BudgetSwitchBob(pretend, args.bob_budget), vB
    raise SystemExit2(f"unknown responder {name!r}")


def _common_game_flags(p):
    p.add_argument("--alice", default="2cut-myopic")
    p.add_argument("--bob", default="myopic")
    p.add_argument("--va", default="uniform")
    p.add_argument("--vb", default="uniform")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--rate-kind", default="power")
    p.add_argument("--log-power", type=float, default=None)
    p.add_argument("--cuts", default=None, help="fixed strategy cut list")
    p.add_argument("--eps-override", type=float, default=None)
    p.add_argument("--bob-w", type=float, default=1.0 / 48.0)
    p.add_argument("--bob-z", type=float, default=0.875)
    p.add_argument("--bob-n", type=int, default=1)
    p.add_argument("--bob-pretend", default=None)
    p.add_argument("--bob-budget", type=float, default=0.0)
    p.add_argument("--u-star", type=float, default=None)


def cmd_simulate(args) -> int:
    vA = resolve_density(args.va, seed=args.seed)
    vB = resolve_density(args.vb, seed=args.seed)
    bob, vB = build_bob(args, args.k, vB)
    alice = build_alice(args, args.T, args.k)
    history = run_game(alice, bob, vA, vB, args.T, args.k, u_star=args.u_star)
    report = regret_report(history, vB)
    doc = {
        "T": args.T,
        "k": args.k,
        "u_star": history.u_star_alice,
        "total_alice": history.total_alice,
        "total_bob": history.total_bob,
        "regret_alice": report.alice_stackelberg_regret,
        "regret_bob": report.bob_choice_regret,
    }
    if args.out:
        if args.format == "csv":
            history_to_csv(history, args.out)
        else:
            history_to_json(history, args.out)
        doc["history_file"] = args.out
    print(json.dumps(doc, indent=1))
    return 0


def _sweep_one(payload):
    args_dict, T, seed = payload
    ns = argparse.Namespace(**args_dict)
    vA = resolve_density(ns.va, seed=seed)
    vB = resolve_density(ns.vb, seed=seed)
    bob, vB = build_bob(ns, ns.k, vB)
    alice = build_alice(ns, T, ns.k)
    history = run_game(alice, bob, vA, vB, T, ns.k, u_star=ns.u_star)
    report = regret_report(history, vB)
    return T, seed, report.alice_stackelberg_regret, report.bob_choice_regret


def cmd_sweep(args) -> int:
    ts = sorted(int(t) for t in args.T_list.split(","))
    seeds = list(range(args.seeds))
    payloads = [(vars(args), T, seed) for T in ts for seed in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_one, payloads))
    else:
        rows = [_sweep_one(p) for p in payloads]
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = ["T,seed,regret_alice,regret_bob"]
    for T, seed, ra, rb in rows:
        lines.append(f"{T},{seed},{ra!r},{rb!r}")
    exponent = None
    if len(ts) >= 3:
        mean_by_t = {T: np.mean([r[2] for r in rows if r[0] == T]) for T in ts}
        xs = np.log10(np.array(ts, dtype=float))
        ys = np.log10(np.maximum([mean_by_t[T] for T in ts], 1e-12))
        exponent = float(np.polyfit(xs, ys, 1)[0])
        lines.append(f"fit,all,{exponent!r},")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if exponent is not None:
        print(json.dumps({"fitted_exponent": exponent}), file=sys.stderr)
    return 0


def cmd_stackelberg(args) -> int:
    vA = resolve_density(args.va)
    vB = resolve_density(args.vb)
    doc = {}
    if args.method in ("exact", "both"):
        sol = stackelberg_exact(vA, vB, args.k)
        doc.update({"value": sol.value, "cuts": list(sol.cuts),
                    "bob_piece": sol.bob_piece, "bob_value": sol.bob_value})
    if args.method in ("bruteforce", "both"):
        sol = stackelberg_bruteforce(vA, vB, args.k, args.h)
        doc.update({"bruteforce_value": sol.value,
                    "bruteforce_cuts": list(sol.cuts)})
        if args.method == "bruteforce":
            doc.update({"value": sol.value, "cuts": list(sol.cuts),
                        "bob_piece": sol.bob_piece, "bob_value": sol.bob_value})
    print(json.dumps(doc, indent=1))
    return 0


def cmd_adversary(args) -> int:
    fam = args.family
    if fam == "unspiked":
        d = adversarial.unspiked_density(args.k)
    elif fam == "spiked":
        d = adversarial.spiked_density(adversarial.SpikeParams(args.k, args.w, args.z))
    elif fam == "bitvector":
        rng = np.random.default_rng(args.seed)
        bits = tuple(int(b) for b in rng.integers(0, 2, args.blocks))
        d = adversarial.bitvector_density(
            adversarial.BitVectorAdversary(bits, args.blocks)).density
    elif fam == "mild":
        d = adversarial.unknown_alpha_pair()[0]
    elif fam == "extreme":
        d = adversarial.unknown_alpha_pair()[1]
    elif fam == "center-heavy":
        d = adversarial.center_heavy_example()
    else:
        raise SystemExit2(f"unknown family {fam!r}")
    if args.out:
        save_density(d, args.out)
        print(json.dumps({"family": fam, "file": args.out,
                          "segments": len(d.vals)}))
    else:
        for i in range(len(d.vals)):
            print(f"{float(d.breaks[i + 1])!r} {float(d.vals[i])!r}")
    return 0


def cmd_rw(args) -> int:
    if args.fixture_seed is not None:
        vA, vB, hidden = rw_lower_bound_fixture(args.fixture_eps, args.fixture_seed)
    else:
        vA = resolve_density(args.va)
        vB = resolve_density(args.vb)
        hidden = None
    res = rw_eps_stackelberg(QueryOracle(vA), QueryOracle(vB), args.k, args.eps)
    alloc = res.allocation
    doc = {
        "value": res.solution.value,
        "cuts": list(res.solution.cuts),
        "bob_piece": res.solution.bob_piece,
        "bob_value": res.solution.bob_value,
        "allocation": {
            "bob": [list(iv) for iv in alloc.chosen_piece().intervals],
            "alice": [list(iv) for iv in alloc.other_piece().intervals],
        },
        "query_total": res.query_total,
        "warning": res.warning,
    }
    if hidden is not None:
        doc["fixture_hidden_z"] = hidden
    print(json.dumps(doc, indent=1))
    return 0


def _apply_config_file(argv):
    """key=value lines become defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            flag = "--" + key.strip().replace("_", "-")
            if flag not in rest:
                injected.extend([flag, value.strip()])
    return rest + injected


def make_parser():
    p = argparse.ArgumentParser(prog="cakegame")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="run one game and report regrets")
    _common_game_flags(ps)
    ps.add_argument("--T", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", default=None)
    ps.add_argument("--format", choices=("json", "csv"), default="json")
    ps.set_defaults(fn=cmd_simulate)

    pw = sub.add_parser("sweep", help="horizon grid with log-log rate fit")
    _common_game_flags(pw)
    pw.add_argument("--T-list", required=True, help="comma-separated horizons")
    pw.add_argument("--seeds", type=int, default=1)
    pw.add_argument("--jobs", type=int, default=1)
    pw.add_argument("--out", default=None)
    pw.set_defaults(fn=cmd_sweep)

    pk = sub.add_parser("stackelberg", help="compute the commitment value")
    pk.add_argument("--va", default="uniform")
    pk.add_argument("--vb", required=True)
    pk.add_argument("--k", type=int, default=2)
    pk.add_argument("--method", choices=("exact", "bruteforce", "both"),
                    default="exact")
    pk.add_argument("--h", type=float, default=1e-3)
    pk.set_defaults(fn=cmd_stackelberg)

    pa = sub.add_parser("adversary", help="emit a hard-instance density file")
    pa.add_argument("--family", required=True)
    pa.add_argument("--k", type=int, default=2)
    pa.add_argument("--w", type=float, default=1.0 / 48.0)
    pa.add_argument("--z", type=float, default=0.875)
    pa.add_argument("--blocks", type=int, default=8)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--out", default=None)
    pa.set_defaults(fn=cmd_adversary)

    pr = sub.add_parser("rw", help="run the query protocol")
    pr.add_argument("--k", type=int, default=2)
    pr.add_argument("--eps", type=float, required=True)
    pr.add_argument("--va", default="uniform")
    pr.add_argument("--vb", default="uniform")
    pr.add_argument("--fixture-seed", type=int, default=None)
    pr.add_argument("--fixture-eps", type=float, default=1.0 / 672.0)
    pr.set_defaults(fn=cmd_rw)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
        args = make_parser().parse_args(argv)
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
