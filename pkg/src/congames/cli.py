"""Command-line entry point.

Exit codes: 0 the property holds (or the command succeeded), 1 it fails
(the JSON report carries a witness), 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import prob
from .document import (
    Document,
    exact_str,
    load_document,
    num_json,
    save_document,
    strategy_json,
)
from .errors import CongamesError, DocumentError
from .es_core import configurations, fmt, set_max_configs
from .games import check_levels, is_race_free, race_witness_json
from .outcomes import check_winning, play, play_values, value_over_sets
from .strategy import (
    Strategy,
    as_between,
    check_deterministic,
    check_innocent,
    check_receptive,
    compose,
    copycat,
    iso_equivalent,
    redeclare,
    rename_ports,
)

__all__ = ["main", "load_document", "save_document"]

log = logging.getLogger("congames")
SCHEMA = 1
AUTO = "auto"


class Failure(Exception):
    """The command ran but the property does not hold."""

    def __init__(self, report: dict):
        self.report = report


def _emit(obj, args) -> None:
    if isinstance(obj, dict):
        obj = {"schema": SCHEMA, **obj}
        text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    else:
        text = obj
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figure(args, default_name: str) -> Path | None:
    """``--figure PATH``; a bare ``--figure`` puts a PNG beside the ``-o`` report."""
    fig = getattr(args, "figure", None)
    if fig is None:
        return None
    if fig != AUTO:
        return Path(fig)
    if getattr(args, "output", None):
        return Path(args.output).with_suffix(".png")
    return Path(default_name + ".png")


def _number(v):
    return {"value": num_json(v), "exact": exact_str(v)}


def _names(text: str) -> list[str]:
    return [t for t in text.split(",") if t]


def _config_arg(text: str) -> frozenset:
    return frozenset(_names(text))


def _payoff_for(doc: Document, s: Strategy):
    for name, p in doc.payoffs.items():
        if p.game == s.target:
            return p
    raise CongamesError(f"no payoff table for the game of {s.name}")


def _winning_for(doc: Document, s: Strategy, required: bool = True):
    for name, w in doc.winning.items():
        if w.game == s.target:
            return w
    if required:
        raise CongamesError(f"no winning set for the game of {s.name}")
    return None


# -- commands ----------------------------------------------------------------------


def cmd_validate(args, doc: Document) -> dict:
    return {
        "valid": True,
        "games": sorted(doc.games),
        "strategies": sorted(doc.strategies),
        "maps": sorted(doc.maps),
        "quantum": sorted(doc.quantum),
        "symmetries": sorted(doc.symmetries),
    }


def cmd_configs(args, doc: Document) -> dict:
    if args.game:
        es, subject = doc.game(args.game).es, {"game": args.game}
    elif args.strategy:
        es, subject = doc.strategy(args.strategy).es, {"strategy": args.strategy}
    else:
        raise CongamesError("configs needs --game or --strategy")
    cs = configurations(es)
    fig = _figure(args, "configs")
    if fig:
        from .plotting import plot_configurations

        plot_configurations(cs, fig, title=next(iter(subject.values())))
    return {
        "subject": subject,
        "count": len(cs),
        "configurations": [fmt(x) for x in cs],
        "figure": str(fig) if fig else None,
    }


def cmd_copycat(args, doc: Document):
    s = copycat(doc.game(args.game))
    if args.dot:
        from .render import strategy_to_dot

        return strategy_to_dot(s)
    return {"strategy": strategy_json(s, doc)}


def cmd_compose(args, doc: Document):
    sigma = as_between(doc.strategy(args.sigma))
    if args.identity == "left" and not sigma.in_ports and len(sigma.out_ports) == 1:
        # a strategy on A is also one from ~A to the empty game
        sigma = redeclare(sigma, [sigma.out_ports[0].name])
    if args.identity:
        side = sigma.out_ports if args.identity == "right" else sigma.in_ports
        if len(side) != 1:
            raise CongamesError(f"--identity {args.identity} needs exactly one port on that side")
        cc = copycat(side[0].game)
        if args.identity == "right":
            result = compose(sigma, cc).hidden
        else:
            result = rename_ports(compose(cc, sigma).hidden, {"L": side[0].name})
    elif args.tau:
        result = compose(sigma, as_between(doc.strategy(args.tau))).hidden
    else:
        raise CongamesError("compose needs --tau or --identity")
    if args.dot:
        from .render import strategy_to_dot

        return strategy_to_dot(result)
    report = {"strategy": strategy_json(result, doc), "events": len(result.es.events)}
    if args.identity:
        report["iso_equivalent_to_sigma"] = iso_equivalent(result, sigma)[0]
    return report


def cmd_check(args, doc: Document) -> dict:
    checks = {}
    s = doc.strategy(args.strategy) if args.strategy else None
    game = doc.game(args.game) if args.game else (s.target if s else None)
    if s is None and game is None:
        raise CongamesError("check needs --strategy or --game")
    wanted = [k for k in ("receptive", "innocent", "deterministic", "racefree", "winning", "levels") if getattr(args, k)]
    if not wanted:
        wanted = ["receptive", "innocent", "deterministic"] if s else ["racefree"]
    for k in wanted:
        if k in ("receptive", "innocent", "deterministic", "winning") and s is None:
            raise CongamesError(f"--{k} needs --strategy")
        if k == "receptive":
            ok, w = check_receptive(s)
        elif k == "innocent":
            ok, w = check_innocent(s)
        elif k == "deterministic":
            ok, w = check_deterministic(s)
        elif k == "racefree":
            ok, w = is_race_free(game)
            w = race_witness_json(w)
        elif k == "winning":
            ok, w = check_winning(s, _winning_for(doc, s))
        else:
            if doc.levels is None:
                raise CongamesError("document has no level order")
            viol = check_levels(doc.levels, game, s)
            ok, w = not viol, [v.to_json() for v in viol] or None
        checks[k] = {"holds": ok, "witness": w}
    report = {
        "subject": {"strategy": args.strategy} if s else {"game": args.game},
        "checks": checks,
        "holds": all(c["holds"] for c in checks.values()),
    }
    if not report["holds"]:
        raise Failure(report)
    return report


def cmd_prob(args, doc: Document) -> dict:
    if args.action == "validate":
        s = doc.strategy(args.strategy)
        if s.valuation is None:
            raise CongamesError(f"strategy {args.strategy} has no valuation")
        viol = prob.validate_valuation(s.valuation)
        report = {"strategy": args.strategy, "valid": not viol, "violations": [v.to_json() for v in viol]}
        if viol:
            raise Failure(report)
        return report
    if args.action == "sweep":
        from .generators import footnote_sweep

        report = footnote_sweep(args.trials, args.seed, args.events)
        report["holds"] = not report["disagreements"]
        if not report["holds"]:
            raise Failure(report)
        return report
    sigma, tau = doc.strategy(args.sigma), doc.strategy(args.tau)
    out = play(sigma, tau, _payoff_for(doc, sigma), _winning_for(doc, sigma, required=False))
    rows = [
        {"interaction": fmt(z), "result": fmt(out.results[z]), "p": num_json(p), "exact": exact_str(p)}
        for z, p in out.distribution.items()
    ]
    total = sum(out.distribution.values(), Fraction(0))
    fig = _figure(args, "dist")
    if fig:
        from .plotting import plot_distribution

        nz = [r for r in rows if r["p"]]
        plot_distribution(
            ["{" + ",".join(r["result"]) + "}" for r in nz], [r["p"] for r in nz], fig,
            title=f"{args.sigma} vs {args.tau}",
        )
    return {"distribution": rows, "total": _number(total), "figure": str(fig) if fig else None}


def cmd_payoff(args, doc: Document) -> dict:
    if args.minimax:
        sigmas = [doc.strategy(n) for n in _names(args.sigma)]
        taus = [doc.strategy(n) for n in _names(args.tau)]
        res = value_over_sets(sigmas, taus, _payoff_for(doc, sigmas[0]), mode=args.mode)
        fig = _figure(args, "minimax")
        if fig:
            from .plotting import plot_matrix

            plot_matrix(
                [[float(v) for v in r] for r in res["matrix"]],
                _names(args.sigma), _names(args.tau), fig, title=f"{args.mode} payoff",
            )
        return {
            "mode": args.mode,
            "sigmas": _names(args.sigma),
            "taus": _names(args.tau),
            "matrix": [[num_json(v) for v in r] for r in res["matrix"]],
            "supinf": num_json(res["supinf"]),
            "infsup": num_json(res["infsup"]),
            "determined_over_sets": res["determined_over_sets"],
            "argmax": _names(args.sigma)[res["argmax"]],
            "figure": str(fig) if fig else None,
        }
    sigma, tau = doc.strategy(args.sigma), doc.strategy(args.tau)
    x = _payoff_for(doc, sigma)
    if args.values:
        opt, pess = play_values(sigma, tau, x)
        return {"optimistic": num_json(opt), "pessimistic": num_json(pess)}
    out = play(sigma, tau, x, _winning_for(doc, sigma, required=False))
    report = {"expected": num_json(out.expected), "win_prob": None if out.win_prob is None else num_json(out.win_prob)}
    report["exact"] = {
        "expected": exact_str(out.expected),
        "win_prob": None if out.win_prob is None else exact_str(out.win_prob),
    }
    return report


def cmd_quantum(args, doc: Document) -> dict:
    from .quantum import config_operator_and_weight, local_valuation_check, matrix_to_json, whole_valuation_check

    if args.qes not in doc.quantum:
        raise CongamesError(f"no quantum block named {args.qes!r}")
    q = doc.quantum[args.qes]
    if args.action == "weight":
        a, v = config_operator_and_weight(q, _config_arg(args.config))
        return {"configuration": fmt(_config_arg(args.config)), "weight": v, "operator": matrix_to_json(a)}
    local = []
    for w in configurations(q.es):
        viol = local_valuation_check(q, w)
        if viol:
            local.append({"configuration": fmt(w), "violations": [v.to_json() for v in viol]})
    whole = whole_valuation_check(q)
    report = {
        "valid": True,
        "local": {"holds": not local, "failures": local},
        "whole": {"holds": not whole, "violations": [v.to_json() for v in whole]},
    }
    if local:
        raise Failure(report)
    return report


def cmd_sym(args, doc: Document) -> dict:
    from .symmetry import pseudo_pullback, strategies_similar, validate_isofamily

    def fam(name):
        if name is None:
            return None
        if name not in doc.symmetries:
            raise CongamesError(f"no symmetry named {name!r}")
        return doc.symmetries[name].family

    if args.action == "validate":
        viol = validate_isofamily(fam(args.family))
        report = {"family": args.family, "valid": not viol, "violations": [v.to_json() for v in viol]}
        if viol:
            raise Failure(report)
        return report
    if args.action == "pseudopb":
        f, g = doc.strategy(args.f), doc.strategy(args.g)
        pb = pseudo_pullback(f.map, g.map, fam(args.family))
        cs = configurations(pb.es)
        return {"events": list(pb.es.events), "count": len(cs), "configurations": [fmt(x) for x in cs]}
    s1, s2 = doc.strategy(args.s1), doc.strategy(args.s2)
    similar = strategies_similar(s1, s2, fam(args.fam1), fam(args.fam2))
    report = {"similar": similar, "isomorphic": iso_equivalent(s1, s2)[0]}
    if not similar:
        raise Failure(report)
    return report


def cmd_dsl(args, doc: Document):
    from . import dsl
    from .strategy import check_strategy

    text = Path(args.source).read_text(encoding="utf-8")
    env = doc.env()
    tj = dsl.typecheck(dsl.parse(text), env)
    if args.action == "check":
        return {
            "typed": True,
            "judgement": dsl.pretty(tj.judgement),
            "ports": [{"name": p.name, "direction": p.direction, "events": len(p.game.events)} for p in tj.ports],
        }
    s = dsl.elaborate(tj, env, fuel=args.fuel)
    if args.dot:
        from .render import strategy_to_dot

        return strategy_to_dot(s)
    return {
        "judgement": dsl.pretty(tj.judgement),
        "strategy": strategy_json(s, doc),
        "checks": check_strategy(s).to_json(),
        "warnings": s.warnings,
    }


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-configs", type=int, help="enumeration ceiling (default 10^6)")
    common.add_argument("--fuel", type=int, default=64, help="recursion fuel (default 64)")
    common.add_argument("--tolerance", type=float, help="float tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="congames", description="Concurrent games and strategies.")
    sub = p.add_subparsers(dest="command", required=True)

    def doc_cmd(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("document")
        return sp

    doc_cmd("validate", "load and validate a document")

    sp = doc_cmd("configs", "list configurations")
    sp.add_argument("--game")
    sp.add_argument("--strategy")
    sp.add_argument("--figure", nargs="?", const=AUTO, help="draw the configuration lattice (PNG)")

    sp = doc_cmd("copycat", "copy-cat strategy on a game")
    sp.add_argument("--game", required=True)
    sp.add_argument("--dot", action="store_true")

    sp = doc_cmd("compose", "compose two strategies")
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--tau")
    sp.add_argument("--identity", choices=["left", "right"], help="compose with copy-cat instead")
    sp.add_argument("--dot", action="store_true")

    sp = doc_cmd("check", "check properties of a strategy or game")
    sp.add_argument("--strategy")
    sp.add_argument("--game")
    for flag in ("receptive", "innocent", "deterministic", "racefree", "winning", "levels"):
        sp.add_argument(f"--{flag}", action="store_true")

    sp = sub.add_parser("prob", parents=[common], help="valuations and outcome distributions")
    sp.add_argument("action", choices=["validate", "dist", "sweep"])
    sp.add_argument("document", nargs="?")
    sp.add_argument("--strategy")
    sp.add_argument("--sigma")
    sp.add_argument("--tau")
    sp.add_argument("--figure", nargs="?", const=AUTO, help="bar chart of the distribution")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--events", type=int, default=4)

    sp = doc_cmd("payoff", "expected payoff, play values, or values over candidate sets")
    sp.add_argument("--sigma", required=True, help="name (comma-separated list with --minimax)")
    sp.add_argument("--tau", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--expected", action="store_true", help="(default)")
    g.add_argument("--values", action="store_true")
    g.add_argument("--minimax", action="store_true")
    sp.add_argument("--mode", choices=["expected", "optimistic", "pessimistic"], default="expected")
    sp.add_argument("--figure", nargs="?", const=AUTO, help="heatmap of the --minimax matrix")

    sp = sub.add_parser("quantum", parents=[common], help="quantum event structures")
    sp.add_argument("action", choices=["validate", "weight"])
    sp.add_argument("document")
    sp.add_argument("--qes", required=True)
    sp.add_argument("--config", default="", help="comma-separated events")

    sp = sub.add_parser("sym", parents=[common], help="symmetry")
    sp.add_argument("action", choices=["validate", "pseudopb", "similar"])
    sp.add_argument("document")
    sp.add_argument("--family")
    sp.add_argument("--f")
    sp.add_argument("--g")
    sp.add_argument("--s1")
    sp.add_argument("--s2")
    sp.add_argument("--fam1")
    sp.add_argument("--fam2")

    sp = sub.add_parser("dsl", parents=[common], help="strategy language")
    sp.add_argument("action", choices=["check", "eval"])
    sp.add_argument("document")
    sp.add_argument("source", help=".sdsl file holding one judgement")
    sp.add_argument("--dot", action="store_true")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "configs": cmd_configs,
    "copycat": cmd_copycat,
    "compose": cmd_compose,
    "check": cmd_check,
    "prob": cmd_prob,
    "payoff": cmd_payoff,
    "quantum": cmd_quantum,
    "sym": cmd_sym,
    "dsl": cmd_dsl,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    previous_tol = prob.FLOAT_TOL
    try:
        if args.max_configs is not None:
            set_max_configs(args.max_configs)
        if args.tolerance is not None:
            prob.FLOAT_TOL = args.tolerance
        if args.document:
            doc = load_document(args.document)
        else:
            doc = Document()
        _emit(COMMANDS[args.command](args, doc), args)
        return 0
    except Failure as f:
        _emit(f.report, args)
        return 1
    except DocumentError as exc:
        _emit({"error": exc.message, "pointer": exc.pointer}, args)
        return 2
    except (CongamesError, OSError) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, args)
        return 2
    finally:
        set_max_configs(None)
        prob.FLOAT_TOL = previous_tol


if __name__ == "__main__":
    sys.exit(main())
