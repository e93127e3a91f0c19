"""Command-line front end.

Exit codes: 0 certified, 1 not certified, 2 numerically refuted, 10 usage
error, 11 unreadable or invalid network file, 12 enumeration cap exceeded,
13 sampling failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .certify import Status, certify_bruteforce
from .decompose import ORDERS, path_search, uncovered
from .errors import CapExceededError, NetworkError, SamplingError
from .graph import build_graph, check_accessibility
from .merge import CHECKS, graph_merging, verdict_from_report
from .netfile import NetworkFileError, load
from .numeric import Mode, diagonal_feasibility, l_matrix_refutation, monte_carlo, refute_certification

EXIT_USAGE = 10
EXIT_FILE = 11
EXIT_CAP = 12
EXIT_SAMPLING = 13


class Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage, which would read as a verdict."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


# -- report assembly ---------------------------------------------------------

def _network_info(nf, path):
    net = nf.network
    return {
        "source": str(path),
        "description": nf.description,
        "n": net.n,
        "m": net.m,
        "labels": [net.label(v) for v in range(1, net.n + net.m + 1)],
    }


def _edges(edges):
    return [list(e) for e in edges]


def _paths(net, paths):
    return [{"input": k, "input_node": p.root_input, "nodes": list(p.nodes), "length": p.length}
            for k, p in enumerate(paths, start=1)]


def _accessibility(net):
    acc = check_accessibility(build_graph(net))
    return {"accessible": {str(i): ok for i, ok in acc.items()},
            "inaccessible": [i for i, ok in acc.items() if not ok]}


def _rank_summary(rep):
    return {
        "trials": rep.trials,
        "mode": rep.mode.value,
        "seed": rep.seed,
        "min_rank": rep.min_rank,
        "max_rank": rep.max_rank,
        "deficient": len(rep.deficient_trials),
        "first_deficient_trial": rep.deficient_trials[0] + 1 if rep.deficient_trials else None,
        "resamples": rep.resamples,
    }


def check_report(nf, path, brute_force=False, max_n=None, order="degree", merge_check="exact",
                 refute=None, mode="int", seed=0):
    net = nf.network
    paths = path_search(net, order=order)
    merge = graph_merging(paths, net, check=merge_check)
    verdict = verdict_from_report(merge, net)
    report = {
        "command": "check",
        "network": _network_info(nf, path),
        "assumptions": _accessibility(net),
        "decomposition": _paths(net, paths),
        "merge": {
            "check": merge_check,
            "steps": [{
                "step": s.step,
                "merged_nodes": list(s.merged_nodes),
                "incoming_path": s.incoming_path,
                "found": _edges(s.found),
                "accepted": _edges(s.accepted),
                "discarded": _edges(s.discarded),
                "blocking": list(s.blocking) if s.blocking else None,
            } for s in merge.steps],
        },
        "discarded_edges": _edges(merge.discarded_total),
        "uncovered_nodes": list(merge.uncovered_nodes),
        "pipeline": {"status": verdict.status.value},
        "bruteforce": None,
        "monte_carlo": None,
    }
    final = verdict
    if brute_force:
        bf = certify_bruteforce(build_graph(net), max_n=max_n)
        report["bruteforce"] = {
            "status": bf.status.value,
            "failing_subset": list(bf.failing_subset) if bf.failing_subset else None,
            "agrees": bf.status is verdict.status,
        }
        # the exhaustive route decides the dedicated-node condition exactly
        final = bf
    if refute and final.status is Status.NOT_CERTIFIED:
        final = refute_certification(net, final, refute, mode, seed)
        report["monte_carlo"] = {"trials": refute, "mode": Mode(mode).value, "seed": seed,
                                 "refuted": final.status is Status.NUMERICALLY_REFUTED}
    report["verdict"] = {
        "status": final.status.value,
        "route": final.route,
        "summary": final.describe(),
        "notes": list(final.notes),
    }
    return report, final.status.exit_code


def decompose_report(nf, path, order="degree"):
    net = nf.network
    paths = path_search(net, order=order)
    return {
        "command": "decompose",
        "network": _network_info(nf, path),
        "decomposition": _paths(net, paths),
        "uncovered_nodes": list(uncovered(net, paths)),
    }


def verify_report(nf, path, trials, mode, seed, scaled=True):
    rep = monte_carlo(nf.network, trials, mode, seed, scaled=scaled)
    out = {"command": "verify", "network": _network_info(nf, path), "monte_carlo": _rank_summary(rep)}
    return out, rep


def assumptions_report(nf, path, trials, seed, mode="cont"):
    net = nf.network
    lm = l_matrix_refutation(net, trials, seed, mode)
    diag = diagonal_feasibility(net, mode)
    out = {
        "command": "assumptions",
        "network": _network_info(nf, path),
        "assumptions": _accessibility(net),
        "l_matrix": {"refuted": lm.refuted, "trials": lm.trials, "trial": None if lm.trial is None else lm.trial + 1,
                     "mode": Mode(mode).value, "seed": seed},
        "diagonal_feasible": None if diag is None else {str(i): ok for i, ok in diag.items()},
    }
    return out


# -- text rendering ------------------------------------------------------------

def _label(report):
    labels = report["network"]["labels"]
    return lambda v: labels[v - 1]


def _edge_text(edges, lab):
    return ", ".join(f"({lab(a)},{lab(b)})" for a, b in edges) or "none"


def _nodes_text(nodes, lab):
    return ", ".join(lab(v) for v in nodes) or "none"


def render_text(report) -> str:
    lab = _label(report)
    net = report["network"]
    lines = [f"network: {net['source']} ({net['n']} states, {net['m']} inputs)"]
    if net["description"]:
        lines.append(f"  {net['description']}")
    if "verdict" in report:
        v = report["verdict"]
        lines.append(f"verdict: {v['status'].upper()} via {v['route']}: {v['summary']}")
        for note in v["notes"]:
            lines.append(f"  note: {note}")
    if "decomposition" in report:
        lines.append("paths:")
        for p in report["decomposition"]:
            seq = " -> ".join([lab(p["input_node"])] + [lab(x) for x in p["nodes"]])
            lines.append(f"  p{p['input']}: {seq} (length {p['length']})")
    if "merge" in report:
        lines.append(f"merge steps ({report['merge']['check']} check):")
        for s in report["merge"]["steps"]:
            lines.append(f"  step {s['step']}: {{{_nodes_text(s['merged_nodes'], lab)}}} + p{s['incoming_path']}")
            lines.append(f"    found {_edge_text(s['found'], lab)}")
            lines.append(f"    accepted {_edge_text(s['accepted'], lab)}")
            if s["discarded"]:
                lines.append(f"    discarded {_edge_text(s['discarded'], lab)}; "
                             f"with all found edges {{{_nodes_text(s['blocking'], lab)}}} has no dedicated node")
    if "discarded_edges" in report:
        for e in report["discarded_edges"]:
            lines.append(f"harmful edge {_edge_text([e], lab)}")
    if "uncovered_nodes" in report:
        if report["uncovered_nodes"]:
            lines.append(f"warning: uncovered nodes {_nodes_text(report['uncovered_nodes'], lab)}")
        else:
            lines.append("uncovered nodes: none")
    bf = report.get("bruteforce")
    if bf:
        fail = f", failing subset {{{_nodes_text(bf['failing_subset'], lab)}}}" if bf["failing_subset"] else ""
        agree = "agrees with" if bf["agrees"] else "differs from"
        lines.append(f"exhaustive check: {bf['status'].upper()}{fail}; {agree} the pipeline "
                     f"({report['pipeline']['status'].upper()})")
    if "assumptions" in report:
        bad = report["assumptions"]["inaccessible"]
        if bad:
            lines.append(f"accessibility: nodes {_nodes_text(bad, lab)} reach no input")
        else:
            lines.append("accessibility: every state node reaches an input")
    if "l_matrix" in report:
        lm = report["l_matrix"]
        if lm["refuted"]:
            lines.append(f"[L, B] rank: deficient in trial {lm['trial']} ({lm['mode']}, seed {lm['seed']})")
        else:
            lines.append(f"[L, B] rank: no deficiency in {lm['trials']} trials ({lm['mode']}, seed {lm['seed']}); "
                         "not a proof")
    if "diagonal_feasible" in report:
        diag = report["diagonal_feasible"]
        if diag is None:
            lines.append("diagonal signs: none declared")
        else:
            bad = [int(i) for i, ok in diag.items() if not ok]
            lines.append(f"diagonal signs: infeasible at {_nodes_text(bad, lab)}" if bad
                         else "diagonal signs: feasible at every node")
    mc = report.get("monte_carlo")
    if mc and "min_rank" in mc:
        lines.append(f"rank: {mc['trials']} trials ({mc['mode']}, seed {mc['seed']}): min {mc['min_rank']}, "
                     f"max {mc['max_rank']}, {mc['deficient']} deficient (rank < {net['n']})")
    return "\n".join(lines) + "\n"


def emit(report, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2) + "\n")
    else:
        stream.write(render_text(report))


# -- commands -------------------------------------------------------------------

def cmd_check(args):
    nf = load(args.file)
    report, code = check_report(nf, args.file, args.brute_force, args.max_n, args.order, args.merge_check,
                                args.refute, args.mode, args.seed)
    emit(report, args.format)
    return code


def cmd_decompose(args):
    nf = load(args.file)
    report = decompose_report(nf, args.file, args.order)
    emit(report, args.format)
    return 0


def cmd_verify(args):
    nf = load(args.file)
    report, rep = verify_report(nf, args.file, args.trials, args.mode, args.seed, not args.raw_rank)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", "rank"])
            w.writerows(enumerate(rep.ranks, start=1))
    emit(report, args.format)
    return 0


def cmd_assumptions(args):
    nf = load(args.file)
    emit(assumptions_report(nf, args.file, args.trials, args.seed, args.mode), args.format)
    return 0


def build_parser():
    p = Parser(prog="signctrl", description="Topological controllability of signed networks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def common(sp):
        sp.add_argument("file", help="network file (JSON)")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("check", help="certify a network")
    common(c)
    c.add_argument("--brute-force", action="store_true", help="also enumerate every state subset")
    c.add_argument("--max-n", type=positive, default=None, help="enumeration cap (default 20 or $SIGNCTRL_MAX_N)")
    c.add_argument("--order", choices=ORDERS, default="degree", help="root processing order")
    c.add_argument("--merge-check", choices=CHECKS, default="exact",
                   help="subsets examined when merging: all touching an endpoint, or endpoints only")
    c.add_argument("--refute", type=positive, metavar="N", help="search N random draws for a rank deficiency")
    c.add_argument("--mode", choices=[m.value for m in Mode], default="int")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("decompose", help="list the input-rooted paths")
    common(d)
    d.add_argument("--order", choices=ORDERS, default="degree")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="Monte-Carlo rank of the controllability matrix")
    common(v)
    v.add_argument("--trials", type=positive, default=1000)
    v.add_argument("--mode", choices=[m.value for m in Mode], default="cont")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--csv", metavar="PATH", help="write per-trial ranks as trial,rank")
    v.add_argument("--raw-rank", action="store_true", help="rank of the unscaled controllability matrix")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("assumptions", help="accessibility, [L, B] rank and diagonal signs")
    common(a)
    a.add_argument("--trials", type=positive, default=1000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--mode", choices=[m.value for m in Mode], default="cont")
    a.set_defaults(func=cmd_assumptions)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NetworkFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SamplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    except NetworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
