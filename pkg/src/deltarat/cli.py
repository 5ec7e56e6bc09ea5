"""Command-line entry point: ``deltarat <command> --game FILE [...]``.

Exit status: 0 success, 2 bad input, 3 capacity guard, 4 a verification
check failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as gio
from .complete import cognitive_hierarchy, level_k, rationalizability
from .core import (
    Anchor,
    CapacityError,
    Game,
    InvalidInput,
    TypeIndex,
    format_rational,
    model_from_name,
)
from .lifted import build_restriction_polytope, consistent_types, delta_grid, limit_sets
from .lp import DEFAULT_MAX_ACTIONS, ebrs_enumerate, justifiable_in_polytope
from .oracle import oracle_grid_sample
from .robustness import (
    genericity_check,
    is_generic,
    robust_ch_generic,
    robust_downward_check,
    robust_level_k,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4

COMMANDS = (
    "rationalizability",
    "level-k",
    "ch",
    "delta-grid",
    "limits",
    "consistent-types",
    "ebrs",
    "robust-level-k",
    "robust-downward",
    "genericity",
    "robust-ch",
    "oracle-check",
)


class VerificationFailed(Exception):
    def __init__(self, doc: dict, message: str):
        super().__init__(message)
        self.doc = doc


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


class Inputs:
    """Resolved inputs: scenario file first, then command-line overrides."""

    def __init__(self, args):
        if not args.game:
            raise InvalidInput("--game is required")
        self.game: Game = gio.parse_game(_read(args.game))
        scen = gio.parse_scenario(_read(args.scenario), self.game) if args.scenario else None
        self.anchor: Anchor | None = scen.anchor if scen else None
        if args.anchor:
            self.anchor = gio.parse_anchor(_read(args.anchor), self.game)
        self.levels = scen.levels if scen else None
        if args.levels:
            self.levels = gio.parse_levels(args.levels)
        model_name = args.model or (scen.model.name if scen else "downward")
        self.model_name = model_name
        self.k_max = args.k_max or (scen.k_max if scen else 4)
        self.n_max = args.n_max or (scen.n_max if scen and not args.k_max else self.k_max)
        self.args = args

    def need_anchor(self) -> Anchor:
        if self.anchor is None:
            raise InvalidInput("this command needs an anchor (--scenario or --anchor)")
        return self.anchor

    def need_levels(self):
        if self.levels is None:
            raise InvalidInput("this command needs a level distribution (--levels or a scenario 'levels:' line)")
        return self.levels

    def model(self):
        return model_from_name(self.model_name, self.levels)


def cmd_rationalizability(inp: Inputs) -> dict:
    g = inp.game
    tr = rationalizability(g)
    last = max(len(tr.sets[0]), len(tr.sets[1]))
    rows = [[f"n={n}", gio.cell_text(g, tr.at(0, n), tr.at(1, n))] for n in range(last)]
    return {
        "kind": "rationalizability",
        "fixpoint": tr.fixpoint,
        "sets": {g.players[i]: [gio.labels_of(g, i, s) for s in tr.sets[i]] for i in (0, 1)},
        "dominators": [
            {"player": g.players[i], "action": g.actions[i][a], "mixture": gio.dist_json(g, i, w.weights)}
            for (i, a), w in sorted(tr.dominators.items())
        ],
        "table": {"title": "iterated strict dominance", "header": ["round", "sets"], "rows": rows},
    }


def _trace_doc(kind, g, trace, extra):
    k_max = len(trace.sets[0])
    rows = [[f"k={k}", gio.cell_text(g, trace.level(0, k), trace.level(1, k))] for k in range(1, k_max + 1)]
    doc = {"kind": kind, "anchor": gio.anchor_json(g, trace.anchor), **extra}
    doc["levels_by_player"] = {g.players[i]: [gio.labels_of(g, i, s) for s in trace.sets[i]] for i in (0, 1)}
    doc["witnesses"] = [
        {"player": g.players[i], "k": k, "action": g.actions[i][a], "conjecture": gio.dist_json(g, 1 - i, c.weights)}
        for (i, k, a), c in sorted(trace.witnesses.items())
    ]
    doc["table"] = {"title": kind, "header": ["level", "sets"], "rows": rows}
    return doc


def cmd_level_k(inp: Inputs) -> dict:
    tr = level_k(inp.game, inp.need_anchor(), inp.k_max)
    return _trace_doc("level-k", inp.game, tr, {})


def cmd_ch(inp: Inputs) -> dict:
    levels = inp.need_levels()
    tr = cognitive_hierarchy(inp.game, inp.need_anchor(), levels, inp.k_max)
    return _trace_doc("ch", inp.game, tr, {"levels": levels.describe()})


def _grid(inp: Inputs):
    return delta_grid(inp.game, inp.model(), inp.need_anchor(), inp.k_max, inp.n_max)


def cmd_delta_grid(inp: Inputs) -> dict:
    return gio.grid_document(_grid(inp))


def cmd_limits(inp: Inputs) -> dict:
    grid = _grid(inp)
    g = inp.game
    lim = limit_sets(grid)
    rows = [[f"k={k}", gio.cell_text(g, lim[0][k], lim[1][k])] for k in range(1, grid.k_max + 1)]
    return {
        "kind": "limits",
        "model": gio.model_json(grid.model),
        "anchor": gio.anchor_json(g, grid.anchor),
        "k_max": grid.k_max,
        "n_max": grid.n_max,
        "limits": {g.players[i]: {str(k): gio.labels_of(g, i, s) for k, s in lim[i].items()} for i in (0, 1)},
        "table": {"title": f"{grid.model.name} limits", "header": ["type", "limit"], "rows": rows},
    }


def cmd_consistent_types(inp: Inputs) -> dict:
    grid = _grid(inp)
    tr = rationalizability(inp.game)
    g = inp.game
    by_n = {n: consistent_types(grid, tr, n) for n in range(grid.n_max + 1)}

    def fmt(ks):
        return "{" + ", ".join(str(k) for k in sorted(ks)) + "}"

    rows = [[f"n={n}", fmt(by_n[n][0]), fmt(by_n[n][1])] for n in by_n]
    return {
        "kind": "consistent-types",
        "model": gio.model_json(grid.model),
        "anchor": gio.anchor_json(g, grid.anchor),
        "k_max": grid.k_max,
        "n_max": grid.n_max,
        "consistent": {g.players[i]: {str(n): sorted(by_n[n][i]) for n in by_n} for i in (0, 1)},
        "table": {"title": "consistent levels", "header": ["order", g.players[0], g.players[1]], "rows": rows},
    }


def cmd_ebrs(inp: Inputs) -> dict:
    g = inp.game
    out, rows = {}, []
    for i in (0, 1):
        found = ebrs_enumerate(g, i, max_actions=inp.args.max_actions)
        out[g.players[i]] = [
            {"set": gio.labels_of(g, i, s), "conjecture": gio.dist_json(g, 1 - i, c.weights)} for s, c in found
        ]
        rows += [[g.players[i], gio.set_text(g, i, s), _dist_text(g, 1 - i, c.weights)] for s, c in found]
    return {
        "kind": "ebrs",
        "ebrs": out,
        "table": {"title": "exact best-reply sets", "header": ["player", "set", "witness"], "rows": rows},
    }


def _dist_text(g, player, weights) -> str:
    return " + ".join(f"{format_rational(w)}*{a}" for a, w in zip(g.actions[player], weights) if w)


def cmd_robust_level_k(inp: Inputs) -> dict:
    g = inp.game
    res = robust_level_k(g, inp.k_max, max_actions=inp.args.max_actions)
    rows, fams = [], {}
    for i in (0, 1):
        fams[g.players[i]] = {}
        for t in range(1, inp.k_max + 1):
            members = res.members(i, t)
            fams[g.players[i]][str(t)] = {
                "members": [
                    {"set": gio.labels_of(g, i, s), "anchor": gio.anchor_json(g, res.anchor_for(i, t, s))}
                    for s in members
                ],
                "union": gio.labels_of(g, i, res.unions[i][t]),
            }
            rows.append(
                [g.players[i], str(t), "; ".join(gio.set_text(g, i, s) for s in members), gio.set_text(g, i, res.unions[i][t])]
            )
    return {
        "kind": "robust-level-k",
        "k_max": inp.k_max,
        "families": fams,
        "table": {"title": "level sets across anchors", "header": ["player", "level", "family", "union"], "rows": rows},
    }


def _report_doc(g, report, title) -> dict:
    details = {}
    rows = []
    for i, d in report.details.items():
        entry = {}
        for key, value in d.items():
            if isinstance(value, frozenset):
                entry[key] = gio.labels_of(g, i, value)
                rows.append([g.players[i], key, gio.set_text(g, i, value)])
            elif key == "missing_strict_witness":
                entry[key] = [g.actions[i][a] for a in value]
            elif key == "probe_hits":
                entry[key] = {g.actions[i][a]: v for a, v in value.items()}
        details[g.players[i]] = entry
    witnesses = []
    for w in report.witnesses:
        i = w["player"]
        item = {"player": g.players[i], "action": g.actions[i][w["action"]], "anchor": gio.anchor_json(g, w["anchor"])}
        for key in ("epsilon", "slack"):
            if w.get(key) is not None:
                item[key] = format_rational(w[key])
        for key in ("in_all_rows", "in_cell"):
            if key in w:
                item[key] = w[key]
        witnesses.append(item)
    return {
        "kind": report.claim,
        "status": report.status,
        "details": details,
        "witnesses": witnesses,
        "table": {"title": f"{title}: {report.status}", "header": ["player", "quantity", "set"], "rows": rows},
    }


def cmd_robust_downward(inp: Inputs) -> dict:
    report = robust_downward_check(inp.game, inp.k_max)
    doc = _report_doc(inp.game, report, "downward across anchors")
    if report.status != "verified":
        raise VerificationFailed(doc, "downward robustness check failed")
    return doc


def cmd_genericity(inp: Inputs) -> dict:
    g = inp.game
    check = genericity_check(g)
    rows, out = [], {}
    for i in (0, 1):
        out[g.players[i]] = {}
        for a, w in check[i].items():
            if w is None:
                out[g.players[i]][g.actions[i][a]] = None
                rows.append([g.players[i], g.actions[i][a], "none", "-"])
            else:
                slack = "-" if w.slack is None else format_rational(w.slack)
                out[g.players[i]][g.actions[i][a]] = {
                    "conjecture": gio.dist_json(g, 1 - i, w.conjecture.weights),
                    "slack": None if w.slack is None else slack,
                }
                rows.append([g.players[i], g.actions[i][a], _dist_text(g, 1 - i, w.conjecture.weights), slack])
    generic = is_generic(check)
    return {
        "kind": "genericity",
        "generic": generic,
        "witnesses": out,
        "table": {
            "title": "generic" if generic else "not generic",
            "header": ["player", "action", "strict witness", "margin"],
            "rows": rows,
        },
    }


def cmd_robust_ch(inp: Inputs) -> dict:
    probes = []
    if inp.anchor is not None and inp.levels is not None:
        probes.append((inp.anchor, inp.levels))
    report = robust_ch_generic(inp.game, inp.k_max, inp.n_max, probes)
    doc = _report_doc(inp.game, report, f"CH cell ({inp.k_max}, {inp.n_max}) across anchors")
    doc["k"], doc["n"] = inp.k_max, inp.n_max
    if report.status == "counterexample":
        raise VerificationFailed(doc, "CH robustness check failed")
    return doc


def cmd_oracle_check(inp: Inputs) -> dict:
    grid = _grid(inp)
    g = inp.game
    bound = inp.args.oracle_bound
    disagreements, checked = [], 0
    for n in range(grid.n_max):
        prev = tuple(tuple(grid.cell(i, k, n) for k in range(grid.k_max + 1)) for i in (0, 1))
        for i in (0, 1):
            for k in range(1, grid.k_max + 1):
                poly = build_restriction_polytope(g, grid.model, grid.anchor, TypeIndex(i, k), prev)
                for a in range(g.n_actions(i)):
                    kernel = justifiable_in_polytope(g, i, a, poly) is not None
                    oracle = oracle_grid_sample(g, i, a, poly, bound).found
                    checked += 1
                    if kernel != oracle:
                        disagreements.append(
                            {"player": g.players[i], "k": k, "n": n + 1, "action": g.actions[i][a],
                             "kernel": kernel, "oracle": oracle}
                        )
    verdict = "consistent" if not disagreements else "inconsistent"
    doc = {
        "kind": "oracle-check",
        "model": gio.model_json(grid.model),
        "anchor": gio.anchor_json(g, grid.anchor),
        "bound": bound,
        "checked": checked,
        "verdict": verdict,
        "disagreements": disagreements,
        "table": {
            "title": f"oracle at bound {bound}: {verdict}",
            "header": ["player", "k", "n", "action", "kernel", "oracle"],
            "rows": [[d["player"], d["k"], d["n"], d["action"], d["kernel"], d["oracle"]] for d in disagreements],
            "notes": [f"{checked} membership queries compared; {verdict}"],
        },
    }
    if disagreements:
        raise VerificationFailed(doc, "oracle disagrees with the kernel")
    return doc


HANDLERS = {
    "rationalizability": cmd_rationalizability,
    "level-k": cmd_level_k,
    "ch": cmd_ch,
    "delta-grid": cmd_delta_grid,
    "limits": cmd_limits,
    "consistent-types": cmd_consistent_types,
    "ebrs": cmd_ebrs,
    "robust-level-k": cmd_robust_level_k,
    "robust-downward": cmd_robust_downward,
    "genericity": cmd_genericity,
    "robust-ch": cmd_robust_ch,
    "oracle-check": cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltarat", description="Bounded-reasoning solution concepts for bimatrix games.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--game", metavar="FILE", help="game file")
    parser.add_argument("--scenario", metavar="FILE", help="scenario file (anchor, model, levels, k_max, n_max)")
    parser.add_argument("--model", choices=("downward", "levelk", "ch"))
    parser.add_argument("--anchor", metavar="FILE", help="anchor file; overrides the scenario's anchor")
    parser.add_argument("--levels", metavar="DIST", help="e.g. 'geometric 1/2', 'lexicographic:1/5', 'weights 1 1/2'")
    parser.add_argument("--k-max", type=int, dest="k_max")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--format", choices=("md", "csv", "json"), default="md")
    parser.add_argument("--oracle-bound", type=int, default=60, dest="oracle_bound")
    parser.add_argument("--max-actions", type=int, default=DEFAULT_MAX_ACTIONS, dest="max_actions")
    return parser


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        for flag in ("k_max", "n_max", "oracle_bound", "max_actions"):
            value = getattr(args, flag)
            if value is not None and value < 1:
                raise InvalidInput(f"--{flag.replace('_', '-')} must be positive")
        doc = HANDLERS[args.command](Inputs(args))
    except InvalidInput as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except CapacityError as exc:
        print(f"capacity: {exc}", file=err)
        return EXIT_CAPACITY
    except VerificationFailed as exc:
        out.write(gio.render(exc.doc, args.format))
        print(f"verification failed: {exc}", file=err)
        return EXIT_VERIFY
    except AssertionError as exc:
        print(f"verification failed: {exc}", file=err)
        return EXIT_VERIFY
    out.write(gio.render(doc, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
