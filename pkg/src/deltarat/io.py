"""Text formats for games and scenarios, and result documents.

Game file::

    players: P1 P2
    actions P1: U M D
    actions P2: l c r
    payoffs P1:
      3 2 1
      2 3 2
      1 1 3
    payoffs P2:
      2 2 1
      1 1 2
      0 0 0

Each matrix is indexed ``[own action][opponent action]``, so the P2 block
above has rows ``l c r`` and columns ``U M D``. ``#`` starts a comment.

Scenario file::

    model: downward          # downward | levelk | ch
    anchor P1: D=1           # label=weight pairs, unlisted actions get 0
    anchor P2: 0 0 1         # or a full weight vector in action order
    levels: geometric 1/2    # geometric q | lexicographic eps | weights w0 w1 ...
    k_max: 4
    n_max: 4
"""

from __future__ import annotations

import csv
import io as _io
import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Anchor,
    Game,
    InvalidInput,
    LevelDistribution,
    RestrictionModel,
    SolutionGrid,
    format_rational,
    model_from_name,
    parse_rational,
)


class ParseError(InvalidInput):
    kind = "syntax"

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ShapeError(ParseError):
    kind = "shape"


class RationalError(ParseError):
    kind = "rational"


class DuplicateLabelError(ParseError):
    kind = "duplicate"


def _tokens(line: str, start: int = 0):
    """``(column, token)`` pairs (1-based columns) of whitespace-separated words."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line) if m.start() >= start]


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _rational_at(tok: str, line: int, col: int) -> Fraction:
    try:
        return parse_rational(tok)
    except InvalidInput:
        raise RationalError(f"not a rational literal: {tok!r}", line, col) from None


# -- games --------------------------------------------------------------------


def parse_game(text: str) -> Game:
    players = None
    actions: dict[str, tuple[list[str], int]] = {}
    matrices: dict[str, tuple[list, int]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        head = re.match(r"\s*(players|actions|payoffs)\b\s*([^:\s]*)\s*:", line)
        if head:
            key, who = head.group(1), head.group(2)
            rest = _tokens(line, head.end())
            current = None
            if key == "players":
                if who:
                    raise ParseError("'players:' takes no qualifier", lineno, head.start(2) + 1)
                if players is not None:
                    raise ParseError("players declared twice", lineno)
                if len(rest) != 2:
                    raise ShapeError(f"expected 2 player names, got {len(rest)}", lineno)
                if rest[0][1] == rest[1][1]:
                    raise DuplicateLabelError(f"duplicate player name {rest[1][1]!r}", lineno, rest[1][0])
                players = (rest[0][1], rest[1][1])
            elif not who:
                raise ParseError(f"'{key}' needs a player name", lineno, head.end())
            elif key == "actions":
                if who in actions:
                    raise ParseError(f"actions of {who} declared twice", lineno)
                labels = []
                for col, tok in rest:
                    if tok in labels:
                        raise DuplicateLabelError(f"duplicate action label {tok!r}", lineno, col)
                    labels.append(tok)
                if not labels:
                    raise ShapeError(f"player {who} has no actions", lineno)
                actions[who] = (labels, lineno)
            else:
                if who in matrices:
                    raise ParseError(f"payoffs of {who} declared twice", lineno)
                matrices[who] = ([], lineno)
                current = who
                if rest:
                    raise ParseError("matrix rows start on the next line", lineno, rest[0][0])
            continue
        if current is None:
            raise ParseError(f"unexpected content: {line.strip()!r}", lineno, len(line) - len(line.lstrip()) + 1)
        matrices[current][0].append([(lineno, col, _rational_at(tok, lineno, col)) for col, tok in _tokens(line)])

    end = len(text.splitlines()) or 1
    if players is None:
        raise ParseError("missing 'players:' line", end)
    for who in players:
        if who not in actions:
            raise ParseError(f"missing 'actions {who}:' line", end)
        if who not in matrices:
            raise ParseError(f"missing 'payoffs {who}:' block", end)
    for who in list(actions) + list(matrices):
        if who not in players:
            src = actions.get(who, matrices.get(who))[1]
            raise ParseError(f"unknown player {who!r}", src)
    rows_out = []
    for i, who in enumerate(players):
        own = len(actions[who][0])
        opp = len(actions[players[1 - i]][0])
        rows, decl = matrices[who]
        if len(rows) != own:
            raise ShapeError(f"payoffs of {who} need {own} rows, found {len(rows)}", rows[-1][0][0] if rows else decl)
        for row in rows:
            if len(row) != opp:
                raise ShapeError(f"payoff row of {who} needs {opp} entries, found {len(row)}", row[0][0], row[0][1])
        rows_out.append(tuple(tuple(v for _, _, v in row) for row in rows))
    return Game(players, (tuple(actions[players[0]][0]), tuple(actions[players[1]][0])), tuple(rows_out))


def serialize_game(game: Game) -> str:
    out = [f"players: {game.players[0]} {game.players[1]}"]
    for i in (0, 1):
        out.append(f"actions {game.players[i]}: {' '.join(game.actions[i])}")
    for i in (0, 1):
        out.append(f"payoffs {game.players[i]}:")
        rows = [[format_rational(v) for v in row] for row in game.payoffs[i]]
        width = max(len(x) for row in rows for x in row)
        for row in rows:
            out.append("  " + " ".join(x.rjust(width) for x in row))
    return "\n".join(out) + "\n"


def normalize_game_text(text: str) -> str:
    return serialize_game(parse_game(text))


# -- scenarios ---------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    anchor: Anchor
    levels: LevelDistribution | None
    model: RestrictionModel
    k_max: int
    n_max: int


def parse_levels(spec: str, line: int = 1) -> LevelDistribution:
    toks = spec.replace(":", " ").replace(",", " ").split()
    if not toks:
        raise ParseError("empty level distribution", line)
    kind, args = toks[0].lower(), toks[1:]
    values = [_rational_at(a, line, 1) for a in args]
    try:
        if kind in ("geometric", "lexicographic"):
            if len(values) != 1:
                raise ParseError(f"{kind} takes exactly one parameter", line)
            return getattr(LevelDistribution, kind)(values[0])
        if kind == "weights":
            return LevelDistribution.weights(values)
    except ParseError:
        raise
    except InvalidInput as exc:
        raise ParseError(str(exc), line) from None
    raise ParseError(f"unknown level distribution {kind!r}", line)


def parse_anchor_line(game: Game, player: int, tokens, line: int) -> tuple[Fraction, ...]:
    n = game.n_actions(player)
    if tokens and all("=" in t for _, t in tokens):
        vec = [Fraction(0)] * n
        for col, tok in tokens:
            label, _, value = tok.partition("=")
            if label not in game.actions[player]:
                raise ParseError(f"{label!r} is not an action of {game.players[player]}", line, col)
            vec[game.index(player, label)] = _rational_at(value, line, col + len(label) + 1)
    else:
        if len(tokens) != n:
            raise ShapeError(f"anchor of {game.players[player]} needs {n} weights, found {len(tokens)}", line)
        vec = [_rational_at(t, line, c) for c, t in tokens]
    if any(w < 0 for w in vec):
        raise ParseError("anchor weights must be non-negative", line)
    total = sum(vec, Fraction(0))
    if total != 1:
        raise ParseError(f"anchor of {game.players[player]} sums to {format_rational(total)}, not 1", line)
    return tuple(vec)


def parse_anchor(text: str, game: Game) -> Anchor:
    """Anchor-only file: two ``anchor <player>: ...`` lines."""
    dists = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = re.match(r"\s*anchor\s+(\S+?)\s*:", line)
        if not m:
            raise ParseError("expected 'anchor <player>: ...'", lineno)
        i = _player_index(game, m.group(1), lineno)
        dists[i] = parse_anchor_line(game, i, _tokens(line, m.end()), lineno)
    if set(dists) != {0, 1}:
        raise ParseError("an anchor needs one line per player", len(text.splitlines()) or 1)
    return Anchor((dists[0], dists[1]))


def _player_index(game: Game, name: str, line: int) -> int:
    if name not in game.players:
        raise ParseError(f"unknown player {name!r}", line)
    return game.players.index(name)


def parse_scenario(text: str, game: Game) -> Scenario:
    """Parse a scenario; action labels are resolved against ``game``."""
    fields: dict[str, tuple[str, int]] = {}
    dists = {}
    levels = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = re.match(r"\s*anchor\s+(\S+?)\s*:", line)
        if m:
            i = _player_index(game, m.group(1), lineno)
            if i in dists:
                raise ParseError(f"anchor of {m.group(1)} given twice", lineno)
            dists[i] = parse_anchor_line(game, i, _tokens(line, m.end()), lineno)
            continue
        m = re.match(r"\s*(model|levels|k_max|n_max)\s*:(.*)$", line)
        if not m:
            raise ParseError(f"unexpected content: {line.strip()!r}", lineno)
        key, value = m.group(1), m.group(2).strip()
        if key in fields:
            raise ParseError(f"{key} given twice", lineno)
        fields[key] = (value, lineno)
        if key == "levels":
            levels = parse_levels(value, lineno)
    end = len(text.splitlines()) or 1
    if set(dists) != {0, 1}:
        raise ParseError("scenario needs an anchor line for each player", end)
    model_name, model_line = fields.get("model", ("downward", end))
    try:
        model = model_from_name(model_name, levels)
    except InvalidInput as exc:
        raise ParseError(str(exc), model_line) from None
    ints = {}
    for key in ("k_max", "n_max"):
        if key in fields:
            value, ln = fields[key]
            if not re.fullmatch(r"\d+", value) or int(value) < 1:
                raise ParseError(f"{key} must be a positive integer", ln)
            ints[key] = int(value)
    k_max = ints.get("k_max", 4)
    n_max = ints.get("n_max", k_max)
    return Scenario(Anchor((dists[0], dists[1])), levels, model, k_max, n_max)


def serialize_scenario(scenario: Scenario, game: Game) -> str:
    out = [f"model: {scenario.model.name}"]
    for i in (0, 1):
        pairs = [f"{a}={format_rational(w)}" for a, w in zip(game.actions[i], scenario.anchor.dists[i]) if w]
        out.append(f"anchor {game.players[i]}: {' '.join(pairs)}")
    if scenario.levels is not None:
        d = scenario.levels.describe()
        if d["kind"] == "weights":
            out.append("levels: weights " + " ".join(d["weights"]))
        else:
            out.append(f"levels: {d['kind']} {d.get('param', d.get('epsilon'))}")
    out.append(f"k_max: {scenario.k_max}")
    out.append(f"n_max: {scenario.n_max}")
    return "\n".join(out) + "\n"


# -- result documents ----------------------------------------------------------


def set_text(game: Game, player: int, members) -> str:
    return "{" + ", ".join(game.labels(player, members)) + "}"


def cell_text(game: Game, left, right) -> str:
    return f"{set_text(game, 0, left)} , {set_text(game, 1, right)}"


def labels_of(game: Game, player: int, members) -> list[str]:
    return game.labels(player, members)


def dist_json(game: Game, player: int, weights) -> dict:
    return {a: format_rational(w) for a, w in zip(game.actions[player], weights) if w}


def anchor_json(game: Game, anchor: Anchor) -> dict:
    return {game.players[i]: dist_json(game, i, anchor.dists[i]) for i in (0, 1)}


def model_json(model: RestrictionModel) -> dict:
    out = {"name": model.name}
    if model.name == "ch":
        out["levels"] = model.levels.describe()
    return out


def lifted_json(game: Game, player: int, witness) -> list:
    opp = 1 - player
    return [
        {"type": t, "action": game.actions[opp][a], "weight": format_rational(w)} for (t, a), w in witness.weights
    ]


def grid_document(grid: SolutionGrid) -> dict:
    g = grid.game
    cells = {
        g.players[i]: [[labels_of(g, i, grid.cell(i, k, n)) for n in range(grid.n_max + 1)] for k in range(grid.k_max + 1)]
        for i in (0, 1)
    }
    witnesses = [
        {
            "player": g.players[i],
            "k": k,
            "n": n,
            "action": g.actions[i][a],
            "conjecture": lifted_json(g, i, w),
        }
        for (i, k, n, a), w in sorted(grid.witnesses.items())
    ]
    header = ["k \\ n"] + [f"n={n}" for n in range(1, grid.n_max + 1)]
    rows = [
        [f"k={k}"] + [cell_text(g, grid.cell(0, k, n), grid.cell(1, k, n)) for n in range(1, grid.n_max + 1)]
        for k in range(1, grid.k_max + 1)
    ]
    return {
        "kind": "delta-grid",
        "model": model_json(grid.model),
        "anchor": anchor_json(g, grid.anchor),
        "k_max": grid.k_max,
        "n_max": grid.n_max,
        "cells": cells,
        "witnesses": witnesses,
        "table": {"title": f"{grid.model.name} grid", "header": header, "rows": rows},
    }


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    table = doc.get("table")
    if table is None:
        raise InvalidInput(f"{doc.get('kind')} has no tabular form")
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table["header"])
        writer.writerows(table["rows"])
        return buf.getvalue()
    if fmt == "md":
        lines = []
        if table.get("title"):
            lines += [f"### {table['title']}", ""]
        lines.append("| " + " | ".join(table["header"]) + " |")
        lines.append("|" + "|".join("---" for _ in table["header"]) + "|")
        for row in table["rows"]:
            lines.append("| " + " | ".join(str(x) for x in row) + " |")
        for note in table.get("notes", []):
            lines += ["", note]
        return "\n".join(lines) + "\n"
    raise InvalidInput(f"unknown format {fmt!r}")
