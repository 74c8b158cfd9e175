"""Text and JSON formats for tiles, periodic sets and slide tilings.

Tile::

    dim 2
    0 0
    1 0        # comments run to the end of the line

PeriodicSet::

    lattice 2 0 0 2
    residues
    0 0

SlideTiling: a PeriodicSet block followed by lines

    substitute <h'x h'y> <yx yy> period <hx hy> word <bits> [remove <bits>]
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Sequence

from .lattice import Lattice, PeriodicSet, Tile, Vector, vec
from .slide import SlideTiling, Substitution


class FormatError(ValueError):
    pass


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _ints(line: str) -> Vector:
    try:
        return tuple(int(t) for t in line.split())
    except ValueError:
        raise FormatError(f"expected integers, got {line!r}") from None


def _vline(v) -> str:
    return " ".join(str(c) for c in v)


# ---------------------------------------------------------------------------
# tiles


def format_tile(F: Tile) -> str:
    return "\n".join([f"dim {F.dim}"] + [_vline(e) for e in F]) + "\n"


def parse_tile(text: str) -> Tile:
    if text.lstrip().startswith("{"):
        return tile_from_json(json.loads(text))
    lines = _lines(text)
    if not lines or not lines[0].startswith("dim"):
        raise FormatError("tile file must start with 'dim <d>'")
    d = _ints(lines[0][3:])
    if len(d) != 1 or d[0] not in (1, 2):
        raise FormatError("dimension must be 1 or 2")
    pts = [_ints(l) for l in lines[1:]]
    if any(len(p) != d[0] for p in pts):
        raise FormatError(f"every vector needs {d[0]} coordinates")
    return Tile(tuple(pts))


def tile_to_json(F: Tile) -> dict:
    return {"dim": F.dim, "elements": F.as_lists()}


def tile_from_json(obj: dict) -> Tile:
    try:
        pts = [vec(p) for p in obj["elements"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad tile JSON: {exc}") from None
    if "dim" in obj and any(len(p) != obj["dim"] for p in pts):
        raise FormatError("element dimension disagrees with 'dim'")
    return Tile(tuple(pts))


# ---------------------------------------------------------------------------
# periodic sets


def format_pset(A: PeriodicSet) -> str:
    flat = [c for row in A.lattice.basis for c in row]
    lines = [f"lattice {_vline(flat)}", "residues"]
    lines += [_vline(r) for r in A.sorted_residues()]
    return "\n".join(lines) + "\n"


def _lattice_from_flat(flat: Sequence[int]) -> Lattice:
    d = math.isqrt(len(flat))
    if d * d != len(flat) or d not in (1, 2):
        raise FormatError("lattice needs 1 or 4 integers")
    return Lattice.from_basis([flat[i * d:(i + 1) * d] for i in range(d)])


def _parse_pset_lines(lines: list[str]) -> tuple[PeriodicSet, list[str]]:
    if not lines or not lines[0].startswith("lattice"):
        raise FormatError("periodic set must start with 'lattice ...'")
    L = _lattice_from_flat(_ints(lines[0][7:]))
    if len(lines) < 2 or lines[1] != "residues":
        raise FormatError("expected 'residues' after the lattice line")
    res, i = [], 2
    while i < len(lines) and not lines[i].startswith("substitute"):
        r = _ints(lines[i])
        if len(r) != L.dim:
            raise FormatError(f"residue {r} has the wrong dimension")
        res.append(r)
        i += 1
    return PeriodicSet.from_points(L, res), lines[i:]


def parse_pset(text: str) -> PeriodicSet:
    if text.lstrip().startswith("{"):
        return pset_from_json(json.loads(text))
    A, rest = _parse_pset_lines(_lines(text))
    if rest:
        raise FormatError("unexpected substitution lines in a periodic set")
    return A


def pset_to_json(A: PeriodicSet) -> dict:
    return {"dim": A.dim, "lattice": A.lattice.as_lists(),
            "residues": [list(r) for r in A.sorted_residues()]}


def pset_from_json(obj: dict) -> PeriodicSet:
    try:
        lat = obj["lattice"]
        flat = [c for row in lat for c in row] if lat and isinstance(lat[0], list) else list(lat)
        return PeriodicSet.from_points(_lattice_from_flat(flat), [vec(r) for r in obj["residues"]])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad periodic set JSON: {exc}") from None


# ---------------------------------------------------------------------------
# slide tilings


def _bits(s: str) -> tuple[int, ...]:
    if any(c not in "01" for c in s):
        raise FormatError(f"bad bit word {s!r}")
    return tuple(int(c) for c in s)


def format_slide(A: SlideTiling) -> str:
    out = format_pset(A.scaffold)
    for s in A.substitutions:
        line = (f"substitute {_vline(s.direction)} {_vline(s.base)} "
                f"period {_vline(s.period)} word {''.join(map(str, s.word))}")
        if s.remove is not None:
            line += f" remove {''.join(map(str, s.remove))}"
        out += line + "\n"
    return out


def _parse_substitution(line: str) -> Substitution:
    t = line.split()
    try:
        if t[0] != "substitute" or t[5] != "period" or t[8] != "word":
            raise IndexError
        hp = (int(t[1]), int(t[2]))
        y = (int(t[3]), int(t[4]))
        h = (int(t[6]), int(t[7]))
        word = _bits(t[9])
        remove = None
        if len(t) > 10:
            if t[10] != "remove" or len(t) != 12:
                raise IndexError
            remove = _bits(t[11])
    except (IndexError, ValueError):
        raise FormatError(f"bad substitution line {line!r}") from None
    return Substitution(hp, y, h, word, remove)


def parse_slide(text: str) -> SlideTiling:
    scaffold, rest = _parse_pset_lines(_lines(text))
    return SlideTiling(scaffold, tuple(_parse_substitution(l) for l in rest))


def parse_set_like(text: str):
    """A PeriodicSet, or a SlideTiling when substitution lines are present."""
    if text.lstrip().startswith("{"):
        return pset_from_json(json.loads(text))
    A = parse_slide(text)
    return A if A.substitutions else A.scaffold


# ---------------------------------------------------------------------------
# weak parts


def parts_to_json(parts) -> dict:
    return {"parts": [{"direction": list(h), "set": pset_to_json(A)} for A, h in parts]}


def parts_from_json(obj: dict) -> list[tuple[PeriodicSet, Vector]]:
    try:
        return [(pset_from_json(p["set"]), vec(p["direction"])) for p in obj["parts"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad parts JSON: {exc}") from None


def read_text(path) -> str:
    return Path(path).read_text()


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
