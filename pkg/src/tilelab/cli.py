"""Command line interface.

Every subcommand prints a JSON report on stdout (or writes it to
``--out``).  Exit codes: 0 for a verified or positive outcome, 1 for a
negative one (no tiling, a failed check, a rejected input set), 2 for
usage and file format errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .counterexample import (
    CounterexampleTiling,
    QuadraticIrrational,
    nonperiodicity_evidence,
    tile_F8,
    verify_chi_cancellations,
    verify_level4,
)
from .dilation import (
    dilation_modulus,
    structure_decomposition,
    verify_dilation_lemma,
    verify_level_one_constraint,
)
from .errors import TilelabError
from .improve import (
    improve_one_periodic_report,
    improve_weak_tiling,
    slice_params,
    verify_slice_lemma,
)
from .lattice import PeriodicSet, Tile, is_tiling_of_level, convolve_level
from .onedim import verify_universal_period, enumerate_1d
from .oneper import decide_non_one_periodic
from .render import render_ascii, render_ppm
from .search2d import (
    build_torus_instance,
    decide_tiles_2d,
    lattice_schedule,
    period_bound_2d,
    search_tilings_on_torus,
)
from .slide import SlideTiling, membership_grid
from .tileio import (
    FormatError,
    format_pset,
    format_slide,
    parse_pset,
    parse_set_like,
    parse_tile,
    parts_from_json,
    parts_to_json,
    pset_to_json,
    read_text,
    write_text,
)
from .weak import pxj_base_points, ray_polynomials, verify_ray_polynomial_properties, weak_decompose


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _vector(text: str, d: int = 2):
    try:
        v = tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None
    if len(v) != d:
        raise UsageError(f"expected {d} integers, got {text!r}")
    return v


def _window(text: str):
    return _vector(text, 4)


def _load(kind, path):
    if path is None:
        return None
    try:
        text = read_text(path)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        if kind == "tile":
            return parse_tile(text)
        if kind == "pset":
            return parse_pset(text)
        if kind == "set":
            return parse_set_like(text)
        if kind == "json":
            return json.loads(text)
    except (FormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    raise AssertionError(kind)


def _target(args, d):
    E = _load("pset", getattr(args, "target", None))
    return E if E is not None else PeriodicSet.whole(d)


def _default_window(A, F, size=16):
    return (0, 0, size, size)


def _figure_tiling(args, A, F, window, title):
    if args.figure:
        from .plotting import tiling_figure
        tiling_figure(A, F, window, args.figure, title)


# ---------------------------------------------------------------------------
# subcommands; each returns (report, exit code)


def cmd_verify(args):
    F = _load("tile", args.tile)
    A = _load("pset", args.set)
    E = _target(args, F.dim)
    ok = is_tiling_of_level(F, A, E, args.level)
    conv = convolve_level(F, A)
    rep = {"tiles": ok, "level": args.level, "cover": conv.minimal.as_dict()}
    if F.dim == 2:
        _figure_tiling(args, A, F, _default_window(A, F), f"level {args.level}: {ok}")
    return rep, 0 if ok else 1


def cmd_dilate(args):
    F = _load("tile", args.tile)
    A = _load("pset", args.set)
    q = dilation_modulus(args.ell, F).q
    rs = [int(r) for r in args.r] if args.r else [1 + q * i for i in range(1, args.multiples + 1)]
    rep_ = verify_dilation_lemma(F, A, args.ell, rs)
    rep = {"q": q, "checked_equal": rep_.checked_equal, "checked_periodic": rep_.checked_periodic,
           "skipped": rep_.skipped, "violations": rep_.violations, "ok": rep_.ok}
    if args.figure:
        from .plotting import bar_figure
        status = [1 if r not in rep_.violations else 0 for r in rs]
        bar_figure(rs, status, args.figure, f"dilation checks (q={q})", "passed")
    return rep, 0 if rep_.ok else 1


def cmd_structure(args):
    F = _load("tile", args.tile)
    A = _load("pset", args.set)
    E = _target(args, F.dim)
    dec = structure_decomposition(F, A, E, args.level, args.ell)
    lhs, rhs = dec.h_product_margin()
    rep = {
        "q": dec.q, "m": dec.m,
        "classes": [{"h": c.h, "members": c.members, "lattice": c.phi.lattice.as_lists(),
                     "phi": c.phi.as_dict()} for c in dec.classes],
        "identities": "verified",
        "level_one_constraint": verify_level_one_constraint(dec),
        "h_product": {"value": lhs, "bound": rhs, "ok": lhs <= rhs},
    }
    if args.figure and F.dim == 2:
        from .plotting import function_figure
        function_figure([(f"phi h={c.h}", c.phi) for c in dec.classes], (0, 0, 12, 12), args.figure)
    return rep, 0


def cmd_period1d(args):
    F = _load("tile", args.tile)
    E = _target(args, 1)
    rep_ = verify_universal_period(F, args.ell, args.level, args.cap, E)
    res = enumerate_1d(F, E, args.level, args.cap)
    rep = {
        "paper_period": rep_.paper.period, "q": rep_.paper.q, "n": rep_.paper.n,
        "tijdeman_period": rep_.tijdeman.period if rep_.tijdeman else None,
        "complete": rep_.complete, "failures": rep_.failures,
        "tilings": [{"period": A.lattice.index, "residues": [r[0] for r in A.sorted_residues()]}
                    for A in res.tilings],
    }
    if args.tijdeman and rep_.tijdeman is None:
        raise UsageError("--tijdeman needs level one and E = Z")
    if args.figure:
        from .plotting import bar_figure
        bar_figure([str(A.sorted_residues()) for A in res.tilings],
                   [A.lattice.index for A in res.tilings], args.figure,
                   "minimal periods", "period")
    return rep, 0 if rep_.ok and res.tilings else 1


def cmd_decide2d(args):
    F = _load("tile", args.tile)
    E = _target(args, 2)
    rep = {}
    max_index = args.max_index
    if args.heuristic_bound:
        b = period_bound_2d(F)
        rep["heuristic_bound"] = {"value": str(b.heuristic_value), "exponents": b.exponent_terms,
                                  "sound": b.sound}
        # the bound is far beyond any search; the square schedule stops at the index cap
        sched = [L for L in lattice_schedule(E, max_index, "square")]
    else:
        sched = lattice_schedule(E, max_index)
    dec = decide_tiles_2d(F, E, args.level, sched, threads=args.threads)
    rep.update({"verdict": dec.verdict, "searched": dec.searched, "schedule": len(dec.schedule)})
    if dec.witness is not None:
        rep["witness"] = format_pset(dec.witness)
        if args.enumerate:
            inst = build_torus_instance(F, E, dec.witness.lattice, args.level)
            rep["tilings"] = [format_pset(A) for A in
                              search_tilings_on_torus(inst, threads=args.threads)]
        _render_opt(args, dec.witness, F, rep)
        _figure_tiling(args, dec.witness, F, _default_window(dec.witness, F), dec.verdict)
    return rep, 0 if dec.tiles else 1


def _render_opt(args, A, F, rep, window=None):
    if not getattr(args, "render", None):
        return
    fmt, *path = args.render
    if fmt not in ("ascii", "ppm") or len(path) > 1:
        raise UsageError("--render takes 'ascii' or 'ppm' and an optional output path")
    window = window or (0, 0, 16, 16)
    if fmt == "ascii":
        text = render_ascii(A, F, *window)
        if path:
            write_text(path[0], text)
        else:
            rep["render"] = text.splitlines()
    else:
        if not path:
            raise UsageError("--render ppm needs an output path")
        Path(path[0]).write_bytes(render_ppm(A, F, *window))
        rep["render"] = path[0]


def cmd_weakdecomp(args):
    F = _load("tile", args.tile)
    A = _load("pset", args.set)
    E = _target(args, 2)
    w = weak_decompose(F, A, E, args.ell)
    dec = w.decomposition
    rep = {
        "m": dec.m, "q": dec.q, "directions": dec.directions, "L": w.L,
        "big_lattice": w.big_lattice.as_lists(), "check": w.check(),
        "pieces": [{"representative": p.representative, "j": p.j, "direction": p.direction,
                    "period": p.period, "residues": p.piece.sorted_residues()}
                   for p in w.pieces],
    }
    if w.constants is not None:
        c = w.constants
        rep["constants"] = {"e_tilde": c.e_tilde, "N": c.N, "M": c.M, "e": c.e, "Q": c.Q,
                            "Q_config": c.Q_config, "margins": c.margins}
    if args.verify_pxj and w.constants is not None:
        bad = []
        for x in pxj_base_points(dec):
            r = verify_ray_polynomial_properties(ray_polynomials(dec, w.constants, x), dec.m)
            if not r.ok:
                bad.append(x)
        rep["pxj"] = {"base_points": len(pxj_base_points(dec)), "failures": bad}
    if args.emit_parts:
        write_text(args.emit_parts, json.dumps(parts_to_json(w.parts()), indent=1))
    if args.figure:
        from .plotting import label_figure
        win = (0, 0, 16, 16)
        lab = -np.ones((16, 16), dtype=int)
        for j, (P, _) in enumerate(w.parts()):
            g = membership_grid(P, *win)
            lab[g == 1] = j
        label_figure(lab, win, args.figure, "pieces by direction")
    ok = w.check() and not rep.get("pxj", {}).get("failures")
    return rep, 0 if ok else 1


def cmd_slice(args):
    F = _load("tile", args.tile)
    A = _load("pset", args.set)
    h = _vector(args.direction)
    p = slice_params(F, h, args.ell)
    r = verify_slice_lemma(F, A, h, args.ell, args.level)
    s2, bound = p.s_bound_margin(F)
    rep = {"h_primitive": p.h_primitive, "k": p.k_mult, "s": p.s, "q": p.q,
           "period": r.period, "slices": r.slices, "ok": r.ok,
           "s_margin": {"value": s2, "bound": bound, "ok": s2 <= bound}}
    return rep, 0 if r.ok else 1


def cmd_improve(args):
    F = _load("tile", args.tile)
    E = _target(args, 2)
    if args.weak:
        parts = parts_from_json(_load("json", args.weak))
        w = improve_weak_tiling(F, E, parts, args.ell)
        out = w.result
        rep = {"N": w.N, "M": w.M, "margins": w.margins}
    else:
        if not args.input or not args.direction:
            raise UsageError("improve needs --input and --direction (or --weak)")
        A = _load("set", args.input)
        r = improve_one_periodic_report(F, A, _vector(args.direction), args.ell, args.level)
        out = r.result
        rep = {"direction": r.direction, "word_period": r.word_period,
               "slice_period": r.slice_period, "qks": r.qks, "classes": r.classes,
               "within_bound": r.within_bound}
    out = out.minimal
    rep["result"] = format_pset(out)
    rep["periods"] = out.lattice.as_lists()
    if args.weak:
        rep["tiles"] = is_tiling_of_level(F, out, E, 1)
    else:
        # the improved set must cover exactly like the input
        base = A.scaffold if isinstance(A, SlideTiling) else A
        rep["tiles"] = convolve_level(F, out) == convolve_level(F, base)
    if args.emit:
        write_text(args.emit, format_pset(out))
    _figure_tiling(args, out, F, (0, 0, 16, 16), "improved tiling")
    return rep, 0 if rep["tiles"] else 1


def cmd_counterexample(args):
    alpha = QuadraticIrrational(args.d)
    lv = verify_level4(alpha, args.radius)
    chi = verify_chi_cancellations()
    rep = {"alpha": f"sqrt({args.d})", "radius": args.radius,
           "level": sorted(lv.values), "chi_cancellations": chi}
    ok = lv.ok and all(chi.values())
    if ok:
        rep["status"] = "level=4 verified"
    if args.evidence:
        ev = nonperiodicity_evidence(CounterexampleTiling(alpha), args.radius, args.hnorm,
                                     min(args.radius, 32))
        rep["evidence"] = {"violations": ev.violations, "pairs_checked": ev.pairs_checked,
                           "unrefuted_pairs": ev.unrefuted_pairs, "ok": ev.ok}
        ok = ok and ev.ok
    R = min(args.radius, 64)
    win = (-R, -R, 2 * R, 2 * R)
    _render_opt(args, CounterexampleTiling(alpha), tile_F8(), rep, win)
    _figure_tiling(args, CounterexampleTiling(alpha), tile_F8(), win, "level-4 tiling")
    return rep, 0 if ok else 1


def cmd_oneper(args):
    F = _load("tile", args.tile)
    E = _target(args, 2)
    d = decide_non_one_periodic(F, E, None, args.hcap, args.max_index, args.threads)
    rep = {"verdict": d.verdict, "scaffolds": d.scaffolds, "lattices": d.lattices,
           "chameleon_directions": d.chameleon_directions}
    if d.witness is not None:
        w = d.witness
        rep["witness"] = format_slide(w.tiling)
        rep["crossing"] = w.crossing
        rep["window"] = w.window
        rep["certificate"] = w.certificate
        rep["chameleons"] = [{"direction": c.direction, "line": c.line, "original": c.original,
                              "alternative": c.alternative} for c in w.chameleons]
        if args.emit_witness:
            write_text(args.emit_witness, format_slide(w.tiling))
        c = w.crossing or (0, 0)
        _figure_tiling(args, w.tiling, F, (c[0] - 12, c[1] - 12, 24, 24), "slide witness")
    return rep, 0 if d.exists else 1


def cmd_render(args):
    F = _load("tile", args.tile)
    A = CounterexampleTiling() if args.input == "counterexample" else _load("set", args.input)
    window = _window(args.window)
    rep = {"window": window}
    if args.format == "ascii":
        text = render_ascii(A, F, *window)
        if args.image:
            write_text(args.image, text)
            rep["image"] = args.image
        else:
            rep["render"] = text.splitlines()
    else:
        if not args.image:
            raise UsageError("ppm output needs --image PATH")
        Path(args.image).write_bytes(render_ppm(A, F, *window, scale=args.scale))
        rep["image"] = args.image
    _figure_tiling(args, A, F, window, None)
    return rep, 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes for searches")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--json", action="store_true", help="compact one-line JSON")
    common.add_argument("--figure", help="also save a PNG figure to this path")

    p = argparse.ArgumentParser(prog="tilelab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(fn=fn)
        return s

    s = add("verify", cmd_verify, "check 1_F * 1_A = k 1_E")
    s.add_argument("--tile", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--target")
    s.add_argument("--level", type=int, default=1)

    s = add("dilate", cmd_dilate, "check the dilation lemma")
    s.add_argument("--tile", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--r", nargs="+", help="dilation factors (default 1 + q i, i = 1..5)")
    s.add_argument("--multiples", type=int, default=5)

    s = add("structure", cmd_structure, "exact phi decomposition")
    s.add_argument("--tile", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--target")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--ell", type=int, default=1)

    s = add("period1d", cmd_period1d, "universal period of 1D tilings")
    s.add_argument("--tile", required=True)
    s.add_argument("--target")
    s.add_argument("--tijdeman", action="store_true")
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--cap", type=int, default=10**6)

    s = add("decide2d", cmd_decide2d, "search periodic tilings of Z^2")
    s.add_argument("--tile", required=True)
    s.add_argument("--target")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--max-index", type=int, default=36)
    s.add_argument("--heuristic-bound", action="store_true")
    s.add_argument("--enumerate", action="store_true")
    s.add_argument("--render", nargs="+", metavar="FORMAT [PATH]")

    s = add("weakdecomp", cmd_weakdecomp, "one-periodic pieces of a level-one tiling")
    s.add_argument("--tile", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--target")
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--verify-pxj", action="store_true")
    s.add_argument("--emit-parts")

    s = add("slice", cmd_slice, "check the slicing lemma")
    s.add_argument("--tile", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--direction", required=True)
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--level", type=int, default=1)

    s = add("improve", cmd_improve, "make a one-periodic or weak tiling doubly periodic")
    s.add_argument("--tile", required=True)
    s.add_argument("--input")
    s.add_argument("--direction")
    s.add_argument("--target")
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--level", type=int, default=1,
                   help="k, with the input periodic along ell k h")
    s.add_argument("--weak", help="parts JSON from weakdecomp --emit-parts")
    s.add_argument("--emit", help="write the result in the periodic set format")

    s = add("counterexample", cmd_counterexample, "the level-4 tiling with no weak period")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--radius", type=int, default=64)
    s.add_argument("--evidence", action="store_true")
    s.add_argument("--hnorm", type=int, default=4)
    s.add_argument("--render", nargs="+", metavar="FORMAT [PATH]")

    s = add("oneper", cmd_oneper, "decide whether non-one-periodic tilings exist")
    s.add_argument("--tile", required=True)
    s.add_argument("--target")
    s.add_argument("--max-index", type=int, default=16)
    s.add_argument("--hcap", type=int, default=32, help="bound on ||h||^2")
    s.add_argument("--emit-witness")

    s = add("render", cmd_render, "draw a tiling")
    s.add_argument("--tile", required=True)
    s.add_argument("--input", required=True, help="a .pset/.slide file or 'counterexample'")
    s.add_argument("--window", default="0 0 16 16", help='"x0 y0 w h"')
    s.add_argument("--format", choices=("ascii", "ppm"), default="ascii")
    s.add_argument("--image")
    s.add_argument("--scale", type=int, default=1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.fn(args)
    except UsageError as exc:
        print(f"tilelab {args.command}: {exc}", file=sys.stderr)
        return 2
    except TilelabError as exc:
        rep, code = {"error": type(exc).__name__, "message": str(exc)}, 1
    text = json.dumps(_jsonable(rep), indent=None if args.json else 2, sort_keys=True)
    if args.out:
        write_text(args.out, text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
