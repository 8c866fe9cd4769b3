"""Command-line entry point ``iet``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 cap exceeded.
Data goes to stdout, diagnostics to stderr.  Every number in JSON and CSV
output is an exact integer or ``p/q`` string.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import cantor, suites
from .config import FORMATS, RunConfig
from .core import FiniteIET, HalfOpenInterval, check, format_rat, parse_rat, rmn_build
from .decomposition import decompose, divisibility_report, lattice_oracle, locate
from .errors import CapExceeded, IETError
from .odometer import VanDerCorputMap
from .orbits import CapReached, first_return_map, least_period_direct, orbit
from .reversal import ReversalFamilyMap, compose_restricted
from .svg import render_cantor_levels, render_tn_layout

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_map(text: str):
    """``TN:<N>``, ``R:<m>,<n>[:mirrored]``, ``VDC`` or a path to a FiniteIET JSON file."""
    kind, _, arg = text.partition(":")
    if kind == "TN":
        return ReversalFamilyMap(_posint(arg))
    if kind == "R":
        pair, _, orientation = arg.partition(":")
        m, _, n = pair.partition(",")
        return rmn_build(_posint(m), _posint(n), orientation or "standard")
    if text == "VDC":
        return VanDerCorputMap()
    path = Path(text)
    if not path.is_file():
        raise UsageError(f"unknown map {text!r}: use TN:N, R:m,n, VDC or a JSON file")
    return check(FiniteIET.loads(path.read_text()))


def _posint(text: str) -> int:
    if not text.isdigit() or int(text) < 1:
        raise UsageError(f"expected a positive integer, got {text!r}")
    return int(text)


def _int_list(text: str) -> list[int]:
    return [_posint(t) for t in text.split(",")]


def _finite(fmap) -> FiniteIET:
    if not isinstance(fmap, FiniteIET):
        raise UsageError("this command needs a finite IET (R:m,n or a JSON file)")
    return fmap


# ---- output ---------------------------------------------------------------

def _flatten(prefix: str, value, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, "true" if value is True else "false" if value is False else
                    "null" if value is None else str(value)))


def emit(data, fmt: str, rows: tuple[list[str], list[list[str]]] | None = None) -> str:
    """Render ``data`` as JSON, ``key: value`` text, or CSV (``rows`` when given)."""
    if fmt == "json":
        return json.dumps(data, separators=(",", ":"), ensure_ascii=False) + "\n"
    pairs: list[tuple[str, str]] = []
    _flatten("", data, pairs)
    if fmt == "text":
        return "".join(f"{k}: {v}\n" for k, v in pairs)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header, body = rows if rows is not None else (["key", "value"], [list(p) for p in pairs])
    w.writerow(header)
    w.writerows(body)
    return buf.getvalue()


# ---- commands -------------------------------------------------------------

def cmd_orbit(args, cfg):
    fmap = parse_map(args.map)
    rec = orbit(fmap, parse_rat(args.x), min(args.steps, cfg.iteration_cap))
    rows = (["step", "point"], [[str(i), format_rat(p)] for i, p in enumerate(rec.points)])
    return rec.to_dict(), rows, EXIT_OK


def cmd_period(args, cfg):
    fmap = parse_map(args.map)
    x = parse_rat(args.x)
    cap = args.cap or cfg.iteration_cap
    if args.exact:
        (p,) = locate(_finite(fmap), [x])
        return {"period": str(p), "method": "induction"}, None, EXIT_OK
    res = least_period_direct(fmap, x, cap)
    if isinstance(res, CapReached):
        return res.to_dict(), None, EXIT_CAP
    return {"period": str(res.period)}, None, EXIT_OK


def cmd_decompose(args, cfg):
    iet = _finite(parse_map(args.map))
    spec = decompose(iet)
    data = spec.to_dict()
    code = EXIT_OK
    if args.oracle == "lattice":
        res = lattice_oracle(iet, cap=cfg.oracle_cap)
        agree = res.spectrum() == spec
        data["oracle"] = {**res.to_dict(), "agrees": agree}
        code = EXIT_OK if agree else EXIT_FAILED
    if args.divisibility:
        kind, _, arg = args.map.partition(":")
        if kind != "R":
            raise UsageError("--divisibility needs an R:m,n map")
        m, n = (int(v) for v in arg.partition(":")[0].split(","))
        data["divisibility"] = divisibility_report(spec, m, n).to_dict()
    rows = (["period", "measure"], [[e["period"], e["measure"]] for e in data["entries"]])
    return data, rows, code


def cmd_return_map(args, cfg):
    fmap = parse_map(args.map)
    source = HalfOpenInterval.parse(args.source) if args.source else None
    res = first_return_map(fmap, HalfOpenInterval.parse(args.target), args.step_cap, source, cfg.piece_cap)
    return res.to_dict(), None, EXIT_OK


def cmd_compose(args, cfg):
    fmap = parse_map(args.map)
    iet = compose_restricted(fmap, HalfOpenInterval.parse(args.target), args.steps, cfg.piece_cap,
                             args.require_invariant)
    return iet.to_dict(), None, EXIT_OK


def _spec(args):
    if args.N is not None:
        return cantor.TnCantorSpec(args.N)
    if args.ratio is not None:
        iv = HalfOpenInterval.parse(args.interval or "0,1")
        return cantor.constant_spec(iv.lo, iv.hi, parse_rat(args.ratio))
    raise UsageError("give --N or --ratio")


def _depth(args, cfg) -> int:
    depth = args.depth if args.depth is not None else cfg.depth_cap
    if depth > cfg.depth_cap:
        raise CapExceeded(f"depth {depth} exceeds depth cap {cfg.depth_cap}")
    return depth


def cmd_address(args, cfg):
    return cantor.address(_spec(args), parse_rat(args.x), _depth(args, cfg)).to_dict(), None, EXIT_OK


def cmd_classify(args, cfg):
    res = cantor.classify(args.N, parse_rat(args.x), _depth(args, cfg), args.cap or cfg.iteration_cap)
    return res.to_dict(), None, EXIT_OK


def cmd_cantor(args, cfg):
    spec = _spec(args)
    depth = _depth(argparse.Namespace(depth=args.levels), cfg)
    levels = [[iv.to_dict() for iv in cantor.level(spec, k)] for k in range(depth + 1)]
    rows = (["level", "word", "lo", "hi"],
            [[str(k), iv["word"], iv["lo"], iv["hi"]] for k, lv in enumerate(levels) for iv in lv])
    data = {"a0": format_rat(spec.a0), "b0": format_rat(spec.b0), "degenerate": spec.degenerate,
            "levels": levels}
    return data, rows, EXIT_OK


def cmd_content(args, cfg):
    bound = cantor.content_bound(_spec(args), parse_rat(args.d), args.k)
    data = bound.to_dict()
    if args.below is not None:
        data["certified_below"] = bound.certified_below(parse_rat(args.below))
    return data, None, EXIT_OK


def cmd_verify(args, cfg):
    name = args.suite
    Ns = _int_list(args.N) if args.N else [1, 2, 3]
    if name == "return-lemma":
        reports = suites.return_lemma_suite(Ns, args.pieces)
    elif name == "key-lemma":
        reports = suites.key_lemma_suite(Ns, args.max_len)
    elif name == "conjugacy":
        reports = suites.conjugacy_suite(Ns, args.count, cfg.seed)
    elif name == "vdc":
        reports = suites.vdc_suite(args.count)
    else:
        reports = suites.remark_identities_suite(cfg.piece_cap)
    ok = all(r.ok for r in reports)
    data = {"suite": name, "ok": ok, "cases": [r.to_dict() for r in reports]}
    return data, None, EXIT_OK if ok else EXIT_FAILED


def cmd_render(args, cfg):
    if args.what == "fig1":
        svg = render_tn_layout(args.N, args.pieces)
    else:
        svg = render_cantor_levels(cantor.TnCantorSpec(args.N), _depth(argparse.Namespace(depth=args.depth), cfg))
    if args.out:
        Path(args.out).write_text(svg)
        return {"written": args.out}, None, EXIT_OK
    return svg, None, EXIT_OK


# ---- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--format", choices=FORMATS, dest="output_format")
    common.add_argument("--seed", type=int)
    common.add_argument("--depth-cap", type=int)
    common.add_argument("--iteration-cap", type=int)
    common.add_argument("--piece-cap", type=int)
    common.add_argument("--oracle-cap", type=int)

    parser = argparse.ArgumentParser(prog="iet", description="Exact interval exchange laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("orbit", cmd_orbit, "forward orbit of a point")
    p.add_argument("--map", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--steps", type=int, default=1000)

    p = add("period", cmd_period, "least period of a point")
    p.add_argument("--map", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--exact", action="store_true", help="finite IETs: use the induction instead of iterating")

    p = add("decompose", cmd_decompose, "least-period spectrum of a finite IET")
    p.add_argument("--map", required=True)
    p.add_argument("--oracle", choices=["lattice"])
    p.add_argument("--divisibility", action="store_true")

    p = add("return-map", cmd_return_map, "first-return map to an interval")
    p.add_argument("--map", required=True)
    p.add_argument("--target", required=True, help="lo,hi")
    p.add_argument("--source", help="lo,hi inside the target")
    p.add_argument("--step-cap", type=int, default=10_000)

    p = add("compose", cmd_compose, "a power of the map restricted to an interval")
    p.add_argument("--map", required=True)
    p.add_argument("--target", required=True, help="lo,hi")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--require-invariant", action="store_true")

    for name, fn, help_text in (("address", cmd_address, "Cantor address of a point"),
                                ("cantor", cmd_cantor, "levels of the Cantor construction"),
                                ("content", cmd_content, "Hausdorff content bound at one level")):
        p = add(name, fn, help_text)
        p.add_argument("--N", type=int)
        p.add_argument("--ratio", help="constant ratio s instead of --N")
        p.add_argument("--interval", help="a0,b0 for --ratio (default 0,1)")
        if name == "address":
            p.add_argument("--x", required=True)
            p.add_argument("--depth", type=int)
        elif name == "cantor":
            p.add_argument("--levels", type=int, default=3)
        else:
            p.add_argument("--d", required=True)
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--below", help="threshold to certify the bound against")

    p = add("classify", cmd_classify, "periodic / boundary / undetermined verdict under T_N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int)
    p.add_argument("--cap", type=int)

    p = add("verify", cmd_verify, "run a verification suite")
    p.add_argument("--suite", required=True,
                   choices=["return-lemma", "key-lemma", "conjugacy", "vdc", "remark-identities"])
    p.add_argument("--N", help="comma-separated list (default 1,2,3)")
    p.add_argument("--pieces", type=int, default=50)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--count", type=int, default=500)

    p = add("render", cmd_render, "SVG diagram")
    p.add_argument("--what", required=True, choices=["fig1", "cantor"])
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--pieces", type=int, default=12)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        cfg = cfg.updated(depth_cap=args.depth_cap, iteration_cap=args.iteration_cap, piece_cap=args.piece_cap,
                          oracle_cap=args.oracle_cap, seed=args.seed, output_format=args.output_format)
        data, rows, code = args.fn(args, cfg)
    except CapExceeded as exc:
        print(f"iet: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (IETError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"iet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(data if isinstance(data, str) else emit(data, cfg.output_format, rows))
    return code


if __name__ == "__main__":
    sys.exit(main())
