"""Command-line sweeps producing CSV or JSON files.

Exit codes: 0 success, 1 runtime or IO error, 2 certificate or equality
violation, 64 usage error. ``SIMOCAP_THREADS`` sets how many grid points are
evaluated at once; rows always come out in grid order.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds, detchan, gdof, rates
from .channel import (
    GramSpec3,
    SymmetricSimoChannel,
    as_general,
    channel_from_json,
    generate_strong3,
    generate_symmetric,
)
from .errors import SimocapError
from .polytope import default_directions, remove_redundant, support, worst_support_gap

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 64

SUPPORT_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- flag parsing ----------------------------------------------------------

def parse_grid(text, kind=float):
    """``"a,b,c"`` or inclusive ``"start:stop:step"``."""
    text = text.strip()
    if not text:
        raise UsageError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise UsageError("range step must be positive")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        if n <= 0:
            raise UsageError(f"range {text!r} is empty")
        return tuple(kind(round(start + k * step, 12)) for k in range(n))
    try:
        return tuple(kind(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise UsageError(f"bad list {text!r}") from exc


def parse_seeds(text):
    """Comma list of seeds, or half-open ``"start:stop"``."""
    text = text.strip()
    if ":" in text:
        a, b = text.split(":", 1)
        out = tuple(range(int(a), int(b)))
    else:
        out = tuple(int(p) for p in text.split(",") if p.strip())
    if not out:
        raise UsageError(f"seed list {text!r} is empty")
    return out


def parse_gram(text):
    try:
        c, c1, c2 = (complex(p.strip().replace(" ", "")) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--gram needs c,c1,c2, got {text!r}") from exc
    return GramSpec3(c, c1, c2)


def thread_count():
    raw = os.environ.get("SIMOCAP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"SIMOCAP_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def ordered_map(fn, items):
    """``map`` over a thread pool; results keep the input order."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SweepConfig:
    command: str
    grids: dict
    out: str
    format: str


# -- output ---------------------------------------------------------------

def format_value(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return gdof.format_number(x)
    return str(x)


def render(rows, columns, fmt):
    if fmt == "json":
        return json.dumps([{c: _jsonable(r[c]) for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_value(r[c]) for c in columns])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


def load_channel(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return channel_from_json(fh.read())
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (KeyError, ValueError) as exc:
        raise SimocapError(f"{path}: not a channel file ({exc})") from exc


# -- commands -------------------------------------------------------------

GDOF_COLUMNS = ("alpha", "d_theorem", "d_tin", "d_orthogonal", "d_numeric_inner",
                "d_numeric_outer")


def cmd_gdof_curve(args):
    alphas = parse_grid(args.alpha)
    log2_rho = parse_grid(args.log2_rho)
    if len(log2_rho) != 2:
        raise UsageError("gdof-curve needs exactly two --log2-rho values")
    rho_pair = (2.0 ** log2_rho[0], 2.0 ** log2_rho[1])
    seeds = parse_seeds(args.seeds)
    if args.n < 1:
        raise UsageError("--n must be at least 1")

    def row(a):
        return {
            "alpha": a,
            "d_theorem": float(gdof.gdof_theorem(args.n, a)),
            "d_tin": float(gdof.gdof_tin(a)),
            "d_orthogonal": float(gdof.gdof_orthogonal(args.n)),
            "d_numeric_inner": gdof.estimate_gdof_numeric(rates.inner_symmetric, args.n, a,
                                                          rho_pair, seeds),
            "d_numeric_outer": gdof.estimate_gdof_numeric(bounds.outer_symmetric, args.n, a,
                                                          rho_pair, seeds),
        }

    emit(render(ordered_map(row, alphas), GDOF_COLUMNS, args.format), args.out)
    return EXIT_OK


def cmd_gap_scan(args):
    grams = [parse_gram(g) for g in args.gram or ()]
    if args.c_sq is not None:
        grams += list(parse_grid(args.c_sq)) if args.c_sq.strip() else []
    elif not grams:
        grams = [0.0, 0.5, 0.9]
    grid = gdof.GapGrid(parse_grid(args.log2_rho), parse_grid(args.alpha), tuple(grams),
                        parse_seeds(args.seeds))
    if len(grid) == 0:
        raise UsageError("empty grid")
    report = gdof.gap_scan(grid, raise_on_violation=False,
                           map_fn=lambda f, pts: ordered_map(f, pts))
    text = report.to_json() + "\n" if args.format == "json" else report.to_csv()
    emit(text, args.out)
    bad = report.violations
    if bad:
        print(f"certificate violated at {asdict(bad[0])}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


STRONG_COLUMNS = ("source", "a1", "a2", "a3", "cond_rx1", "cond_rx2", "cond_rx3",
                  "conditions", "max_outer_minus_inner", "min_outer_minus_inner",
                  "capacity_established")


def strong_row(source, ch, dirs):
    a, outer = bounds.strong_mac_outer(ch)
    conds = bounds.corollary_report(ch)
    inner = rates.decode_all_region(as_general(ch))
    diffs = np.array([support(outer, d) - support(inner, d) for d in dirs])
    ok = all(conds) and float(np.max(np.abs(diffs))) <= SUPPORT_TOL
    return {
        "source": source,
        "a1": a.a1, "a2": a.a2, "a3": a.a3,
        "cond_rx1": conds[0], "cond_rx2": conds[1], "cond_rx3": conds[2],
        "conditions": all(conds),
        "max_outer_minus_inner": float(diffs.max()),
        "min_outer_minus_inner": float(diffs.min()),
        "capacity_established": ok,
    }


def cmd_strong_check(args):
    dirs = default_directions(3)
    if args.channel:
        ch = load_channel(args.channel)
        if ch.K != 3 or ch.N != 2:
            raise UsageError("strong-check needs a 3-user channel with 2 antennas")
        items = [(args.channel, ch)]
    else:
        cross = (1.2, 3.0) if args.random == "strong" else (0.2, 0.95)
        items = [(f"{args.random}:{s}", generate_strong3(s, cross_range=cross))
                 for s in parse_seeds(args.seeds)]
    rows = ordered_map(lambda it: strong_row(it[0], it[1], dirs), items)
    emit(render(rows, STRONG_COLUMNS, args.format), args.out)
    bad = [r for r in rows if r["min_outer_minus_inner"] < -SUPPORT_TOL
           or (r["conditions"] and not r["capacity_established"])]
    if bad:
        print(f"region check failed for {bad[0]['source']}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


DET_COLUMNS = ("distribution", "equal", "worst_gap", "sum_rate_support",
               "theorem1_facets", "projected_facets")


def det_entry(label, dc, dist, dirs):
    t = detchan.entropy_table(dc, dist)
    thm = detchan.theorem1_region(t, prune=True)
    proj = detchan.project_to_rates(detchan.achievable_constraints(t))
    gap, where = worst_support_gap(thm, proj, dirs)
    return {
        "distribution": label,
        "entropy_table": t.to_dict(),
        "theorem1_region": [{"a": a.tolist(), "b": b} for a, b in thm.halfspaces],
        "projected_region": [{"a": a.tolist(), "b": b} for a, b in proj.halfspaces],
        "equal": bool(gap <= SUPPORT_TOL),
        "worst_gap": float(gap),
        "worst_direction": where.tolist(),
        "sum_rate_support": support(proj, np.ones(3)),
        "theorem1_facets": len(thm.b),
        "projected_facets": len(proj.b),
    }


def cmd_det_region(args):
    if args.q not in (2, 3):
        raise UsageError("--q must be 2 or 3")
    dc = detchan.build_canonical_det_channel(args.q)
    kinds = [k.strip() for k in args.dist.split(",") if k.strip()]
    items = []
    for k in kinds:
        if k == "uniform":
            items.append(("uniform", detchan.ProductDistribution.uniform(args.q)))
        elif k == "point":
            items.append(("point", detchan.ProductDistribution.point_mass(args.q)))
        elif k == "dirichlet":
            for s in parse_seeds(args.seeds):
                dist = detchan.ProductDistribution.dirichlet(args.q, np.random.default_rng(s))
                items.append((f"dirichlet:{s}", dist))
        else:
            raise UsageError(f"unknown distribution {k!r}")
    if not items:
        raise UsageError("no distributions selected")
    dirs = default_directions(3)
    entries = ordered_map(lambda it: det_entry(it[0], dc, it[1], dirs), items)
    if args.format == "json":
        text = json.dumps(_jsonable(entries), indent=1) + "\n"
    else:
        text = render(entries, DET_COLUMNS, "csv")
    emit(text, args.out)
    if not all(e["equal"] for e in entries):
        bad = next(e for e in entries if not e["equal"])
        print(f"regions differ for {bad['distribution']} by {bad['worst_gap']:.3g} "
              f"along {bad['worst_direction']}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


RATES_COLUMNS = ("log2_rho", "alpha", "tin", "hk_private", "hk_common", "hk_total",
                 "decode_all", "inner", "single_user", "two_user_min", "many_to_one_sym",
                 "new_bound_sym", "outer")


def rates_row(ch):
    comp = bounds.outer_components(ch)
    hkp, hkc = rates.hk_private_rate(ch), rates.hk_common_symmetric_rate(ch)
    return {
        "log2_rho": float(np.log2(ch.snr)),
        "alpha": float(ch.alpha),
        "tin": rates.tin_rate(ch),
        "hk_private": hkp,
        "hk_common": hkc,
        "hk_total": hkp + hkc,
        "decode_all": rates.decode_all_symmetric_rate(ch),
        "inner": rates.inner_symmetric(ch),
        "single_user": comp["single_user"],
        "two_user_min": comp["two_user_min"],
        "many_to_one_sym": comp["many_to_one_sym"],
        "new_bound_sym": comp["new_bound_sym"],
        "outer": min(comp.values()),
    }


def cmd_rates(args):
    if args.channel:
        base = load_channel(args.channel)
        if not isinstance(base, SymmetricSimoChannel):
            raise UsageError("rates needs a symmetric channel file (snr and alpha set)")
    else:
        base = generate_symmetric(args.n, 1.0, 0.0, args.seed)
    grid = [(l, a) for l in parse_grid(args.log2_rho) for a in parse_grid(args.alpha)]
    rows = ordered_map(lambda p: rates_row(base.with_params(snr=2.0 ** p[0], alpha=p[1])), grid)
    emit(render(rows, RATES_COLUMNS, args.format), args.out)
    return EXIT_OK


# -- entry point ----------------------------------------------------------

def build_parser():
    p = _Parser(prog="simocap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", default="-", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("gdof-curve", help="analytic and numeric GDOF against alpha")
    sp.add_argument("--n", type=int, default=1, help="receive antennas (K = N+1 users)")
    sp.add_argument("--alpha", default="0.1:2.0:0.1")
    sp.add_argument("--log2-rho", default="40,60", help="the two SNRs for the slope")
    sp.add_argument("--seeds", default="0:5")
    common(sp)
    sp.set_defaults(func=cmd_gdof_curve)

    sp = sub.add_parser("gap-scan", help="check the gap certificate on a grid")
    sp.add_argument("--log2-rho", default="20,40")
    sp.add_argument("--alpha", default="0.1:2.0:0.1")
    sp.add_argument("--gram", action="append", help="c,c1,c2 (repeatable; complex allowed)")
    sp.add_argument("--c-sq", default=None,
                    help="|c|^2 values; c1, c2 are then drawn per seed (default 0,0.5,0.9)")
    sp.add_argument("--seeds", default="0:5")
    common(sp)
    sp.set_defaults(func=cmd_gap_scan)

    sp = sub.add_parser("strong-check", help="strong-interference capacity check")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--channel", help="channel JSON file")
    src.add_argument("--random", choices=("strong", "weak"), default="strong")
    sp.add_argument("--seeds", default="0:100")
    common(sp)
    sp.set_defaults(func=cmd_strong_check)

    sp = sub.add_parser("det-region", help="deterministic-channel region equivalence")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--dist", default="uniform,point,dirichlet")
    sp.add_argument("--seeds", default="0:10", help="Dirichlet draws")
    common(sp)
    sp.set_defaults(func=cmd_det_region)

    sp = sub.add_parser("rates", help="tabulate inner and outer bounds over rho and alpha")
    sp.add_argument("--channel", help="symmetric channel JSON file")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--log2-rho", default="10,20,30,40")
    sp.add_argument("--alpha", default="0:2:0.25")
    common(sp)
    sp.set_defaults(func=cmd_rates)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"simocap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, SimocapError, ValueError) as exc:
        print(f"simocap: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
