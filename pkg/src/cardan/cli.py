"""Command-line front end.

Commands: moments, cdf, pdf, sample, trace, approx-error, table-check.
Exit status is 0 on success, 1 when a numerical budget or check fails and
2 on usage errors. ``CARDAN_TOL`` overrides the default quadrature tolerance.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager
from xml.sax.saxutils import quoteattr

import numpy as np

from . import area as area_mod
from . import perimeter as perim_mod
from .geometry import MotionConfig, MovingPoint, centrodes, ellipse_of_point, h, trace_curve
from .montecarlo import empirical_moment, sample
from .quadrature import QuadratureError, QuadratureSpec


class UsageError(Exception):
    pass


def _num(x) -> str:
    # shortest round-trip representation
    return repr(float(x))


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(rows: list[dict], fmt: str, path) -> None:
    with _open_out(path) as fh:
        if fmt == "json":
            json.dump(rows, fh, indent=2)
            fh.write("\n")
            return
        if not rows:
            return
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([v if isinstance(v, (int, str)) else _num(v) for v in row.values()])


def _spec(args) -> QuadratureSpec:
    if getattr(args, "tol", None) is not None:
        return QuadratureSpec(abs_tol=args.tol, rel_tol=args.tol)
    return QuadratureSpec.from_env()


def _parse_grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"grid must be min:max:count, got {text!r}")
    if count < 2 or not lo < hi:
        raise UsageError("grid needs count >= 2 and min < max")
    return lo, hi, count


def _cfg(args) -> MotionConfig:
    if args.r <= 0 or args.kappa < 0:
        raise UsageError("need r > 0 and kappa >= 0")
    return MotionConfig(r=args.r, kappa=args.kappa)


# -- moments -----------------------------------------------------------------

def cmd_moments(args) -> list[dict]:
    cfg = _cfg(args)
    spec = _spec(args)
    quantity, method = args.quantity, args.method
    rows = []
    if method == "montecarlo":
        batch = sample(cfg, args.n, args.seed)
        for k in range(1, args.k_max + 1):
            est, se = empirical_moment(batch, quantity, k)
            rows.append({"k": k, "moment": est, "standard_error": se})
        return rows
    if quantity == "area":
        law = area_mod.AreaLaw(cfg)
        if method != "closed" and cfg.kappa == 0:
            raise UsageError("quadrature and cdf routes need kappa > 0; use --method closed")
        fn = {
            "closed": lambda k: area_mod.area_moment(law, k),
            "quadrature": lambda k: area_mod.area_moment_via_radial_quadrature(law, k, spec),
            "cdf": lambda k: area_mod.area_moment_via_density(law, k, spec),
        }[method]
    else:
        plaw = perim_mod.PerimeterLaw(cfg)
        if method == "closed":
            if args.k_max > 1:
                raise UsageError(
                    "no closed form for perimeter moments E[U^k] with k >= 2; "
                    "use --method quadrature or --method cdf"
                )
            fn = lambda k: perim_mod.perimeter_expectation(plaw)
        elif method == "quadrature":
            fn = lambda k: perim_mod.perimeter_moment_quadrature(plaw, k, spec)
        else:
            fn = lambda k: perim_mod.perimeter_moment_via_cdf(plaw, k, spec)
    for k in range(1, args.k_max + 1):
        rows.append({"k": k, "moment": fn(k)})
    return rows


# -- cdf / pdf ---------------------------------------------------------------

def _support(quantity: str, cfg: MotionConfig) -> tuple[float, float]:
    if quantity == "area":
        return area_mod.AreaLaw(cfg).support()
    return perim_mod.PerimeterLaw(cfg).support()


def _grid_values(args, cfg) -> np.ndarray:
    if args.grid:
        lo, hi, count = _parse_grid(args.grid)
    else:
        lo, hi = _support(args.quantity, cfg)
        count = 201
        if lo == hi:
            lo, hi = lo - 1.0, hi + 1.0
    return np.linspace(lo, hi, count)


def _uniform_columns(x, lo, hi, density: bool):
    if hi <= lo:
        return None
    if density:
        return np.where((x >= lo) & (x <= hi), 1.0 / (hi - lo), 0.0)
    return np.clip((x - lo) / (hi - lo), 0.0, 1.0)


def cmd_cdf(args) -> list[dict]:
    cfg = _cfg(args)
    x = _grid_values(args, cfg)
    if args.quantity == "area":
        y = area_mod.area_cdf(area_mod.AreaLaw(cfg), x)
    else:
        y = perim_mod.perimeter_cdf(perim_mod.PerimeterLaw(cfg), x)
    rows = [{"x": float(a), "cdf": float(b)} for a, b in zip(x, y)]
    if args.with_uniform:
        uni = _uniform_columns(x, *_support(args.quantity, cfg), density=False)
        if uni is not None:
            for row, v in zip(rows, uni):
                row["uniform_cdf"] = float(v)
    return rows


# grid endpoints printed to a few digits may overshoot the support slightly
_SUPPORT_SLACK = 1e-6


def cmd_pdf(args) -> list[dict]:
    cfg = _cfg(args)
    if cfg.kappa == 0:
        raise UsageError("kappa = 0 is a point mass; no density")
    lo, hi = _support(args.quantity, cfg)
    x = _grid_values(args, cfg)
    slack = _SUPPORT_SLACK * (hi - lo)
    if x[0] < lo - slack or x[-1] > hi + slack:
        raise UsageError(f"grid [{x[0]}, {x[-1]}] leaves the support [{lo}, {hi}]")
    x = np.clip(x, lo, hi)
    if args.quantity == "area":
        # pieces are closed on the left; report the left limit at the top of the support
        y = area_mod.area_pdf(area_mod.AreaLaw(cfg), np.where(x == hi, np.nextafter(hi, lo), x))
    else:
        law = perim_mod.PerimeterLaw(cfg)
        interior = (x > lo) & (x < hi)
        y = np.zeros_like(x)
        y[interior] = perim_mod.perimeter_pdf(law, x[interior])
        y[x == lo] = perim_mod.perimeter_pdf_left_limit(law)
        y[x == hi] = perim_mod.perimeter_pdf_right_limit(law)
    rows = [{"x": float(a), "pdf": float(b)} for a, b in zip(x, y)]
    if args.with_uniform:
        uni = _uniform_columns(x, lo, hi, density=True)
        for row, v in zip(rows, uni):
            row["uniform_pdf"] = float(v)
    return rows


# -- sample / trace ----------------------------------------------------------

def cmd_sample(args) -> list[dict]:
    cfg = _cfg(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    batch = sample(cfg, args.n, args.seed)
    return [
        {"rho": float(a), "alpha": float(b), "area": float(c), "perimeter": float(d)}
        for a, b, c, d in zip(batch.rho, batch.alpha, batch.areas, batch.perimeters)
    ]


def render_trace_svg(cfg: MotionConfig, n_ellipses: int, seed: int, phi_steps: int) -> str:
    """SVG of the centrodes, ``n_ellipses`` random generating points and their ellipses.

    Each ellipse is a closed polyline carrying ``data-semi-major``,
    ``data-semi-minor`` and ``data-orientation`` attributes. Coordinates are in
    units of length with the y-axis pointing up.
    """
    batch = sample(cfg, n_ellipses, seed)
    fixed, moving = centrodes(cfg)
    extent = 1.1 * max(fixed.radius, cfg.r + cfg.R)
    size = 2.0 * extent
    stroke = size / 800.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_num(-extent)} {_num(-extent)} '
        f'{_num(size)} {_num(size)}" width="800" height="800" '
        f'data-r={quoteattr(_num(cfg.r))} data-kappa={quoteattr(_num(cfg.kappa))} data-seed="{seed}">',
        f'<g transform="scale(1,-1)" fill="none" stroke-width="{_num(stroke)}">',
        f'<circle class="fixed-centrode" cx="0.0" cy="0.0" r="{_num(fixed.radius)}" stroke="black"/>',
        f'<circle class="moving-centrode" cx="{_num(moving.center[0])}" cy="{_num(moving.center[1])}" '
        f'r="{_num(moving.radius)}" stroke="gray"/>',
    ]
    for rho, alpha in zip(batch.rho, batch.alpha):
        p = MovingPoint(float(rho), float(alpha))
        geom = ellipse_of_point(cfg, p)
        pts = trace_curve(cfg, p, phi_steps)
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        out.append(
            f'<polygon class="ellipse" points="{coords}" stroke="steelblue" '
            f'data-rho="{_num(p.rho)}" data-alpha="{_num(p.alpha)}" '
            f'data-semi-major="{_num(geom.semi_major)}" data-semi-minor="{_num(geom.semi_minor)}" '
            f'data-orientation="{_num(geom.orientation)}"/>'
        )
    # generating points at phi = 0, where the moving frame is the fixed frame shifted by r
    for rho, alpha in zip(batch.rho, batch.alpha):
        x = cfg.r + rho * math.cos(alpha)
        y = rho * math.sin(alpha)
        out.append(
            f'<circle class="generating-point" cx="{_num(x)}" cy="{_num(y)}" '
            f'r="{_num(3 * stroke)}" fill="crimson" stroke="none"/>'
        )
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def cmd_trace(args) -> str:
    cfg = _cfg(args)
    if args.n_ellipses < 1 or args.phi_steps < 3:
        raise UsageError("need --n-ellipses >= 1 and --phi-steps >= 3")
    return render_trace_svg(cfg, args.n_ellipses, args.seed, args.phi_steps)


# -- approx-error / table-check ---------------------------------------------

def cmd_approx_error(args) -> list[dict]:
    try:
        kappas = [float(s) for s in args.kappa_list.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --kappa-list {args.kappa_list!r}")
    if not kappas or any(k <= 0 for k in kappas):
        raise UsageError("--kappa-list entries must be positive")
    rows = []
    for kappa in kappas:
        mean = perim_mod.perimeter_expectation(perim_mod.PerimeterLaw.of(kappa, args.r))
        approx = perim_mod.perimeter_series_approx(kappa, args.r)
        rows.append({"kappa": kappa, "mean": mean, "series": approx, "difference": mean - approx})
    return rows


def cmd_table_check(args) -> tuple[list[dict], bool]:
    spec = _spec(args)
    rows = []
    for entry in perim_mod.load_reference_table():
        law = perim_mod.PerimeterLaw.of(entry.kappa)
        a = perim_mod.perimeter_moment_quadrature(law, entry.k, spec)
        b = perim_mod.perimeter_moment_via_cdf(law, entry.k, spec)
        rows.append({
            "kappa": entry.kappa,
            "k": entry.k,
            "reference": entry.value_string,
            "quadrature": a,
            "cdf": b,
            "rel_err_quadrature": abs(a / entry.value - 1.0),
            "rel_err_cdf": abs(b / entry.value - 1.0),
        })
    worst = max(max(r["rel_err_quadrature"], r["rel_err_cdf"]) for r in rows)
    return rows, worst <= args.threshold


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cardan",
        description="Moments and distributions of the area and perimeter of random ellipses "
                    "of the elliptic (Cardan) motion. Lengths are in units of r unless --r is given.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, quantity=True, kappa_required=True):
        p.add_argument("--r", type=float, default=1.0, help="moving-centrode radius (default 1)")
        if kappa_required:
            p.add_argument("--kappa", type=float, required=True, help="disk ratio R / r")
        if quantity:
            p.add_argument("--quantity", choices=["area", "perimeter"], required=True)
        p.add_argument("--output", "-o", default="-", help="output file (default stdout)")

    p = sub.add_parser("moments", help="k-th moments for k = 1..k-max")
    common(p)
    p.add_argument("--k-max", type=int, default=1)
    p.add_argument("--method", choices=["closed", "quadrature", "cdf", "montecarlo"], default="closed")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    for name, text in (("cdf", "distribution function on a grid"), ("pdf", "density on a grid")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--grid", default=None, help="min:max:count (default: the support, 201 points)")
        p.add_argument("--with-uniform", action="store_true",
                       help="add the uniform law on the same support for comparison")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("sample", help="Monte Carlo batch as rho, alpha, area, perimeter")
    common(p, quantity=False)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("trace", help="SVG of random ellipses with the centrodes")
    common(p, quantity=False)
    p.add_argument("--n-ellipses", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi-steps", type=int, default=180)

    p = sub.add_parser("approx-error", help="E[U_kappa] against its large-kappa series")
    common(p, quantity=False, kappa_required=False)
    p.add_argument("--kappa-list", default="1,2,3,5,10")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("table-check", help="reference perimeter moments through both quadrature routes")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--threshold", type=float, default=1e-9, help="maximum accepted relative error")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "trace":
            svg = cmd_trace(args)
            with _open_out(args.output) as fh:
                fh.write(svg)
            return 0
        if args.command == "table-check":
            rows, ok = cmd_table_check(args)
            _emit(rows, args.format, args.output)
            worst = max(max(r["rel_err_quadrature"], r["rel_err_cdf"]) for r in rows)
            print(f"max relative error {worst:.3e} ({'ok' if ok else 'FAILED'})", file=sys.stderr)
            return 0 if ok else 1
        handler = {
            "moments": cmd_moments,
            "cdf": cmd_cdf,
            "pdf": cmd_pdf,
            "sample": cmd_sample,
            "approx-error": cmd_approx_error,
        }[args.command]
        _emit(handler(args), args.format, args.output)
        return 0
    except UsageError as exc:
        print(f"cardan {args.command}: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"cardan {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
