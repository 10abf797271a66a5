"""Command-line front end.

Subcommands::

    qlim fig1            Fisher information scan of a two-source scene (CSV, optional SVG)
    qlim counterexample  symmetric vs asymmetric scene diagnostics for the QR construction
    qlim selfcheck       seeded invariant corpus

Scene config files are a single JSON object::

    {"sources": [{"x": 0.0, "w": 0.5}, {"x": 0.0, "w": 0.5}],
     "collectors": [0.0, 1.0],
     "scale": 1.0,
     "binding": "ShiftLastSource"}

``binding`` is ``ShiftLastSource`` (the last source sits at ``x + theta``)
or ``SymmetricSeparation`` (two sources at ``x0 - theta/2``, ``x1 + theta/2``).
Weights default to equal, scale to 1.  Theta on the command line is always
the scaled separation ``theta * scale``.

Exit codes: 0 success, 1 invariant failure, 2 usage or I/O error.
Set ``QLIM_THREADS`` to cap the number of worker threads used for grid scans.
"""

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from .errors import QlimError
from .fisher import cfi, classical_fidelity, qfi
from .interferometer import DEFAULT_DELTA, build_qr
from .purify import local_consistency, purification_pair
from .report import ReportSettings, scan
from .scene import asymmetric_scene, density, density_derivative, load_scene, symmetric_scene
from .selfcheck import run_selfcheck

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2

FIG1_HEADER = ["theta_scaled", "qfi", "qfi_fid", "cfi_opt", "cfi_qr",
               "f_quantum", "f_classical_qr", "status"]
CLEAN_FRACTION = 0.9


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return repr(float(x)) if math.isfinite(x) else "nan"


def _workers() -> int:
    raw = os.environ.get("QLIM_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"QLIM_THREADS must be an integer, got {raw!r}") from None


def _scene(args):
    if args.config:
        try:
            return load_scene(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    return asymmetric_scene()


def _status(report) -> str:
    if not report.errors:
        return "ok"
    return ";".join(f"{k}={v}" for k, v in sorted(report.errors.items()))


def fig1_rows(scene, thetas_scaled, settings, workers=1):
    """CSV rows (strings) for a scan over scaled separations."""
    reports = scan(scene, [t / scene.scale for t in thetas_scaled], settings, workers)
    rows = []
    for t, rep in zip(thetas_scaled, reports):
        rows.append([_fmt(t), _fmt(rep.qfi), _fmt(rep.qfi_fid), _fmt(rep.cfi_opt),
                     _fmt(rep.cfi_qr), _fmt(rep.f_quantum), _fmt(rep.f_classical_qr),
                     _status(rep)])
    return rows, reports


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIG1_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


def render_svg(thetas, series: dict, width=640, height=400) -> str:
    """Bare polyline plot of each series against theta."""
    pad = 40
    ys = np.concatenate([np.asarray(v, float)[np.isfinite(v)] for v in series.values()] or [[0.0]])
    ymax = float(ys.max()) if ys.size else 1.0
    ymax = ymax if ymax > 0 else 1.0
    x0, x1 = float(min(thetas)), float(max(thetas))
    span = x1 - x0 if x1 > x0 else 1.0

    def px(x, y):
        return (pad + (x - x0) / span * (width - 2 * pad),
                height - pad - y / ymax * (height - 2 * pad))

    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>']
    for i, (name, values) in enumerate(series.items()):
        pts = " ".join("%.2f,%.2f" % px(x, y) for x, y in zip(thetas, values) if math.isfinite(y))
        colour = colours[i % len(colours)]
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - pad - 90}" y="{pad + 16 * i}" fill="{colour}" '
                     f'font-size="12">{name}</text>')
    parts.append(f'<text x="{width / 2:.0f}" y="{height - 8}" font-size="12">theta * k / z0</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def cmd_fig1(args) -> int:
    scene = _scene(args)
    if args.theta is not None:
        lo = hi = args.theta
    else:
        lo, hi = args.theta_min, args.theta_max
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    thetas = np.linspace(lo, hi, args.points) if args.points > 1 else np.array([lo])
    settings = ReportSettings(delta=args.delta, rtol=args.rtol)
    rows, reports = fig1_rows(scene, thetas, settings, _workers())
    _write(args.out, render_csv(rows))
    if args.svg:
        series = {"qfi": [r.qfi for r in reports], "cfi_opt": [r.cfi_opt for r in reports],
                  "cfi_qr": [r.cfi_qr for r in reports]}
        _write(args.svg, render_svg(thetas, series))
    clean = sum(r.clean for r in reports)
    return EXIT_OK if clean >= CLEAN_FRACTION * len(reports) else EXIT_INVARIANT


COUNTER_FIELDS = ["variant", "theta_scaled", "delta", "gram_offdiag", "qr_lower_residual",
                  "fc_qr_minus_f", "fc_qr_excess_ratio", "qfi", "cfi_qr", "qfi_minus_cfi_qr"]


def counterexample_row(name, scene, theta_scaled, delta):
    """Diagnostics of the QR-based interferometer for one scene.

    ``fc_qr_excess_ratio`` is ``(f^c - f) / (1 - f)``: both numerator and
    denominator are O(delta^2), and the ratio tends to ``1 - cfi_qr / qfi``.
    """
    theta = theta_scaled / scene.scale
    pair = purification_pair(scene, theta, theta + delta)
    f = float(pair.d.sum())
    gram = local_consistency(pair).gram_offdiag
    q = qfi(scene, theta)
    if pair.a.shape[0] >= pair.a.shape[1]:
        plan = build_qr(pair)
        lower = plan.diagnostics["lower_residual"]
        excess = classical_fidelity(pair, plan.r) - f
        c = cfi(density(scene, theta), density_derivative(scene, theta), plan.r)
    else:
        lower = excess = c = float("nan")
    infidelity = 0.5 * float(np.linalg.norm(pair.a - pair.b)) ** 2
    ratio = excess / infidelity if infidelity > 0 else float("nan")
    return {"variant": name, "theta_scaled": theta_scaled, "delta": delta, "gram_offdiag": gram,
            "qr_lower_residual": lower, "fc_qr_minus_f": excess, "fc_qr_excess_ratio": ratio,
            "qfi": q, "cfi_qr": c, "qfi_minus_cfi_qr": q - c}


def cmd_counterexample(args) -> int:
    scene = _scene(args)
    theta = 2.0 if args.theta is None else args.theta
    delta = 1e-3 if args.delta is None else args.delta
    rows = [counterexample_row("symmetric", symmetric_scene(scene.scale), theta, delta),
            counterexample_row("asymmetric", scene, theta, delta)]
    out = sys.stdout
    out.write(f"QR-based interferometer at theta*k/z0 = {theta}, delta = {delta}\n")
    for row in rows:
        out.write(f"[{row['variant']}]\n")
        for key in COUNTER_FIELDS[3:]:
            out.write(f"  {key:<20} {row[key]: .6e}\n")
        if row["qfi"] == 0.0:
            out.write("  degenerate: state does not depend on theta, all Fisher information is 0\n")
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COUNTER_FIELDS)
        for row in rows:
            writer.writerow([row["variant"]] + [_fmt(row[k]) for k in COUNTER_FIELDS[1:]])
        _write(args.out, buf.getvalue())
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    seed = 0 if args.seed is None else args.seed
    results = run_selfcheck(seed, strict=args.strict)
    for res in results:
        print(res.line())
    failed = [r.name for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} invariants passed (seed {seed})")
    return EXIT_INVARIANT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlim", description=__doc__.splitlines()[0],
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON scene config (default: two sources at 0 and "
                                        "theta, equal weights, collectors at u = 0, 1)")
        p.add_argument("--delta", type=float, help="parameter shift for purification pairs")
        p.add_argument("--theta", type=float, help="single scaled separation theta*k/z0")

    p = sub.add_parser("fig1", help="Fisher information vs scaled separation",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common(p)
    p.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    p.add_argument("--svg", help="also write a line plot of qfi, cfi_opt, cfi_qr")
    p.add_argument("--points", type=int, default=126, help="grid points")
    p.add_argument("--theta-min", type=float, default=0.05)
    p.add_argument("--theta-max", type=float, default=6.28)
    p.add_argument("--rtol", type=float, help="rank tolerance (default max(m, n) * eps)")
    p.set_defaults(func=cmd_fig1, delta=DEFAULT_DELTA)

    p = sub.add_parser("counterexample", help="QR construction in symmetric vs asymmetric scenes",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common(p)
    p.add_argument("--out", help="optional CSV report path")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("selfcheck", help="run the seeded invariant corpus",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", type=float, help="override every tolerance with this value")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, QlimError) as exc:
        print(f"qlim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
