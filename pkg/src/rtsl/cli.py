"""Command-line front end.

Every subcommand is driven entirely by its flags and --seed, writes
delimited output plus a JSON metadata sidecar, and renders a figure next
to the table on report paths.  Exit codes: 0 success, 1 failed check
(the offending invariant is named on stderr), 2 usage error.
"""

from __future__ import annotations

import json
import sys
import time
import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .cocycle import furstenberg_witness
from .decomposition import block_matrix, multiplicities, spectral_multiset_check, verify_block_action
from .experiments import (
    decay_rate_fit,
    localization_report,
    spectrum_histogram,
    tree_decay_check,
    weyl_residual,
    weyl_residual_bound,
)
from .jacobi import eigenvalues_in_window, eigenvector_inverse_iteration
from .lyapunov import lyapunov_curve
from .plotting import curve_figure, decay_figure, emit_svg, histogram_figure, save_figure
from .randomness import PRNG_ID, parse_dist
from .tree import build_tree, random_tree


@dataclass(frozen=True)
class RunConfig:
    """Subcommand name plus the flag values that fully determine a run."""

    subcommand: str
    options: dict

    def to_json(self):
        return json.dumps({"subcommand": self.subcommand, "options": self.options}, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(subcommand=data["subcommand"], options=data["options"])


@dataclass(frozen=True)
class RunMetadata:
    config: RunConfig
    version: str
    wall_time_s: float
    prng: str

    def as_dict(self):
        return {
            "config": {"subcommand": self.config.subcommand, "options": self.config.options},
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "prng": self.prng,
        }


def _options(args):
    out = {}
    for key, value in vars(args).items():
        if key in ("func", "subcommand"):
            continue
        if isinstance(value, Path):
            value = str(value)
        out[key] = value
    return out


def _write_meta(path, args, started):
    config = RunConfig(args.subcommand, _options(args))
    meta = RunMetadata(
        config=config,
        version=__version__,
        wall_time_s=time.time() - started,
        prng=PRNG_ID,
    )
    Path(str(path) + ".meta.json").write_text(
        json.dumps(meta.as_dict(), indent=2, sort_keys=True) + "\n"
    )


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _read_csv(path):
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table")
    header = lines[0].split(",")
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    return header, rows


def _figure_path(out):
    fig = Path(out).with_suffix(".svg")
    if str(fig) == str(out):
        return None
    return fig


def _parse_floats(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_ints(text):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _cmd_lyapunov(args, started):
    dist = parse_dist(args.dist)
    if args.energies is not None:
        grid = np.asarray(_parse_floats(args.energies), dtype=float)
    else:
        grid = np.linspace(args.emin, args.emax, args.steps)
    estimates = lyapunov_curve(dist, grid, args.n, args.samples, args.seed)
    rows = [(e.energy, e.mean, e.std_err, e.n, e.samples) for e in estimates]
    _write_csv(args.out, ["energy", "lyapunov", "std_err", "n", "samples"], rows)
    _write_meta(args.out, args, started)
    fig_path = None if args.no_figure else _figure_path(args.out)
    if fig_path is not None:
        fig = curve_figure([r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows])
        save_figure(fig, fig_path)
        _write_meta(fig_path, args, started)
    print(f"wrote {args.out} ({len(rows)} energies, n={args.n}, samples={args.samples})")
    return 0


def _cmd_spectrum(args, started):
    dist = parse_dist(args.dist)
    report = spectrum_histogram(dist, args.size, args.seed, args.bins)
    edges = report["bin_edges"]
    counts = report["counts"]
    rows = [(edges[i], edges[i + 1], int(counts[i])) for i in range(len(counts))]
    _write_csv(args.out, ["bin_left", "bin_right", "count"], rows)
    _write_meta(args.out, args, started)
    fig_path = None if args.no_figure else _figure_path(args.out)
    if fig_path is not None:
        fig = histogram_figure(edges, counts)
        save_figure(fig, fig_path)
        _write_meta(fig_path, args, started)
    print(
        f"wrote {args.out}: eigenvalues in [{report['min_eigenvalue']:.6f}, "
        f"{report['max_eigenvalue']:.6f}], empty bin fraction {report['empty_bin_fraction']:.3f}"
    )
    return 0


def _cmd_decay(args, started):
    dist = parse_dist(args.dist)
    window = _parse_floats(args.window)
    if len(window) != 2:
        raise ValueError("window must be two comma-separated energies")
    reports = localization_report(dist, args.size, args.seed, (window[0], window[1]))
    rows = [(r.eigenvalue, r.rate, r.reference, r.ratio, r.residual) for r in reports]
    _write_csv(args.out, ["eigenvalue", "fitted_rate", "reference_L", "ratio", "fit_residual"], rows)
    _write_meta(args.out, args, started)
    if rows and not args.no_figure:
        fig_path = _figure_path(args.out)
        if fig_path is not None:
            fig = decay_figure([r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows])
            save_figure(fig, fig_path)
            _write_meta(fig_path, args, started)
    if rows:
        median = float(np.median([r[3] for r in rows]))
        print(f"wrote {args.out} ({len(rows)} eigenvectors, median fitted/reference ratio {median:.3f})")
    else:
        print(f"wrote {args.out} (no eigenvalues in window)")
    return 0


def _cmd_weyl(args, started):
    runs = _parse_ints(args.runs)
    failed = None
    print("     R        residual           bound")
    for R in runs:
        omega = np.full(args.start + R + 1, args.dmax, dtype=np.int64)
        residual = weyl_residual(omega, args.energy, args.start, R, d_mu=args.dmax)
        bound = weyl_residual_bound(args.energy, R, args.dmax)
        print(f"{R:>6d}  {residual:.8e}  {bound:.8e}")
        if residual > bound:
            failed = R
    if failed is not None:
        print(f"error: residual bound violated at R={failed}", file=sys.stderr)
        return 1
    return 0


def _cmd_decompose_verify(args, started):
    branching = _parse_ints(args.branching)
    tree = build_tree(branching, args.depth)
    table = multiplicities(tree)
    print("multiplicities: " + ",".join(str(b) for b in table.beta))
    lhs = table.block_dimension_sum(tree.depth)
    rhs = tree.vertex_count
    print(f"dimension identity: {lhs} = {rhs}")
    if lhs != rhs:
        print("error: dimension identity violated", file=sys.stderr)
        return 1
    worst = 0.0
    for N in range(tree.depth + 1):
        for k in range(1, table[N] + 1):
            result = verify_block_action(tree, N, k, tol=args.tol)
            worst = max(worst, result["max_residual"])
            if not result["passed"]:
                print(f"error: block action residual {result['max_residual']:.3e} at N={N}, k={k}", file=sys.stderr)
                return 1
    print(f"max block action residual: {worst:.3e} (tol {args.tol:g})")
    spectral = spectral_multiset_check(tree, tol=args.tol)
    print(f"spectral multiset discrepancy: {spectral['max_discrepancy']:.3e} (tol {args.tol:g})")
    if not spectral["passed"]:
        print("error: spectral multiset mismatch", file=sys.stderr)
        return 1
    print("PASS")
    return 0


def _cmd_tree_decay(args, started):
    if args.branching is not None:
        tree = build_tree(_parse_ints(args.branching), args.depth)
    else:
        dist = parse_dist(args.dist)
        tree = random_tree(dist, args.depth, args.branching_seed)
    T = block_matrix(tree, args.N)
    lo, hi = args.energy - args.halfwidth, args.energy + args.halfwidth
    eigenvalues = eigenvalues_in_window(T, lo, hi)
    if eigenvalues.size == 0:
        print(f"error: no truncation eigenvalues within {args.halfwidth:g} of {args.energy:g}", file=sys.stderr)
        return 1
    lam = float(eigenvalues[np.argmin(np.abs(eigenvalues - args.energy))])
    u = eigenvector_inverse_iteration(T, lam)
    half = decay_rate_fit(u)
    report = tree_decay_check(tree, args.N, args.k, u, half.rate, eps=args.eps)
    print(f"eigenvalue: {lam:.8f}")
    print(f"half-line rate: {half.rate:.6f} (fit residual {half.residual:.3e})")
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
        return 1
    print(f"tree rate: {report['tree_rate']:.6f} (fit residual {report['tree_fit_residual']:.3e})")
    print(f"required lift: >= half-line rate + {np.log(2.0) / 2.0:.6f} - {args.eps:g} = {report['bound']:.6f}")
    if not report["passed"]:
        print("error: tree decay rate below lifted bound", file=sys.stderr)
        return 1
    print("PASS")
    return 0


def _cmd_furstenberg(args, started):
    power = furstenberg_witness(args.alpha, args.beta, args.energy, args.n)
    norm = max(abs(power[0, 0]), abs(power[1, 1]))
    print(f"alternating product after {args.n} pair steps:")
    print(f"  diag({power[0, 0]:.10f}, {power[1, 1]:.10f})")
    print(f"  norm {norm:.10f}, closed form ({max(args.alpha, args.beta) / min(args.alpha, args.beta):g})^(n/2)")
    print("PASS")
    return 0


_PLOT_SCHEMAS = {
    ("energy", "lyapunov", "std_err", "n", "samples"): (0, 1, 2, "energy", "lyapunov"),
    ("eigenvalue", "fitted_rate", "reference_L", "ratio", "fit_residual"): (0, 1, None, "eigenvalue", "fitted_rate"),
}


def _cmd_plot(args, started):
    header, data = _read_csv(args.infile)
    key = tuple(header)
    if key == ("bin_left", "bin_right", "count"):
        rows = [((r[0] + r[1]) / 2.0, r[2]) for r in data]
        xlabel, ylabel = "energy", "count"
    elif key in _PLOT_SCHEMAS:
        xi, yi, ei, xlabel, ylabel = _PLOT_SCHEMAS[key]
        if ei is None:
            rows = [(r[xi], r[yi]) for r in data]
        else:
            rows = [(r[xi], r[yi], r[ei]) for r in data]
    else:
        if len(header) < 2:
            raise ValueError("table needs at least two columns to plot")
        rows = [(r[0], r[1]) for r in data]
        xlabel, ylabel = header[0], header[1]
    svg = emit_svg(rows, style={"xlabel": xlabel, "ylabel": ylabel})
    Path(args.out).write_text(svg)
    _write_meta(args.out, args, started)
    print(f"wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rtsl",
        description="Spectral experiments for random half-line operators and radial trees.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("lyapunov", help="Monte Carlo exponent curve over an energy grid")
    p.add_argument("--dist", required=True, help="branching distribution, e.g. 2:0.5,3:0.5")
    p.add_argument("--emin", type=float, default=-3.6)
    p.add_argument("--emax", type=float, default=3.6)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--energies", default=None, help="explicit comma-separated grid (overrides emin/emax/steps)")
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=_cmd_lyapunov)

    p = sub.add_parser("spectrum", help="eigenvalue histogram of a random truncation")
    p.add_argument("--dist", required=True)
    p.add_argument("--size", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("decay", help="fit eigenvector decay rates against the exponent")
    p.add_argument("--dist", required=True)
    p.add_argument("--size", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", required=True, help="energy window a,b")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=_cmd_decay)

    p = sub.add_parser("weyl", help="trial-vector residuals against the band bound")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--runs", default="16,64,256,1024", help="comma-separated run lengths")
    p.add_argument("--start", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("decompose-verify", help="check the block decomposition of a finite tree")
    p.add_argument("--branching", required=True, help="comma-separated branching numbers, e.g. 3,2,3")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_decompose_verify)

    p = sub.add_parser("tree-decay", help="compare tree decay against the half-line rate")
    p.add_argument("--branching", default=None, help="explicit branching numbers (otherwise sampled)")
    p.add_argument("--dist", default="2:0.5,3:0.5")
    p.add_argument("--branching-seed", type=int, default=1)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--N", type=int, required=True, help="generation the block starts at")
    p.add_argument("--k", type=int, required=True, help="copy index within the block")
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--halfwidth", type=float, default=0.25)
    p.add_argument("--eps", type=float, default=0.05)
    p.set_defaults(func=_cmd_tree_decay)

    p = sub.add_parser("furstenberg", help="two-atom alternating product witness")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--energy", type=float, default=1.0)
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(func=_cmd_furstenberg)

    p = sub.add_parser("plot", help="render a written table as a standalone SVG chart")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)

    return parser


def run_command(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    started = time.time()
    try:
        return args.func(args, started)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(run_command(sys.argv[1:]))
