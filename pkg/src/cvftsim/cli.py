"""Command-line entry point: figure tables, thresholds, VLF and Monte Carlo.

Every subcommand writes CSV: ``#``-prefixed metadata lines, a header row,
then data.  Exit codes: 0 success, 2 argument/config errors, 3 numerical
failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile

from . import __version__, cluster, ftcode, montecarlo
from .config import ConfigError, load_config
from .ftcode import NumericalError
from .gkp import Convention, NoiseKind, NoiseModel, noise_variances

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

FIGURE_HELP = {
    "fig3": "nullifier variances vs squeezing. Columns: squeezing_db, r, var_x1, var_p1, closed_form, vlf_bound, vlf_pass",
    "fig5c": "squeezing budget. Columns: resource_db, r, cluster_db, residual_x_db, residual_p_db, nx, np",
    "fig6c": "square-lattice GKP error. Columns: squeezing_db, sigma_x2, sigma_p2, p_succ, p_err",
    "fig7a": "Pe per repetition number, gate-noise model. Columns: squeezing_db, model, n, R, pX, pZ, Pe, saturated",
    "fig7b": "Pe per repetition number, resource-only model. Columns: as fig7a",
    "fig7c": "n=101 for both models next to the bare GKP error. Columns: as fig7a plus gkp_p_err",
    "sweep": "Pe on a custom grid (--model, --n, --aspect-ratio). Columns: as fig7a",
}


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def render_csv(cfg, columns, rows, extra_meta=()) -> str:
    buf = io.StringIO()
    buf.write(f"# cvftsim {__version__} | vacuum variance 1/2 | {cfg.subcommand} | {cfg.provenance()}\n")
    for line in extra_meta:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_output(path: str, text: str) -> None:
    """Write ``text`` to ``path`` atomically, or to stdout for ``-``."""
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cvftsim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _grid(cfg):
    return ftcode.db_grid(*cfg.squeezing_db)


def _single_db(cfg) -> float:
    return cfg.squeezing_db[0]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_figure(cfg, args) -> int:
    fig = "custom" if cfg.subcommand == "sweep" else cfg.subcommand
    table = ftcode.sweep(
        fig,
        _grid(cfg),
        n_list=cfg.n,
        R=cfg.aspect_ratio,
        model=cfg.model if fig in ("custom", "fig6c") else None,
        lattice_N=cfg.lattice_n,
        lattice_K=cfg.lattice_k,
    )
    if "saturated" in table.columns and any(table.column("saturated")):
        print("warning: aspect-ratio optimum saturated at R_max for some rows", file=sys.stderr)
    write_output(cfg.output, render_csv(cfg, table.columns, table.rows))
    return EXIT_OK


def cmd_threshold(cfg, args) -> int:
    conventions = list(Convention) if args.sensitivity else [Convention(args.convention)]
    kinds = list(NoiseKind) if args.sensitivity else [NoiseKind(cfg.model)]
    rows = []
    for kind in kinds:
        for conv in conventions:
            res = ftcode.threshold_db(kind, conv)
            rows.append((kind.value, conv.value, res.squeezing_db, res.R_star, res.crossings))
    if not args.sensitivity:
        print(f"{rows[0][2]:.2f}")
        if cfg.output != "-":
            write_output(cfg.output, render_csv(cfg, ("model", "convention", "threshold_db", "R_star", "crossings"), rows))
    else:
        write_output(cfg.output, render_csv(cfg, ("model", "convention", "threshold_db", "R_star", "crossings"), rows))
    return EXIT_OK


def cmd_vlf(cfg, args) -> int:
    db = _single_db(cfg)
    spec = cluster.LatticeSpec.from_db(db, N=cfg.lattice_n, K=cfg.lattice_k)
    state = cluster.build_lattice(spec)
    bins = cluster.interior_bins(spec)
    if args.bipartitions:
        cols = ("bin", "s1", "s2", "lhs", "rhs", "margin", "pair")
        rows = []
        for k in bins:
            rep = cluster.vlf_check(state, k, spec.N, spec=spec)
            for m in rep.margins:
                s1 = " ".join(sorted(str(x) for x in m.bipartition.s1))
                s2 = " ".join(sorted(str(x) for x in m.bipartition.s2))
                rows.append((k, s1, s2, m.lhs, m.rhs, m.margin, m.pair))
    else:
        cols = ("bin", "var_x1", "var_p1", "bound", "margin", "pass")
        rows = []
        for k in bins:
            rep = cluster.vlf_check(state, k, spec.N, spec=spec, bipartitions=False)
            rows.append((k, rep.var_x, rep.var_p, rep.bound, rep.margin, "pass" if rep.passed else "fail"))
    write_output(cfg.output, render_csv(cfg, cols, rows))
    return EXIT_OK


def cmd_mc(cfg, args) -> int:
    db = _single_db(cfg)
    n = cfg.n[0]
    model = NoiseKind(cfg.model)
    R = cfg.aspect_ratio
    if R is None:
        R = 1.0 if n == 1 else ftcode.optimize_R(n, model, db).R
    noise = noise_variances(NoiseModel.from_db(model, db))
    modes = ["independent", "joint"] if cfg.mode == "both" else [cfg.mode]
    analytic = montecarlo.analytic_pe(n, R, noise.sigma_x, noise.sigma_p)
    rows = []
    for mode in modes:
        tc = montecarlo.TrialConfig(n, R, noise.sigma_x, noise.sigma_p, cfg.trials, cfg.seed, mode)
        est = montecarlo.estimate_pe(tc, backend=args.backend)
        rows.append(
            (n, R, db, model.value, mode, cfg.trials, cfg.seed, est.failures, est.pe, est.se, analytic, montecarlo.binomial_z(est, analytic))
        )
    cols = ("n", "R", "squeezing_db", "model", "mode", "trials", "seed", "failures", "pe_hat", "se", "pe_analytic", "z")
    write_output(cfg.output, render_csv(cfg, cols, rows))
    return EXIT_OK


COMMANDS = {name: cmd_figure for name in FIGURE_HELP}
COMMANDS.update(threshold=cmd_threshold, vlf=cmd_vlf, mc=cmd_mc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run options (override --config)")
    g.add_argument("--config", help="key = value file; flags take precedence")
    g.add_argument("-o", "--output", help="CSV path ('-' for stdout, the default)")
    g.add_argument("--squeezing-db", help="start:stop:step in dB (inclusive) or a single value; default 2:20:0.1")
    g.add_argument("--model", help="gate-noise | resource-only")
    g.add_argument("--n", help="comma-separated odd repetition numbers")
    g.add_argument("--aspect-ratio", help="GKP aspect ratio R, or 'auto' to optimise")
    g.add_argument("--trials", help="Monte Carlo trials")
    g.add_argument("--seed", help="64-bit Monte Carlo seed")
    g.add_argument("--mode", help="Monte Carlo mode: independent | joint | both")
    g.add_argument("--lattice-n", help="long delay N of the cluster lattice")
    g.add_argument("--lattice-k", help="window length K in time bins")

    parser = argparse.ArgumentParser(prog="cvftsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cvftsim {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, text in FIGURE_HELP.items():
        sub.add_parser(name, parents=[common], help=text.split(".")[0], description=text)
    p = sub.add_parser("threshold", parents=[common], help="squeezing threshold (n=1 vs n=101 crossing)")
    p.add_argument("--convention", default="half-vacuum", choices=[c.value for c in Convention])
    p.add_argument("--sensitivity", action="store_true", help="table over both models and conventions")
    p = sub.add_parser(
        "vlf", parents=[common], help="full-inseparability check",
        description="Columns: bin, var_x1, var_p1, bound, margin, pass (or per-bipartition margins)",
    )
    p.add_argument("--bipartitions", action="store_true", help="report all 31 bipartition margins")
    p = sub.add_parser(
        "mc", parents=[common], help="Monte Carlo estimate of Pe",
        description="Columns: n, R, squeezing_db, model, mode, trials, seed, failures, pe_hat, se, pe_analytic, z",
    )
    p.add_argument("--backend", choices=["compiled", "python"], default=None)
    return parser


FLAG_KEYS = ("output", "squeezing_db", "model", "n", "aspect_ratio", "trials", "seed", "mode", "lattice_n", "lattice_k")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config, {k: getattr(args, k) for k in FLAG_KEYS}, args.subcommand)
        return COMMANDS[args.subcommand](cfg, args)
    except ConfigError as exc:
        print(f"cvftsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, cluster.LatticeError) as exc:
        print(f"cvftsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"cvftsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
