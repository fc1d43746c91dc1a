"""Command-line workbench.

    xychain ground-sweep --h-lo 0 --h-hi 3 --h-step 0.01 --out out/
    xychain excited-scan --h 1.2 --nb 2 --workers 4
    xychain max-c-sweep  --nb 1 --h-lo 0 --h-hi 2 --h-step 0.05 --n 500
    xychain does --h 1.2 --nb 2 --bins 50
    xychain dis  --h 1.2 --nb 2 --bins 100
    xychain oracle-check --n 8 --h 1.2 --nb-list 1 3 --tol 1e-8

Exit codes: 0 success, 1 configuration error, 2 numerical-integrity failure
(including failed oracle checks), 3 I/O failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .combinatorics import subspace_dimension
from .config import RunConfig, load_config
from .correlators import build_mode_table
from .errors import ConfigError, NumericalIntegrityError
from .oracle import cross_check
from .output import FLOAT_FORMAT, versions, write_csv, write_manifest
from .scanner import RecordCollector, ScanPolicy, max_concurrence, scan_subspace
from .statistics import derivative_series, dis_histogram, does_histogram, ground_sweep, sweep_values

log = logging.getLogger("xychain")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
SUBCOMMANDS = ("ground-sweep", "excited-scan", "max-c-sweep", "does", "dis", "oracle-check")


def _policy(cfg: RunConfig, m: Optional[int] = None) -> ScanPolicy:
    s = cfg.scan
    return ScanPolicy(m=s.nb if m is None else m, budget=s.budget, sample_count=s.sample_count, seed=s.seed,
                      echo_threshold=s.echo_threshold, tol_ent=cfg.stats.tol_ent, workers=cfg.workers)


def _summary_dict(summary) -> dict:
    return {"visited": summary.visited, "exhaustive": summary.exhaustive, "estimated": summary.estimated,
            "E_min": summary.E_min, "E_max": summary.E_max, "C_min": summary.C_min, "C_max": summary.C_max,
            "entangled": summary.entangled, "seed": summary.seed,
            "max_trace_residual": summary.max_trace_residual,
            "max_clamped_radicand": summary.max_clamped_radicand}


def _scan(cfg: RunConfig):
    table = build_mode_table(cfg.params())
    policy = _policy(cfg)
    sink = RecordCollector(policy.m)
    summary = scan_subspace(table, policy, sink)
    return table, policy, summary, sink.records()


def cmd_ground_sweep(cfg: RunConfig, out: Path, manifest: dict) -> None:
    sw = cfg.sweep
    series = ground_sweep(cfg.params(), sw.h_lo, sw.h_hi, sw.h_step)
    h = series["C"].h_values
    cols = {"h": h}
    cols.update({name: s.values for name, s in series.items()})
    write_csv(out / "ground_sweep.csv", cols)
    d = derivative_series(series["C"])
    write_csv(out / "derivative.csv", {"h": d.h_values, "dC_dh": d.values})
    manifest["files"] = {"ground_sweep.csv": {"rows": len(h)}, "derivative.csv": {"rows": len(h)}}


def cmd_excited_scan(cfg: RunConfig, out: Path, manifest: dict) -> None:
    table, policy, summary, rec = _scan(cfg)
    # sort on the energy as written, so states equal at print precision are ordered by rank
    written_E = np.array([float(FLOAT_FORMAT.format(e)) for e in rec.E.tolist()])
    order = np.lexsort((rec.rank, written_E))
    cols = {"rank": rec.rank[order], "E": rec.E[order], "C": rec.C[order]}
    if rec.occ is not None:
        cols["occ_modes"] = [";".join(str(i) for i in row) for row in rec.occ[order].tolist()]
    write_csv(out / "excited_scan.csv", cols)
    manifest["scan"] = _summary_dict(summary)
    manifest["files"] = {"excited_scan.csv": {"rows": len(rec), "estimated": summary.estimated}}


def cmd_max_c_sweep(cfg: RunConfig, out: Path, manifest: dict) -> None:
    sw = cfg.sweep
    hs = sweep_values(sw.h_lo, sw.h_hi, sw.h_step)
    policy = _policy(cfg)
    exhaustive = subspace_dimension(cfg.model.N, policy.m) <= policy.budget
    cmax, occs = [], []
    for h in hs:
        c, occ = max_concurrence(build_mode_table(cfg.params(h=float(h))), policy)
        cmax.append(c)
        occs.append(";".join(str(i) for i in occ))
    write_csv(out / "max_c_sweep.csv", {"h": hs, "C_max": np.array(cmax), "argmax_occ": occs})
    manifest["files"] = {"max_c_sweep.csv": {"rows": len(hs), "estimated": not exhaustive}}


def cmd_does(cfg: RunConfig, out: Path, manifest: dict, bins: Optional[int]) -> None:
    table, policy, summary, rec = _scan(cfg)
    lo, hi = table.energy_bounds(policy.m)
    hist = does_histogram(rec, lo, hi, bins or cfg.stats.bins_energy, table.N, policy.m, policy.tol_ent,
                          estimated=summary.estimated, sample_size=summary.visited)
    edges = hist.edges
    write_csv(out / "does.csv", {
        "bin_lo": edges[:-1], "bin_hi": edges[1:], "bin_center": hist.centers,
        "count_entangled": hist.counts, "count_total": hist.totals, "weight": hist.weights,
        "estimated": [hist.estimated] * hist.bins})
    manifest["scan"] = _summary_dict(summary)
    manifest["files"] = {"does.csv": {"bins": hist.bins, "estimated": hist.estimated}}


def cmd_dis(cfg: RunConfig, out: Path, manifest: dict, bins: Optional[int]) -> None:
    table, policy, summary, rec = _scan(cfg)
    hist = dis_histogram(rec, bins or cfg.stats.bins_concurrence, table.N, policy.m, policy.tol_ent,
                         estimated=summary.estimated, sample_size=summary.visited)
    edges = hist.edges
    write_csv(out / "dis.csv", {
        "bin_lo": edges[:-1], "bin_hi": edges[1:], "count": hist.counts, "weight": hist.weights,
        "estimated": [hist.estimated] * hist.bins})
    manifest["scan"] = _summary_dict(summary)
    manifest["files"] = {"dis.csv": {"bins": hist.bins, "estimated": hist.estimated,
                                     "range": [hist.lo, hist.hi]}}


def cmd_oracle_check(cfg: RunConfig, out: Path, manifest: dict) -> bool:
    o = cfg.oracle
    params = cfg.params(N=o.N)
    report = cross_check(params, o.nb_list, o.tol, rule=o.rule)

    def finite(x):
        return x if np.isfinite(x) else None

    write_csv(out / "oracle_report.csv", {
        "check_kind": [c.kind for c in report.checks], "label": [c.label for c in report.checks],
        "analytic": [finite(c.analytic) for c in report.checks],
        "oracle": [finite(c.oracle) for c in report.checks],
        "residual": [finite(c.residual) for c in report.checks],
        "status": [c.status for c in report.checks]})
    manifest["oracle"] = {"matched_energies": report.matched_energies,
                          "max_energy_residual": report.max_energy_residual,
                          "failures": len(report.failures), "skipped": len(report.skipped)}
    manifest["files"] = {"oracle_report.csv": {"rows": len(report.checks)}}
    return report.passed


def run(cfg: RunConfig, subcommand: str, bins: Optional[int] = None) -> int:
    if subcommand not in SUBCOMMANDS:
        log.error("unknown subcommand %r", subcommand)
        return EXIT_CONFIG
    out = Path(cfg.output_dir)
    manifest = {"subcommand": subcommand, "config": cfg.to_dict(), "versions": versions()}
    t0 = time.perf_counter()
    ok = True
    try:
        out.mkdir(parents=True, exist_ok=True)
        if subcommand == "ground-sweep":
            cmd_ground_sweep(cfg, out, manifest)
        elif subcommand == "excited-scan":
            cmd_excited_scan(cfg, out, manifest)
        elif subcommand == "max-c-sweep":
            cmd_max_c_sweep(cfg, out, manifest)
        elif subcommand == "does":
            cmd_does(cfg, out, manifest, bins)
        elif subcommand == "dis":
            cmd_dis(cfg, out, manifest, bins)
        else:
            ok = cmd_oracle_check(cfg, out, manifest)
        manifest["timings"] = {"total_seconds": time.perf_counter() - t0}
        write_manifest(out / "run_manifest.json", manifest)
    except (ConfigError, ValueError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except NumericalIntegrityError as exc:
        log.error("numerical integrity failure: %s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("I/O failure: %s", exc)
        return EXIT_IO
    if not ok:
        log.error("oracle cross-check reported failures; see %s", out / "oracle_report.csv")
        return EXIT_NUMERIC
    log.info("wrote %s", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="JSON run configuration")
    g.add_argument("--n", type=int, help="chain length (for oracle-check: the ED ring size)")
    g.add_argument("--delta", type=float, help="anisotropy")
    g.add_argument("--grid", choices=["periodic", "antiperiodic"], help="fermion momentum grid")
    g.add_argument("--seed", type=int, help="sampling seed")
    g.add_argument("--budget", type=int, help="largest subspace enumerated exhaustively")
    g.add_argument("--sample-count", type=int, help="states sampled when over budget")
    g.add_argument("--workers", type=int, help="worker processes for scans")
    g.add_argument("--out", metavar="DIR", help="output directory")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="xychain", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def sweep_args(p):
        p.add_argument("--h-lo", type=float)
        p.add_argument("--h-hi", type=float)
        p.add_argument("--h-step", type=float)

    p = sub.add_parser("ground-sweep", parents=[common], help="vacuum concurrence versus field")
    sweep_args(p)
    p = sub.add_parser("excited-scan", parents=[common], help="every state of one subspace")
    p.add_argument("--h", type=float)
    p.add_argument("--nb", type=int)
    p = sub.add_parser("max-c-sweep", parents=[common], help="largest concurrence in a subspace versus field")
    p.add_argument("--nb", type=int)
    sweep_args(p)
    for name, what in (("does", "density of entangled states"), ("dis", "distribution of concurrence")):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("--bins", type=int)
        p.add_argument("--h", type=float)
        p.add_argument("--nb", type=int)
    p = sub.add_parser("oracle-check", parents=[common], help="compare with spin-basis exact diagonalisation")
    p.add_argument("--h", type=float)
    p.add_argument("--nb-list", type=int, nargs="+")
    p.add_argument("--tol", type=float)
    p.add_argument("--rule", choices=["odd-periodic", "physical"])
    return parser


def overrides_from_args(args: argparse.Namespace) -> dict:
    a = vars(args)
    ov = {
        "model.delta": a.get("delta"), "model.grid": a.get("grid"), "model.h": a.get("h"),
        "scan.seed": a.get("seed"), "scan.budget": a.get("budget"), "scan.sample_count": a.get("sample_count"),
        "scan.nb": a.get("nb"), "workers": a.get("workers"), "output_dir": a.get("out"),
        "sweep.h_lo": a.get("h_lo"), "sweep.h_hi": a.get("h_hi"), "sweep.h_step": a.get("h_step"),
        "oracle.nb_list": a.get("nb_list"), "oracle.tol": a.get("tol"), "oracle.rule": a.get("rule"),
    }
    ov["oracle.N" if args.subcommand == "oracle-check" else "model.N"] = a.get("n")
    return ov


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, overrides_from_args(args))
    except ConfigError as exc:
        print(f"xychain: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, args.subcommand, bins=getattr(args, "bins", None))


if __name__ == "__main__":
    raise SystemExit(main())
