"""Command-line entry point: ``pfqi {analyze,scan,plan,simulate}``.

Exit codes: 0 success, 2 config error, 3 numeric/domain error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path

import numpy as np

from pfqi import io
from pfqi.bounds import UNBOUNDED, BoundSeries, PlanInput, analyze, classify_alignment, plan
from pfqi.config import Config, read_config
from pfqi.constants import C
from pfqi.errors import ConfigError, DomainError
from pfqi.fringes import FringeModel, InfluenceHypothesis, detect_collapse, simulate
from pfqi.scan import default_grid, scan

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


@dataclass
class RunReport:
    record: object
    series: BoundSeries
    theta0: float
    phi0: float
    frame_speed: float
    alignment: str
    crossings_utc: list
    bound: float
    ceiling: float
    paths: dict = field(default_factory=dict)

    def lines(self):
        rec = self.record
        b = rec.baseline
        out = [
            "# analyze report",
            f"stations: {b.a.name} -> {b.b.name}, d_AB = {b.d_ab:.6g} m",
            f"window: {io.iso_utc(rec.start_utc)} .. {io.iso_utc(rec.end_utc)}",
            f"alignment c*tau: {C * rec.alignment.tau_i * 1e3:.4g} mm -> "
            f"{C * rec.alignment.tau_f * 1e3:.4g} mm, delta_tau = {rec.alignment.delta_tau:.4g} s",
            f"frame: {rec.frame.name} ({rec.frame.speed / 1e3:.6g} km/s)",
            f"theta0 = {self.theta0:.6f} rad",
            f"phi0 = {self.phi0:.6f} rad",
            f"|v_lab rel frame| at start = {self.frame_speed / 1e3:.6g} km/s",
            f"alignment class: {self.alignment}",
            f"crossings: {', '.join(self.crossings_utc) if self.crossings_utc else 'none'}",
            f"fringe_period = {rec.fringe_period:g} s",
            f"bound = {self.bound / C:.6g} c  ({self.bound!r} m/s)",
            f"ceiling = {self.ceiling / C:.6g} c",
        ]
        out += [f"output {name}: {p}" for name, p in self.paths.items()]
        return out


def run_analyze(cfg: Config, out_dir=None, step=None) -> RunReport:
    rec = cfg.record
    step = step or cfg.step
    series = analyze(rec, step)
    cls = classify_alignment(float(np.max(np.abs(series.r))), float(np.max(np.abs(series.beta_x))))
    report = RunReport(
        record=rec,
        series=series,
        theta0=rec.theta0,
        phi0=rec.baseline.phi0,
        frame_speed=rec.lab_velocity(0.0).speed,
        alignment=cls.quality if cls.attainable is None else f"{cls.quality} (attainable ~ {cls.attainable / C:.4g} c)",
        crossings_utc=[io.iso_utc(rec.start_utc + timedelta(seconds=t)) for t in series.crossings],
        bound=series.bound,
        ceiling=series.ceiling,
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        report.paths["series"] = io.write_series_csv(out_dir / "series.csv", series, rec.start_utc)
        report.paths["report"] = out_dir / "analyze_report.txt"
        io.write_text(report.paths["report"], report.lines())
    return report


def run_scan(cfg: Config, out_dir=None, step=None, grid=None, workers=1):
    rec = cfg.record
    if grid is None:
        grid = default_grid(cfg.scan.speeds, cfg.scan.n_dec, cfg.scan.n_ra)
    rows = scan(rec, grid, step or cfg.step, workers=workers)
    path = None
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        path = io.write_scan_csv(Path(out_dir) / "scan.csv", rows)
    return rows, path


def plan_input(cfg: Config) -> PlanInput:
    rec = cfg.record
    p = cfg.plan
    return PlanInput(
        d_ab=p.distance or rec.baseline.d_ab,
        achievable_alignment=p.achievable_alignment
        or C * max(abs(rec.alignment.tau_i), abs(rec.alignment.tau_f)),
        delta_tau=p.delta_tau or rec.alignment.delta_tau,
        fringe_period=p.fringe_period or rec.fringe_period,
        frame_speed=rec.lab_velocity(0.0).speed if p.frame_speed is None else p.frame_speed,
        beta_rate=p.beta_rate if p.beta_rate is not None else (
            rec.max_beta_rate() if p.frame_speed is None else None),
        omega_d=rec.consts.omega_d,
    )


def run_plan(cfg: Config, out_dir=None):
    inp = plan_input(cfg)
    res = plan(inp)
    lines = [
        "# plan report",
        f"d_AB = {inp.d_ab:.6g} m, achievable c*tau = {inp.achievable_alignment:.4g} m, "
        f"delta_tau = {inp.delta_tau:.4g} s",
        f"frame speed = {inp.frame_speed / 1e3:.6g} km/s",
        f"required |r| below {res.required_r:.4g} (achieved {res.achieved_r:.4g}): "
        f"{'good' if res.good_alignment else 'bad'} alignment",
        f"localization ceiling = {io.over_c(res.ceiling)}",
        f"rotation-limited bound at fringe period {inp.fringe_period:g} s = "
        f"{io.over_c(res.rotation_limited_bound)}",
        f"attainable bound = {io.over_c(res.attainable_bound)}",
    ]
    if res.required_fringe_time is UNBOUNDED:
        lines.append("simultaneity unreachable: frame speed is zero, no fringe time requirement")
    else:
        lines.append(f"fringe time to reach the ceiling = {res.required_fringe_time:.4g} s")
    path = None
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        path = io.write_text(Path(out_dir) / "plan_report.txt", lines)
    return res, lines, path


def run_simulate(cfg: Config, out_dir=None, seed=None):
    rec = cfg.record
    sim = cfg.simulation
    model = FringeModel(sim.base_rate, sim.visibility, rec.fringe_period, sim.bin_width,
                        sim.phase, sim.v_collapse)
    hyp = InfluenceHypothesis(sim.v_hyp)
    counts = simulate(rec, model, hyp, seed if seed is not None else sim.seed)
    report = detect_collapse(counts, model)

    def utc(t):
        return io.iso_utc(rec.start_utc + timedelta(seconds=t))

    lines = [
        "# simulate report",
        f"seed = {counts.seed}",
        f"v_hyp = {io.over_c(sim.v_hyp)}",
        f"bins = {len(counts.counts)} x {model.bin_width:g} s, V0 = {model.visibility_v0:g}",
        "injected collapse: "
        + (", ".join(f"{utc(a)} .. {utc(b)}" for a, b in counts.injected_intervals()) or "none"),
        f"collapsed = {report.collapsed}",
        "collapse interval: "
        + (f"{utc(report.collapse_interval[0])} .. {utc(report.collapse_interval[1])}"
           if report.collapse_interval else "none"),
        f"flagged windows = {len(report.flagged)} of {len(report.windows)}",
        "min window visibility = "
        + f"{min(w[2] for w in report.windows):.4f}",
    ]
    paths = {}
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        paths["counts"] = io.write_counts_csv(Path(out_dir) / "counts.csv", counts)
        paths["report"] = io.write_text(Path(out_dir) / "collapse_report.txt", lines)
    return counts, report, lines, paths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfqi", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("analyze", "bound series and lower bound for one frame"),
                        ("scan", "bound map over a grid of candidate frames"),
                        ("plan", "requirements for a future experiment"),
                        ("simulate", "synthetic fringes and collapse detection")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out-dir", type=Path, default=Path("."))
        p.add_argument("--step", type=float, default=None, help="sampling step (s)")
        p.add_argument("--seed", type=int, default=None)
        if name == "scan":
            p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "analyze":
            lines = run_analyze(cfg, args.out_dir, args.step).lines()
        elif args.command == "scan":
            rows, path = run_scan(cfg, args.out_dir, args.step, workers=args.workers)
            failed = sum(1 for r in rows if r.error)
            lines = [f"scanned {len(rows)} cells ({failed} failed)", f"output scan: {path}"]
        elif args.command == "plan":
            lines = run_plan(cfg, args.out_dir)[1]
        else:
            lines = run_simulate(cfg, args.out_dir, args.seed)[2]
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print("\n".join(lines))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
