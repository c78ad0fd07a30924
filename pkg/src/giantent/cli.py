"""Command-line front end.

    giantent simulate <config>      trajectory CSV
    giantent sweep <config>         long-format sweep CSV
    giantent paths <config>         propagation-path table / CSV
    giantent verify                 oracle check matrix (exit 2 on failure)
    giantent preset <name>          reproduce a figure's data grid
"""
from __future__ import annotations

import argparse
import csv
import os
import shutil
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, load
from .dde_model import build_equations, canonicalize, path_report
from .integrator import steady_state
from .sweep import run, run_sweep

OUT_ENV = "GIANTENT_OUT"
DEFAULT_OUT = "giantent_out"

PRESETS = {
    "fig3a": ["fig3a"],
    "fig3b": ["fig3b"],
    "fig3c": ["fig3c"],
    "fig3d": ["fig3d"],
    "fig4": ["fig4a", "fig4b"],
    "fig5": ["fig5a", "fig5c", "fig5e"],
    "fig7": ["fig7a", "fig7b", "fig7c", "fig7d"],
    "fig8": ["fig8a", "fig8b", "fig8c", "fig8d", "fig8d_steady"],
}

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


def fmt(x: float) -> str:
    s = f"{float(x):.9g}"
    return "0" if s == "-0" else s


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="", encoding="utf-8"), True


def write_trajectory(fh, traj, gamma: float = 1.0):
    w = _writer(fh)
    w.writerow(["t", "re_ca", "im_ca", "re_cb", "im_cb", "pop_a", "pop_b", "concurrence"])
    conc = traj.concurrence()
    pops = traj.populations()
    for t, (ca, cb), (pa, pb), c in zip(traj.times, traj.amps, pops, conc):
        w.writerow([fmt(t / gamma), fmt(ca.real), fmt(ca.imag), fmt(cb.real), fmt(cb.imag),
                    fmt(pa), fmt(pb), fmt(c)])


def write_sweep(fh, result):
    w = _writer(fh)
    w.writerow(list(result.axis_names) + ["value"])
    for row in result.rows:
        w.writerow([fmt(v) for v in row])


def write_paths(fh, report):
    w = _writer(fh)
    w.writerow(["source", "target", "delay", "re_coeff", "im_coeff", "status"])
    for e in report.entries:
        w.writerow([e.source, e.target, fmt(e.delay), fmt(e.coefficient.real),
                    fmt(e.coefficient.imag), e.status])


def format_path_table(report) -> str:
    lines = [f"{'path':<8}{'delay':>12}{'re(coeff)':>14}{'im(coeff)':>14}  status"]
    for e in report.entries:
        lines.append(f"{e.source}->{e.target:<5}{e.delay:>12.6g}{e.coefficient.real:>14.6g}"
                     f"{e.coefficient.imag:>14.6g}  {e.status}")
    n_act = len(report.active)
    lines.append(f"{n_act} active, {len(report.entries) - n_act} suppressed")
    return "\n".join(lines)


def cmd_simulate(args) -> int:
    cfg = load(args.config)
    if cfg.axes:
        raise ConfigError(f"{args.config}: has sweep axes; use the sweep subcommand")
    traj = run(cfg)
    fh, close = _open_out(args.out)
    try:
        write_trajectory(fh, traj, args.gamma)
    finally:
        if close:
            fh.close()
    if traj.times[-1] >= cfg.window:
        ss = steady_state(traj, cfg.window)
        print(f"steady_state value={fmt(ss.value)} converged={str(ss.converged).lower()}", file=sys.stderr)
    else:
        print(f"final concurrence={fmt(traj.concurrence()[-1])} (run shorter than steady window)",
              file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load(args.config)
    result = run_sweep(cfg, jobs=args.jobs)
    fh, close = _open_out(args.out)
    try:
        write_sweep(fh, result)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_paths(args) -> int:
    cfg = load(args.config)
    layout, _ = cfg.resolved()
    raw = build_equations(layout)
    report = path_report(raw, canonicalize(raw))
    table_fh = sys.stderr if args.csv == "-" else sys.stdout
    print(f"topology: {layout.topology}", file=table_fh)
    print(format_path_table(report), file=table_fh)
    if args.csv:
        fh, close = _open_out(args.csv)
        try:
            write_paths(fh, report)
        finally:
            if close:
                fh.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    try:
        results = run_checks(only=args.only, tol=args.tol)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    fh, close = _open_out(args.out)
    try:
        w = _writer(fh)
        w.writerow(["check", "family", "kind", "value", "threshold", "status"])
        for r in results:
            w.writerow([r.name, r.family, r.kind, fmt(r.value), fmt(r.threshold),
                        "pass" if r.passed else "fail"])
    finally:
        if close:
            fh.close()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def preset_files(name: str) -> list[Path]:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    root = resources.files("giantent") / "presets"
    return [Path(str(root / f"{panel}.toml")) for panel in PRESETS[name]]


def cmd_preset(args) -> int:
    out = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    out.mkdir(parents=True, exist_ok=True)
    for path in preset_files(args.name):
        cfg = load(path)
        result = run_sweep(cfg, jobs=args.jobs)
        target = out / f"{path.stem}.csv"
        with open(target, "w", newline="", encoding="utf-8") as fh:
            write_sweep(fh, result)
        print(f"wrote {target}", file=sys.stderr)
    script = Path(str(resources.files("giantent") / "presets" / f"{args.name}.gp"))
    if script.exists():
        shutil.copy(script, out / script.name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="giantent", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="integrate one scenario and write its trajectory")
    s.add_argument("config")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.add_argument("--gamma", type=float, default=1.0,
                   help="decay rate used to rescale the time column (t / gamma)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="run a 1-2 axis parameter sweep")
    s.add_argument("config")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.add_argument("-j", "--jobs", type=int, default=None, help="worker processes (default: all cores)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("paths", help="list active and suppressed propagation paths")
    s.add_argument("config")
    s.add_argument("--csv", help="also write the report as CSV ('-' for stdout)")
    s.set_defaults(func=cmd_paths)

    s = sub.add_parser("verify", help="compare the simulator against the closed forms")
    s.add_argument("--tol", type=float, default=None, help="override every error tolerance")
    s.add_argument("--only", help="run one check (exact name) or one family")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("preset", help="regenerate the data behind a figure")
    s.add_argument("name", choices=sorted(PRESETS))
    s.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    s.add_argument("-j", "--jobs", type=int, default=None)
    s.set_defaults(func=cmd_preset)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
