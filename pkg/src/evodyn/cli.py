"""Command line front end: ``evodyn <classical|wave|compare|conductance|helmholtz>``.

Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
3 contract violation.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import classical, helmholtz, wave
from .config import ConfigError, RunConfig, build_config, dump_config, PRESETS
from .core import ConvergenceError, DomainError, IntegrationError

EXIT_PARSE, EXIT_NUMERIC, EXIT_CONTRACT = 1, 2, 3

KINETIC_TOL = 1e-8
CONTINUITY_TOL = 1e-10
COMPARE_TOL = 0.05


class ContractViolation(RuntimeError):
    pass


def _fmt(x) -> str:
    return format(float(x), ".15g")


def write_csv(path: Path, header, columns):
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _maybe_svg(cfg: RunConfig, draw, *args):
    if not cfg.svg:
        return None
    try:
        draw(*args)
    except ImportError as exc:  # plots are best effort
        print(f"warning: SVG output skipped ({exc})", file=sys.stderr)
        return None
    return args[-1]


def run_classical(cfg: RunConfig, out: Path) -> dict:
    scenario = cfg.scenario()
    traj = classical.integrate_trajectory(scenario)
    path = out / "classical.csv"
    write_csv(path, traj.COLUMNS, traj.columns())
    files = {"classical.csv": path}
    from .plotting import plot_trajectory

    svg = _maybe_svg(cfg, plot_trajectory, traj, scenario, out / "fig2.svg")
    if svg:
        files["fig2.svg"] = svg
    p = scenario.params
    kinetic = p.inertia * traj.gdot**2
    thermal = p.k_b * classical.temperature_of_g(traj.g, scenario)
    worst = float(np.max(np.abs(kinetic - thermal) / thermal))
    print(f"classical: {len(traj)} samples, g(t_max) = {_fmt(traj.g[-1])}, "
          f"kinetic identity max rel dev = {worst:.3e}")
    if worst > KINETIC_TOL:
        raise ContractViolation(f"kinetic identity deviation {worst:.3e} > {KINETIC_TOL:g}")
    return files


def _solve(cfg: RunConfig, choice=None):
    return wave.solve_wave(cfg.scenario(), choice or cfg.wave_choice, cfg.series,
                           grid_density=cfg.grid_density, g_min=cfg.g_min, g_max=cfg.g_max)


def run_wave(cfg: RunConfig, out: Path) -> dict:
    scenario = cfg.scenario()
    sol = _solve(cfg)
    t_cl = classical.temperature_profile(sol.grid, scenario)
    files = {"wave.csv": out / "wave.csv", "windows.csv": out / "windows.csv"}
    write_csv(files["wave.csv"], ("g", "re_psi", "im_psi", "abs2", "T_classical"),
              (sol.grid, sol.psi.real, sol.psi.imag, np.abs(sol.psi) ** 2, t_cl))
    write_csv(files["windows.csv"], ("g_lo", "g_hi", "g_mid", "mean_T"),
              list(zip(*sol.windows)) if sol.windows else ([], [], [], []))
    if cfg.svg:
        other = wave.solve_wave(scenario, "outgoing" if cfg.wave_choice == "standing" else "standing",
                                cfg.series, cfg.grid_density, cfg.g_min, cfg.g_max)
        pair = (other, sol) if other.choice == "standing" else (sol, other)
        from .plotting import plot_wavefunctions

        svg = _maybe_svg(cfg, plot_wavefunctions, pair,
                         [classical.temperature_profile(s.grid, scenario) for s in pair],
                         out / "fig3.svg")
        if svg:
            files["fig3.svg"] = svg
    res = wave.continuity_residuals(sol)
    print(f"wave: {len(sol.grid)} grid points, {len(sol.windows)} half-period windows, "
          f"continuity residuals psi = {res[0]:.2e}, psi' = {res[1]:.2e}")
    if max(res) > CONTINUITY_TOL:
        raise ContractViolation(f"continuity residual {max(res):.2e} > {CONTINUITY_TOL:g}")
    return files


def compare_rows(sol: wave.WaveSolution):
    """(g_mid, T_wave, T_classical, rel_diff) for the half periods after contact."""
    sc = sol.scenario
    rows = []
    for lo, _hi, mid, t_wave in sol.windows:
        if lo < sc.g0:
            continue
        t_cl = classical.temperature_of_g(mid, sc)
        rows.append((mid, t_wave, t_cl, abs(t_wave - t_cl) / t_cl))
    return rows


def run_compare(cfg: RunConfig, out: Path) -> dict:
    scenario = cfg.scenario()
    sol = _solve(cfg)
    rows = compare_rows(sol)
    if not rows:
        raise ContractViolation("no complete half period after the contact point")
    path = out / "compare.csv"
    write_csv(path, ("g_mid", "T_wave", "T_classical", "rel_diff"), list(zip(*rows)))
    files = {"compare.csv": path}
    g_curve = sol.grid[sol.grid >= scenario.g0]
    from .plotting import plot_comparison

    svg = _maybe_svg(cfg, plot_comparison, rows, g_curve,
                     classical.temperature_of_g(g_curve, scenario), out / "fig4.svg")
    if svg:
        files["fig4.svg"] = svg
    rest = [r[3] for r in rows[1:]]
    worst = max(rest) if rest else 0.0
    print(f"compare: {len(rows)} windows; first window (g_mid = {_fmt(rows[0][0])}) flagged with "
          f"rel_diff = {rows[0][3]:.4f}; max rel_diff excluding first = {worst:.6f}")
    if worst > COMPARE_TOL:
        raise ContractViolation(f"wave/trajectory temperature gap {worst:.4f} > {COMPARE_TOL:g}")
    return files


def conductance_report(cfg: RunConfig) -> dict:
    p = cfg.params
    temp = cfg.cond_T if cfg.cond_T is not None else cfg.T0
    f = cfg.cond_f if cfg.cond_f is not None else p.hbar / 2.0
    c_v = cfg.c_v if cfg.c_v is not None else p.k_b / 2.0
    sigma, sigma_max = classical.conductance(temp, f, c_v, p)
    quantum = classical.quantum_conductance(temp, p)
    return {
        "T": temp,
        "f": f,
        "c_v": c_v,
        "sigma": sigma,
        "sigma_max": sigma_max,
        "sigma_quantum": quantum,
        "sigma_over_max": sigma / sigma_max,
        "max_over_quantum": sigma_max / quantum,
    }


def run_conductance(cfg: RunConfig, out: Path) -> dict:
    rep = conductance_report(cfg)
    path = out / "conductance.csv"
    write_csv(path, tuple(rep), [[v] for v in rep.values()])
    print(f"conductance at T = {_fmt(rep['T'])}, f = {_fmt(rep['f'])}, c_v = {_fmt(rep['c_v'])}")
    print(f"  sigma           = {_fmt(rep['sigma'])}")
    print(f"  sigma_max       = pi k^2 T / h = {_fmt(rep['sigma_max'])}")
    print(f"  quantum         = pi^2 k^2 T / (3h) = {_fmt(rep['sigma_quantum'])}")
    print(f"  sigma/sigma_max = {_fmt(rep['sigma_over_max'])}")
    print(f"  ratio           = {rep['max_over_quantum']:.6f} (3/pi = {3 / math.pi:.6f})")
    return {"conductance.csv": path}


def helmholtz_metrics(cfg: RunConfig) -> dict:
    scenario = cfg.scenario(stride=cfg.helmholtz_stride)
    traj = classical.integrate_trajectory(scenario)
    track = helmholtz.to_action_entropy(traj)
    return {
        "temperature_identity": helmholtz.check_temperature_identity(track, traj, scenario.params),
        "canonical_area": helmholtz.check_canonical_area(traj),
        "entropy_force": helmholtz.check_entropy_force(track, traj, scenario),
    }


def run_helmholtz(cfg: RunConfig, out: Path) -> dict:
    metrics = helmholtz_metrics(cfg)
    for name, value in metrics.items():
        print(f"helmholtz {name:<22s} max rel dev = {value:.3e}")
    bad = {k: v for k, v in metrics.items() if v > cfg.contract_tol}
    if bad:
        print(f"warning: deviations above {cfg.contract_tol:g}; reduce helmholtz_stride",
              file=sys.stderr)
        raise ContractViolation(", ".join(f"{k} = {v:.3e}" for k, v in bad.items()))
    return {}


COMMANDS = {
    "classical": run_classical,
    "wave": run_wave,
    "compare": run_compare,
    "conductance": run_conductance,
    "helmholtz": run_helmholtz,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evodyn", description="Evolutionary-coordinate thermodynamics runs.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="flat key = value configuration file")
    parser.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument("--out", help="output directory (default: $EVODYN_OUT or .)")
    parser.add_argument("--svg", action="store_true", default=None, help="also write SVG figures")
    parser.add_argument("--dump-config", action="store_true",
                        help="write the effective configuration to OUT/run.cfg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else None
        cfg = build_config(text, args.preset, out=args.out, svg=args.svg)
    except (OSError, ConfigError) as exc:
        print(f"evodyn: config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = Path(cfg.out or os.environ.get("EVODYN_OUT") or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.dump_config:
            (out / "run.cfg").write_text(dump_config(cfg), encoding="utf-8")
        COMMANDS[args.command](cfg, out)
    except OSError as exc:
        print(f"evodyn: cannot write output: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"evodyn: series failure at nu={exc.nu!r}, z={exc.z!r}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IntegrationError, DomainError) as exc:
        print(f"evodyn: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ContractViolation as exc:
        print(f"evodyn: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    return 0


if __name__ == "__main__":
    sys.exit(main())
