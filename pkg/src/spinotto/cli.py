"""Command-line front end: single cycles, sweeps, figure presets, and diagnostics.

Exit codes: 0 success, 1 usage/config error, 2 valid run that is not an engine,
3 numerical failure.  All CSV output is UTF-8, comma-separated, with a header
row, 12-significant-digit numbers, and empty fields (never NaN) for undefined
values.  Output is byte-identical for identical configuration regardless of
the worker count.
"""
from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, replace
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from . import analytic
from .cycle import (
    CycleParams,
    CyclePerformance,
    noninteracting_work,
    r_ni_max,
    run_cycle,
)
from .counterdiabatic import variational_coefficients
from .dynamics import EvolutionConfig
from .entanglement import (
    Partition,
    partial_transpose_min_eig,
    polarized_ground_state,
    ppt_witness,
    two_level_thermal_state,
    w_state,
    entanglement_entropy,
)
from .errors import ChainTooLargeError, SpinottoError
from .model import ChainParams
from .plotting import write_svg_lineplot
from .spectral import (
    critical_coupling_cached,
    eigenvalues,
    gap_curve,
    gap_second_difference,
    level_occupations,
)
from .thermal import ln_partition

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_ENGINE = 2
EXIT_NUMERICAL = 3

RESULT_COLUMNS = [
    "N", "p", "g", "g_over_gc", "omega0", "r", "beta_H", "beta_C", "tau",
    "mode", "W", "Q_H", "Q_C", "eta", "eta_carnot", "P", "is_engine",
    "oracle_W", "oracle_eta",
]

FIGURES = ["fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "s1", "s2"]

_CONFIG_KEYS = {
    "chain": {"n", "p", "g", "g_over_gc", "omega0", "boundary"},
    "cycle": {"r", "beta_h", "beta_c", "tau", "mode", "cd_variant"},
    "sweep": {"axis1", "axis2"},
    "output": {"directory", "svg"},
}


class ConfigError(SpinottoError):
    pass


def _fmt(value) -> str:
    """Serialize one cell; floats get 12 significant digits, None becomes empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            raise ValueError("refusing to serialize NaN; use a flag column")
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.11e}"
    return str(value)


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _fmt_p(p: float) -> str:
    """Range exponent as written by a human: 'inf', '1', '2.5'."""
    return "inf" if math.isinf(p) else f"{p:.12g}"


def _csv_lines(columns: list[str], rows: list[dict]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_csv_lines(columns, rows), encoding="utf-8")


@dataclass
class RunConfig:
    n: int = 10
    p: float = math.inf
    g: float | None = None
    g_over_gc: float | None = None
    omega0: float = 1.0
    boundary: str = "open"
    r_text: str = "r_ni_max"
    beta_H: float = 10.0
    beta_C: float | None = None
    tau: float | None = None
    mode: str = "adiabatic"
    cd_variant: str = "exact_chi"
    axes: list[tuple[str, list[float]]] | None = None
    out_dir: str | None = None
    svg: bool = False
    workers: int = 1
    oracle: bool = False
    steps: int | None = None
    points: int | None = None
    tau_grid: list[float] | None = None

    def chain(self) -> ChainParams:
        g = self.resolved_g()
        return ChainParams(self.n, self.p, g, self.omega0, self.boundary)

    def resolved_g(self) -> float:
        if self.g is not None and self.g_over_gc is not None:
            raise ConfigError("give either g or g_over_gc, not both")
        if self.g_over_gc is not None:
            return self.g_over_gc * self.gc()
        return self.g if self.g is not None else 0.0

    def gc(self) -> float:
        probe = ChainParams(self.n, self.p, 0.0, self.omega0, self.boundary)
        return critical_coupling_cached(probe, self.omega0)

    def resolved_r(self) -> float:
        if self.r_text.strip().lower() == "r_ni_max":
            return r_ni_max(self.beta_H, self.omega0)
        return float(self.r_text)

    def cycle(self) -> CycleParams:
        beta_C = self.beta_C if self.beta_C is not None else 2.0 * self.beta_H
        return CycleParams(
            r=self.resolved_r(),
            beta_H=self.beta_H,
            beta_C=beta_C,
            tau=self.tau,
            mode=self.mode,
            cd_variant=self.cd_variant,
        )


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            values[(section, key)] = raw
    return values


def _parse_axis(text: str) -> tuple[str, list[float]]:
    """Axis grammar: name=a:b:points | name=log:a:b:points | name=v1,v2,..."""
    if "=" not in text:
        raise ConfigError(f"axis {text!r} must look like name=start:stop:points")
    name, rest = text.split("=", 1)
    name = name.strip()
    allowed = {"g", "g_over_gc", "r", "beta_H", "tau", "n", "p"}
    if name not in allowed:
        raise ConfigError(f"axis name {name!r} not in {sorted(allowed)}")
    rest = rest.strip()
    if ":" in rest:
        parts = rest.split(":")
        if parts[0] == "log":
            a, b, k = float(parts[1]), float(parts[2]), int(parts[3])
            values = list(np.geomspace(a, b, k))
        else:
            a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
            values = list(np.linspace(a, b, k))
    else:
        values = [_parse_p(v) if name == "p" else float(v) for v in rest.split(",")]
    if not values:
        raise ConfigError(f"axis {name!r} is empty")
    return name, values


def _apply_file_values(cfg: RunConfig, values: dict) -> None:
    for (section, key), raw in values.items():
        if section == "chain":
            if key == "n":
                cfg.n = int(raw)
            elif key == "p":
                cfg.p = _parse_p(raw)
            elif key == "g":
                cfg.g = float(raw)
            elif key == "g_over_gc":
                cfg.g_over_gc = float(raw)
            elif key == "omega0":
                cfg.omega0 = float(raw)
            elif key == "boundary":
                cfg.boundary = raw.strip()
        elif section == "cycle":
            if key == "r":
                cfg.r_text = raw.strip()
            elif key == "beta_h":
                cfg.beta_H = float(raw)
            elif key == "beta_c":
                cfg.beta_C = float(raw)
            elif key == "tau":
                cfg.tau = float(raw)
            elif key == "mode":
                cfg.mode = raw.strip()
            elif key == "cd_variant":
                cfg.cd_variant = raw.strip()
        elif section == "sweep":
            axis = _parse_axis(raw)
            cfg.axes = (cfg.axes or []) + [axis]
        elif section == "output":
            if key == "directory":
                cfg.out_dir = raw.strip()
            elif key == "svg":
                cfg.svg = raw.strip().lower() in ("1", "true", "yes")


def _apply_flag_overrides(cfg: RunConfig, args: argparse.Namespace) -> None:
    mapping = [
        ("n", "n"), ("p", "p"), ("g", "g"), ("g_over_gc", "g_over_gc"),
        ("omega0", "omega0"), ("boundary", "boundary"), ("r", "r_text"),
        ("beta_h", "beta_H"), ("beta_c", "beta_C"), ("tau", "tau"),
        ("mode", "mode"), ("cd_variant", "cd_variant"), ("steps", "steps"),
    ]
    for flag, attr in mapping:
        value = getattr(args, flag, None)
        if value is not None:
            if flag == "p":
                value = _parse_p(value)
            if flag == "g":
                cfg.g_over_gc = None
            if flag == "g_over_gc":
                cfg.g = None
            setattr(cfg, attr, value)
    if getattr(args, "out", None) is not None:
        cfg.out_dir = args.out
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    if getattr(args, "oracle", False):
        cfg.oracle = True
    if getattr(args, "svg", False):
        cfg.svg = True
    for axis_text in getattr(args, "axis", None) or []:
        cfg.axes = (cfg.axes or []) + [_parse_axis(axis_text)]


def _oracle_values(chain: ChainParams, cyc: CycleParams, g_c: float | None):
    """Two-level closed-form overlay (exact non-interacting form at g = 0)."""
    if chain.g == 0.0:
        w = noninteracting_work(chain.n_spins, cyc.r, cyc.beta_H, cyc.beta_C, chain.omega0)
        return w, 1.0 - 1.0 / cyc.r
    if g_c is None:
        return None, None
    return analytic.two_level_performance(
        chain.p, chain.n_spins, cyc.r, cyc.beta_H, cyc.beta_C, chain.omega0, chain.g, g_c
    )


def _result_row(
    chain: ChainParams,
    cyc: CycleParams,
    perf: CyclePerformance,
    g_c: float | None = None,
    oracle: bool = False,
) -> dict:
    row = {
        "N": chain.n_spins,
        "p": _fmt_p(chain.p),
        "g": chain.g,
        "g_over_gc": (chain.g / g_c) if g_c else None,
        "omega0": chain.omega0,
        "r": cyc.r,
        "beta_H": cyc.beta_H,
        "beta_C": cyc.beta_C,
        "tau": cyc.tau,
        "mode": cyc.mode,
        "W": perf.work,
        "Q_H": perf.heat_in,
        "Q_C": perf.heat_out,
        "eta": perf.eta,
        "eta_carnot": perf.eta_carnot,
        "P": perf.power,
        "is_engine": perf.is_engine,
        "oracle_W": None,
        "oracle_eta": None,
    }
    if oracle:
        row["oracle_W"], row["oracle_eta"] = _oracle_values(chain, cyc, g_c)
    return row


def _cycle_task(task: tuple[int, dict]) -> tuple[int, dict]:
    """Worker for one sweep point; exceptions land in the error column."""
    index, spec = task
    try:
        chain = ChainParams(**spec["chain"])
        cyc = CycleParams(**spec["cycle"])
        evo = EvolutionConfig(steps=spec["steps"]) if spec["steps"] else None
        perf = run_cycle(chain, cyc, evo)
        row = _result_row(chain, cyc, perf, spec["g_c"], spec["oracle"])
        row["error"] = None
    except Exception as exc:  # per-point failures must not kill the sweep
        row = {c: None for c in RESULT_COLUMNS}
        row.update(
            {
                "N": spec["chain"]["n_spins"],
                "p": _fmt_p(spec["chain"]["p"]),
                "g": spec["chain"]["g"],
                "mode": spec["cycle"]["mode"],
                "error": f"{type(exc).__name__}: {exc}",
            }
        )
    return index, row


def _run_tasks(tasks: list[tuple[int, dict]], workers: int) -> list[dict]:
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            indexed = pool.map(_cycle_task, tasks)
    else:
        indexed = [_cycle_task(t) for t in tasks]
    indexed.sort(key=lambda pair: pair[0])
    return [row for _, row in indexed]


def cmd_cycle(cfg: RunConfig) -> int:
    chain = cfg.chain()
    cyc = cfg.cycle()
    g_c = cfg.gc() if (cfg.oracle or cfg.g_over_gc is not None) and chain.g > 0 else None
    evo = EvolutionConfig(steps=cfg.steps) if cfg.steps else None
    perf = run_cycle(chain, cyc, evo)
    row = _result_row(chain, cyc, perf, g_c, cfg.oracle)
    text = _csv_lines(RESULT_COLUMNS, [row])
    sys.stdout.write(text)
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "cycle.csv", RESULT_COLUMNS, [row])
    return EXIT_OK if perf.is_engine else EXIT_NOT_ENGINE


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.axes or len(cfg.axes) > 2:
        raise ConfigError("sweep needs one or two axes")
    grids = [axis[1] for axis in cfg.axes]
    names = [axis[0] for axis in cfg.axes]
    mesh = [(i, vals) for i, vals in enumerate(
        [dict(zip(names, combo)) for combo in _cartesian(grids)]
    )]
    tasks = []
    for index, assignment in mesh:
        sub = replace_config(cfg, assignment)
        chain = sub.chain()
        cyc = sub.cycle()
        g_c = sub.gc() if (sub.oracle or sub.g_over_gc is not None) and chain.g > 0 else None
        tasks.append(
            (
                index,
                {
                    "chain": {
                        "n_spins": chain.n_spins, "p": chain.p, "g": chain.g,
                        "omega0": chain.omega0, "boundary": chain.boundary,
                    },
                    "cycle": {
                        "r": cyc.r, "beta_H": cyc.beta_H, "beta_C": cyc.beta_C,
                        "tau": cyc.tau, "mode": cyc.mode, "cd_variant": cyc.cd_variant,
                    },
                    "steps": sub.steps,
                    "g_c": g_c,
                    "oracle": sub.oracle,
                },
            )
        )
    rows = _run_tasks(tasks, cfg.workers)
    columns = RESULT_COLUMNS + ["error"]
    text = _csv_lines(columns, rows)
    sys.stdout.write(text)
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "sweep.csv", columns, rows)
    return EXIT_OK


def _cartesian(grids: list[list[float]]):
    if len(grids) == 1:
        for v in grids[0]:
            yield (v,)
    else:
        for v1 in grids[0]:
            for v2 in grids[1]:
                yield (v1, v2)


def replace_config(cfg: RunConfig, assignment: dict) -> RunConfig:
    sub = replace(cfg)
    for name, value in assignment.items():
        if name == "n":
            sub.n = int(round(value))
        elif name == "p":
            sub.p = value
        elif name == "g":
            sub.g, sub.g_over_gc = value, None
        elif name == "g_over_gc":
            sub.g_over_gc, sub.g = value, None
        elif name == "r":
            sub.r_text = repr(float(value))
        elif name == "beta_H":
            sub.beta_H = value
        elif name == "tau":
            sub.tau = value
    return sub


def cmd_gc(cfg: RunConfig, p_values: list[float]) -> int:
    rows = []
    for p in sorted(p_values):
        probe = ChainParams(cfg.n, p, 0.0, cfg.omega0, cfg.boundary)
        rows.append({"p": _fmt_p(p), "g_c": critical_coupling_cached(probe, cfg.omega0)})
    text = _csv_lines(["p", "g_c"], rows)
    sys.stdout.write(text)
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "gc.csv", ["p", "g_c"], rows)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, omega: float, beta: float | None) -> int:
    chain = cfg.chain()
    energies = eigenvalues(chain, omega)
    occ = level_occupations(energies, beta) if beta else None
    rows = [
        {"index": i, "energy": float(e), "occupation": (float(occ[i]) if occ is not None else None)}
        for i, e in enumerate(energies)
    ]
    text = _csv_lines(["index", "energy", "occupation"], rows)
    sys.stdout.write(text)
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "spectrum.csv", ["index", "energy", "occupation"], rows)
    return EXIT_OK


def cmd_entanglement(cfg: RunConfig, beta: float, delta: float, alpha: float) -> int:
    n = cfg.n
    closed, numeric = ppt_witness(n, beta, delta, alpha)
    rho = two_level_thermal_state(beta, delta, polarized_ground_state(n), w_state(n))
    part = Partition(n)
    min_eig = partial_transpose_min_eig(rho, part)
    entropy = entanglement_entropy(w_state(n), part)
    rows = [
        {
            "N": n, "beta": beta, "delta": delta, "alpha": alpha,
            "witness_closed": closed, "witness_numeric": numeric,
            "pt_min_eigenvalue": min_eig, "wstate_half_entropy": entropy,
        }
    ]
    cols = list(rows[0].keys())
    sys.stdout.write(_csv_lines(cols, rows))
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "entanglement.csv", cols, rows)
    return EXIT_OK


def cmd_cd_coeffs(cfg: RunConfig, omega: float, omega_dot: float, variant: str) -> int:
    chain = cfg.chain()
    coeffs = variational_coefficients(chain, omega, omega_dot, variant)
    rows = [
        {"m": m, "n": n, "C": float(coeffs.matrix[m, n])}
        for m in range(chain.n_spins)
        for n in range(chain.n_spins)
        if m != n
    ]
    sys.stdout.write(_csv_lines(["m", "n", "C"], rows))
    if cfg.out_dir:
        _write_csv(Path(cfg.out_dir) / "cd_coeffs.csv", ["m", "n", "C"], rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure presets


def _preset_chain(cfg: RunConfig, p: float, g: float) -> ChainParams:
    return ChainParams(cfg.n, p, g, cfg.omega0, cfg.boundary)


def _figure_fig2b(cfg: RunConfig, out: Path) -> None:
    """Work and efficiency vs g/g_c per range exponent, plus p=inf oracles."""
    beta_H, beta_C = 10.0, 20.0
    r = r_ni_max(beta_H, cfg.omega0)
    points = cfg_points(cfg, 25)
    for p, label in [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf")]:
        g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
        rows = []
        for frac in np.linspace(0.05, 1.15, points):
            chain = _preset_chain(cfg, p, frac * g_c)
            cyc = CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, mode="adiabatic")
            perf = run_cycle(chain, cyc)
            rows.append(_result_row(chain, cyc, perf, g_c, oracle=math.isinf(p)))
        _write_csv(out / f"fig2b_{label}.csv", RESULT_COLUMNS, rows)
        if label == "pinf":
            band_rows, two_rows = [], []
            for frac in np.linspace(0.05, 1.15, points):
                g = float(frac) * g_c
                w_band, _, _, eta_band = analytic.tfim_cycle(
                    cfg.n, beta_H, beta_C, r, cfg.omega0, g
                )
                w_two, eta_two = analytic.two_level_performance(
                    math.inf, cfg.n, r, beta_H, beta_C, cfg.omega0, g, g_c
                )
                band_rows.append({"g": g, "g_over_gc": float(frac), "W": w_band, "eta": eta_band})
                two_rows.append({"g": g, "g_over_gc": float(frac), "W": w_two, "eta": eta_two})
            _write_csv(out / "fig2b_tfim.csv", ["g", "g_over_gc", "W", "eta"], band_rows)
            _write_csv(out / "fig2b_twolevel.csv", ["g", "g_over_gc", "W", "eta"], two_rows)
    if cfg.svg:
        _svg_from_results(out, "fig2b", [f"fig2b_{s}" for s in ("p1", "p2", "p3", "pinf")],
                          "g_over_gc", "W", logy=True)


def _figure_fig2c(cfg: RunConfig, out: Path) -> None:
    """Performance vs compression ratio at g = g_c(p), with the g=0 reference."""
    beta_H, beta_C = 10.0, 20.0
    points = cfg_points(cfg, 30)
    r_grid = np.linspace(1.02, 2.2, points)
    curves = [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf"), (None, "ni")]
    for p, label in curves:
        rows = []
        if p is None:
            chain = _preset_chain(cfg, math.inf, 0.0)
            g_c = None
        else:
            g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
            chain = _preset_chain(cfg, p, g_c)
        for r in r_grid:
            cyc = CycleParams(r=float(r), beta_H=beta_H, beta_C=beta_C, mode="adiabatic")
            perf = run_cycle(chain, cyc)
            rows.append(_result_row(chain, cyc, perf, g_c))
        _write_csv(out / f"fig2c_{label}.csv", RESULT_COLUMNS, rows)
    if cfg.svg:
        _svg_from_results(out, "fig2c", [f"fig2c_{s}" for s in ("p1", "p2", "p3", "pinf", "ni")],
                          "r", "W", logy=False)


def _figure_fig3a(cfg: RunConfig, out: Path) -> None:
    """Performance vs hot-bath temperature at g = g_c(p), beta_C = 2 beta_H."""
    r = 1.1
    betas = np.array([0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 14.0, 20.0])
    curves = [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf"), (None, "ni")]
    for p, label in curves:
        if p is None:
            chain = _preset_chain(cfg, math.inf, 0.0)
            g_c = None
        else:
            g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
            chain = _preset_chain(cfg, p, g_c)
        rows = []
        for beta_H in betas:
            cyc = CycleParams(r=r, beta_H=float(beta_H), beta_C=2.0 * float(beta_H), mode="adiabatic")
            perf = run_cycle(chain, cyc)
            rows.append(_result_row(chain, cyc, perf, g_c))
        _write_csv(out / f"fig3a_{label}.csv", RESULT_COLUMNS, rows)


def _figure_fig3b(cfg: RunConfig, out: Path) -> None:
    """Banded thermal occupations vs beta at omega = omega0, g = g_c(p)."""
    from .spectral import occupation_bands

    betas = np.geomspace(0.5, 20.0, cfg_points(cfg, 25))
    for p, label in [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf")]:
        g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
        chain = _preset_chain(cfg, p, g_c)
        energies = eigenvalues(chain, cfg.omega0)
        rows = []
        for beta in betas:
            n0, n1, band_low, band_high = occupation_bands(energies, float(beta), cfg.n)
            rows.append(
                {
                    "beta": float(beta), "n0": n0, "n1": n1,
                    "band_2_to_N": band_low, "band_above_N": band_high,
                }
            )
        _write_csv(out / f"fig3b_{label}.csv",
                   ["beta", "n0", "n1", "band_2_to_N", "band_above_N"], rows)


def _figure_fig3c(cfg: RunConfig, out: Path) -> None:
    """Dimensionless free energy vs beta at g = g_c(p), showing the beta^2 regime."""
    betas = np.geomspace(0.02, 20.0, cfg_points(cfg, 30))
    for p, label in [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf")]:
        g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
        chain = _preset_chain(cfg, p, g_c)
        energies = eigenvalues(chain, cfg.omega0)
        ln_z_inf = cfg.n * math.log(2.0)
        rows = []
        for beta in betas:
            lnz_abs = ln_partition(energies, float(beta), "absolute")
            rows.append(
                {
                    "beta": float(beta),
                    "lnZ_ground_zero": ln_partition(energies, float(beta), "ground_zero"),
                    "lnZ_absolute": lnz_abs,
                    "lnZ_minus_lnZinf": lnz_abs - ln_z_inf,
                }
            )
        _write_csv(out / f"fig3c_{label}.csv",
                   ["beta", "lnZ_ground_zero", "lnZ_absolute", "lnZ_minus_lnZinf"], rows)


def _figure_fig4a(cfg: RunConfig, out: Path) -> None:
    """Diabatic performance vs stroke time at g = 0.2 g_c, with and without the drive."""
    beta_H, beta_C, r = 10.0, 20.0, 1.1
    g_c = critical_coupling_cached(_preset_chain(cfg, math.inf, 0.0), cfg.omega0)
    chain = _preset_chain(cfg, math.inf, 0.2 * g_c)
    taus = cfg_taus(cfg, [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0])
    adia = run_cycle(chain, CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, mode="adiabatic"))
    _write_csv(out / "fig4a_adiabatic.csv", RESULT_COLUMNS,
               [_result_row(chain, CycleParams(r=r, beta_H=beta_H, beta_C=beta_C), adia, g_c)])
    for mode, label in [("diabatic", "diabatic"), ("diabatic_cd", "cd")]:
        rows = []
        for tau in taus:
            cyc = CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, tau=float(tau), mode=mode)
            perf = run_cycle(chain, cyc, EvolutionConfig(steps=cfg.steps))
            rows.append(_result_row(chain, cyc, perf, g_c))
        _write_csv(out / f"fig4a_{label}.csv", RESULT_COLUMNS, rows)
    if cfg.svg:
        _svg_from_results(out, "fig4a", ["fig4a_diabatic", "fig4a_cd"], "tau", "W", logx=True)


def _figure_fig4b(cfg: RunConfig, out: Path) -> None:
    """Friction/enhancement trade-off: W vs g/g_c at tau = 1 with the drive on.

    The exact chi factors serve p = inf; the leading-order variant serves
    p = 1, 2, 3.  Bath temperatures sit in the regime where the drive is
    effective (beta_H = 5, beta_C = 10, r = r_NI^max).
    """
    beta_H = 5.0
    beta_C, r, tau = 2.0 * beta_H, r_ni_max(beta_H, cfg.omega0), 1.0
    fracs = np.linspace(0.0, 0.8, cfg_points(cfg, 9))
    for p, label, variant in [
        (math.inf, "pinf", "exact_chi"),
        (1.0, "p1", "chi_one"),
        (2.0, "p2", "chi_one"),
        (3.0, "p3", "chi_one"),
    ]:
        g_c = critical_coupling_cached(_preset_chain(cfg, p, 0.0), cfg.omega0)
        rows = []
        for frac in fracs:
            chain = _preset_chain(cfg, p, float(frac) * g_c)
            mode = "diabatic_cd" if chain.g > 0 else "diabatic"
            cyc = CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, tau=tau,
                              mode=mode, cd_variant=variant)
            perf = run_cycle(chain, cyc, EvolutionConfig(steps=cfg.steps))
            rows.append(_result_row(chain, cyc, perf, g_c))
        _write_csv(out / f"fig4b_{label}.csv", RESULT_COLUMNS, rows)


def _figure_s1(cfg: RunConfig, out: Path) -> None:
    """Gap curves Delta(g) and their second difference per range exponent."""
    grid = np.arange(0.05, 1.5 + 0.005, 0.01)
    for p, label in [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf")]:
        chain = _preset_chain(cfg, p, 0.0)
        curve = gap_curve(chain, cfg.omega0, grid)
        d2 = gap_second_difference(curve)
        rows = []
        for i, g in enumerate(curve.couplings):
            rows.append(
                {
                    "g": float(g),
                    "gap": float(curve.gaps[i]),
                    "d2gap_dg2": float(d2[i - 1]) if 0 < i < len(grid) - 1 else None,
                }
            )
        _write_csv(out / f"s1_{label}.csv", ["g", "gap", "d2gap_dg2"], rows)


def _figure_s2(cfg: RunConfig, out: Path) -> None:
    """Work and efficiency vs chain length; non-extensive scaling at p = 1."""
    beta_H, beta_C = 10.0, 20.0
    r = r_ni_max(beta_H, cfg.omega0)
    sizes = list(range(4, cfg.n + 1))
    for p, label in [(1.0, "p1"), (2.0, "p2"), (3.0, "p3"), (math.inf, "pinf")]:
        rows = []
        for n in sizes:
            chain = ChainParams(n, p, 0.4 * cfg.omega0, cfg.omega0, cfg.boundary)
            cyc = CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, mode="adiabatic")
            perf = run_cycle(chain, cyc)
            rows.append(_result_row(chain, cyc, perf))
        _write_csv(out / f"s2_{label}.csv", RESULT_COLUMNS, rows)
    rows = []
    for g in (0.2, 0.3, 0.4, 0.5):
        for n in sizes:
            chain = ChainParams(n, 1.0, g, cfg.omega0, cfg.boundary)
            cyc = CycleParams(r=r, beta_H=beta_H, beta_C=beta_C, mode="adiabatic")
            perf = run_cycle(chain, cyc)
            rows.append(
                {
                    "g": g, "N": n, "W": perf.work,
                    "W_scaling": analytic.p1_work_scaling(n, g, beta_H, r, cfg.omega0),
                    "eta": perf.eta,
                }
            )
    _write_csv(out / "s2_p1_gscan.csv", ["g", "N", "W", "W_scaling", "eta"], rows)


def cfg_points(cfg: RunConfig, default: int) -> int:
    return cfg.points if cfg.points else default


def cfg_taus(cfg: RunConfig, default: list[float]) -> list[float]:
    return cfg.tau_grid or default


_FIGURE_BUILDERS = {
    "fig2b": _figure_fig2b,
    "fig2c": _figure_fig2c,
    "fig3a": _figure_fig3a,
    "fig3b": _figure_fig3b,
    "fig3c": _figure_fig3c,
    "fig4a": _figure_fig4a,
    "fig4b": _figure_fig4b,
    "s1": _figure_s1,
    "s2": _figure_s2,
}


def _svg_from_results(out: Path, name: str, stems: list[str], x_col: str, y_col: str,
                      logx: bool = False, logy: bool = False) -> None:
    curves = {}
    for stem in stems:
        path = out / f"{stem}.csv"
        if not path.exists():
            continue
        lines = path.read_text(encoding="utf-8").strip().splitlines()
        header = lines[0].split(",")
        xi, yi = header.index(x_col), header.index(y_col)
        xs, ys = [], []
        for line in lines[1:]:
            cells = line.split(",")
            if cells[xi] and cells[yi]:
                xs.append(float(cells[xi]))
                ys.append(float(cells[yi]))
        curves[stem] = (xs, ys)
    write_svg_lineplot(out / f"{name}.svg", curves, title=name, xlabel=x_col,
                       ylabel=y_col, logx=logx, logy=logy)


def cmd_figure(cfg: RunConfig, name: str) -> int:
    if name not in _FIGURE_BUILDERS:
        sys.stderr.write(
            f"unknown figure preset {name!r}; available: {', '.join(FIGURES)}\n"
        )
        return EXIT_USAGE
    out = Path(cfg.out_dir or "spinotto_out")
    out.mkdir(parents=True, exist_ok=True)
    _FIGURE_BUILDERS[name](cfg, out)
    sys.stdout.write(f"wrote {name} curves to {out}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file; flags override its values")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="worker processes for sweep grids")
    parser.add_argument("--oracle", action="store_true", help="add closed-form oracle columns")
    parser.add_argument("--svg", action="store_true", help="also write SVG line plots")
    parser.add_argument("--n", type=int, help="number of spins")
    parser.add_argument("--p", help="range exponent (number or 'inf')")
    parser.add_argument("--g", type=float, help="coupling in units of omega0")
    parser.add_argument("--g-over-gc", dest="g_over_gc", type=float,
                        help="coupling as a fraction of the critical value")
    parser.add_argument("--omega0", type=float, help="reference level spacing")
    parser.add_argument("--boundary", choices=["open", "periodic"])
    parser.add_argument("--r", help="compression ratio (number or 'r_ni_max')")
    parser.add_argument("--beta-h", dest="beta_h", type=float, help="hot inverse temperature")
    parser.add_argument("--beta-c", dest="beta_c", type=float, help="cold inverse temperature")
    parser.add_argument("--tau", type=float, help="stroke duration")
    parser.add_argument("--mode", choices=["adiabatic", "diabatic", "diabatic_cd"])
    parser.add_argument("--cd-variant", dest="cd_variant", choices=["exact_chi", "chi_one"])
    parser.add_argument("--steps", type=int, help="explicit integrator step count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinotto",
        description="Quantum Otto engine on a long-range transverse-field spin chain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cycle = sub.add_parser("cycle", help="run one engine cycle")
    _add_common(p_cycle)

    p_sweep = sub.add_parser("sweep", help="run a one- or two-axis parameter grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", action="append",
                         help="axis spec: name=a:b:points | name=log:a:b:points | name=v1,v2")

    p_fig = sub.add_parser("figure", help="emit figure-ready CSV curves")
    p_fig.add_argument("name", help=f"one of: {', '.join(FIGURES)}")
    _add_common(p_fig)
    p_fig.add_argument("--points", type=int, help="grid density override")
    p_fig.add_argument("--tau-grid", dest="tau_grid",
                       help="comma-separated stroke times for fig4a")

    p_gc = sub.add_parser("gc", help="critical couplings per range exponent")
    _add_common(p_gc)
    p_gc.add_argument("--p-list", dest="p_list", default="1,2,3,inf")

    p_spec = sub.add_parser("spectrum", help="eigenvalues (and occupations) of H(omega)")
    _add_common(p_spec)
    p_spec.add_argument("--omega", type=float, help="level spacing (default omega0)")
    p_spec.add_argument("--beta", type=float, help="inverse temperature for occupations")

    p_ent = sub.add_parser("entanglement", help="two-level thermal-state entanglement report")
    _add_common(p_ent)
    p_ent.add_argument("--beta", type=float, default=10.0)
    p_ent.add_argument("--delta", type=float, default=1.0)
    p_ent.add_argument("--alpha", type=float, default=1.0)

    p_cd = sub.add_parser("cd-coeffs", help="counterdiabatic drive coefficients")
    _add_common(p_cd)
    p_cd.add_argument("--omega", type=float, required=True)
    p_cd.add_argument("--omega-dot", dest="omega_dot", type=float, required=True)
    p_cd.add_argument("--variant", choices=["full", "chi_one"], default="full")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig()
        if args.config:
            _apply_file_values(cfg, _load_config_file(args.config))
        _apply_flag_overrides(cfg, args)
        if getattr(args, "points", None):
            cfg.points = args.points
        if getattr(args, "tau_grid", None):
            cfg.tau_grid = [float(v) for v in args.tau_grid.split(",")]

        if args.command == "cycle":
            return cmd_cycle(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "figure":
            return cmd_figure(cfg, args.name)
        if args.command == "gc":
            return cmd_gc(cfg, [_parse_p(v) for v in args.p_list.split(",")])
        if args.command == "spectrum":
            omega = args.omega if args.omega is not None else cfg.omega0
            return cmd_spectrum(cfg, omega, args.beta)
        if args.command == "entanglement":
            return cmd_entanglement(cfg, args.beta, args.delta, args.alpha)
        if args.command == "cd-coeffs":
            return cmd_cd_coeffs(cfg, args.omega, args.omega_dot, args.variant)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, ValueError, ChainTooLargeError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_USAGE
    except SpinottoError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
