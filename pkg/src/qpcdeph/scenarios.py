"""Named experiments, text configuration and deterministic CSV output.

Each scenario resolves its defaults, runs the relevant solvers and
returns a :class:`CsvDocument`: "#"-prefixed metadata lines recording the
full parameter set, a header row, data rows, and optional "#" footer
lines for derived summary quantities.  Floats are always formatted with
12 significant digits so identical configurations produce byte-identical
files.

Configuration files are flat ``key = value`` text (UTF-8, "#" comments)
with a ``[system]`` section, a ``[qpc]`` section and one section per
scenario; command-line flags override file values which override the
built-in defaults.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .counting import counting_max_step, detector_signal, evolve_counting, suggest_n_max
from .dynamics import (
    DensityMatrix2,
    SystemParams,
    Trajectory,
    combine_decoherence,
    decoherence_rate,
    evolve_grid,
    max_step,
)
from .errors import ConfigError
from .qpc import QpcConfig, gamma_d_expanded, rates, shifted_transmission, transmission_change
from .units import HBAR, rate_to_si, to_internal_energy

SCENARIO_TAGS = (
    "fig2a",
    "fig2b",
    "zeno-sweep",
    "scaling-table",
    "counting-demo",
    "rates-report",
    "evolve",
    "counting",
)

_INITIAL_TAGS = ("11S", "02S", "mixed")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (tuple, list, np.ndarray)):
        return " ".join(_fmt(v) for v in value)
    return "%.12g" % float(value)


@dataclass
class CsvDocument:
    """In-memory CSV with metadata header and optional footer comments."""

    metadata: list
    columns: list
    rows: list
    footer: list = field(default_factory=list)

    def text(self) -> str:
        lines = [f"# {key} = {_fmt(value)}" for key, value in self.metadata]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_fmt(x) for x in row))
        lines.extend(f"# {key} = {_fmt(value)}" for key, value in self.footer)
        return "\n".join(lines) + "\n"

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.text())

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([float(row[idx]) for row in self.rows])

    def footer_value(self, key: str) -> str:
        for k, v in self.footer:
            if k == key:
                return _fmt(v)
        raise KeyError(key)


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved inputs of one scenario run."""

    scenario: str
    detuning: float = 30.0  # ueV
    tunnel_coupling: float = 10.0  # ueV
    gamma_d: float | None = None  # 1/ns; None derives it from the QPC numbers
    transmission: float = 0.5
    fermi_energy: float = 1e4  # ueV
    bias_energy: float = 1e3  # ueV
    distance: float = 200.0  # nm
    rel_permittivity: float = 13.0
    t_final: float | None = None  # ns; None picks the scenario default
    points: int = 501
    output_path: str | None = None
    initial: str = "11S"
    gamma_d_over_tc: tuple = (0.0, 1.0, 4.0)
    t2_env: float = math.inf  # ns
    n_max: int | None = None
    dt: float | None = None
    a_grid_nm: tuple = (100.0, 141.4213562373095, 200.0, 282.842712474619, 400.0)
    vd_grid_mv: tuple = (0.25, 0.5, 1.0, 2.0, 4.0)

    def __post_init__(self):
        if self.scenario not in SCENARIO_TAGS:
            raise ConfigError(f"unknown scenario {self.scenario!r} (known: {', '.join(SCENARIO_TAGS)})")
        if self.points < 2:
            raise ConfigError(f"time grid needs at least 2 points, got {self.points}")
        if self.initial not in _INITIAL_TAGS:
            raise ConfigError(f"unknown initial state {self.initial!r} (known: {', '.join(_INITIAL_TAGS)})")
        if len(self.gamma_d_over_tc) < 1:
            raise ConfigError("gamma_d_over_tc must not be empty")
        if not self.a_grid_nm or not self.vd_grid_mv:
            raise ConfigError("scaling grids must not be empty")

    @property
    def qpc(self) -> QpcConfig:
        return QpcConfig(
            transmission=self.transmission,
            fermi_energy=self.fermi_energy,
            bias_energy=self.bias_energy,
            distance=self.distance,
            rel_permittivity=self.rel_permittivity,
        )

    def system(self, gamma_d: float | None = None) -> SystemParams:
        g = gamma_d if gamma_d is not None else self.gamma_d
        if g is None:
            g = rates(self.qpc).gamma_d
        return SystemParams(self.detuning, self.tunnel_coupling, g)

    def initial_state(self) -> DensityMatrix2:
        if self.initial == "11S":
            return DensityMatrix2.singlet_11()
        if self.initial == "02S":
            return DensityMatrix2.singlet_02()
        return DensityMatrix2.maximally_mixed()


_SCENARIO_DEFAULTS = {
    "fig2a": dict(detuning=3.0, tunnel_coupling=1.0, gamma_d=0.0),
    "fig2b": dict(t_final=3000.0, points=1501),
    "zeno-sweep": dict(
        detuning=3.0,
        tunnel_coupling=1.0,
        gamma_d=0.0,
        gamma_d_over_tc=(0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 100.0),
        points=65,
    ),
    "scaling-table": dict(),
    "counting-demo": dict(detuning=3.0, tunnel_coupling=1.0, points=201),
    "rates-report": dict(),
    "evolve": dict(),
    "counting": dict(detuning=3.0, tunnel_coupling=1.0, points=101),
}


def default_config(scenario: str) -> ScenarioConfig:
    if scenario not in SCENARIO_TAGS:
        raise ConfigError(f"unknown scenario {scenario!r} (known: {', '.join(SCENARIO_TAGS)})")
    over = dict(_SCENARIO_DEFAULTS[scenario])
    over.setdefault("output_path", f"{scenario}.csv")
    return ScenarioConfig(scenario=scenario, **over)


# Config-file keys, per section, mapped to ScenarioConfig fields with a parser.
def _energy(text: str) -> float:
    parts = text.split()
    if len(parts) == 1:
        return float(parts[0])
    if len(parts) == 2:
        return to_internal_energy(float(parts[0]), parts[1])
    raise ValueError(f"cannot parse energy value {text!r}")


def _float_list(text: str) -> tuple:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


_SYSTEM_KEYS = {
    "detuning": ("detuning", _energy),
    "tunnel_coupling": ("tunnel_coupling", _energy),
    "gamma_d": ("gamma_d", float),
}

_QPC_KEYS = {
    "transmission": ("transmission", float),
    "fermi_energy": ("fermi_energy", _energy),
    "bias": ("bias_energy", _energy),
    "distance_nm": ("distance", float),
    "rel_permittivity": ("rel_permittivity", float),
}

_SCENARIO_KEYS = {
    "t_final_ns": ("t_final", float),
    "points": ("points", int),
    "out": ("output_path", str),
    "initial": ("initial", str),
    "gamma_d_over_tc": ("gamma_d_over_tc", _float_list),
    "t2_env_ns": ("t2_env", float),
    "n_max": ("n_max", int),
    "dt_ns": ("dt", float),
    "a_grid_nm": ("a_grid_nm", _float_list),
    "vd_grid_mv": ("vd_grid_mv", _float_list),
}


def load_config_file(path: str, scenario: str) -> dict:
    """Read overrides for one scenario from a key = value file."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(
        comment_prefixes=("#",), inline_comment_prefixes=("#",), interpolation=None
    )
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc

    overrides = {}
    for section in parser.sections():
        if section == "system":
            keymap = _SYSTEM_KEYS
        elif section == "qpc":
            keymap = _QPC_KEYS
        elif section in SCENARIO_TAGS:
            if section != scenario:
                continue  # sections for other scenarios are fine to carry along
            keymap = _SCENARIO_KEYS
        else:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        for key, raw in parser.items(section):
            if key not in keymap:
                raise ConfigError(f"unknown key {key!r} in section [{section}] of {path}")
            fieldname, parse = keymap[key]
            try:
                overrides[fieldname] = parse(raw)
            except Exception as exc:
                raise ConfigError(f"bad value for {key!r} in [{section}]: {raw!r} ({exc})") from exc
    return overrides


def build_config(scenario: str, config_path: str | None = None, **cli_overrides) -> ScenarioConfig:
    """Defaults <- config file <- command-line flags."""
    cfg = default_config(scenario)
    merged = {}
    if config_path is not None:
        merged.update(load_config_file(config_path, scenario))
    merged.update({k: v for k, v in cli_overrides.items() if v is not None})
    try:
        return dataclasses.replace(cfg, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _base_metadata(cfg: ScenarioConfig) -> list:
    return [
        ("generator", f"qpcdeph {__version__}"),
        ("scenario", cfg.scenario),
    ]


def _system_metadata(params: SystemParams) -> list:
    return [
        ("detuning_uev", params.detuning),
        ("tunnel_coupling_uev", params.tunnel_coupling),
        ("gamma_d_per_ns", params.gamma_d),
    ]


def _qpc_metadata(cfg: ScenarioConfig) -> list:
    return [
        ("transmission", cfg.transmission),
        ("fermi_energy_uev", cfg.fermi_energy),
        ("bias_uev", cfg.bias_energy),
        ("distance_nm", cfg.distance),
        ("rel_permittivity", cfg.rel_permittivity),
    ]


def _grid_metadata(t_final: float, points: int) -> list:
    return [("t_final_ns", t_final), ("points", points)]


def _fit_envelope_rate(times: np.ndarray, amplitude: np.ndarray) -> float:
    """Decay rate of the trailing |rho12| envelope from a log-linear peak fit."""
    lo = len(times) // 3
    t = times[lo:]
    y = amplitude[lo:]
    inner = np.arange(1, len(y) - 1)
    peaks = inner[(y[inner] >= y[inner - 1]) & (y[inner] >= y[inner + 1]) & (y[inner] > 0.0)]
    if len(peaks) < 2:
        peaks = np.nonzero(y > 0.0)[0]
        if len(peaks) < 2:
            return 0.0
    slope = np.polyfit(t[peaks], np.log(y[peaks]), 1)[0]
    return -float(slope)


def run_fig2a(cfg: ScenarioConfig) -> CsvDocument:
    """Population of the initial state for several dephasing strengths.

    Gamma_d values are given as multiples of T_c (an energy) and become
    rates through division by hbar.  The time axis spans two oscillation
    periods by default.
    """
    tc = cfg.tunnel_coupling
    gamma_rates = tuple(m * tc / HBAR for m in cfg.gamma_d_over_tc)
    base = SystemParams(cfg.detuning, tc, 0.0)
    t_final = cfg.t_final if cfg.t_final is not None else 2.0 * base.oscillation_period
    initial = cfg.initial_state()

    trajectories = [
        evolve_grid(initial, SystemParams(cfg.detuning, tc, g), t_final, cfg.points)
        for g in gamma_rates
    ]
    times = trajectories[0].times
    columns = ["t_ns"] + [f"p11_g{i}" for i in range(len(gamma_rates))]
    rows = [
        tuple([times[k]] + [tr.p11[k] for tr in trajectories]) for k in range(len(times))
    ]
    metadata = _base_metadata(cfg) + [
        ("detuning_uev", cfg.detuning),
        ("tunnel_coupling_uev", tc),
        ("gamma_d_over_tc", cfg.gamma_d_over_tc),
        ("gamma_d_per_ns", gamma_rates),
        ("initial", cfg.initial),
        ("time_axis", "ns; two oscillation periods pi*hbar/omega by default"),
    ] + _grid_metadata(t_final, cfg.points)
    return CsvDocument(metadata=metadata, columns=columns, rows=rows)


def run_fig2b(cfg: ScenarioConfig) -> CsvDocument:
    """Full state trajectory in the experimental regime, with decay summary."""
    params = cfg.system()
    t_final = cfg.t_final if cfg.t_final is not None else 3000.0
    traj = evolve_grid(cfg.initial_state(), params, t_final, cfg.points)
    columns = ["t_ns", "p02", "p11", "coherence_re", "coherence_im", "purity"]
    rows = [
        (traj.times[k], *traj.states[k], traj.purity[k]) for k in range(len(traj))
    ]
    rate = decoherence_rate(params)
    footer = [
        ("decoherence_rate_per_ns", rate),
        ("dephasing_time_ns", 1.0 / rate),
        ("coherence_envelope_rate_per_ns", _fit_envelope_rate(traj.times, traj.coherence_abs)),
        ("max_abs_coherence", float(np.max(traj.coherence_abs))),
    ]
    metadata = (
        _base_metadata(cfg)
        + _system_metadata(params)
        + [("initial", cfg.initial)]
        + _grid_metadata(t_final, cfg.points)
    )
    return CsvDocument(metadata=metadata, columns=columns, rows=rows, footer=footer)


def run_zeno_sweep(cfg: ScenarioConfig) -> CsvDocument:
    """Departure from the initial state at t* = 0.1 hbar/T_c versus Gamma_d.

    The short-time effective rate is the least-squares slope through the
    origin of 1 - p11 over [0, t*].
    """
    tc = cfg.tunnel_coupling
    t_star = 0.1 * HBAR / tc
    initial = cfg.initial_state()
    rows = []
    for mult in cfg.gamma_d_over_tc:
        g = mult * tc / HBAR
        traj = evolve_grid(initial, SystemParams(cfg.detuning, tc, g), t_star, cfg.points)
        departure = 1.0 - traj.p11
        t = traj.times
        rate = float(np.dot(t, departure) / np.dot(t, t))
        rows.append((mult, g, departure[-1], rate))
    columns = ["gamma_d_over_tc", "gamma_d_per_ns", "departure", "short_time_rate_per_ns"]
    metadata = _base_metadata(cfg) + [
        ("detuning_uev", cfg.detuning),
        ("tunnel_coupling_uev", tc),
        ("t_star_ns", t_star),
        ("initial", cfg.initial),
        ("points", cfg.points),
    ]
    return CsvDocument(metadata=metadata, columns=columns, rows=rows)


def run_scaling_table(cfg: ScenarioConfig) -> CsvDocument:
    """Gamma_d and T_2 over a (distance, bias) grid with log-log slopes."""
    rows = []
    for a in cfg.a_grid_nm:
        for vd in cfg.vd_grid_mv:
            qpc = QpcConfig(
                transmission=cfg.transmission,
                fermi_energy=cfg.fermi_energy,
                bias_energy=to_internal_energy(vd, "mV-bias"),
                distance=a,
                rel_permittivity=cfg.rel_permittivity,
            )
            r = rates(qpc)
            rows.append(
                (a, vd, transmission_change(qpc), r.gamma_d, rate_to_si(r.gamma_d), 1.0 / r.gamma_d)
            )
    columns = ["a_nm", "vd_mv", "delta_t", "gamma_d_per_ns", "gamma_d_per_s", "t2_ns"]

    a_arr = np.array([row[0] for row in rows])
    vd_arr = np.array([row[1] for row in rows])
    t2_arr = np.array([row[5] for row in rows])
    base_a = 200.0 if 200.0 in cfg.a_grid_nm else cfg.a_grid_nm[len(cfg.a_grid_nm) // 2]
    base_vd = 1.0 if 1.0 in cfg.vd_grid_mv else cfg.vd_grid_mv[len(cfg.vd_grid_mv) // 2]
    sel_a = vd_arr == base_vd
    sel_vd = a_arr == base_a
    slope_a = float(np.polyfit(np.log(a_arr[sel_a]), np.log(t2_arr[sel_a]), 1)[0])
    slope_vd = float(np.polyfit(np.log(vd_arr[sel_vd]), np.log(t2_arr[sel_vd]), 1)[0])
    base_gamma = [row[4] for row in rows if row[0] == base_a and row[1] == base_vd]

    footer = [
        ("slope_log_t2_log_a", slope_a),
        ("slope_log_t2_log_vd", slope_vd),
        ("base_a_nm", base_a),
        ("base_vd_mv", base_vd),
    ]
    if base_gamma:
        footer.append(("base_gamma_d_per_s", base_gamma[0]))
    metadata = _base_metadata(cfg) + [
        ("transmission", cfg.transmission),
        ("fermi_energy_uev", cfg.fermi_energy),
        ("rel_permittivity", cfg.rel_permittivity),
        ("a_grid_nm", cfg.a_grid_nm),
        ("vd_grid_mv", cfg.vd_grid_mv),
    ]
    return CsvDocument(metadata=metadata, columns=columns, rows=rows, footer=footer)


def run_counting_demo(cfg: ScenarioConfig) -> CsvDocument:
    """Counting statistics next to the reduced dynamics they must reproduce."""
    r = rates(cfg.qpc)
    params = SystemParams(cfg.detuning, cfg.tunnel_coupling, r.gamma_d)
    base = SystemParams(cfg.detuning, cfg.tunnel_coupling, 0.0)
    t_final = cfg.t_final if cfg.t_final is not None else 2.0 * base.oscillation_period
    n_max = cfg.n_max if cfg.n_max is not None else suggest_n_max(r, t_final)
    initial = cfg.initial_state()

    interval = t_final / (cfg.points - 1)
    guard = counting_max_step(params, r)
    dt_cap = min(cfg.dt, guard) if cfg.dt is not None else guard
    record_every = max(1, math.ceil(interval / dt_cap - 1e-9))
    counting = evolve_counting(
        initial, params, r, t_final, interval / record_every, n_max, record_every=record_every
    )
    reduced = evolve_grid(initial, params, t_final, cfg.points)

    summed = counting.reduced_states()
    probs = counting.sectors[:, :, 0] + counting.sectors[:, :, 1]
    n_idx = np.arange(n_max + 1, dtype=float)
    means = probs @ n_idx
    variances = probs @ (n_idx**2) - means**2
    signals = r.d_prime_rate * summed[:, 0] + r.d_rate * summed[:, 1]
    tail = probs[:, -1]
    dev = np.max(np.abs(summed - reduced.states), axis=1)

    columns = [
        "t_ns",
        "mean_n",
        "variance_n",
        "signal_per_ns",
        "p02_total",
        "p11_total",
        "tail_mass",
        "reduced_max_dev",
    ]
    rows = [
        (
            counting.times[k],
            means[k],
            variances[k],
            signals[k],
            summed[k, 0],
            summed[k, 1],
            tail[k],
            dev[k],
        )
        for k in range(len(counting))
    ]
    final = counting[len(counting) - 1].distribution()
    footer = [
        ("final_mean_n", final.mean),
        ("final_variance_n", final.variance),
        ("final_fano", final.variance / final.mean if final.mean > 0 else math.nan),
        ("max_reduced_dev", float(np.max(dev))),
    ]
    metadata = (
        _base_metadata(cfg)
        + _system_metadata(params)
        + _qpc_metadata(cfg)
        + [
            ("d_per_ns", r.d_rate),
            ("d_prime_per_ns", r.d_prime_rate),
            ("n_max", n_max),
            ("initial", cfg.initial),
        ]
        + _grid_metadata(t_final, cfg.points)
    )
    return CsvDocument(metadata=metadata, columns=columns, rows=rows, footer=footer)


def run_rates_report(cfg: ScenarioConfig) -> CsvDocument:
    """One-row summary of every detector-derived quantity."""
    qpc = cfg.qpc
    delta = transmission_change(qpc)
    r = rates(qpc)
    expanded = gamma_d_expanded(qpc)
    t2 = 1.0 / r.gamma_d if r.gamma_d > 0.0 else math.inf
    total = combine_decoherence(r.gamma_d, cfg.t2_env)
    env_dominated = math.isfinite(cfg.t2_env) and 1.0 / cfg.t2_env > r.gamma_d

    columns = [
        "delta_t",
        "delta_t_over_t",
        "t_prime",
        "d_per_ns",
        "d_prime_per_ns",
        "gamma_d_per_ns",
        "gamma_d_per_s",
        "gamma_d_expanded_per_ns",
        "expansion_within_validity",
        "t2_ns",
        "t2_env_ns",
        "total_rate_per_ns",
        "total_t2_ns",
        "env_dominated",
    ]
    rows = [
        (
            delta,
            delta / qpc.transmission,
            shifted_transmission(qpc),
            r.d_rate,
            r.d_prime_rate,
            r.gamma_d,
            rate_to_si(r.gamma_d),
            expanded.value,
            "yes" if expanded.within_validity else "no",
            t2,
            cfg.t2_env,
            total,
            1.0 / total if total > 0.0 else math.inf,
            "yes" if env_dominated else "no",
        )
    ]
    metadata = _base_metadata(cfg) + _qpc_metadata(cfg) + [("t2_env_ns", cfg.t2_env)]
    return CsvDocument(metadata=metadata, columns=columns, rows=rows)


def run_evolve(cfg: ScenarioConfig) -> CsvDocument:
    """Raw reduced-state trajectory for explicit parameters."""
    params = cfg.system()
    t_final = cfg.t_final if cfg.t_final is not None else 5.0 * params.oscillation_period
    if not math.isfinite(t_final):
        raise ConfigError("t_final must be given when the system has no oscillation period")
    traj = evolve_grid(cfg.initial_state(), params, t_final, cfg.points)
    columns = ["t_ns", "p02", "p11", "coherence_re", "coherence_im", "purity"]
    rows = [(traj.times[k], *traj.states[k], traj.purity[k]) for k in range(len(traj))]
    metadata = (
        _base_metadata(cfg)
        + _system_metadata(params)
        + [("initial", cfg.initial)]
        + _grid_metadata(t_final, cfg.points)
    )
    return CsvDocument(metadata=metadata, columns=columns, rows=rows)


SCENARIOS = {
    "fig2a": run_fig2a,
    "fig2b": run_fig2b,
    "zeno-sweep": run_zeno_sweep,
    "scaling-table": run_scaling_table,
    "counting-demo": run_counting_demo,
    "rates-report": run_rates_report,
    "evolve": run_evolve,
    "counting": run_counting_demo,
}


def run(cfg: ScenarioConfig) -> CsvDocument:
    """Execute a scenario and write its CSV when an output path is set."""
    doc = SCENARIOS[cfg.scenario](cfg)
    if cfg.output_path is not None:
        doc.write(cfg.output_path)
    return doc
