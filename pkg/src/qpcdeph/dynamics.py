"""Time evolution of the reduced two-level density matrix.

The states |(0,2)S> and |(1,1)S> are mixed by the tunnel coupling T_c,
split by the detuning eps, and their coherence decays at Gamma_d while
the detector watches.  In the real vector v = (p02, p11, Re rho12,
Im rho12) the equations of motion are linear, v' = L v, with

    p02' = -(2 T_c/hbar) Im rho12
    p11' = +(2 T_c/hbar) Im rho12
    (Re rho12)' = -(eps/hbar) Im rho12 - Gamma_d Re rho12
    (Im rho12)' = +(eps/hbar) Re rho12 + (T_c/hbar)(p02 - p11)
                  - Gamma_d Im rho12.

Three solvers cross-check each other: the closed-form population formula
for Gamma_d = 0, the matrix exponential of L (scaling and squaring), and
a fixed-step RK4 integrator that is the workhorse for trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _expm

from . import kernels
from .errors import InvariantError, NoDecayError, StepSizeError
from .units import HBAR

# Structural-state tolerances: trace and positivity per state, purity
# monotonicity per integration step.
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
PURITY_RISE_TOL = 1e-9

# Eigenvalues with real part above -DECAY_TOL count as non-decaying.
DECAY_TOL = 1e-12

# Step-size guard: at most this fraction of the fastest time scale.
GUARD_FRACTION = 0.05


@dataclass(frozen=True)
class SystemParams:
    """Double-dot parameters: detuning and tunnel coupling in ueV, Gamma_d in 1/ns."""

    detuning: float
    tunnel_coupling: float
    gamma_d: float = 0.0

    def __post_init__(self):
        if self.tunnel_coupling < 0.0:
            raise ValueError(f"tunnel_coupling must be >= 0, got {self.tunnel_coupling}")
        if self.gamma_d < 0.0:
            raise ValueError(f"gamma_d must be >= 0, got {self.gamma_d}")

    @property
    def omega(self) -> float:
        """(T_c^2 + eps^2/4)^(1/2) in ueV; populations oscillate at 2*omega/hbar."""
        return math.hypot(self.tunnel_coupling, 0.5 * self.detuning)

    @property
    def oscillation_period(self) -> float:
        """Period pi hbar / omega of the population oscillation, ns."""
        om = self.omega
        if om == 0.0:
            return math.inf
        return math.pi * HBAR / om


@dataclass(frozen=True)
class DensityMatrix2:
    """Reduced two-level state: populations and the complex coherence.

    p02 is the |(0,2)S> population, p11 the |(1,1)S> population;
    hermiticity is structural because only Re/Im of rho12 are stored.
    """

    p02: float
    p11: float
    coherence_re: float
    coherence_im: float

    def __post_init__(self):
        if abs(self.p02 + self.p11 - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {self.p02 + self.p11}")
        for name, p in (("p02", self.p02), ("p11", self.p11)):
            if not -POSITIVITY_TOL <= p <= 1.0 + POSITIVITY_TOL:
                raise ValueError(f"{name} outside [0, 1]: {p}")
        det = self.p02 * self.p11 - self.coherence_re**2 - self.coherence_im**2
        if det < -POSITIVITY_TOL:
            raise ValueError(f"state not positive semidefinite (det {det})")

    @classmethod
    def singlet_11(cls) -> "DensityMatrix2":
        """Both electrons separated: pure |(1,1)S> (the usual initial state)."""
        return cls(0.0, 1.0, 0.0, 0.0)

    @classmethod
    def singlet_02(cls) -> "DensityMatrix2":
        """Both electrons on the right dot: pure |(0,2)S>."""
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix2":
        return cls(0.5, 0.5, 0.0, 0.0)

    @classmethod
    def from_vector(cls, v) -> "DensityMatrix2":
        return cls(float(v[0]), float(v[1]), float(v[2]), float(v[3]))

    def as_vector(self) -> np.ndarray:
        return np.array([self.p02, self.p11, self.coherence_re, self.coherence_im])

    @property
    def purity(self) -> float:
        return (
            self.p02**2
            + self.p11**2
            + 2.0 * (self.coherence_re**2 + self.coherence_im**2)
        )

    @property
    def coherence_abs(self) -> float:
        return math.hypot(self.coherence_re, self.coherence_im)


@dataclass(frozen=True)
class PropagationDiagnostics:
    """Worst-case substep diagnostics collected inline by the integrator."""

    max_trace_dev: float
    min_positivity: float
    max_purity_rise: float


@dataclass(frozen=True)
class Trajectory:
    """States on a strictly increasing time grid, with purity per point."""

    times: np.ndarray
    states: np.ndarray  # shape (len(times), 4): p02, p11, Re rho12, Im rho12
    purity: np.ndarray
    diagnostics: PropagationDiagnostics

    def __post_init__(self):
        if not (len(self.times) == len(self.states) == len(self.purity)):
            raise ValueError("times, states and purity must have equal length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.purity < 0.5 - 1e-9) or np.any(self.purity > 1.0 + 1e-9):
            raise ValueError("purity left [1/2, 1] for a two-level state")
        trace = self.states[:, 0] + self.states[:, 1]
        if np.max(np.abs(trace - 1.0)) > TRACE_TOL:
            raise ValueError("trace deviates from 1 on the trajectory")
        det = (
            self.states[:, 0] * self.states[:, 1]
            - self.states[:, 2] ** 2
            - self.states[:, 3] ** 2
        )
        if np.min(det) < -POSITIVITY_TOL:
            raise ValueError("positivity violated on the trajectory")

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> DensityMatrix2:
        return DensityMatrix2.from_vector(self.states[k])

    @property
    def final(self) -> DensityMatrix2:
        return self.state(len(self.times) - 1)

    @property
    def p02(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def p11(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def coherence_re(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def coherence_im(self) -> np.ndarray:
        return self.states[:, 3]

    @property
    def coherence_abs(self) -> np.ndarray:
        return np.hypot(self.states[:, 2], self.states[:, 3])


def bloch_analytic(params: SystemParams, t):
    """Closed-form p11(t) for Gamma_d = 0, starting from |(1,1)S>.

    p11(t) = [T_c^2 cos^2(omega t/hbar) + eps^2/4] / (T_c^2 + eps^2/4),
    periodic with period pi hbar / omega.  Accepts scalar or array t.
    """
    if params.gamma_d != 0.0:
        raise ValueError("analytic population formula requires gamma_d = 0")
    tc2 = params.tunnel_coupling**2
    eps4 = 0.25 * params.detuning**2
    om2 = tc2 + eps4
    if om2 == 0.0:
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
    phase = math.sqrt(om2) * np.asarray(t, dtype=float) / HBAR
    out = (tc2 * np.cos(phase) ** 2 + eps4) / om2
    return out if np.ndim(t) else float(out)


def liouvillian(params: SystemParams) -> np.ndarray:
    """Generator L with d/dt (p02, p11, Re rho12, Im rho12) = L v."""
    c = params.tunnel_coupling / HBAR
    e = params.detuning / HBAR
    g = params.gamma_d
    return np.array(
        [
            [0.0, 0.0, 0.0, -2.0 * c],
            [0.0, 0.0, 0.0, 2.0 * c],
            [0.0, 0.0, -g, -e],
            [c, -c, e, -g],
        ]
    )


def max_step(params: SystemParams) -> float:
    """Largest admissible integration step for these parameters, ns."""
    guard = math.inf
    if params.omega > 0.0:
        guard = GUARD_FRACTION * HBAR / params.omega
    if params.gamma_d > 0.0:
        guard = min(guard, GUARD_FRACTION / params.gamma_d)
    return guard


def _check_diagnostics(diag: PropagationDiagnostics) -> None:
    if diag.max_trace_dev > TRACE_TOL:
        raise InvariantError(f"trace deviated by {diag.max_trace_dev} during integration")
    if diag.min_positivity < -POSITIVITY_TOL:
        raise InvariantError(f"positivity fell to {diag.min_positivity} during integration")
    if diag.max_purity_rise > PURITY_RISE_TOL:
        raise InvariantError(f"purity rose by {diag.max_purity_rise} in one step")


def _propagate(
    initial: DensityMatrix2, params: SystemParams, interval: float, n_intervals: int
) -> Trajectory:
    """Record n_intervals+1 states spaced by ``interval``, substepping for accuracy."""
    guard = max_step(params)
    substeps = kernels.substeps_for(interval, guard)
    h = interval / substeps
    states, purity, trace_dev, min_det, purity_rise = kernels.rk4_reduced(
        initial.as_vector(),
        params.tunnel_coupling / HBAR,
        params.detuning / HBAR,
        params.gamma_d,
        h,
        n_intervals,
        substeps,
    )
    diag = PropagationDiagnostics(trace_dev, min_det, purity_rise)
    _check_diagnostics(diag)
    times = np.linspace(0.0, interval * n_intervals, n_intervals + 1)
    return Trajectory(times=times, states=states, purity=purity, diagnostics=diag)


def _single_point_trajectory(initial: DensityMatrix2) -> Trajectory:
    v = initial.as_vector()
    det = v[0] * v[1] - v[2] ** 2 - v[3] ** 2
    diag = PropagationDiagnostics(abs(v[0] + v[1] - 1.0), det, 0.0)
    return Trajectory(
        times=np.array([0.0]),
        states=v.reshape(1, 4),
        purity=np.array([initial.purity]),
        diagnostics=diag,
    )


def evolve_rk4(
    initial: DensityMatrix2,
    params: SystemParams,
    t_final: float,
    dt: float,
    record_every: int = 1,
) -> Trajectory:
    """Classical fixed-step RK4 trajectory on the equidistant grid set by dt.

    dt must satisfy the step-size guard (at most 0.05 of the fastest time
    scale); it is shrunk slightly when it does not divide t_final.  Every
    grid step is internally subdivided (see ``kernels.ACCURACY_REFINE``)
    so that trajectories at the guard limit still track the exact
    propagator to better than 1e-8.  ``record_every`` keeps every k-th
    grid point, always including the endpoint.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final < 0.0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    guard = max_step(params)
    if dt > guard * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt={dt} ns exceeds the step-size guard {guard} ns for these parameters",
            dt_max=guard,
        )
    if t_final == 0.0:
        return _single_point_trajectory(initial)
    n_steps = max(1, math.ceil(t_final / dt - 1e-9))
    n_steps = record_every * math.ceil(n_steps / record_every)
    step = t_final / n_steps
    return _propagate(initial, params, step * record_every, n_steps // record_every)


def evolve_grid(
    initial: DensityMatrix2, params: SystemParams, t_final: float, n_points: int
) -> Trajectory:
    """RK4 trajectory recorded on ``n_points`` equally spaced times in [0, t_final]."""
    if n_points < 2:
        raise ValueError(f"need at least 2 grid points, got {n_points}")
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    return _propagate(initial, params, t_final / (n_points - 1), n_points - 1)


def evolve_expm(initial: DensityMatrix2, params: SystemParams, t: float) -> DensityMatrix2:
    """Exact propagation by the matrix exponential of L t.

    scipy's scaling-and-squaring Pade implementation is used, so the
    result does not rely on L being diagonalizable.  Serves as the
    reference the RK4 trajectories are validated against.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    v = _expm(liouvillian(params) * t) @ initial.as_vector()
    return DensityMatrix2.from_vector(v)


def decoherence_rate(params: SystemParams) -> float:
    """Slowest decay rate among the decaying modes of L, in 1/ns.

    This is the asymptotic envelope rate of any non-stationary component;
    it equals Gamma_d when T_c = 0.  Raises ``NoDecayError`` when L has
    no decaying mode (Gamma_d = 0).
    """
    eigs = np.linalg.eigvals(liouvillian(params))
    decaying = [-lam.real for lam in eigs if lam.real < -DECAY_TOL]
    if not decaying:
        raise NoDecayError("no-decay: every eigenvalue of L has vanishing real part")
    return min(decaying)


def combine_decoherence(gamma_d: float, t2_env: float) -> float:
    """Total 1/T_2 = Gamma_d + 1/T_2^env; ``t2_env=math.inf`` suppresses the bath."""
    if gamma_d < 0.0:
        raise ValueError(f"gamma_d must be >= 0, got {gamma_d}")
    if t2_env == math.inf:
        return gamma_d
    if t2_env <= 0.0:
        raise ValueError(f"t2_env must be positive or infinite, got {t2_env}")
    return gamma_d + 1.0 / t2_env
