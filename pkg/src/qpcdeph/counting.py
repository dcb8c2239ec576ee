"""Count-resolved master equations for the detector electron number n.

Each count sector n carries its own (p02, p11, Re rho12, Im rho12) block.
Populations feed the sector above at the hopping rate of their dot state
(D' for p02, D for p11); the coherence is damped at (D + D')/2 within a
sector and fed from the sector below at sqrt(D D').  Summing over n
telescopes the ladder terms and reproduces the reduced dynamics with
Gamma_d = (sqrt(D) - sqrt(D'))^2 / 2, which is the consistency check the
tests lean on.  With T_c = 0 each population ladder is a pure birth
process, so P(n, t) is an exact Poisson distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynamics import GUARD_FRACTION, DensityMatrix2, SystemParams
from .errors import InvariantError, StepSizeError, TruncationError
from .qpc import TunnelingRates
from .units import HBAR

# Probability bookkeeping across count sectors.
TOTAL_PROB_TOL = 1e-8
POPULATION_TOL = 1e-10
TAIL_TOL = 1e-8


@dataclass(frozen=True)
class CountDistribution:
    """Distribution of the detector electron count with its first moments."""

    probabilities: np.ndarray
    mean: float
    variance: float

    def __post_init__(self):
        if abs(float(np.sum(self.probabilities)) - 1.0) > TOTAL_PROB_TOL:
            raise ValueError("count probabilities must sum to 1")
        if self.variance < -POPULATION_TOL:
            raise ValueError(f"variance must be non-negative, got {self.variance}")


@dataclass(frozen=True)
class NResolvedState:
    """Density-matrix components per detector count n = 0 .. n_max.

    ``components`` has shape (n_max + 1, 4) with columns p02, p11,
    Re rho12, Im rho12.  The top sector must hold negligible weight,
    otherwise the truncation is inadequate.
    """

    components: np.ndarray
    n_max: int

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if comp.shape != (self.n_max + 1, 4):
            raise ValueError(
                f"components shape {comp.shape} does not match n_max={self.n_max}"
            )
        pops = comp[:, 0] + comp[:, 1]
        if abs(float(pops.sum()) - 1.0) > TOTAL_PROB_TOL:
            raise ValueError(f"total probability {pops.sum()} deviates from 1")
        if float(np.min(comp[:, :2])) < -POPULATION_TOL:
            raise ValueError("negative sector population")
        if float(pops[-1]) >= TAIL_TOL:
            raise ValueError(
                f"top-sector mass {pops[-1]} signals an inadequate n_max={self.n_max}"
            )

    @classmethod
    def from_reduced(cls, state: DensityMatrix2, n_max: int) -> "NResolvedState":
        """Place a reduced state in the n = 0 sector (no electron counted yet)."""
        comp = np.zeros((n_max + 1, 4))
        comp[0] = state.as_vector()
        return cls(components=comp, n_max=n_max)

    def reduced(self) -> DensityMatrix2:
        """Trace over the count index."""
        return DensityMatrix2.from_vector(np.asarray(self.components).sum(axis=0))

    def distribution(self) -> CountDistribution:
        comp = np.asarray(self.components)
        probs = comp[:, 0] + comp[:, 1]
        n = np.arange(len(probs), dtype=float)
        mean = float(np.dot(n, probs))
        variance = float(np.dot(n * n, probs)) - mean**2
        return CountDistribution(probabilities=probs, mean=mean, variance=variance)

    def tail_mass(self) -> float:
        comp = np.asarray(self.components)
        return float(comp[-1, 0] + comp[-1, 1])


class CountingTrajectory:
    """Sequence of NResolvedState snapshots on an equidistant time grid."""

    def __init__(self, times: np.ndarray, sectors: np.ndarray, n_max: int):
        self.times = times
        self.sectors = sectors  # shape (len(times), n_max + 1, 4)
        self.n_max = n_max

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, k: int) -> NResolvedState:
        return NResolvedState(components=self.sectors[k], n_max=self.n_max)

    def reduced_states(self) -> np.ndarray:
        """Trace over n at every time: shape (len(times), 4)."""
        return self.sectors.sum(axis=1)

    def mean_counts(self) -> np.ndarray:
        probs = self.sectors[:, :, 0] + self.sectors[:, :, 1]
        return probs @ np.arange(self.n_max + 1, dtype=float)


def counting_rhs(
    state: NResolvedState, params: SystemParams, rates: TunnelingRates
) -> np.ndarray:
    """Time derivative of the count-resolved components, shape (n_max+1, 4).

    ``params.gamma_d`` plays no role here: the coherence damping comes
    from the hopping rates themselves.  The n = 0 sector has no feeder.
    """
    comp = np.asarray(state.components, dtype=float)
    c = params.tunnel_coupling / HBAR
    e = params.detuning / HBAR
    d = rates.d_rate
    dp = rates.d_prime_rate
    half = 0.5 * (d + dp)
    feed = math.sqrt(d * dp)

    p02, p11 = comp[:, 0], comp[:, 1]
    re, im = comp[:, 2], comp[:, 3]
    out = np.empty_like(comp)
    out[:, 0] = -dp * p02 - 2.0 * c * im
    out[:, 1] = -d * p11 + 2.0 * c * im
    out[:, 2] = -e * im - half * re
    out[:, 3] = e * re + c * (p02 - p11) - half * im
    out[1:, 0] += dp * p02[:-1]
    out[1:, 1] += d * p11[:-1]
    out[1:, 2] += feed * re[:-1]
    out[1:, 3] += feed * im[:-1]
    return out


def suggest_n_max(rates: TunnelingRates, t_final: float) -> int:
    """Poisson-tail heuristic: mean + 8 sigma + 10 sectors of headroom."""
    mu = max(rates.d_rate, rates.d_prime_rate) * t_final
    return math.ceil(mu + 8.0 * math.sqrt(mu) + 10.0)


def counting_max_step(params: SystemParams, rates: TunnelingRates) -> float:
    """Step-size guard for the ladder: coherent motion and hopping combined."""
    guard = math.inf
    om = math.hypot(params.tunnel_coupling, 0.5 * params.detuning)
    if om > 0.0:
        guard = GUARD_FRACTION * HBAR / om
    fastest = max(rates.d_rate, rates.d_prime_rate)
    if fastest > 0.0:
        guard = min(guard, GUARD_FRACTION / fastest)
    return guard


def evolve_counting(
    initial: DensityMatrix2,
    params: SystemParams,
    rates: TunnelingRates,
    t_final: float,
    dt: float,
    n_max: int,
    record_every: int = 1,
) -> CountingTrajectory:
    """Integrate the count-resolved ladder from all weight in n = 0.

    Uses the same RK4 kernel discipline as the reduced integrator (grid
    step dt, internal substepping).  The truncation adequacy (negligible
    top-sector mass) and probability bookkeeping are verified at every
    recorded time.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    needed = suggest_n_max(rates, t_final)
    if n_max < needed:
        raise TruncationError(
            f"n_max={n_max} is below the Poisson-tail bound for this run",
            suggested_n_max=needed,
        )
    guard = counting_max_step(params, rates)
    if dt > guard * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt={dt} ns exceeds the step-size guard {guard} ns for this ladder",
            dt_max=guard,
        )

    n_steps = max(1, math.ceil(t_final / dt - 1e-9))
    n_steps = record_every * math.ceil(n_steps / record_every)
    step = t_final / n_steps
    substeps = kernels.substeps_for(step, guard)
    n_intervals = n_steps // record_every

    y0 = NResolvedState.from_reduced(initial, n_max).components
    snaps = kernels.rk4_counting(
        y0,
        params.tunnel_coupling / HBAR,
        params.detuning / HBAR,
        rates.d_rate,
        rates.d_prime_rate,
        step / substeps,
        n_intervals,
        record_every * substeps,
    )

    pops = snaps[:, :, 0] + snaps[:, :, 1]
    totals = pops.sum(axis=1)
    if np.max(np.abs(totals - 1.0)) > TOTAL_PROB_TOL:
        raise InvariantError(
            f"total probability drifted by {np.max(np.abs(totals - 1.0))}"
        )
    if float(np.min(pops)) < -POPULATION_TOL:
        raise InvariantError(f"negative sector population {np.min(pops)}")
    worst_tail = float(np.max(pops[:, -1]))
    if worst_tail >= TAIL_TOL:
        raise TruncationError(
            f"top-sector mass reached {worst_tail}; enlarge the truncation",
            suggested_n_max=max(needed, math.ceil(1.5 * n_max)),
        )

    times = np.linspace(0.0, step * n_steps, n_intervals + 1)
    return CountingTrajectory(times=times, sectors=snaps, n_max=n_max)


def detector_signal(state, rates: TunnelingRates) -> float:
    """Mean count rate d<n>/dt = D' p02 + D p11 in 1/ns.

    Accepts a reduced ``DensityMatrix2`` or an ``NResolvedState`` (total
    populations are used).
    """
    if isinstance(state, NResolvedState):
        reduced = state.reduced()
        p02, p11 = reduced.p02, reduced.p11
    else:
        p02, p11 = state.p02, state.p11
    return rates.d_prime_rate * p02 + rates.d_rate * p11
