"""Quantum-inspired genetic search over per-device DNN split points.

Each device's split choice is encoded in ceil(log2(K+1)) qubits held as
(alpha, beta) amplitude pairs.  A generation measures every chromosome into a
bit string, decodes and repairs it into split points, scores it with the
penalized system objective, then rotates amplitudes toward the best string
seen so far and applies amplitude-level crossover and mutation.  An elitist
record keeps the best candidate ever measured.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import metrics
from .scenario import Scenario
from .subsolvers import allocate_edge_compute

THETA_SAME_DEFAULT = -0.01 * math.pi
THETA_DIFF_DEFAULT = 0.05 * math.pi

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class QgaConfig:
    population: int = 100
    generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob: float = 0.02
    penalty_accuracy: float = 1e6
    penalty_energy: float = 1e6
    theta_same: float = THETA_SAME_DEFAULT
    theta_diff: float = THETA_DIFF_DEFAULT
    seed: int = 0
    sign_adjusted: bool = False

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.penalty_accuracy < 0.0 or self.penalty_energy < 0.0:
            raise ValueError("penalty weights must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    feasible_fraction: float


@dataclass(frozen=True)
class QgaResult:
    partitions: tuple[int, ...]
    fitness: float
    trace: tuple[GenerationStats, ...]
    state: "QgaState"


def bits_per_device(num_points: int) -> int:
    """Qubits needed to index split points 0..num_points."""
    if num_points < 1:
        raise ValueError("num_points must be at least 1")
    return max(1, math.ceil(math.log2(num_points + 1)))


@dataclass
class QgaState:
    """Evolving population: amplitude matrices of shape (population, qubits)."""

    alpha: np.ndarray
    beta: np.ndarray
    n_devices: int
    num_points: int
    config: QgaConfig
    observed: np.ndarray | None = None
    best_bits: np.ndarray | None = None
    best_partitions: np.ndarray | None = None
    best_fitness: float = -math.inf
    generation: int = 0

    @property
    def population(self) -> int:
        return self.alpha.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.alpha.shape[1]

    def norm_error(self) -> float:
        """Largest deviation of any qubit's alpha^2 + beta^2 from one."""
        return float(np.abs(self.alpha ** 2 + self.beta ** 2 - 1.0).max())

    def check_norms(self) -> None:
        err = self.norm_error()
        if err > _NORM_TOL:
            raise ValueError(f"qubit norms drifted by {err:.3e}")


def init_population(config: QgaConfig, n_devices: int, num_points: int) -> QgaState:
    """Uniform-superposition start: every qubit at alpha = beta = 1/sqrt(2)."""
    if n_devices < 1:
        raise ValueError("n_devices must be at least 1")
    j = n_devices * bits_per_device(num_points)
    amp = 1.0 / math.sqrt(2.0)
    return QgaState(
        alpha=np.full((config.population, j), amp),
        beta=np.full((config.population, j), amp),
        n_devices=n_devices,
        num_points=num_points,
        config=config,
    )


def measure(beta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Collapse qubits: bit j is 1 when the uniform draw r_j <= beta_j^2."""
    beta = np.asarray(beta, dtype=float)
    return (rng.random(beta.shape) <= beta ** 2).astype(np.int8)


def decode(bits: np.ndarray, n_devices: int, num_points: int) -> np.ndarray:
    """Bit strings to split points, most significant bit first per device.

    Values beyond num_points wrap around modulo (num_points + 1) so every
    string decodes to a valid choice.
    """
    bits = np.asarray(bits)
    m = bits_per_device(num_points)
    if bits.shape[-1] != n_devices * m:
        raise ValueError(f"expected {n_devices * m} bits per chromosome, got {bits.shape[-1]}")
    grouped = bits.reshape(*bits.shape[:-1], n_devices, m)
    weights = 2 ** np.arange(m - 1, -1, -1)
    return (grouped @ weights) % (num_points + 1)


def encode(partitions, num_points: int) -> np.ndarray:
    """Split points to the bit string that decodes back to them (decode inverse)."""
    parts = np.asarray(partitions, dtype=int)
    if parts.min() < 0 or parts.max() > num_points:
        raise ValueError(f"partitions must lie in [0, {num_points}]")
    m = bits_per_device(num_points)
    shifts = np.arange(m - 1, -1, -1)
    return ((parts[:, np.newaxis] >> shifts) & 1).astype(np.int8).reshape(-1)


def _fitness_and_flags(scn, partitions, powers, allocs, penalty_accuracy,
                       penalty_energy) -> tuple[float, bool]:
    total = 0.0
    ok = True
    for n, k in enumerate(partitions):
        m = metrics.evaluate_device(
            scn, n, metrics.DeviceDecision(partition=int(k), power=powers[n],
                                           edge_alloc=allocs[n]))
        if not math.isfinite(m.t_tx) or not math.isfinite(m.t_edge):
            return -math.inf, False
        term = m.rda_term
        term += penalty_accuracy * min(0.0, m.accuracy - scn.constants.acc_min)
        term += penalty_energy * min(0.0, scn.constants.energy_budget - m.total_energy)
        total += term
        ok = ok and m.accuracy_ok and m.energy_ok
    return total, ok


def fitness(scn: Scenario, partitions, powers, allocs, *,
            penalty_accuracy: float = 1e6, penalty_energy: float = 1e6) -> float:
    """Penalized system objective for one candidate split assignment.

    Equals the plain RDA plus linear hinge penalties on the accuracy floor and
    the device energy budget.  A device whose link is silent while it has bits
    to send makes the candidate -inf (it cannot transmit at any cost).
    """
    return _fitness_and_flags(scn, partitions, powers, allocs,
                              penalty_accuracy, penalty_energy)[0]


class PopulationEvaluator:
    """Vectorized fitness over whole populations of split assignments.

    With powers fixed, every per-device quantity except the edge delay depends
    only on (device, split point), so those are tabulated once; the edge delay
    follows from the square-root allocation rule row by row.  Agrees with the
    scalar ``fitness`` path to floating-point roundoff.
    """

    def __init__(self, scn: Scenario, powers, *, penalty_accuracy: float = 1e6,
                 penalty_energy: float = 1e6):
        self.scn = scn
        self.penalty_accuracy = penalty_accuracy
        self.penalty_energy = penalty_energy
        consts = scn.constants
        n = scn.n_devices
        kk = scn.devices[0].profile.num_points + 1

        t_fixed = np.empty((n, kk))
        acc = np.empty((n, kk))
        energy = np.empty((n, kk))
        roots = np.empty((n, kk))
        loads_edge = np.empty((n, kk))
        for i in range(n):
            for k in range(kk):
                m = metrics.evaluate_device(
                    scn, i, metrics.DeviceDecision(partition=k, power=powers[i],
                                                   edge_alloc=0.0))
                t_fixed[i, k] = m.t_local + m.t_tx
                acc[i, k] = m.accuracy
                energy[i, k] = m.total_energy
                loads_edge[i, k] = m.workload_edge
                roots[i, k] = math.sqrt(m.workload_edge)
        self._t_fixed = t_fixed
        self._acc = acc
        self._acc_rev = (acc - consts.acc_min) / (consts.acc_max - consts.acc_min)
        self._energy_slack = consts.energy_budget - energy
        self._roots = roots
        self._loads_edge = loads_edge
        self._finite = np.isfinite(t_fixed)
        self._cols = np.arange(n)
        self._consts = consts

    def evaluate(self, kmat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Fitness and feasibility flags for a (population, devices) int matrix."""
        kmat = np.atleast_2d(np.asarray(kmat, dtype=int))
        consts = self._consts
        cols = self._cols
        roots = self._roots[cols, kmat]
        denom = roots.sum(axis=1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            alloc = np.where(roots > 0.0, consts.edge_capacity * roots / denom, 0.0)
            t_edge = np.where(roots > 0.0, self._loads_edge[cols, kmat] / alloc, 0.0)
        t_fixed = self._t_fixed[cols, kmat]
        delay_rev = (consts.max_delay - (t_fixed + t_edge)) / consts.max_delay
        acc_rev = self._acc_rev[cols, kmat]
        term = np.zeros_like(delay_rev)
        if consts.weight > 0.0:
            term += consts.weight * delay_rev
        if consts.weight < 1.0:
            term += (1.0 - consts.weight) * acc_rev
        acc_gap = np.minimum(0.0, self._acc[cols, kmat] - consts.acc_min)
        energy_gap = np.minimum(0.0, self._energy_slack[cols, kmat])
        term = term + self.penalty_accuracy * acc_gap + self.penalty_energy * energy_gap
        term = np.where(self._finite[cols, kmat], term, -np.inf)
        fit = term.sum(axis=1)
        feasible = ((acc_gap >= 0.0) & (energy_gap >= 0.0)
                    & self._finite[cols, kmat]).all(axis=1)
        return fit, feasible


def rotate(state: QgaState, best_bits: np.ndarray) -> None:
    """Rotate every qubit by the configured angle toward/away per bit agreement.

    Compares state.observed (the latest measurement) against the elite bit
    string.  The plain rule applies theta_same where an individual's observed
    bit matches the elite string and theta_diff elsewhere.  The sign-adjusted
    variant instead steers each qubit toward the elite bit, flipping the angle
    sign according to the target bit and the amplitude quadrant.
    """
    if state.observed is None:
        raise ValueError("rotate requires a prior measurement on the state")
    cfg = state.config
    best_bits = np.asarray(best_bits)
    agree = state.observed == best_bits[np.newaxis, :]
    if cfg.sign_adjusted:
        magnitude = np.where(agree, abs(cfg.theta_same), abs(cfg.theta_diff))
        toward = np.where(best_bits[np.newaxis, :] == 1, 1.0, -1.0)
        quadrant = np.where(state.alpha * state.beta < 0.0, -1.0, 1.0)
        theta = magnitude * toward * quadrant
    else:
        theta = np.where(agree, cfg.theta_same, cfg.theta_diff)
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    alpha = cos_t * state.alpha - sin_t * state.beta
    beta = sin_t * state.alpha + cos_t * state.beta
    state.alpha = alpha
    state.beta = beta


def crossover(state: QgaState, rng: np.random.Generator) -> None:
    """Pair individuals at random; with prob crossover_prob swap amplitude
    suffixes beyond a single uniformly drawn cut point."""
    perm = rng.permutation(state.population)
    j = state.n_qubits
    for a, b in zip(perm[0::2], perm[1::2]):
        u = rng.random()
        if u < state.config.crossover_prob and j > 1:
            cut = int(rng.integers(1, j))
            for arr in (state.alpha, state.beta):
                tmp = arr[a, cut:].copy()
                arr[a, cut:] = arr[b, cut:]
                arr[b, cut:] = tmp


def mutate(state: QgaState, rng: np.random.Generator) -> None:
    """Swap alpha and beta (bit-flip in probability) per qubit with prob mutation_prob."""
    mask = rng.random(state.alpha.shape) < state.config.mutation_prob
    alpha = np.where(mask, state.beta, state.alpha)
    beta = np.where(mask, state.alpha, state.beta)
    state.alpha = alpha
    state.beta = beta


def run(scn: Scenario, powers, config: QgaConfig, allocs_provider=None,
        initial=None) -> QgaResult:
    """Full evolutionary search for split points at fixed transmit powers.

    Edge allocations are recomputed per candidate (by ``allocs_provider``,
    defaulting to the closed-form rule).  Crossover and mutation act on the
    amplitudes, so the elitist record rather than the population carries the
    best solution.  ``initial`` optionally seeds that record with a known
    assignment, so the search refines an incumbent instead of having to
    rediscover a feasible point; the population itself still starts in uniform
    superposition.  Fully deterministic in config.seed.
    """
    n = scn.n_devices
    num_points = scn.devices[0].profile.num_points
    rng = np.random.default_rng(config.seed)
    state = init_population(config, n, num_points)

    fast = allocs_provider is None
    if fast:
        evaluator = PopulationEvaluator(scn, powers,
                                        penalty_accuracy=config.penalty_accuracy,
                                        penalty_energy=config.penalty_energy)

    if initial is not None:
        parts0 = np.asarray(initial, dtype=int)
        if fast:
            fit0 = float(evaluator.evaluate(parts0)[0][0])
        else:
            fit0, _ = _fitness_and_flags(
                scn, parts0, powers, allocs_provider(scn, parts0),
                config.penalty_accuracy, config.penalty_energy)
        state.best_fitness = fit0
        state.best_bits = encode(parts0, num_points)
        state.best_partitions = parts0.copy()

    trace = []
    for gen in range(config.generations):
        state.observed = measure(state.beta, rng)
        kmat = decode(state.observed, n, num_points)
        if fast:
            fit, feas = evaluator.evaluate(kmat)
        else:
            fit = np.empty(state.population)
            feas = np.zeros(state.population, dtype=bool)
            for i in range(state.population):
                allocs = allocs_provider(scn, kmat[i])
                fit[i], feas[i] = _fitness_and_flags(
                    scn, kmat[i], powers, allocs,
                    config.penalty_accuracy, config.penalty_energy)
        i_best = int(np.argmax(fit))
        if fit[i_best] > state.best_fitness:
            state.best_fitness = float(fit[i_best])
            state.best_bits = state.observed[i_best].copy()
            state.best_partitions = kmat[i_best].copy()
        trace.append(GenerationStats(generation=gen, best_fitness=state.best_fitness,
                                     mean_fitness=float(fit.mean()),
                                     feasible_fraction=float(feas.mean())))
        if state.best_bits is not None:
            rotate(state, state.best_bits)
        crossover(state, rng)
        mutate(state, rng)
        state.generation += 1

    if state.best_partitions is None:
        # Every sampled candidate was unable to transmit; fall back to the
        # always-valid fully local assignment.
        local = np.full(n, num_points, dtype=int)
        allocs = allocate_edge_compute(scn, local)
        state.best_partitions = local
        state.best_fitness = fitness(scn, local, powers, allocs,
                                     penalty_accuracy=config.penalty_accuracy,
                                     penalty_energy=config.penalty_energy)
    return QgaResult(
        partitions=tuple(int(k) for k in state.best_partitions),
        fitness=float(state.best_fitness),
        trace=tuple(trace),
        state=state,
    )


def write_trace_csv(trace, path) -> None:
    """Per-generation search statistics as a small CSV."""
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["generation", "best_fitness", "mean_fitness", "feasible_fraction"])
        for row in trace:
            writer.writerow([row.generation, repr(row.best_fitness),
                             repr(row.mean_fitness), repr(row.feasible_fraction)])
