"""Fidelity maximization over measurements and the incompatibility measure.

The incompatibility of a set of observables is one minus the best average
fidelity any intercept-resend strategy can achieve against the set's signal
ensemble. The supremum over measurements has no closed form in general, so
:func:`optimal_fidelity` runs a monotone see-saw from every projective
eigenbasis measurement plus a configurable number of random starts, and
reports the best value found. That value is always a certified lower bound
on the true supremum (every iterate is an actual strategy); closed-form
upper bounds are attached so callers can see how tight it is:

* achievable fidelity is at least (N + d - 1)/(N d), the projective
  baseline, so incompatibility is at most (1 - 1/N)(1 - 1/d),
* incompatibility is at most (d - 1)/(d + 1) in any case, via the
  accessible-fidelity floor 2/(d + 1) (Fuchs) for pure-state ensembles,
* for mutually unbiased bases both the fidelity and the measure are known
  exactly, and the projective baseline attains them.

Reports are deterministic: restart r draws from a stream seeded by
(config.seed, r), so identical configurations give identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    BoundViolationError,
    DimensionMismatchError,
    NonMonotoneError,
    NotMutuallyUnbiasedError,
    SingularUpdateError,
    WrongDimensionError,
)
from .fidelity import Povm, ReconstructionMap, achievable_fidelity, random_povm
from .observables import (
    ObservableSet,
    SignalEnsemble,
    is_mutually_unbiased,
    minimal_noncommuting_subset,
    signal_ensemble,
)

MONOTONE_TOL = 1e-12
BOUND_SLACK = 1e-9
PINV_CUTOFF = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    """Search parameters for the see-saw fidelity maximization.

    ``outcomes`` is the number of rank-1 elements in random starting POVMs;
    None means d^2, enough for any extremal rank-1 POVM in dimension d.
    """

    restarts: int = 16
    outcomes: int | None = None
    max_iters: int = 2000
    convergence_eps: float = 1e-10
    seed: int = 0
    weight_prune_eps: float = 1e-12

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.outcomes is not None and self.outcomes < 1:
            raise ValueError("outcomes must be positive when given")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.convergence_eps <= 0:
            raise ValueError("convergence_eps must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.weight_prune_eps <= 0:
            raise ValueError("weight_prune_eps must be positive")

    def n_outcomes(self, dim: int) -> int:
        k = self.outcomes if self.outcomes is not None else dim * dim
        if k < dim:
            raise ValueError(f"completeness needs at least {dim} outcomes, got {k}")
        return k


@dataclass(frozen=True)
class SeeSawResult:
    """Converged state of one see-saw run."""

    povm: Povm
    reconstruction: ReconstructionMap
    fidelity: float
    iterations: int
    fidelity_trace: np.ndarray


@dataclass(frozen=True)
class FidelitySearch:
    """Best strategy over all see-saw starts, with the per-start record.

    ``restart_trace`` lists the converged fidelity of every start in run
    order: the N projective eigenbasis seeds first, then the random
    restarts. ``iterations`` sums the sweeps over all starts.
    """

    fidelity: float
    povm: Povm
    reconstruction: ReconstructionMap
    restart_trace: tuple[float, ...]
    iterations: int


@dataclass(frozen=True)
class IncompatibilityReport:
    """Full output of the incompatibility computation with bound certificates.

    ``incompatibility`` is exactly 1 - optimal_fidelity. ``fidelity_floor``
    is the projective-strategy guarantee (N + d - 1)/(N d); the two
    ``q_upper_*`` fields are the closed-form caps described in the module
    docstring (the small-N form is tight for N <= d + 1, the large-N form
    for N >= d + 1, equal at N = d + 1); ``fuchs_floor`` is 2/(d + 1).
    ``search_status`` records that the reported fidelity is a certified
    lower bound on the true supremum, not a proof of optimality.
    """

    incompatibility: float
    optimal_fidelity: float
    best_povm: Povm
    best_reconstruction: ReconstructionMap
    dim: int
    n_observables: int
    fidelity_floor: float
    q_upper_small_n: float
    q_upper_large_n: float
    fuchs_floor: float
    iterations_used: int
    restart_trace: tuple[float, ...]
    minimal_subset_labels: tuple[str, ...]
    search_status: str = "best-found-lower-bound"


def q_upper_bounds(n_observables: int, dim: int) -> tuple[float, float]:
    """The two closed-form caps on the incompatibility of N observables.

    Returns ((1 - 1/N)(1 - 1/d), (d - 1)/(d + 1)). Both hold for any N;
    the first is the better one below N = d + 1, the second above, and they
    coincide at N = d + 1.
    """
    if n_observables < 1:
        raise ValueError("n_observables must be >= 1")
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return (
        (1.0 - 1.0 / n_observables) * (1.0 - 1.0 / dim),
        (dim - 1.0) / (dim + 1.0),
    )


def fuchs_lower_bound(dim: int) -> float:
    """Accessible-fidelity floor 2/(d + 1) for any pure-state ensemble."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return 2.0 / (dim + 1.0)


def _pinv_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Pseudo-inverse square root of a PSD matrix on its numerical support."""
    vals, vecs = np.linalg.eigh(matrix)
    top = float(vals[-1])
    if top <= 0.0:
        raise SingularUpdateError("measurement update operator has numerical rank 0")
    inv = np.zeros_like(vals)
    mask = vals > PINV_CUTOFF * top
    inv[mask] = 1.0 / np.sqrt(vals[mask])
    return (vecs * inv) @ vecs.conj().T


def see_saw(
    ens: SignalEnsemble,
    initial: Povm,
    config: OptimizerConfig | None = None,
) -> SeeSawResult:
    """Monotone alternating maximization of the average fidelity.

    Each sweep (i) takes the exact best reconstruction for the current
    measurement (top eigenvector of d * Phi(chi_a) per outcome) and then
    (ii) improves the measurement for that fixed reconstruction with the
    fixed-point update M_a <- L^(-1/2) G_a M_a G_a L^(-1/2), where
    G_a = Phi(sigma_a) and L = sum_a G_a M_a G_a, taken on the support of L.
    Rank-1 elements stay rank-1 under the update; outcomes whose weight
    falls below ``weight_prune_eps`` are dropped and completeness is
    re-verified. Terminates when the per-sweep gain drops below
    ``convergence_eps`` or after ``max_iters`` sweeps.

    The recorded fidelity sequence is non-decreasing to 1e-12 per sweep;
    a larger decrease raises NonMonotoneError, since the update scheme
    guarantees monotone ascent and any violation signals a numerical bug.
    The returned measurement, reconstruction, and fidelity come from the
    best evaluated sweep and are mutually consistent.
    """
    if ens.dim != initial.dim:
        raise DimensionMismatchError(f"ensemble dim {ens.dim} vs POVM dim {initial.dim}")
    config = config or OptimizerConfig()

    kets = ens.kets
    stack = ens.state_projectors
    weights = initial.weights.copy()
    directions = initial.directions.copy()

    trace: list[float] = []
    best_value = -math.inf
    best_state = None
    previous = None
    sweeps = 0

    for sweep in range(1, config.max_iters + 1):
        sweeps = sweep
        probs = np.abs(kets.conj() @ directions.T) ** 2
        phi = np.einsum("ka,kij->aij", probs, stack) / ens.n_states
        lam, eta = linalg.batched_top_eig(phi)
        value = float(weights @ lam)
        trace.append(value)

        if previous is not None and value < previous - MONOTONE_TOL:
            raise NonMonotoneError(
                f"fidelity fell from {previous!r} to {value!r} at sweep {sweep}"
            )
        if value > best_value:
            best_value = value
            best_state = (weights.copy(), directions.copy(), eta.copy())
        if previous is not None and value - previous < config.convergence_eps:
            break
        previous = value
        if sweep == config.max_iters:
            break

        resend_probs = np.abs(kets.conj() @ eta.T) ** 2
        gain_ops = np.einsum("ka,kij->aij", resend_probs, stack) / ens.n_states
        pulled = np.einsum("aij,aj->ai", gain_ops, directions)
        update_op = np.einsum("a,ai,aj->ij", weights, pulled, pulled.conj())
        inv_root = _pinv_sqrt(update_op)
        moved = pulled @ inv_root.T
        scales = np.linalg.norm(moved, axis=1) ** 2
        weights = weights * scales
        keep = weights >= config.weight_prune_eps
        if not np.any(keep):
            raise SingularUpdateError("all outcomes pruned during measurement update")
        weights = weights[keep]
        moved = moved[keep]
        directions = moved / np.linalg.norm(moved, axis=1)[:, None]
        resolution = np.einsum("a,ai,aj->ij", weights, directions, directions.conj())
        if linalg.frobenius_norm(resolution - np.eye(ens.dim)) > 1e-9:
            raise SingularUpdateError("measurement update lost completeness")

    weights, directions, eta = best_state
    povm = Povm(dim=ens.dim, weights=weights, directions=linalg.fix_phases(directions))
    recon = ReconstructionMap(states=eta[:, :, None] * eta.conj()[:, None, :])
    return SeeSawResult(
        povm=povm,
        reconstruction=recon,
        fidelity=best_value,
        iterations=sweeps,
        fidelity_trace=np.array(trace),
    )


def optimal_fidelity(ens: SignalEnsemble, config: OptimizerConfig | None = None) -> FidelitySearch:
    """Best intercept-resend fidelity found over all see-saw starts.

    Starts from each of the N projective eigenbasis measurements, which
    guarantees the (N + d - 1)/(N d) floor, then from ``config.restarts``
    random POVMs with ``config.n_outcomes(d)`` outcomes. The maximum is a
    lower bound on the true supremum; ties resolve to the earliest start.
    """
    config = config or OptimizerConfig()
    n_outcomes = config.n_outcomes(ens.dim)

    starts: list[Povm] = [
        Povm(dim=ens.dim, weights=np.ones(ens.dim), directions=ens.vectors[i])
        for i in range(ens.n_bases)
    ]
    for restart in range(config.restarts):
        rng = np.random.default_rng((config.seed, restart))
        starts.append(random_povm(ens.dim, n_outcomes, rng))

    best: SeeSawResult | None = None
    restart_trace: list[float] = []
    iterations = 0
    for povm0 in starts:
        result = see_saw(ens, povm0, config)
        restart_trace.append(result.fidelity)
        iterations += result.iterations
        if best is None or result.fidelity > best.fidelity:
            best = result

    return FidelitySearch(
        fidelity=best.fidelity,
        povm=best.povm,
        reconstruction=best.reconstruction,
        restart_trace=tuple(restart_trace),
        iterations=iterations,
    )


def incompatibility(obs: ObservableSet, config: OptimizerConfig | None = None) -> IncompatibilityReport:
    """Incompatibility of an observable set, with bound certificates.

    Reduces the set to a minimal noncommuting subset, builds its signal
    ensemble, maximizes the intercept-resend fidelity, and checks the
    result against every applicable closed-form bound. A bound violation
    means a numerical bug and raises BoundViolationError rather than being
    reported as data.
    """
    config = config or OptimizerConfig()
    subset = minimal_noncommuting_subset(obs)
    ens = signal_ensemble(subset)
    search = optimal_fidelity(ens, config)

    n, d = subset.count, subset.dim
    floor = (n + d - 1.0) / (n * d)
    q_small, q_large = q_upper_bounds(n, d)
    fuchs = fuchs_lower_bound(d)
    q = 1.0 - search.fidelity

    if search.fidelity < floor - BOUND_SLACK:
        raise BoundViolationError(
            f"fidelity {search.fidelity!r} below projective floor {floor!r}"
        )
    if search.fidelity < fuchs - BOUND_SLACK:
        raise BoundViolationError(
            f"fidelity {search.fidelity!r} below accessible-fidelity floor {fuchs!r}"
        )
    if n <= d + 1 and q > q_small + BOUND_SLACK:
        raise BoundViolationError(f"incompatibility {q!r} above cap {q_small!r}")
    if q > q_large + BOUND_SLACK:
        raise BoundViolationError(f"incompatibility {q!r} above cap {q_large!r}")

    return IncompatibilityReport(
        incompatibility=q,
        optimal_fidelity=search.fidelity,
        best_povm=search.povm,
        best_reconstruction=search.reconstruction,
        dim=d,
        n_observables=n,
        fidelity_floor=floor,
        q_upper_small_n=q_small,
        q_upper_large_n=q_large,
        fuchs_floor=fuchs,
        iterations_used=search.iterations,
        restart_trace=search.restart_trace,
        minimal_subset_labels=subset.labels,
    )


def _projective_fidelity_batch(ens: SignalEnsemble, kets: np.ndarray) -> np.ndarray:
    """Achievable fidelity of {P, I - P} for a batch of qubit directions."""
    probs = np.abs(ens.kets.conj() @ kets.T) ** 2
    phi_plus = np.einsum("kb,kij->bij", probs, ens.state_projectors) / ens.n_states
    phi_minus = np.einsum("kb,kij->bij", 1.0 - probs, ens.state_projectors) / ens.n_states
    return np.linalg.eigvalsh(phi_plus)[:, -1] + np.linalg.eigvalsh(phi_minus)[:, -1]


def qubit_grid_oracle(ens: SignalEnsemble, resolution: int = 180) -> float:
    """Brute-force maximum fidelity over projective qubit measurements.

    Scans polar angles on a resolution x resolution sphere grid, then
    refines around the best point three times, shrinking the window by 10
    at each level. Independent of the see-saw path; used to certify it on
    qubit inputs.
    """
    if ens.dim != 2:
        raise WrongDimensionError("the grid oracle only covers dimension 2")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")

    thetas = np.linspace(0.0, np.pi, resolution)
    phis = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    grid_t, grid_p = np.meshgrid(thetas, phis, indexing="ij")
    flat_t, flat_p = grid_t.ravel(), grid_p.ravel()

    def kets_of(t, p):
        return np.stack([np.cos(t / 2.0), np.sin(t / 2.0) * np.exp(1j * p)], axis=1)

    values = _projective_fidelity_batch(ens, kets_of(flat_t, flat_p))
    at = int(np.argmax(values))
    best_t, best_p = float(flat_t[at]), float(flat_p[at])

    window_t = np.pi / (resolution - 1)
    window_p = 2.0 * np.pi / resolution
    for _ in range(3):
        sub_t = np.linspace(best_t - window_t, best_t + window_t, 21)
        sub_p = np.linspace(best_p - window_p, best_p + window_p, 21)
        st, sp = np.meshgrid(sub_t, sub_p, indexing="ij")
        st, sp = st.ravel(), sp.ravel()
        sub_values = _projective_fidelity_batch(ens, kets_of(st, sp))
        at = int(np.argmax(sub_values))
        best_t, best_p = float(st[at]), float(sp[at])
        window_t /= 10.0
        window_p /= 10.0

    top = np.array([np.cos(best_t / 2.0), np.sin(best_t / 2.0) * np.exp(1j * best_p)])
    orth = np.array([-np.conj(top[1]), np.conj(top[0])])
    best_povm = Povm(dim=2, weights=np.ones(2), directions=np.stack([top, orth]))
    return achievable_fidelity(ens, best_povm).value


def collision_probability_sum(
    state: np.ndarray,
    bases: ObservableSet,
    mub_tol: float = 1e-9,
) -> tuple[float, float, bool]:
    """Summed collision probability of a pure state across unbiased bases.

    For each basis the collision probability of its outcome distribution is
    the sum of squared outcome probabilities; summed over N mutually
    unbiased bases it is capped by (N + d - 1)/d, with equality exactly
    when the state lies in one of the bases. Returns (sum, cap, holds)
    where ``holds`` allows 1e-10 slack.
    """
    if not is_mutually_unbiased(bases, mub_tol):
        raise NotMutuallyUnbiasedError("the bases are not mutually unbiased within tolerance")
    phi = np.asarray(state, dtype=complex)
    if phi.shape != (bases.dim,):
        raise DimensionMismatchError(f"expected a length-{bases.dim} vector, got {phi.shape}")
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise ValueError("state must be a unit vector")
    stacked = np.concatenate([b.vectors for b in bases.members])
    outcome_probs = np.abs(stacked.conj() @ phi) ** 2
    total = float(np.sum(outcome_probs**2))
    cap = (bases.count + bases.dim - 1.0) / bases.dim
    return total, cap, total <= cap + 1e-10
