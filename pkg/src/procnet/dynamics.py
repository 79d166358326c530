"""Discrete-time evolution of closed processes and exact stationary analysis.

A closed process is a Markov chain on the sections of its internal
variables: row = state at time t, column = state at time t+1.  Stationary
distributions are computed exactly by restricting the chain to a recurrent
communicating class and solving the balance equations with rational
Gauss-Jordan elimination; the result is a vertex of the polytope
{w (M - Id) = 0, w >= 0, sum w = 1}.  Power iteration is deliberately not
used: the interesting chains here are periodic permutations on which it
does not converge.

The Monte Carlo side (`simulate_chain`, `estimate_stationary`) exists as an
independent oracle; it uses the documented generator from `rng` so runs are
reproducible from the seed alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError, ResourceLimitError, StationarityError
from .exactlp import solve_linear_fraction_free
from .process import ProcessTensor
from .rng import SplitMix64, cumulative_thresholds, sample_index
from .scenario import (
    ONE,
    ZERO,
    Distribution,
    Section,
    iter_outcome_tuples,
    outcome_index,
    section_count,
    section_index,
)

DEFAULT_MAX_STATES = 1024

_EXACT_METHODS = ("lp_vertex", "user_supplied")
_METHODS = _EXACT_METHODS + ("cesaro_estimate",)


@dataclass(frozen=True)
class StationaryResult:
    """A stationary (or estimated) distribution together with its provenance."""

    distribution: Distribution
    method: str
    residual: Fraction

    def __post_init__(self):
        if self.method not in _METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.method in _EXACT_METHODS and self.residual != 0:
            raise DomainError(f"method {self.method!r} requires residual 0")


@dataclass(frozen=True)
class StationaryCheck:
    stationary: bool
    residual: Fraction
    worst_state: tuple[str, ...] | None


def _require_closed(sigma: ProcessTensor) -> None:
    if not sigma.is_closed:
        raise DomainError(
            f"process {sigma.name!r} is not closed (inputs/outputs present)"
        )


def _aligned(sigma: ProcessTensor, dist: Distribution) -> Distribution:
    names = tuple(v.name for v in sigma.internals)
    if dist.variable_names == names:
        return dist
    if set(dist.variable_names) == set(names):
        return dist.reorder(names)
    raise DomainError(
        f"distribution over {dist.variable_names} does not match "
        f"the process variables {names}"
    )


def step(sigma: ProcessTensor, dist: Distribution) -> Distribution:
    """One synchronous update: new weight of x is sum_x' M[x'][x] * w[x']."""
    _require_closed(sigma)
    dist = _aligned(sigma, dist)
    n = len(dist.weights)
    out = [ZERO] * n
    for r, w in enumerate(dist.weights):
        if not w:
            continue
        row = sigma.matrix[r]
        for c in range(n):
            e = row[c]
            if e:
                out[c] += w * e
    return Distribution(sigma.internals, tuple(out))


def verify_stationary(sigma: ProcessTensor, dist: Distribution) -> StationaryCheck:
    """Exact fixed-point check; reports the max-norm residual otherwise."""
    dist = _aligned(sigma, dist)
    after = step(sigma, dist)
    residual = ZERO
    worst = None
    states = list(iter_outcome_tuples(sigma.internals))
    for i, (a, b) in enumerate(zip(after.weights, dist.weights)):
        gap = abs(a - b)
        if gap > residual:
            residual = gap
            worst = states[i]
    return StationaryCheck(residual == 0, residual, worst)


def _support_graph(sigma: ProcessTensor) -> list[list[int]]:
    return [
        [c for c, e in enumerate(row) if e] for row in sigma.matrix
    ]


def _strongly_connected_components(succ: list[list[int]]) -> list[list[int]]:
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[list[int]] = []
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, edge = work[-1]
            if edge == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for k in range(edge, len(succ[v])):
                w = succ[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return components


def _recurrent_class(sigma: ProcessTensor) -> list[int]:
    """A closed communicating class, deterministically chosen."""
    succ = _support_graph(sigma)
    closed = []
    for comp in _strongly_connected_components(succ):
        inside = set(comp)
        if all(w in inside for v in comp for w in succ[v]):
            closed.append(comp)
    if not closed:
        raise AssertionError("a finite chain always has a closed class")
    return min(closed, key=lambda comp: comp[0])


def find_stationary(
    sigma: ProcessTensor, max_states: int = DEFAULT_MAX_STATES
) -> StationaryResult:
    """An exact stationary distribution of a closed process.

    The chain restricted to a recurrent class is irreducible, so its balance
    equations have a unique positive solution; it is found by exact
    elimination and embedded with zeros elsewhere.  Reducible chains have
    several recurrent classes; the one containing the smallest state index
    is used, making the output deterministic.
    """
    _require_closed(sigma)
    n = section_count(sigma.internals)
    if n > max_states:
        raise ResourceLimitError(
            f"state space of size {n} exceeds the cap of {max_states}"
        )
    cls = _recurrent_class(sigma)
    k = len(cls)
    rows = []
    rhs = []
    for j in range(k):
        row = [
            sigma.matrix[cls[i]][cls[j]] - (ONE if i == j else ZERO) for i in range(k)
        ]
        rows.append(row)
        rhs.append(ZERO)
    rows.append([ONE] * k)
    rhs.append(ONE)
    solution = solve_linear_fraction_free(rows, rhs)
    if solution is None or any(x < 0 for x in solution):
        raise AssertionError("balance equations of a recurrent class must solve")
    weights = [ZERO] * n
    for pos, state in enumerate(cls):
        weights[state] = solution[pos]
    dist = Distribution(sigma.internals, tuple(weights))
    check = verify_stationary(sigma, dist)
    if not check.stationary:
        raise AssertionError("computed distribution failed the exact fixed-point check")
    return StationaryResult(dist, "lp_vertex", ZERO)


def is_irreducible(sigma: ProcessTensor) -> bool:
    _require_closed(sigma)
    return len(_strongly_connected_components(_support_graph(sigma))) == 1


def chain_period(sigma: ProcessTensor) -> int:
    """Period of an irreducible chain (gcd of its cycle lengths)."""
    if not is_irreducible(sigma):
        raise DomainError("period is only defined for irreducible chains")
    succ = _support_graph(sigma)
    level = {0: 0}
    frontier = [0]
    g = 0
    while frontier:
        nxt = []
        for v in frontier:
            for w in succ[v]:
                if w in level:
                    g = gcd(g, level[v] + 1 - level[w])
                else:
                    level[w] = level[v] + 1
                    nxt.append(w)
        frontier = nxt
    return abs(g) if g else 1


def is_ergodic(sigma: ProcessTensor) -> bool:
    """Irreducible and aperiodic, hence convergent from every start."""
    return is_irreducible(sigma) and chain_period(sigma) == 1


def _initial_state_index(sigma: ProcessTensor, init, rng: SplitMix64) -> int:
    if isinstance(init, Distribution):
        init = _aligned(sigma, init)
        return sample_index(rng, cumulative_thresholds(init.weights))
    if isinstance(init, Section):
        return section_index(sigma.internals, init)
    return outcome_index(sigma.internals, tuple(init))


def simulate_chain(
    sigma: ProcessTensor,
    init,
    steps: int,
    seed: int,
) -> tuple[tuple[str, ...], ...]:
    """Reproducible trajectory of length steps+1 (initial state included).

    `init` is a Distribution (sampled first, with the same generator), a
    Section, or a tuple of outcome labels.  The state at t+1 is sampled from
    the row of the matrix at the state at t, per the rule documented in
    `rng`.
    """
    _require_closed(sigma)
    if steps < 0:
        raise DomainError("steps must be >= 0")
    rng = SplitMix64(seed)
    state = _initial_state_index(sigma, init, rng)
    thresholds: dict[int, list[int]] = {}
    trail = [state]
    for _ in range(steps):
        t = thresholds.get(state)
        if t is None:
            t = cumulative_thresholds(sigma.matrix[state])
            thresholds[state] = t
        state = sample_index(rng, t)
        trail.append(state)
    states = list(iter_outcome_tuples(sigma.internals))
    return tuple(states[s] for s in trail)


def estimate_stationary(
    sigma: ProcessTensor, init, steps: int, seed: int
) -> StationaryResult:
    """Time-averaged state frequencies along one simulated trajectory.

    This is a Cesaro average, so it is meaningful for periodic chains as
    well; the exact residual of the estimate is reported alongside.
    """
    if steps < 1:
        raise DomainError("estimation needs at least one step")
    trail = simulate_chain(sigma, init, steps, seed)
    counts: dict[int, int] = {}
    for outcomes in trail:
        idx = outcome_index(sigma.internals, outcomes)
        counts[idx] = counts.get(idx, 0) + 1
    total = len(trail)
    weights = tuple(
        Fraction(counts.get(i, 0), total)
        for i in range(section_count(sigma.internals))
    )
    dist = Distribution(sigma.internals, weights)
    check = verify_stationary(sigma, dist)
    return StationaryResult(dist, "cesaro_estimate", check.residual)


def require_stationary(sigma: ProcessTensor, dist: Distribution) -> Distribution:
    """Raise StationarityError unless dist is an exact fixed point."""
    check = verify_stationary(sigma, dist)
    if not check.stationary:
        raise StationarityError(
            f"distribution is not stationary: max residual {check.residual} "
            f"at state {check.worst_state}"
        )
    return _aligned(sigma, dist)
