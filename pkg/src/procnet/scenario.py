"""Finite measurement scenarios: variables, sections, exact distributions.

A section is a joint outcome assignment for an ordered set of variables.
Sections are indexed lexicographically by (variable order, alphabet order),
row-major with the last variable fastest; every dense vector in the package
uses that layout.  All probabilities are `fractions.Fraction` end to end, so
equality checks downstream are exact and never depend on a float tolerance.

Everything here is immutable after construction and safe to share between
threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DomainError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Variable:
    """A named observable with a finite, ordered outcome alphabet."""

    name: str
    alphabet: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise DomainError("variable name must be a nonempty string")
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.alphabet:
            raise DomainError(f"variable {self.name!r} needs at least one outcome")
        if any(not isinstance(o, str) for o in self.alphabet):
            raise DomainError(f"outcomes of {self.name!r} must be strings")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DomainError(f"outcomes of {self.name!r} must be distinct")

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def index(self, outcome: str) -> int:
        try:
            return self.alphabet.index(outcome)
        except ValueError:
            raise DomainError(
                f"outcome {outcome!r} not in alphabet of {self.name!r}"
            ) from None


@dataclass(frozen=True)
class Section:
    """One outcome per variable of a declared variable set."""

    assignment: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "assignment", tuple((str(n), str(o)) for n, o in self.assignment)
        )
        names = [n for n, _ in self.assignment]
        if len(set(names)) != len(names):
            raise DomainError("section assigns a variable more than once")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.assignment)

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(o for _, o in self.assignment)

    def outcome(self, name: str) -> str:
        for n, o in self.assignment:
            if n == name:
                return o
        raise DomainError(f"section does not cover variable {name!r}")

    def as_dict(self) -> dict[str, str]:
        return dict(self.assignment)


def _check_distinct_names(variables: Sequence[Variable]) -> None:
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise DomainError("variable names must be distinct")


def section_count(variables: Sequence[Variable]) -> int:
    n = 1
    for v in variables:
        n *= v.size
    return n


def iter_outcome_tuples(variables: Sequence[Variable]) -> Iterator[tuple[str, ...]]:
    """All joint outcomes in index order (last variable fastest)."""
    return product(*[v.alphabet for v in variables])


def iter_sections(variables: Sequence[Variable]) -> Iterator[Section]:
    names = tuple(v.name for v in variables)
    for outcomes in iter_outcome_tuples(variables):
        yield Section(tuple(zip(names, outcomes)))


def section_at(variables: Sequence[Variable], index: int) -> Section:
    total = section_count(variables)
    if not 0 <= index < total:
        raise DomainError(f"section index {index} out of range 0..{total - 1}")
    outcomes = []
    for v in reversed(variables):
        index, digit = divmod(index, v.size)
        outcomes.append(v.alphabet[digit])
    outcomes.reverse()
    return Section(tuple((v.name, o) for v, o in zip(variables, outcomes)))


def outcome_index(variables: Sequence[Variable], outcomes: Sequence[str]) -> int:
    if len(outcomes) != len(variables):
        raise DomainError("outcome tuple length does not match variable list")
    idx = 0
    for v, o in zip(variables, outcomes):
        idx = idx * v.size + v.index(o)
    return idx


def section_index(variables: Sequence[Variable], section) -> int:
    """Index of a section given as a Section, mapping or outcome tuple."""
    if isinstance(section, Section):
        lookup = section.as_dict()
        if set(lookup) != {v.name for v in variables}:
            raise DomainError("section does not cover exactly the given variables")
        return outcome_index(variables, [lookup[v.name] for v in variables])
    if isinstance(section, Mapping):
        if set(section) != {v.name for v in variables}:
            raise DomainError("section does not cover exactly the given variables")
        return outcome_index(variables, [section[v.name] for v in variables])
    return outcome_index(variables, tuple(section))


def restrict_section(section: Section, names: Iterable[str]) -> Section:
    """Project a section onto a subset of its variables, in the given order."""
    names = tuple(names)
    lookup = section.as_dict()
    missing = [n for n in names if n not in lookup]
    if missing:
        raise DomainError(f"cannot restrict: {missing} not among {sorted(lookup)}")
    if len(set(names)) != len(names):
        raise DomainError("restriction names must be distinct")
    return Section(tuple((n, lookup[n]) for n in names))


def _as_fraction(value) -> Fraction:
    if type(value) is Fraction:
        return value
    if isinstance(value, float):
        raise DomainError("weights must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class Distribution:
    """Exact probability weights over the sections of a variable list."""

    variables: tuple[Variable, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        _check_distinct_names(self.variables)
        weights = tuple(_as_fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != section_count(self.variables):
            raise DomainError(
                f"expected {section_count(self.variables)} weights, got {len(weights)}"
            )
        if any(w < 0 for w in weights):
            raise DomainError("weights must be nonnegative")
        if sum(weights, ZERO) != ONE:
            raise DomainError("weights must sum to exactly 1")

    @classmethod
    def from_function(cls, variables: Sequence[Variable], weight_of) -> "Distribution":
        """Build from a callable mapping each outcome tuple to a weight."""
        variables = tuple(variables)
        return cls(variables, tuple(weight_of(t) for t in iter_outcome_tuples(variables)))

    @classmethod
    def uniform(cls, variables: Sequence[Variable]) -> "Distribution":
        variables = tuple(variables)
        n = section_count(variables)
        return cls(variables, (Fraction(1, n),) * n)

    @classmethod
    def point_mass(cls, variables: Sequence[Variable], outcomes) -> "Distribution":
        variables = tuple(variables)
        idx = section_index(variables, outcomes)
        weights = [ZERO] * section_count(variables)
        weights[idx] = ONE
        return cls(variables, tuple(weights))

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def weight(self, section) -> Fraction:
        return self.weights[section_index(self.variables, section)]

    def support(self) -> tuple[Section, ...]:
        return tuple(
            section_at(self.variables, i) for i, w in enumerate(self.weights) if w > 0
        )

    def reorder(self, names: Sequence[str]) -> "Distribution":
        """Same distribution with the variables permuted into the given order."""
        names = tuple(names)
        if sorted(names) != sorted(self.variable_names):
            raise DomainError("reorder requires a permutation of the variable names")
        return marginalize(self, names)


def marginalize(dist: Distribution, names: Iterable[str]) -> Distribution:
    """Sum out every variable not listed; the result follows the given order.

    The weight of a target section is the total weight of all source sections
    restricting to it.  Total mass is preserved exactly.
    """
    names = tuple(names)
    if len(set(names)) != len(names):
        raise DomainError("marginalization names must be distinct")
    position = {v.name: k for k, v in enumerate(dist.variables)}
    try:
        positions = [position[n] for n in names]
    except KeyError as exc:
        raise DomainError(f"variable {exc.args[0]!r} not in distribution") from None
    target_vars = tuple(dist.variables[p] for p in positions)
    if target_vars == dist.variables:
        return dist

    sizes = [v.size for v in dist.variables]
    strides = [0] * len(dist.variables)
    acc = 1
    for k in range(len(names) - 1, -1, -1):
        strides[positions[k]] = acc
        acc *= target_vars[k].size

    out = [ZERO] * section_count(target_vars)
    digits = [0] * len(sizes)
    target = 0
    for w in dist.weights:
        if w:
            out[target] += w
        # advance the mixed-radix odometer, keeping the target index in sync
        for k in range(len(sizes) - 1, -1, -1):
            digits[k] += 1
            target += strides[k]
            if digits[k] < sizes[k]:
                break
            target -= strides[k] * sizes[k]
            digits[k] = 0
    return Distribution(target_vars, tuple(out))


@dataclass(frozen=True)
class MeasurementScenario:
    """Variables plus the family of maximal jointly-measurable contexts.

    Contexts below the maximal ones are never materialized; queries about
    them marginalize on demand.
    """

    variables: tuple[Variable, ...]
    maximal_contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self,
            "maximal_contexts",
            tuple(tuple(ctx) for ctx in self.maximal_contexts),
        )
        _check_distinct_names(self.variables)
        declared = {v.name for v in self.variables}
        if not self.maximal_contexts:
            raise DomainError("a scenario needs at least one maximal context")
        covered: set[str] = set()
        sets = []
        for ctx in self.maximal_contexts:
            if not ctx:
                raise DomainError("contexts must be nonempty")
            if len(set(ctx)) != len(ctx):
                raise DomainError(f"context {ctx} repeats a variable")
            unknown = set(ctx) - declared
            if unknown:
                raise DomainError(f"context {ctx} uses undeclared variables {sorted(unknown)}")
            covered |= set(ctx)
            sets.append(frozenset(ctx))
        if covered != declared:
            raise DomainError(f"variables {sorted(declared - covered)} appear in no context")
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a <= b:
                    raise DomainError(
                        f"context {self.maximal_contexts[i]} is contained in "
                        f"{self.maximal_contexts[j]}; maximal contexts must be incomparable"
                    )

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise DomainError(f"unknown variable {name!r}")

    def context_variables(self, context: Sequence[str]) -> tuple[Variable, ...]:
        return tuple(self.variable(n) for n in context)


@dataclass(frozen=True)
class EmpiricalModel:
    """A scenario with one exact distribution per maximal context."""

    scenario: MeasurementScenario
    context_distributions: tuple[Distribution, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "context_distributions", tuple(self.context_distributions)
        )
        ctxs = self.scenario.maximal_contexts
        if len(self.context_distributions) != len(ctxs):
            raise DomainError("need exactly one distribution per maximal context")
        for ctx, dist in zip(ctxs, self.context_distributions):
            if dist.variable_names != ctx:
                raise DomainError(
                    f"distribution over {dist.variable_names} does not match context {ctx}"
                )
            for v in dist.variables:
                if v != self.scenario.variable(v.name):
                    raise DomainError(
                        f"variable {v.name!r} disagrees with the scenario's declaration"
                    )

    def distribution_for(self, context: Iterable[str]) -> Distribution:
        wanted = frozenset(context)
        for ctx, dist in zip(self.scenario.maximal_contexts, self.context_distributions):
            if frozenset(ctx) == wanted:
                return dist
        raise DomainError(f"no maximal context with variables {sorted(wanted)}")


@dataclass(frozen=True)
class OverlapViolation:
    """One coordinate where two context marginals disagree."""

    first: tuple[str, ...]
    second: tuple[str, ...]
    overlap: tuple[str, ...]
    outcomes: tuple[str, ...]
    first_weight: Fraction
    second_weight: Fraction


@dataclass(frozen=True)
class CompatibilityReport:
    violations: tuple[OverlapViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_empirical_model(
    em: EmpiricalModel, tol: Fraction = ZERO
) -> CompatibilityReport:
    """Check the no-signalling condition on every pair of maximal contexts.

    For contexts U, V with nonempty intersection the two marginals on
    U ∩ V are compared coordinate-wise; entries differing by more than
    `tol` (0 for exact agreement) are reported.
    """
    tol = _as_fraction(tol)
    order = [v.name for v in em.scenario.variables]
    ctxs = em.scenario.maximal_contexts
    violations: list[OverlapViolation] = []
    for i in range(len(ctxs)):
        for j in range(i + 1, len(ctxs)):
            common = [n for n in order if n in set(ctxs[i]) and n in set(ctxs[j])]
            if not common:
                continue
            mi = marginalize(em.context_distributions[i], common)
            mj = marginalize(em.context_distributions[j], common)
            for k, outcomes in enumerate(iter_outcome_tuples(mi.variables)):
                if abs(mi.weights[k] - mj.weights[k]) > tol:
                    violations.append(
                        OverlapViolation(
                            first=ctxs[i],
                            second=ctxs[j],
                            overlap=tuple(common),
                            outcomes=outcomes,
                            first_weight=mi.weights[k],
                            second_weight=mj.weights[k],
                        )
                    )
    return CompatibilityReport(tuple(violations))
