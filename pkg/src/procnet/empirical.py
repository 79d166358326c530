"""Per-node input/output distributions induced by a stationary distribution.

For a node of a closed, reciprocity-free network, the joint distribution of
(inputs read at time t, outputs written at time t+1) in the stationary
regime factorizes as

    node_dist(i, o) = matrix[input section i][output section o]
                      * stationary_marginal_on_inputs(i)

because the output block at t+1 depends on the state at t only through the
node's own inputs.  Collecting one such distribution per node, over the
context inputs-union-outputs, yields a no-signalling empirical model: its
input and output marginals both reproduce the corresponding marginals of
the stationary distribution, which forces agreement on every overlap.  Both
facts are checked exactly by the functions below rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, StructureError
from .process import (
    DEFAULT_MAX_VARIABLES,
    Network,
    ProcessTensor,
    classify_network,
    contract_network,
    find_reciprocities,
)
from .dynamics import require_stationary
from .scenario import (
    Distribution,
    EmpiricalModel,
    MeasurementScenario,
    iter_outcome_tuples,
    marginalize,
    outcome_index,
    section_count,
)

ZERO = Fraction(0)


@dataclass(frozen=True)
class NodeDistribution:
    """A node's joint input/output distribution under a stationary regime."""

    node: str
    context: tuple[str, ...]
    distribution: Distribution

    def __post_init__(self):
        if self.distribution.variable_names != self.context:
            raise DomainError("distribution variables must equal the context")


@dataclass(frozen=True)
class MarginalCheck:
    """Coordinate-level comparison of node marginals against the stationary ones."""

    node: str
    input_mismatches: tuple[tuple[tuple[str, ...], Fraction, Fraction], ...]
    output_mismatches: tuple[tuple[tuple[str, ...], Fraction, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.input_mismatches and not self.output_mismatches


def _checked_setup(
    net: Network,
    stationary: Distribution,
    sigma: ProcessTensor | None,
    verify: bool,
    max_variables: int | None,
) -> tuple[ProcessTensor, Distribution]:
    shape = classify_network(net)
    if not shape.closed:
        raise StructureError(
            f"network is open; dangling inputs {list(shape.dangling_inputs)}, "
            f"dangling outputs {list(shape.dangling_outputs)}"
        )
    reciprocities = find_reciprocities(net)
    if reciprocities:
        raise StructureError(f"network has reciprocities: {list(reciprocities)}")
    for node in net.nodes:
        if node.internals:
            raise StructureError(
                f"node {node.name!r} carries internal variables; "
                f"model extraction requires none"
            )
    if sigma is None:
        sigma = contract_network(net, max_variables=max_variables)
    if verify:
        stationary = require_stationary(sigma, stationary)
    else:
        names = tuple(v.name for v in sigma.internals)
        if set(stationary.variable_names) != set(names):
            raise DomainError("stationary distribution covers the wrong variables")
        if stationary.variable_names != names:
            stationary = stationary.reorder(names)
    return sigma, stationary


def _node_delta(node: ProcessTensor, stationary: Distribution) -> NodeDistribution:
    input_names = tuple(v.name for v in node.inputs)
    output_names = tuple(v.name for v in node.outputs)
    input_marginal = marginalize(stationary, input_names)
    n_in = len(node.inputs)
    out_vars = node.outputs

    def weight(outcomes: tuple[str, ...]) -> Fraction:
        row = outcome_index(node.inputs, outcomes[:n_in])
        col = outcome_index(out_vars, outcomes[n_in:])
        base = input_marginal.weights[row]
        if not base:
            return ZERO
        return node.matrix[row][col] * base

    dist = Distribution.from_function(node.inputs + node.outputs, weight)
    return NodeDistribution(node.name, input_names + output_names, dist)


def node_distribution(
    net: Network,
    stationary: Distribution,
    node_name: str,
    *,
    sigma: ProcessTensor | None = None,
    verify: bool = True,
    max_variables: int | None = DEFAULT_MAX_VARIABLES,
) -> NodeDistribution:
    """The joint input/output distribution of one node.

    Requires a closed, reciprocity-free network and a stationary
    distribution (checked exactly unless verify=False; pass sigma to reuse
    an already contracted global process).
    """
    node = net.node(node_name)
    _, stationary = _checked_setup(net, stationary, sigma, verify, max_variables)
    return _node_delta(node, stationary)


def verify_marginal_theorem(
    net: Network,
    stationary: Distribution,
    node_name: str,
    *,
    sigma: ProcessTensor | None = None,
    verify: bool = True,
    max_variables: int | None = DEFAULT_MAX_VARIABLES,
) -> MarginalCheck:
    """Check exactly that a node's input and output marginals equal the
    stationary marginals on the same variables.

    Expected to pass for every valid input; it exists as an executable
    diagnostic, and any mismatch is reported coordinate by coordinate.
    """
    node = net.node(node_name)
    _, stationary = _checked_setup(net, stationary, sigma, verify, max_variables)
    delta = _node_delta(node, stationary).distribution

    def compare(names: tuple[str, ...]):
        mismatches = []
        if not names:
            return tuple(mismatches)
        lhs = marginalize(delta, names)
        rhs = marginalize(stationary, names)
        for k, outcomes in enumerate(iter_outcome_tuples(lhs.variables)):
            if lhs.weights[k] != rhs.weights[k]:
                mismatches.append((outcomes, lhs.weights[k], rhs.weights[k]))
        return tuple(mismatches)

    return MarginalCheck(
        node=node.name,
        input_mismatches=compare(tuple(v.name for v in node.inputs)),
        output_mismatches=compare(tuple(v.name for v in node.outputs)),
    )


def build_empirical_model(
    net: Network,
    stationary: Distribution,
    *,
    sigma: ProcessTensor | None = None,
    verify: bool = True,
    max_variables: int | None = DEFAULT_MAX_VARIABLES,
) -> EmpiricalModel:
    """Assemble the empirical model of a closed, reciprocity-free network.

    One maximal context per node (its inputs plus outputs); a node whose
    context is contained in another's is absorbed after an exact agreement
    check, keeping the context family an antichain.  The finished model is
    re-validated for overlap compatibility at tolerance zero.
    """
    if not net.nodes:
        raise StructureError("cannot build a model from an empty network")
    sigma, stationary = _checked_setup(net, stationary, sigma, verify, max_variables)
    deltas = [_node_delta(node, stationary) for node in net.nodes]

    keep: list[NodeDistribution] = []
    for i, cand in enumerate(deltas):
        cand_set = frozenset(cand.context)
        absorbed = False
        for j, other in enumerate(deltas):
            if i == j:
                continue
            other_set = frozenset(other.context)
            if cand_set < other_set or (cand_set == other_set and j < i):
                projected = marginalize(other.distribution, cand.context)
                if projected.weights != cand.distribution.weights:
                    raise AssertionError(
                        f"node {cand.node!r} disagrees with the containing context "
                        f"of {other.node!r}"
                    )
                absorbed = True
                break
        if not absorbed:
            keep.append(cand)

    scenario = MeasurementScenario(
        variables=sigma.internals,
        maximal_contexts=tuple(nd.context for nd in keep),
    )
    model = EmpiricalModel(scenario, tuple(nd.distribution for nd in keep))

    from .scenario import validate_empirical_model

    report = validate_empirical_model(model, ZERO)
    if not report.ok:
        raise AssertionError(
            f"overlap compatibility failed for a verified stationary input: "
            f"{report.violations[0]}"
        )
    return model


def empirical_node_frequencies(
    sigma: ProcessTensor,
    node: ProcessTensor,
    trajectory: Sequence[tuple[str, ...]],
) -> Distribution:
    """Observed frequencies of (node inputs at t, node outputs at t+1).

    The trajectory is over the closed global process's variables; the node's
    variables are located by name.  Counting runs over the steps-many
    consecutive pairs, so the result is an exact empirical distribution.
    """
    if len(trajectory) < 2:
        raise DomainError("need at least one transition to count frequencies")
    position = {v.name: k for k, v in enumerate(sigma.internals)}
    try:
        in_pos = [position[v.name] for v in node.inputs]
        out_pos = [position[v.name] for v in node.outputs]
    except KeyError as exc:
        raise DomainError(
            f"node variable {exc.args[0]!r} is not a variable of the global process"
        ) from None
    out_count = section_count(node.outputs)
    counts: dict[int, int] = {}
    previous = trajectory[0]
    for current in trajectory[1:]:
        row = outcome_index(node.inputs, tuple(previous[p] for p in in_pos))
        col = outcome_index(node.outputs, tuple(current[p] for p in out_pos))
        key = row * out_count + col
        counts[key] = counts.get(key, 0) + 1
        previous = current
    total = len(trajectory) - 1
    weights = tuple(
        Fraction(counts.get(i, 0), total)
        for i in range(section_count(node.inputs + node.outputs))
    )
    return Distribution(node.inputs + node.outputs, weights)
