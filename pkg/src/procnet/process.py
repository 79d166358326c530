"""Open stochastic processes, pairwise composition, and network contraction.

A process is a stochastic matrix whose rows are indexed by sections of
(inputs ++ internals), the values seen at time t, and whose columns are
indexed by sections of (internals ++ outputs), the values produced at
time t+1.  Networks wire an output variable of one node to the equally
named input variable of another; every wired variable becomes an internal
variable of the contracted global process.

The global entry is the plain product of the node entries, so contraction
order cannot change the result; nodes are folded in declaration order.
Everything is dense and exact, which is why `contract_network` refuses to
run past a configurable variable cap instead of attempting to scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CompositionError, DomainError, ResourceLimitError, WiringError
from .scenario import (
    ONE,
    ZERO,
    Variable,
    section_count,
)

DEFAULT_MAX_VARIABLES = 20


def _as_fraction(value) -> Fraction:
    if type(value) is Fraction:
        return value
    if isinstance(value, float):
        raise DomainError("matrix entries must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class ProcessTensor:
    """A stochastic matrix with named, role-tagged variables."""

    name: str
    inputs: tuple[Variable, ...]
    internals: tuple[Variable, ...]
    outputs: tuple[Variable, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise DomainError("process name must be a nonempty string")
        for role in ("inputs", "internals", "outputs"):
            object.__setattr__(self, role, tuple(getattr(self, role)))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise DomainError(f"process {self.name!r} repeats a variable name")
        rows = tuple(tuple(_as_fraction(e) for e in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        n_rows = section_count(self.row_variables)
        n_cols = section_count(self.col_variables)
        if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
            raise DomainError(
                f"process {self.name!r}: matrix must be {n_rows}x{n_cols} "
                f"for its declared variables"
            )

    @property
    def row_variables(self) -> tuple[Variable, ...]:
        return self.inputs + self.internals

    @property
    def col_variables(self) -> tuple[Variable, ...]:
        return self.internals + self.outputs

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self.inputs + self.internals + self.outputs

    @property
    def is_closed(self) -> bool:
        return not self.inputs and not self.outputs


@dataclass(frozen=True)
class ProcessReport:
    """Stochasticity check: offending rows and negative entries."""

    bad_row_sums: tuple[tuple[int, Fraction], ...]
    negative_entries: tuple[tuple[int, int, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.bad_row_sums and not self.negative_entries


def validate_process(process: ProcessTensor) -> ProcessReport:
    """Report every row whose sum differs from 1 and every negative entry."""
    bad_sums = []
    negatives = []
    for i, row in enumerate(process.matrix):
        total = sum(row, ZERO)
        if total != ONE:
            bad_sums.append((i, total))
        for j, e in enumerate(row):
            if e < 0:
                negatives.append((i, j, e))
    return ProcessReport(tuple(bad_sums), tuple(negatives))


def deterministic_process(
    name: str,
    inputs: Sequence[Variable],
    outputs: Sequence[Variable],
    rule,
) -> ProcessTensor:
    """Internal-free process with entry 1 exactly when rule(inputs) == outputs."""
    from .scenario import iter_outcome_tuples

    inputs = tuple(inputs)
    outputs = tuple(outputs)
    rows = []
    for in_outcomes in iter_outcome_tuples(inputs):
        image = tuple(rule(in_outcomes))
        rows.append(
            tuple(
                ONE if out_outcomes == image else ZERO
                for out_outcomes in iter_outcome_tuples(outputs)
            )
        )
    return ProcessTensor(name, inputs, (), outputs, tuple(rows))


def uniform_process(
    name: str, inputs: Sequence[Variable], outputs: Sequence[Variable]
) -> ProcessTensor:
    """Internal-free process whose every row is the uniform distribution."""
    inputs = tuple(inputs)
    outputs = tuple(outputs)
    n_cols = section_count(outputs)
    row = (Fraction(1, n_cols),) * n_cols
    return ProcessTensor(name, inputs, (), outputs, (row,) * section_count(inputs))


def rename_variables(process: ProcessTensor, mapping: Mapping[str, str]) -> ProcessTensor:
    """Rename variables; alphabets and entries are untouched."""

    def rename(vs: tuple[Variable, ...]) -> tuple[Variable, ...]:
        return tuple(Variable(mapping.get(v.name, v.name), v.alphabet) for v in vs)

    return ProcessTensor(
        process.name,
        rename(process.inputs),
        rename(process.internals),
        rename(process.outputs),
        process.matrix,
    )


def reorder_process(
    process: ProcessTensor,
    inputs: Sequence[str],
    internals: Sequence[str],
    outputs: Sequence[str],
) -> ProcessTensor:
    """Permute the variables within each role, shuffling the matrix to match."""

    def pick(names: Sequence[str], pool: tuple[Variable, ...]) -> tuple[Variable, ...]:
        by_name = {v.name: v for v in pool}
        if sorted(names) != sorted(by_name):
            raise DomainError(
                f"{list(names)} is not a permutation of {sorted(by_name)}"
            )
        return tuple(by_name[n] for n in names)

    new_inputs = pick(inputs, process.inputs)
    new_internals = pick(internals, process.internals)
    new_outputs = pick(outputs, process.outputs)

    def index_map(new_vars, old_vars):
        # new index -> old index, walking the new odometer and re-encoding
        old_pos = {v.name: k for k, v in enumerate(old_vars)}
        old_strides = [0] * len(old_vars)
        acc = 1
        for k in range(len(old_vars) - 1, -1, -1):
            old_strides[k] = acc
            acc *= old_vars[k].size
        positions = [old_pos[v.name] for v in new_vars]
        sizes = [v.size for v in new_vars]
        total = section_count(new_vars)
        digits = [0] * len(sizes)
        out = []
        for _ in range(total):
            out.append(sum(d * old_strides[p] for d, p in zip(digits, positions)))
            for k in range(len(sizes) - 1, -1, -1):
                digits[k] += 1
                if digits[k] < sizes[k]:
                    break
                digits[k] = 0
        return out

    row_map = index_map(new_inputs + new_internals, process.row_variables)
    col_map = index_map(new_internals + new_outputs, process.col_variables)
    matrix = tuple(
        tuple(process.matrix[r][c] for c in col_map) for r in row_map
    )
    return ProcessTensor(process.name, new_inputs, new_internals, new_outputs, matrix)


@dataclass(frozen=True)
class Network:
    """Processes wired by shared variable names.

    A name may be the output of at most one node and the input of at most
    one node; a name appearing in both roles is a wire and becomes internal
    to the global process.  Node-internal names must not occur anywhere
    else.  Wired endpoints must declare identical alphabets.
    """

    nodes: tuple[ProcessTensor, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise WiringError("node names must be distinct")
        producers: dict[str, str] = {}
        consumers: dict[str, str] = {}
        internal_owner: dict[str, str] = {}
        declared: dict[str, Variable] = {}

        def declare(var: Variable, node: str):
            seen = declared.get(var.name)
            if seen is not None and seen != var:
                raise WiringError(
                    f"variable {var.name!r} declared with different alphabets "
                    f"({seen.alphabet} vs {var.alphabet})"
                )
            declared[var.name] = var

        for node in self.nodes:
            for v in node.inputs:
                if v.name in consumers:
                    raise WiringError(
                        f"variable {v.name!r} is an input of both "
                        f"{consumers[v.name]!r} and {node.name!r}"
                    )
                consumers[v.name] = node.name
                declare(v, node.name)
            for v in node.outputs:
                if v.name in producers:
                    raise WiringError(
                        f"variable {v.name!r} is an output of both "
                        f"{producers[v.name]!r} and {node.name!r}"
                    )
                producers[v.name] = node.name
                declare(v, node.name)
            for v in node.internals:
                if v.name in internal_owner:
                    raise WiringError(
                        f"internal variable {v.name!r} appears in two nodes"
                    )
                internal_owner[v.name] = node.name
                declare(v, node.name)
        for name, owner in internal_owner.items():
            if name in producers or name in consumers:
                raise WiringError(
                    f"internal variable {name!r} of {owner!r} collides with an arrow name"
                )

    def node(self, name: str) -> ProcessTensor:
        for n in self.nodes:
            if n.name == name:
                return n
        raise DomainError(f"no node named {name!r}")

    @property
    def node_names(self) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes)


@dataclass(frozen=True)
class NetworkShape:
    closed: bool
    dangling_inputs: tuple[str, ...]
    dangling_outputs: tuple[str, ...]


def classify_network(net: Network) -> NetworkShape:
    """Closed when every node input is produced and every output consumed."""
    produced = {v.name for n in net.nodes for v in n.outputs}
    consumed = {v.name for n in net.nodes for v in n.inputs}
    dangling_in = []
    dangling_out = []
    for n in net.nodes:
        for v in n.inputs:
            if v.name not in produced:
                dangling_in.append(v.name)
        for v in n.outputs:
            if v.name not in consumed:
                dangling_out.append(v.name)
    return NetworkShape(
        closed=not dangling_in and not dangling_out,
        dangling_inputs=tuple(dangling_in),
        dangling_outputs=tuple(dangling_out),
    )


def _provides(a: ProcessTensor, b: ProcessTensor) -> bool:
    out_names = {v.name for v in a.outputs}
    return any(v.name in out_names for v in b.inputs)


def find_reciprocities(net: Network) -> tuple[tuple[str, str], ...]:
    """All unordered node pairs that provide each other.

    A node with an internal variable is a reciprocity with itself: its
    internal state plays both roles at once.
    """
    pairs = []
    for i, a in enumerate(net.nodes):
        if a.internals:
            pairs.append((a.name, a.name))
        for b in net.nodes[i + 1 :]:
            if _provides(a, b) and _provides(b, a):
                pairs.append((a.name, b.name))
    return tuple(pairs)


def global_variable_order(
    net: Network,
) -> tuple[tuple[Variable, ...], tuple[Variable, ...], tuple[Variable, ...]]:
    """(inputs, internals, outputs) of the global process.

    Variables are ordered by first appearance, scanning nodes in declaration
    order and each node's (inputs, internals, outputs) in declared order.
    This fixes the file layout of stationary vectors, so keep it stable.
    """
    produced = {v.name for n in net.nodes for v in n.outputs}
    consumed = {v.name for n in net.nodes for v in n.inputs}
    node_internal = {v.name for n in net.nodes for v in n.internals}

    seen: dict[str, Variable] = {}
    for n in net.nodes:
        for v in n.variables:
            if v.name not in seen:
                seen[v.name] = v

    g_inputs, g_internals, g_outputs = [], [], []
    for name, v in seen.items():
        if name in node_internal or (name in produced and name in consumed):
            g_internals.append(v)
        elif name in consumed:
            g_inputs.append(v)
        else:
            g_outputs.append(v)
    return tuple(g_inputs), tuple(g_internals), tuple(g_outputs)


def _strides(variables: Sequence[Variable]) -> list[int]:
    out = [0] * len(variables)
    acc = 1
    for k in range(len(variables) - 1, -1, -1):
        out[k] = acc
        acc *= variables[k].size
    return out


def _node_index_table(
    node_vars: Sequence[Variable], space_vars: Sequence[Variable]
) -> list[int]:
    """node section index for every section index of the enclosing space."""
    space_pos = {v.name: k for k, v in enumerate(space_vars)}
    positions = [space_pos[v.name] for v in node_vars]
    node_strides = _strides(node_vars)
    sizes = [v.size for v in space_vars]
    total = section_count(space_vars)
    digits = [0] * len(sizes)
    table = []
    for _ in range(total):
        table.append(sum(digits[p] * s for p, s in zip(positions, node_strides)))
        for k in range(len(sizes) - 1, -1, -1):
            digits[k] += 1
            if digits[k] < sizes[k]:
                break
            digits[k] = 0
    return table


def contract_network(
    net: Network, max_variables: int | None = DEFAULT_MAX_VARIABLES
) -> ProcessTensor:
    """Multiply all nodes into the single global process.

    Each node reads its inputs and internals from the row side (time t) and
    writes its internals and outputs on the column side (time t+1), so the
    entry of the result at (row, column) is the product of the node entries
    at the correspondingly restricted sections.
    """
    g_inputs, g_internals, g_outputs = global_variable_order(net)
    total = len(g_inputs) + len(g_internals) + len(g_outputs)
    if max_variables is not None and total > max_variables:
        raise ResourceLimitError(
            f"contraction over {total} variables exceeds the cap of {max_variables}; "
            f"raise the cap explicitly to proceed"
        )
    row_vars = g_inputs + g_internals
    col_vars = g_internals + g_outputs

    row_tables = [_node_index_table(n.row_variables, row_vars) for n in net.nodes]
    col_tables = [_node_index_table(n.col_variables, col_vars) for n in net.nodes]
    matrices = [n.matrix for n in net.nodes]
    n_nodes = len(net.nodes)

    n_rows = section_count(row_vars)
    n_cols = section_count(col_vars)
    rows = []
    for r in range(n_rows):
        node_rows = [matrices[i][row_tables[i][r]] for i in range(n_nodes)]
        row = []
        for c in range(n_cols):
            acc = ONE
            for i in range(n_nodes):
                e = node_rows[i][col_tables[i][c]]
                if not e:
                    acc = ZERO
                    break
                acc = acc * e
            row.append(acc)
        rows.append(tuple(row))
    return ProcessTensor("global", g_inputs, g_internals, g_outputs, tuple(rows))


def compose(
    p: ProcessTensor,
    q: ProcessTensor,
    links: Iterable[tuple[str, str]],
    max_variables: int | None = None,
) -> ProcessTensor:
    """Connect outputs of p to inputs of q; each linked pair becomes internal.

    The new internal variable inherits the name of the output endpoint, so
    repeated runs produce identical tensors.  Result layout: inputs are
    p.inputs ++ (q.inputs minus linked), internals are p.internals ++ linked
    (in p's output order) ++ q.internals, outputs are (p.outputs minus
    linked) ++ q.outputs.
    """
    links = [(str(a), str(b)) for a, b in links]
    p_outputs = {v.name: v for v in p.outputs}
    q_inputs = {v.name: v for v in q.inputs}
    if len({a for a, _ in links}) != len(links) or len({b for _, b in links}) != len(links):
        raise CompositionError("a variable may appear in at most one link")
    for a, b in links:
        if a not in p_outputs:
            raise CompositionError(f"{a!r} is not an output of {p.name!r}")
        if b not in q_inputs:
            raise CompositionError(f"{b!r} is not an input of {q.name!r}")
        if p_outputs[a].alphabet != q_inputs[b].alphabet:
            raise CompositionError(
                f"cannot link {a!r} to {b!r}: alphabets differ "
                f"({p_outputs[a].alphabet} vs {q_inputs[b].alphabet})"
            )
    mapping = {b: a for a, b in links if a != b}
    if mapping:
        clashes = set(mapping.values()) & {
            v.name for v in q.variables if v.name not in mapping
        }
        if clashes:
            raise CompositionError(
                f"link names {sorted(clashes)} already occur in {q.name!r}"
            )
        q = rename_variables(q, mapping)
    link_names = {a for a, _ in links}
    shared = {v.name for v in p.variables} & {v.name for v in q.variables}
    if shared != link_names:
        raise CompositionError(
            f"unlinked name collisions between {p.name!r} and {q.name!r}: "
            f"{sorted(shared - link_names)}"
        )
    try:
        net = Network((p, q))
    except WiringError as exc:
        raise CompositionError(str(exc)) from exc
    result = contract_network(net, max_variables=max_variables)
    return ProcessTensor(
        f"{p.name}_{q.name}",
        result.inputs,
        result.internals,
        result.outputs,
        result.matrix,
    )
