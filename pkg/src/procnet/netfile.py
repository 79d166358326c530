"""The versioned network file format (UTF-8 JSON, extension ".network").

Schema, format_version 1:

    {
      "format_version": 1,
      "variables": [{"name": "X", "alphabet": ["0", "1"]}, ...],
      "nodes": [
        {"name": "alpha",
         "inputs": ["X"], "internals": [], "outputs": ["Y"],
         "matrix": [["0", "1"], ["1", "0"]]},
        ...
      ],
      "stationary": {"label": ["1/6", "0", ...], ...}        # optional
    }

Wiring is by shared variable name: an output of one node and the equally
named input of another are the same arrow.  Matrix rows are indexed by
sections of (inputs ++ internals), columns by sections of
(internals ++ outputs), lexicographic in declaration order.  Entries are
exact rationals written as "p/q" strings (plain integers and exact decimal
strings are accepted on input).  Stationary vectors run over the closed
network's variables in global first-appearance order.

Malformed structure raises ParseError; well-formed files carrying semantic
mistakes (unknown names, wrong shapes, non-stochastic rows, wiring
conflicts, bad stationary vectors) are collected by `check_network_text`
into a report, which is what the CLI's validate command prints.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, ParseError, WiringError
from .process import (
    Network,
    ProcessTensor,
    classify_network,
    global_variable_order,
    validate_process,
)
from .rationals import format_rational, parse_rational
from .scenario import Distribution, Variable, section_count

FORMAT_VERSION = 1


@dataclass(frozen=True)
class NetworkFile:
    """Parsed contents of a network file."""

    variables: tuple[Variable, ...]
    network: Network
    stationary: tuple[tuple[str, Distribution], ...]

    def stationary_named(self, label: str) -> Distribution:
        for name, dist in self.stationary:
            if name == label:
                return dist
        raise DomainError(f"no stationary distribution named {label!r} in the file")


@dataclass(frozen=True)
class FileCheck:
    """Outcome of checking a file: parse failure, semantic issues, or a file."""

    stage: str  # "parse" | "semantic" | "ok"
    issues: tuple[str, ...]
    file: NetworkFile | None

    @property
    def ok(self) -> bool:
        return self.stage == "ok"


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _structure(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    _expect(isinstance(doc, dict), "top level must be an object")
    _expect("format_version" in doc, "missing format_version")
    _expect(
        doc["format_version"] == FORMAT_VERSION,
        f"unsupported format_version {doc['format_version']!r} (expected {FORMAT_VERSION})",
    )
    _expect(isinstance(doc.get("variables"), list), "variables must be a list")
    _expect(isinstance(doc.get("nodes"), list), "nodes must be a list")
    for entry in doc["variables"]:
        _expect(isinstance(entry, dict), "each variable must be an object")
        _expect(isinstance(entry.get("name"), str), "variable name must be a string")
        _expect(
            isinstance(entry.get("alphabet"), list) and entry["alphabet"],
            f"variable {entry.get('name')!r}: alphabet must be a nonempty list",
        )
    for entry in doc["nodes"]:
        _expect(isinstance(entry, dict), "each node must be an object")
        _expect(isinstance(entry.get("name"), str), "node name must be a string")
        for role in ("inputs", "internals", "outputs"):
            _expect(
                isinstance(entry.get(role, []), list),
                f"node {entry.get('name')!r}: {role} must be a list of names",
            )
        _expect(
            isinstance(entry.get("matrix"), list) and entry["matrix"],
            f"node {entry.get('name')!r}: matrix must be a nonempty list of rows",
        )
        for row in entry["matrix"]:
            _expect(
                isinstance(row, list),
                f"node {entry.get('name')!r}: each matrix row must be a list",
            )
    stationary = doc.get("stationary", {})
    _expect(isinstance(stationary, dict), "stationary must be an object of named vectors")
    for label, vector in stationary.items():
        _expect(isinstance(vector, list), f"stationary {label!r} must be a list")
    return doc


def check_network_text(text: str) -> FileCheck:
    """Parse and semantically check; never raises for content problems."""
    try:
        doc = _structure(text)
    except ParseError as exc:
        return FileCheck("parse", (str(exc),), None)

    issues: list[str] = []
    table: dict[str, Variable] = {}
    variables: list[Variable] = []
    for entry in doc["variables"]:
        name = entry["name"]
        if name in table:
            issues.append(f"variable {name!r} declared twice")
            continue
        try:
            var = Variable(name, tuple(str(o) for o in entry["alphabet"]))
        except DomainError as exc:
            issues.append(str(exc))
            continue
        table[name] = var
        variables.append(var)

    nodes: list[ProcessTensor] = []
    seen_nodes: set[str] = set()
    for entry in doc["nodes"]:
        node_name = entry["name"]
        if node_name in seen_nodes:
            issues.append(f"node {node_name!r} declared twice")
            continue
        seen_nodes.add(node_name)
        roles = {}
        missing = False
        for role in ("inputs", "internals", "outputs"):
            names = [str(n) for n in entry.get(role, [])]
            unknown = [n for n in names if n not in table]
            if unknown:
                issues.append(f"node {node_name!r}: undeclared variables {unknown}")
                missing = True
            roles[role] = tuple(table[n] for n in names if n in table)
        if missing:
            continue
        try:
            matrix = tuple(
                tuple(parse_rational(e) for e in row) for row in entry["matrix"]
            )
        except ParseError as exc:
            issues.append(f"node {node_name!r}: {exc}")
            continue
        try:
            node = ProcessTensor(
                node_name, roles["inputs"], roles["internals"], roles["outputs"], matrix
            )
        except DomainError as exc:
            issues.append(str(exc))
            continue
        report = validate_process(node)
        for idx, total in report.bad_row_sums:
            issues.append(
                f"node {node_name!r}: row {idx} sums to {format_rational(total)}, not 1"
            )
        for r, c, e in report.negative_entries:
            issues.append(
                f"node {node_name!r}: negative entry {format_rational(e)} at ({r}, {c})"
            )
        nodes.append(node)

    network = None
    try:
        network = Network(tuple(nodes))
    except WiringError as exc:
        issues.append(str(exc))

    stationary: list[tuple[str, Distribution]] = []
    if network is not None:
        shape = classify_network(network)
        raw = doc.get("stationary", {})
        if raw and not shape.closed:
            issues.append("stationary vectors are only meaningful for closed networks")
        elif raw:
            g_in, g_internal, g_out = global_variable_order(network)
            expected = section_count(g_internal)
            for label, vector in raw.items():
                try:
                    weights = tuple(parse_rational(e) for e in vector)
                except ParseError as exc:
                    issues.append(f"stationary {label!r}: {exc}")
                    continue
                if len(weights) != expected:
                    issues.append(
                        f"stationary {label!r}: expected {expected} weights, got {len(weights)}"
                    )
                    continue
                try:
                    stationary.append((label, Distribution(g_internal, weights)))
                except DomainError as exc:
                    issues.append(f"stationary {label!r}: {exc}")

    if issues:
        return FileCheck("semantic", tuple(issues), None)
    return FileCheck(
        "ok", (), NetworkFile(tuple(variables), network, tuple(stationary))
    )


def parse_network_text(text: str) -> NetworkFile:
    """Strict parse: raises ParseError or DomainError instead of reporting."""
    check = check_network_text(text)
    if check.stage == "parse":
        raise ParseError(check.issues[0])
    if check.stage == "semantic":
        raise DomainError("; ".join(check.issues))
    return check.file


def load_network_file(path) -> NetworkFile:
    return parse_network_text(Path(path).read_text(encoding="utf-8"))


def serialize_network_file(nf: NetworkFile) -> str:
    """Canonical text: declaration order preserved, rationals as "p/q"."""
    doc = {
        "format_version": FORMAT_VERSION,
        "variables": [
            {"name": v.name, "alphabet": list(v.alphabet)} for v in nf.variables
        ],
        "nodes": [
            {
                "name": n.name,
                "inputs": [v.name for v in n.inputs],
                "internals": [v.name for v in n.internals],
                "outputs": [v.name for v in n.outputs],
                "matrix": [[format_rational(e) for e in row] for row in n.matrix],
            }
            for n in nf.network.nodes
        ],
    }
    if nf.stationary:
        doc["stationary"] = {
            label: [format_rational(w) for w in dist.weights]
            for label, dist in nf.stationary
        }
    return json.dumps(doc, indent=2) + "\n"


def save_network_file(nf: NetworkFile, path) -> None:
    Path(path).write_text(serialize_network_file(nf), encoding="utf-8")
