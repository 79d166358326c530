"""Command-line interface: validate, analyze, simulate.

Exit codes: 0 success, 2 parse error, 3 semantic error (including size-cap
refusals), 4 structure error (open network or reciprocities), 5 stationary
verification failure.  `--json` switches every command to a machine-readable
report with the key layout documented in the README; the human output
carries the same information.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .contextuality import (
    chsh_value,
    decide_contextuality,
    detect_chsh_labeling,
    verify_infeasibility_certificate,
    vorobev_regular,
)
from .dynamics import (
    StationaryResult,
    find_stationary,
    is_ergodic,
    require_stationary,
    simulate_chain,
)
from .empirical import (
    build_empirical_model,
    empirical_node_frequencies,
    node_distribution,
    verify_marginal_theorem,
)
from .errors import (
    DomainError,
    ParseError,
    ProcnetError,
    ResourceLimitError,
    StationarityError,
    StructureError,
    WiringError,
)
from .netfile import check_network_text, load_network_file
from .process import (
    DEFAULT_MAX_VARIABLES,
    classify_network,
    contract_network,
    find_reciprocities,
)
from .rationals import format_rational
from .scenario import (
    iter_outcome_tuples,
    section_count,
    validate_empirical_model,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_STRUCTURE = 4
EXIT_STATIONARY = 5


def _dist_json(dist) -> dict:
    return {
        "variables": list(dist.variable_names),
        "weights": [format_rational(w) for w in dist.weights],
    }


def _print_distribution(dist, indent: str = "    ") -> None:
    for outcomes, w in zip(iter_outcome_tuples(dist.variables), dist.weights):
        if w:
            pairs = ", ".join(
                f"{v.name}={o}" for v, o in zip(dist.variables, outcomes)
            )
            print(f"{indent}P({pairs}) = {format_rational(w)}")


def _resolve_stationary(nf, sigma, choice: str) -> StationaryResult:
    if choice == "solve":
        return find_stationary(sigma)
    try:
        dist = nf.stationary_named(choice)
    except DomainError as exc:
        raise StationarityError(str(exc)) from exc
    dist = require_stationary(sigma, dist)
    return StationaryResult(dist, "user_supplied", Fraction(0))


def _closed_reciprocity_free(net) -> None:
    shape = classify_network(net)
    if not shape.closed:
        raise StructureError(
            f"network is open; dangling inputs {list(shape.dangling_inputs)}, "
            f"dangling outputs {list(shape.dangling_outputs)}"
        )
    reciprocities = find_reciprocities(net)
    if reciprocities:
        raise StructureError(f"network has reciprocities: {list(reciprocities)}")


def cmd_validate(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    check = check_network_text(text)
    if args.json:
        print(
            json.dumps(
                {
                    "report": "validate",
                    "file": Path(args.file).name,
                    "ok": check.ok,
                    "stage": check.stage,
                    "issues": list(check.issues),
                },
                indent=2,
            )
        )
    else:
        if check.ok:
            nf = check.file
            shape = classify_network(nf.network)
            print(f"{args.file}: OK")
            print(f"  nodes: {len(nf.network.nodes)}  variables: {len(nf.variables)}")
            print(f"  closed: {'yes' if shape.closed else 'no'}")
        else:
            print(f"{args.file}: {check.stage} errors")
            for issue in check.issues:
                print(f"  - {issue}")
    if check.ok:
        return EXIT_OK
    return EXIT_PARSE if check.stage == "parse" else EXIT_SEMANTIC


def _analyze_report(nf, filename: str, omega_choice: str, max_variables: int):
    net = nf.network
    _closed_reciprocity_free(net)
    sigma = contract_network(net, max_variables=max_variables)
    n_states = section_count(sigma.internals)
    stat = _resolve_stationary(nf, sigma, omega_choice)

    deltas = [
        node_distribution(net, stat.distribution, node.name, sigma=sigma, verify=False)
        for node in net.nodes
    ]
    marginal_checks = [
        verify_marginal_theorem(
            net, stat.distribution, node.name, sigma=sigma, verify=False
        )
        for node in net.nodes
    ]
    model = build_empirical_model(net, stat.distribution, sigma=sigma, verify=False)
    compat = validate_empirical_model(model, Fraction(0))
    verdict = decide_contextuality(model)
    certificate_ok = (
        verify_infeasibility_certificate(model, verdict.certificate)
        if verdict.contextual
        else None
    )

    labeling = detect_chsh_labeling(model.scenario)
    chsh = chsh_value(model, labeling) if labeling else None

    report = {
        "report": "analyze",
        "file": filename,
        "network": {
            "nodes": list(net.node_names),
            "closed": True,
            "reciprocities": [],
        },
        "global_process": {
            "variables": [v.name for v in sigma.internals],
            "states": n_states,
            "rows": n_states,
            "cols": n_states,
        },
        "stationary": {
            "source": omega_choice if omega_choice != "solve" else "solved",
            "method": stat.method,
            "residual": format_rational(stat.residual),
            "distribution": _dist_json(stat.distribution),
        },
        "node_distributions": [
            {
                "node": nd.node,
                "context": list(nd.context),
                "distribution": _dist_json(nd.distribution),
            }
            for nd in deltas
        ],
        "marginal_checks": [
            {
                "node": mc.node,
                "inputs_match": not mc.input_mismatches,
                "outputs_match": not mc.output_mismatches,
            }
            for mc in marginal_checks
        ],
        "no_signalling": {
            "consistent": compat.ok,
            "violations": len(compat.violations),
        },
        "scenario": {
            "maximal_contexts": [list(c) for c in model.scenario.maximal_contexts],
            "vorobev_regular": vorobev_regular(model.scenario),
        },
        "contextuality": {
            "contextual": verdict.contextual,
            "strongly_contextual": verdict.strongly_contextual,
            "notes": verdict.notes,
            "witness": _dist_json(verdict.witness) if verdict.witness else None,
            "certificate": (
                {
                    "coefficients": [format_rational(c) for c in verdict.certificate],
                    "rows": [
                        {"context": list(r.context), "outcomes": list(r.outcomes)}
                        if not r.is_normalization
                        else {"context": None, "outcomes": None}
                        for r in verdict.certificate_rows
                    ],
                    "verified": certificate_ok,
                }
                if verdict.contextual
                else None
            ),
        },
        "chsh": (
            {
                "applicable": True,
                "labeling": list(chsh.labeling),
                "correlators": [format_rational(e) for e in chsh.correlators],
                "value": format_rational(chsh.value),
                "term_signs": list(chsh.term_signs),
                "classical_bound": format_rational(chsh.classical_bound),
                "pr_bound": format_rational(chsh.pr_bound),
                "tsirelson_squared": format_rational(chsh.tsirelson_squared),
                "violates_classical": chsh.violates_classical,
                "violates_tsirelson": chsh.violates_tsirelson,
            }
            if chsh
            else {"applicable": False}
        ),
    }
    return report, deltas


def _print_analyze(report: dict, deltas_detail) -> None:
    net = report["network"]
    print(f"file: {report['file']}")
    print(f"nodes: {', '.join(net['nodes'])}  (closed, no reciprocities)")
    gp = report["global_process"]
    print(
        f"global process: variables {', '.join(gp['variables'])} "
        f"({gp['states']} states, {gp['rows']}x{gp['cols']})"
    )
    st = report["stationary"]
    print(
        f"stationary: {st['source']} (method {st['method']}, residual {st['residual']})"
    )
    print("node distributions:")
    for nd in deltas_detail:
        print(f"  {nd.node}: context {{{', '.join(nd.context)}}}")
        _print_distribution(nd.distribution)
    checks = report["marginal_checks"]
    ok = all(c["inputs_match"] and c["outputs_match"] for c in checks)
    print(f"input/output marginals match stationary: {'yes' if ok else 'NO'}")
    ns = report["no_signalling"]
    print(
        "overlap compatibility (no-signalling): "
        + ("consistent" if ns["consistent"] else f"{ns['violations']} violations")
    )
    cx = report["contextuality"]
    print(f"contextual: {'yes' if cx['contextual'] else 'no'}")
    if cx["contextual"]:
        print(
            "  infeasibility certificate verified: "
            + ("yes" if cx["certificate"]["verified"] else "NO")
        )
    else:
        support = sum(1 for w in cx["witness"]["weights"] if w != "0")
        print(
            f"  global witness found ({support} support points; marginals "
            f"reproduce every context exactly)"
        )
    print(f"strongly contextual: {'yes' if cx['strongly_contextual'] else 'no'}")
    chsh = report["chsh"]
    if chsh["applicable"]:
        print(
            f"CHSH: value {chsh['value']} (labeling {', '.join(chsh['labeling'])}; "
            f"classical bound {chsh['classical_bound']}, "
            f"quantum bound squared {chsh['tsirelson_squared']}, "
            f"box bound {chsh['pr_bound']})"
        )
        print(
            f"  violates classical bound: {'yes' if chsh['violates_classical'] else 'no'}"
            f"; violates quantum bound: {'yes' if chsh['violates_tsirelson'] else 'no'}"
        )
    else:
        print("CHSH: not applicable (scenario is not a two-outcome square)")
    print(
        "scenario Vorobev-regular: "
        + ("yes" if report["scenario"]["vorobev_regular"] else "no")
    )


def cmd_analyze(args) -> int:
    nf = load_network_file(args.file)
    report, deltas = _analyze_report(nf, Path(args.file).name, args.omega, args.max_vars)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_analyze(report, deltas)
    return EXIT_OK


def cmd_simulate(args) -> int:
    nf = load_network_file(args.file)
    net = nf.network
    _closed_reciprocity_free(net)
    sigma = contract_network(net, max_variables=args.max_vars)
    node = net.node(args.node)
    stat = _resolve_stationary(nf, sigma, args.omega)
    exact = node_distribution(
        net, stat.distribution, args.node, sigma=sigma, verify=False
    ).distribution

    trail = simulate_chain(sigma, stat.distribution, args.steps, args.seed)
    observed = empirical_node_frequencies(sigma, node, trail)
    ergodic = is_ergodic(sigma)

    rows = []
    max_error = 0.0
    for outcomes, p, f in zip(
        iter_outcome_tuples(exact.variables), exact.weights, observed.weights
    ):
        err = abs(float(f) - float(p))
        max_error = max(max_error, err)
        band = 3.0 * (float(p) * (1.0 - float(p)) / args.steps) ** 0.5
        rows.append(
            {
                "outcomes": list(outcomes),
                "frequency": format_rational(f),
                "exact": format_rational(p),
                "abs_error": err,
                "three_sigma_band": band,
                "within_band": err <= band if band > 0 else f == p,
            }
        )
    note = (
        "chain verified irreducible and aperiodic; frequencies converge to the "
        "exact values"
        if ergodic
        else "chain not verified irreducible+aperiodic; frequencies are Cesaro "
        "time-averages along one trajectory and may depend on the start"
    )
    if args.json:
        print(
            json.dumps(
                {
                    "report": "simulate",
                    "file": Path(args.file).name,
                    "node": args.node,
                    "steps": args.steps,
                    "seed": args.seed,
                    "ergodic": ergodic,
                    "note": note,
                    "variables": list(exact.variable_names),
                    "estimates": rows,
                    "max_abs_error": max_error,
                },
                indent=2,
            )
        )
    else:
        print(f"file: {Path(args.file).name}  node: {args.node}")
        print(f"steps: {args.steps}  seed: {args.seed}")
        print(f"note: {note}")
        header = ", ".join(exact.variable_names)
        print(f"observed frequency of ({header}) input/output events:")
        for row in rows:
            print(
                f"  ({', '.join(row['outcomes'])}): "
                f"{row['frequency']} vs exact {row['exact']} "
                f"(|err| {row['abs_error']:.6f}, 3se band {row['three_sigma_band']:.6f})"
            )
        print(f"max abs error: {max_error:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procnet",
        description=(
            "Analyze networks of finite stochastic processes: exact contraction, "
            "stationary distributions, induced empirical models, contextuality."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a network file")
    p_validate.add_argument("file")
    p_validate.add_argument("--json", action="store_true")
    p_validate.set_defaults(func=cmd_validate)

    p_analyze = sub.add_parser(
        "analyze", help="full pipeline: contract, stationary, model, contextuality"
    )
    p_analyze.add_argument("file")
    p_analyze.add_argument(
        "--omega",
        default="solve",
        help="stationary distribution: a name from the file, or 'solve' (default)",
    )
    p_analyze.add_argument("--json", action="store_true")
    p_analyze.add_argument(
        "--max-vars",
        type=int,
        default=DEFAULT_MAX_VARIABLES,
        help=f"contraction cap on total variables (default {DEFAULT_MAX_VARIABLES})",
    )
    p_analyze.set_defaults(func=cmd_analyze)

    p_sim = sub.add_parser(
        "simulate", help="Monte Carlo check of one node's input/output distribution"
    )
    p_sim.add_argument("file")
    p_sim.add_argument("--node", required=True, help="node to observe")
    p_sim.add_argument("--steps", type=int, default=100_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument(
        "--omega",
        default="solve",
        help="stationary distribution for the exact comparison (name or 'solve')",
    )
    p_sim.add_argument("--json", action="store_true")
    p_sim.add_argument("--max-vars", type=int, default=DEFAULT_MAX_VARIABLES)
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except StationarityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATIONARY
    except (DomainError, WiringError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ProcnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    raise SystemExit(main())
