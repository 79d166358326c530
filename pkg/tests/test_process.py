from fractions import Fraction
from random import Random

import pytest

from procnet import (
    Network,
    ProcessTensor,
    Variable,
    classify_network,
    compose,
    contract_network,
    deterministic_process,
    find_reciprocities,
    global_variable_order,
    rename_variables,
    reorder_process,
    validate_process,
)
from procnet.errors import (
    CompositionError,
    DomainError,
    ResourceLimitError,
    WiringError,
)
from procnet.generators import random_closed_network, random_stochastic_rows
from procnet.scenario import iter_outcome_tuples, section_count

BINARY = ("0", "1")
HALF = Fraction(1, 2)


def var(name, alphabet=BINARY):
    return Variable(name, alphabet)


def random_process(rng, name, inputs, outputs):
    matrix = random_stochastic_rows(
        rng, section_count(tuple(inputs)), section_count(tuple(outputs))
    )
    return ProcessTensor(name, tuple(inputs), (), tuple(outputs), matrix)


class TestProcessTensor:
    def test_shape_is_enforced(self):
        with pytest.raises(DomainError):
            ProcessTensor("p", (var("I"),), (), (var("O"),), ((HALF, HALF),))

    def test_duplicate_names_rejected(self):
        with pytest.raises(DomainError):
            ProcessTensor(
                "p", (var("X"),), (), (var("X"),),
                ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
            )

    def test_row_and_col_variables(self):
        p = ProcessTensor(
            "p",
            (var("I"),),
            (var("X"),),
            (var("O"),),
            tuple(
                tuple(Fraction(1, 4) for _ in range(4)) for _ in range(4)
            ),
        )
        assert [v.name for v in p.row_variables] == ["I", "X"]
        assert [v.name for v in p.col_variables] == ["X", "O"]
        assert not p.is_closed


class TestValidateProcess:
    def test_negation_process_is_stochastic(self, triangle_network):
        assert validate_process(triangle_network.node("alpha")).ok

    def test_row_summing_to_half_is_flagged(self):
        p = ProcessTensor(
            "bad", (var("I"),), (), (var("O"),),
            ((HALF, Fraction(0)), (HALF, HALF)),
        )
        report = validate_process(p)
        assert not report.ok
        assert report.bad_row_sums == ((0, HALF),)

    def test_degenerate_one_by_one(self):
        p = ProcessTensor("unit", (), (), (), ((Fraction(1),),))
        assert validate_process(p).ok

    def test_negative_entry_reported(self):
        p = ProcessTensor(
            "neg", (var("I"),), (), (var("O"),),
            ((Fraction(3, 2), Fraction(-1, 2)), (HALF, HALF)),
        )
        report = validate_process(p)
        assert report.negative_entries == ((0, 1, Fraction(-1, 2)),)


class TestCompose:
    def test_two_relay_chain_shape_and_entries(self):
        # i -> p(internal X) -> link F=G -> q(internal H) -> o
        rng = Random(5)
        i, x, f = var("I"), var("X"), var("F")
        g, h, o = var("G"), var("H"), var("O")
        p = ProcessTensor(
            "p", (i,), (x,), (f,),
            random_stochastic_rows(rng, 4, 4),
        )
        q = ProcessTensor(
            "q", (g,), (h,), (o,),
            random_stochastic_rows(rng, 4, 4),
        )
        c = compose(p, q, [("F", "G")])
        assert [v.name for v in c.inputs] == ["I"]
        assert [v.name for v in c.internals] == ["X", "F", "H"]
        assert [v.name for v in c.outputs] == ["O"]
        assert validate_process(c).ok
        # every entry is the product of the operand entries
        for r, (iv, xv, fv, hv) in enumerate(iter_outcome_tuples(c.row_variables)):
            for col, (xn, fn, hn, ov) in enumerate(
                iter_outcome_tuples(c.col_variables)
            ):
                p_entry = p.matrix[2 * int(iv) + int(xv)][2 * int(xn) + int(fn)]
                q_entry = q.matrix[2 * int(fv) + int(hv)][2 * int(hn) + int(ov)]
                assert c.matrix[r][col] == p_entry * q_entry

    def test_negation_then_copy_all_sixteen_entries(self):
        # expected values brute-forced from the operand matrices below
        xp, y = var("XP"), var("Y")
        yp, z = var("YP"), var("Z")
        negation = deterministic_process(
            "negation", [xp], [y], lambda t: ("1",) if t[0] == "0" else ("0",)
        )
        relay = deterministic_process("relay", [yp], [z], lambda t: t)
        c = compose(negation, relay, [("Y", "YP")])
        assert [v.name for v in c.inputs] == ["XP"]
        assert [v.name for v in c.internals] == ["Y"]
        assert [v.name for v in c.outputs] == ["Z"]
        for r, (xv, y_prev) in enumerate(iter_outcome_tuples(c.row_variables)):
            for col, (y_new, zv) in enumerate(iter_outcome_tuples(c.col_variables)):
                expected = negation.matrix[int(xv)][int(y_new)] * relay.matrix[
                    int(y_prev)
                ][int(zv)]
                assert c.matrix[r][col] == expected
                # the two-step behavior: new Y negates the input, Z relays old Y
                assert c.matrix[r][col] == (
                    1 if (y_new != xv and zv == y_prev) else 0
                )

    def test_compose_with_identity_factorizes(self):
        rng = Random(6)
        p = random_process(rng, "p", [var("I")], [var("F")])
        ident = deterministic_process("ident", [var("G")], [var("O")], lambda t: t)
        c = compose(p, ident, [("F", "G")])
        assert [v.name for v in c.internals] == ["F"]
        for r, (iv, f_prev) in enumerate(iter_outcome_tuples(c.row_variables)):
            for col, (f_new, ov) in enumerate(iter_outcome_tuples(c.col_variables)):
                expected = p.matrix[int(iv)][int(f_new)] * (1 if ov == f_prev else 0)
                assert c.matrix[r][col] == expected

    def test_alphabet_mismatch_rejected(self):
        p = deterministic_process("p", [var("I")], [var("F")], lambda t: t)
        q = deterministic_process(
            "q", [Variable("G", ("a", "b", "c"))], [Variable("O", ("a", "b", "c"))],
            lambda t: t,
        )
        with pytest.raises(CompositionError):
            compose(p, q, [("F", "G")])

    def test_name_collision_rejected(self):
        p = deterministic_process("p", [var("I")], [var("F")], lambda t: t)
        q = deterministic_process("q", [var("F")], [var("I")], lambda t: t)
        # linking F only would leave both carrying the name I
        with pytest.raises(CompositionError):
            compose(p, q, [("F", "F")])

    def test_link_endpoints_must_exist(self):
        p = deterministic_process("p", [var("I")], [var("F")], lambda t: t)
        q = deterministic_process("q", [var("G")], [var("O")], lambda t: t)
        with pytest.raises(CompositionError):
            compose(p, q, [("I", "G")])
        with pytest.raises(CompositionError):
            compose(p, q, [("F", "O")])

    def test_associativity_on_random_chains(self):
        rng = Random(7)
        for _ in range(10):
            n1 = random_process(rng, "n1", [var("I")], [var("F1")])
            n2 = random_process(rng, "n2", [var("G1")], [var("F2")])
            n3 = random_process(rng, "n3", [var("G2")], [var("O")])
            left = compose(compose(n1, n2, [("F1", "G1")]), n3, [("F2", "G2")])
            right = compose(n1, compose(n2, n3, [("F2", "G2")]), [("F1", "G1")])
            canonical = reorder_process(
                right,
                [v.name for v in left.inputs],
                [v.name for v in left.internals],
                [v.name for v in left.outputs],
            )
            assert canonical.inputs == left.inputs
            assert canonical.internals == left.internals
            assert canonical.outputs == left.outputs
            assert canonical.matrix == left.matrix

    def test_empty_link_list_is_a_parallel_product(self):
        rng = Random(16)
        p = random_process(rng, "p", [var("I")], [var("F")])
        q = random_process(rng, "q", [var("G")], [var("O")])
        c = compose(p, q, [])
        assert [v.name for v in c.inputs] == ["I", "G"]
        assert c.internals == ()
        assert [v.name for v in c.outputs] == ["F", "O"]
        for r, (iv, gv) in enumerate(iter_outcome_tuples(c.row_variables)):
            for col, (fv, ov) in enumerate(iter_outcome_tuples(c.col_variables)):
                assert c.matrix[r][col] == p.matrix[int(iv)][int(fv)] * q.matrix[
                    int(gv)
                ][int(ov)]

    def test_compose_preserves_stochasticity(self):
        rng = Random(8)
        for _ in range(10):
            p = random_process(rng, "p", [var("I")], [var("F")])
            q = random_process(rng, "q", [var("G"), var("K")], [var("O")])
            c = compose(p, q, [("F", "G")])
            assert validate_process(c).ok


class TestNetworkWiring:
    def test_two_producers_rejected(self):
        p = deterministic_process("p", [var("I")], [var("X")], lambda t: t)
        q = deterministic_process("q", [var("J")], [var("X")], lambda t: t)
        with pytest.raises(WiringError):
            Network((p, q))

    def test_two_consumers_rejected(self):
        p = deterministic_process("p", [var("X")], [var("O")], lambda t: t)
        q = deterministic_process("q", [var("X")], [var("P")], lambda t: t)
        with pytest.raises(WiringError):
            Network((p, q))

    def test_wire_alphabets_must_agree(self):
        p = deterministic_process("p", [var("I")], [var("X")], lambda t: t)
        q = deterministic_process(
            "q",
            [Variable("X", ("a", "b"))],
            [Variable("O", ("a", "b"))],
            lambda t: t,
        )
        with pytest.raises(WiringError):
            Network((p, q))


class TestClassify:
    def test_triangle_is_closed(self, triangle_network):
        shape = classify_network(triangle_network)
        assert shape.closed
        assert shape.dangling_inputs == ()
        assert shape.dangling_outputs == ()

    def test_open_chain_dangles(self):
        rng = Random(9)
        p = random_process(rng, "p", [var("I")], [var("F")])
        q = random_process(rng, "q", [var("F")], [var("O")])
        shape = classify_network(Network((p, q)))
        assert not shape.closed
        assert shape.dangling_inputs == ("I",)
        assert shape.dangling_outputs == ("O",)

    def test_empty_network_is_closed(self):
        assert classify_network(Network(())).closed


class TestReciprocities:
    def test_mutual_pair(self):
        rng = Random(10)
        a = random_process(rng, "a", [var("X")], [var("Y")])
        b = random_process(rng, "b", [var("Y")], [var("X")])
        assert find_reciprocities(Network((a, b))) == (("a", "b"),)

    def test_internal_variable_is_self_reciprocity(self):
        p = ProcessTensor(
            "loop", (), (var("X"),), (),
            ((HALF, HALF), (HALF, HALF)),
        )
        assert find_reciprocities(Network((p,))) == (("loop", "loop"),)

    def test_directed_three_cycle_has_none(self, triangle_network):
        assert find_reciprocities(triangle_network) == ()


class TestContract:
    def test_triangle_matches_formula(self, triangle_sigma):
        assert [v.name for v in triangle_sigma.internals] == ["X", "Y", "Z"]
        states = list(iter_outcome_tuples(triangle_sigma.internals))
        for r, (x1, y1, z1) in enumerate(states):
            for c, (x, y, z) in enumerate(states):
                expected = 1 if (y != x1 and z == y1 and x == z1) else 0
                assert triangle_sigma.matrix[r][c] == expected

    def test_chsh_matches_formula(self, chsh_sigma):
        assert [v.name for v in chsh_sigma.internals] == ["A1", "B1", "A2", "B2"]
        states = list(iter_outcome_tuples(chsh_sigma.internals))
        for r, (a1p, b1p, a2p, b2p) in enumerate(states):
            for c, (a1, b1, a2, b2) in enumerate(states):
                expected = (
                    1
                    if (a1p != b1 and b1p == a2 and a2p == b2 and b2p == a1)
                    else 0
                )
                assert chsh_sigma.matrix[r][c] == expected

    def test_permutation_networks_stay_permutations(self, triangle_sigma, chsh_sigma):
        for sigma in (triangle_sigma, chsh_sigma):
            n = len(sigma.matrix)
            for row in sigma.matrix:
                assert sum(row) == 1 and all(e in (0, 1) for e in row)
            for c in range(n):
                assert sum(sigma.matrix[r][c] for r in range(n)) == 1

    def test_single_node_contracts_to_itself(self):
        rng = Random(12)
        p = ProcessTensor(
            "p", (var("I"),), (var("X"),), (var("O"),),
            random_stochastic_rows(rng, 4, 4),
        )
        sigma = contract_network(Network((p,)))
        assert sigma.inputs == p.inputs
        assert sigma.internals == p.internals
        assert sigma.outputs == p.outputs
        assert sigma.matrix == p.matrix

    def test_contract_preserves_stochasticity(self):
        rng = Random(13)
        for _ in range(8):
            net = random_closed_network(rng, allow_zeros=True)
            sigma = contract_network(net)
            assert validate_process(sigma).ok

    def test_variable_cap_enforced(self):
        rng = Random(14)
        net = random_closed_network(rng, n_nodes=4)
        with pytest.raises(ResourceLimitError):
            contract_network(net, max_variables=2)

    def test_global_order_is_first_appearance(self, chsh_network):
        g_in, g_internal, g_out = global_variable_order(chsh_network)
        assert g_in == ()
        assert g_out == ()
        assert [v.name for v in g_internal] == ["A1", "B1", "A2", "B2"]


class TestRenameReorder:
    def test_rename_preserves_matrix(self, triangle_network):
        alpha = triangle_network.node("alpha")
        renamed = rename_variables(alpha, {"X": "IN", "Y": "OUT"})
        assert [v.name for v in renamed.inputs] == ["IN"]
        assert [v.name for v in renamed.outputs] == ["OUT"]
        assert renamed.matrix == alpha.matrix

    def test_reorder_internals_roundtrip(self):
        rng = Random(17)
        p = ProcessTensor(
            "p",
            (var("I"),),
            (var("X"), var("Y")),
            (),
            random_stochastic_rows(rng, 8, 4),
        )
        swapped = reorder_process(p, ["I"], ["Y", "X"], [])
        back = reorder_process(swapped, ["I"], ["X", "Y"], [])
        assert back.matrix == p.matrix
        # row (i, y, x) and column (y, x) of the swap read the original's
        # (i, x, y) and (x, y)
        for i in range(2):
            for x in range(2):
                for y in range(2):
                    for xn in range(2):
                        for yn in range(2):
                            assert (
                                swapped.matrix[i * 4 + y * 2 + x][yn * 2 + xn]
                                == p.matrix[i * 4 + x * 2 + y][xn * 2 + yn]
                            )

    def test_reorder_roundtrip(self):
        rng = Random(15)
        p = ProcessTensor(
            "p",
            (var("I"), var("J")),
            (var("X"),),
            (var("O"),),
            random_stochastic_rows(rng, 8, 4),
        )
        swapped = reorder_process(p, ["J", "I"], ["X"], ["O"])
        back = reorder_process(swapped, ["I", "J"], ["X"], ["O"])
        assert back.matrix == p.matrix
        # row (j, i, x) of the swap reads row (i, j, x) of the original
        for i in range(2):
            for j in range(2):
                for x in range(2):
                    assert (
                        swapped.matrix[j * 4 + i * 2 + x]
                        == p.matrix[i * 4 + j * 2 + x]
                    )
