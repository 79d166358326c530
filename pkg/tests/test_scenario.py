from fractions import Fraction
from random import Random

import pytest

from procnet import (
    Distribution,
    EmpiricalModel,
    MeasurementScenario,
    Section,
    Variable,
    iter_outcome_tuples,
    iter_sections,
    marginalize,
    restrict_section,
    section_at,
    section_count,
    section_index,
    validate_empirical_model,
)
from procnet.errors import DomainError

BINARY = ("0", "1")


def make_distribution(rng: Random, variables) -> Distribution:
    n = section_count(variables)
    raw = [rng.randint(0, 9) for _ in range(n)]
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    return Distribution(variables, tuple(Fraction(r, total) for r in raw))


class TestVariable:
    def test_rejects_empty_name_and_duplicate_outcomes(self):
        with pytest.raises(DomainError):
            Variable("", BINARY)
        with pytest.raises(DomainError):
            Variable("X", ("a", "a"))

    def test_index(self):
        v = Variable("X", ("lo", "mid", "hi"))
        assert v.index("mid") == 1
        with pytest.raises(DomainError):
            v.index("nope")


class TestSections:
    def test_restrict_projection(self):
        s = Section((("X", "0"), ("Y", "1"), ("Z", "1")))
        assert restrict_section(s, ("X", "Z")) == Section((("X", "0"), ("Z", "1")))

    def test_restrict_identity(self):
        s = Section((("X", "0"), ("Y", "1"), ("Z", "1")))
        assert restrict_section(s, ("X", "Y", "Z")) == s

    def test_restrict_single(self):
        s = Section((("A1", "1"), ("B1", "0")))
        assert restrict_section(s, ("B1",)) == Section((("B1", "0"),))

    def test_restrict_rejects_non_subset(self):
        s = Section((("X", "0"),))
        with pytest.raises(DomainError):
            restrict_section(s, ("Y",))

    def test_enumeration_is_lexicographic(self):
        x = Variable("X", BINARY)
        y = Variable("Y", ("a", "b", "c"))
        listed = [s.outcomes for s in iter_sections((x, y))]
        assert listed == [
            ("0", "a"), ("0", "b"), ("0", "c"),
            ("1", "a"), ("1", "b"), ("1", "c"),
        ]
        for i, s in enumerate(iter_sections((x, y))):
            assert section_index((x, y), s) == i
            assert section_at((x, y), i) == s


class TestDistribution:
    def test_mass_and_sign_enforced(self):
        x = Variable("X", BINARY)
        with pytest.raises(DomainError):
            Distribution((x,), (Fraction(1, 2), Fraction(1, 3)))
        with pytest.raises(DomainError):
            Distribution((x,), (Fraction(3, 2), Fraction(-1, 2)))

    def test_point_mass_and_weight_lookup(self):
        x, y = Variable("X", BINARY), Variable("Y", BINARY)
        d = Distribution.point_mass((x, y), ("1", "0"))
        assert d.weight({"X": "1", "Y": "0"}) == 1
        assert d.weight(("0", "0")) == 0

    def test_reorder_is_a_permutation(self):
        rng = Random(11)
        x, y = Variable("X", BINARY), Variable("Y", ("a", "b", "c"))
        d = make_distribution(rng, (x, y))
        swapped = d.reorder(("Y", "X"))
        for s in iter_sections((x, y)):
            assert swapped.weight(s.as_dict()) == d.weight(s)


class TestMarginalize:
    def test_sixcycle_pair_marginal(self, triangle_sigma, sixcycle_omega):
        # 1/6 when the two coordinates agree, 1/3 otherwise
        pair = marginalize(sixcycle_omega, ("X", "Y"))
        for outcomes in iter_outcome_tuples(pair.variables):
            expected = Fraction(1, 6) if outcomes[0] == outcomes[1] else Fraction(1, 3)
            assert pair.weight(outcomes) == expected

    def test_sixcycle_single_marginal_uniform(self, sixcycle_omega):
        single = marginalize(sixcycle_omega, ("X",))
        assert single.weights == (Fraction(1, 2), Fraction(1, 2))

    def test_identity_marginalization(self, sixcycle_omega):
        assert marginalize(sixcycle_omega, ("X", "Y", "Z")) is sixcycle_omega

    def test_rejects_non_subset(self, sixcycle_omega):
        with pytest.raises(DomainError):
            marginalize(sixcycle_omega, ("X", "W"))

    def test_composition_of_marginalizations(self):
        # marginalizing in two hops equals the direct marginal
        rng = Random(202)
        alphabets = [BINARY, ("a", "b", "c"), BINARY, ("u", "v")]
        variables = tuple(
            Variable(f"V{k}", alphabets[k]) for k in range(len(alphabets))
        )
        names = [v.name for v in variables]
        for _ in range(25):
            d = make_distribution(rng, variables)
            mid = tuple(n for n in names if rng.random() < 0.7)
            small = tuple(n for n in mid if rng.random() < 0.6)
            via = marginalize(marginalize(d, mid), small)
            direct = marginalize(d, small)
            assert via.weights == direct.weights

    def test_mass_preserved_exactly(self):
        rng = Random(303)
        variables = tuple(Variable(f"V{k}", ("0", "1", "2")) for k in range(3))
        for _ in range(20):
            d = make_distribution(rng, variables)
            m = marginalize(d, ("V2", "V0"))
            assert sum(m.weights) == 1

    def test_weights_match_brute_force_preimage_sums(self):
        rng = Random(404)
        variables = tuple(Variable(n, BINARY) for n in ("P", "Q", "R"))
        d = make_distribution(rng, variables)
        m = marginalize(d, ("R", "P"))
        for target in iter_sections(m.variables):
            total = sum(
                d.weight(s)
                for s in iter_sections(variables)
                if restrict_section(s, ("R", "P")) == target
            )
            assert m.weight(target) == total


class TestScenario:
    def test_cover_and_antichain_enforced(self):
        x, y, z = (Variable(n, BINARY) for n in "XYZ")
        with pytest.raises(DomainError):
            MeasurementScenario((x, y, z), (("X", "Y"),))  # Z uncovered
        with pytest.raises(DomainError):
            MeasurementScenario((x, y), (("X", "Y"), ("Y",)))  # nested contexts

    def test_distribution_context_alignment_enforced(self):
        x, y = Variable("X", BINARY), Variable("Y", BINARY)
        scenario = MeasurementScenario((x, y), (("X", "Y"),))
        good = Distribution.uniform((x, y))
        EmpiricalModel(scenario, (good,))
        bad = Distribution.uniform((y, x))
        with pytest.raises(DomainError):
            EmpiricalModel(scenario, (bad,))


class TestValidateEmpiricalModel:
    def test_triangle_model_is_consistent(self, xyz):
        x, y, z = xyz
        scenario = MeasurementScenario(
            (x, y, z), (("X", "Y"), ("Y", "Z"), ("Z", "X"))
        )
        anti = (Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(0))
        corr = (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2))
        model = EmpiricalModel(
            scenario,
            (
                Distribution((x, y), anti),
                Distribution((y, z), corr),
                Distribution((z, x), corr),
            ),
        )
        assert validate_empirical_model(model).ok

    def test_pr_box_is_consistent(self, chsh_variables):
        a1, b1, a2, b2 = chsh_variables
        scenario = MeasurementScenario(
            (a1, b1, a2, b2),
            (("A1", "B1"), ("B1", "A2"), ("A2", "B2"), ("B2", "A1")),
        )
        anti = (Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(0))
        corr = (Fraction(1, 2), Fraction(0), Fraction(0), Fraction(1, 2))
        model = EmpiricalModel(
            scenario,
            (
                Distribution((a1, b1), anti),
                Distribution((b1, a2), corr),
                Distribution((a2, b2), corr),
                Distribution((b2, a1), corr),
            ),
        )
        assert validate_empirical_model(model).ok

    def test_disagreeing_overlap_is_flagged(self, xyz):
        x, y, z = xyz
        scenario = MeasurementScenario((x, y, z), (("X", "Y"), ("Y", "Z")))
        uniform = Distribution.uniform((x, y))
        concentrated = Distribution.point_mass((y, z), ("0", "0"))
        model = EmpiricalModel(scenario, (uniform, concentrated))
        report = validate_empirical_model(model)
        assert not report.ok
        assert all(v.overlap == ("Y",) for v in report.violations)
        # uniform gives Y=0 weight 1/2, the point mass gives 1
        flagged = {v.outcomes: (v.first_weight, v.second_weight) for v in report.violations}
        assert flagged[("0",)] == (Fraction(1, 2), Fraction(1))

    def test_tolerance_absorbs_small_gaps(self, xyz):
        x, y, z = xyz
        scenario = MeasurementScenario((x, y, z), (("X", "Y"), ("Y", "Z")))
        slightly_off = Distribution(
            (y, z),
            (
                Fraction(1, 4) + Fraction(1, 100),
                Fraction(1, 4),
                Fraction(1, 4) - Fraction(1, 100),
                Fraction(1, 4),
            ),
        )
        model = EmpiricalModel(scenario, (Distribution.uniform((x, y)), slightly_off))
        assert not validate_empirical_model(model).ok
        assert validate_empirical_model(model, tol=Fraction(1, 50)).ok
