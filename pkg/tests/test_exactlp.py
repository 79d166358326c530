from fractions import Fraction
from random import Random

import pytest

from procnet.errors import DomainError
from procnet.exactlp import farkas_contradiction, feasible_point, solve_linear

F = Fraction


def frac_rows(rows):
    return [[F(e) for e in row] for row in rows]


class TestSolveLinear:
    def test_unique_solution(self):
        x = solve_linear(frac_rows([[2, 1], [1, -1]]), [F(5), F(1)])
        assert x == (F(2), F(1))

    def test_redundant_rows_ok(self):
        x = solve_linear(frac_rows([[1, 1], [2, 2]]), [F(3), F(6)])
        assert x is not None
        assert x[0] + x[1] == 3

    def test_inconsistent_returns_none(self):
        assert solve_linear(frac_rows([[1, 1], [1, 1]]), [F(1), F(2)]) is None

    def test_free_variables_default_to_zero(self):
        x = solve_linear(frac_rows([[1, 0, 1]]), [F(4)])
        assert x == (F(4), F(0), F(0))


class TestFeasiblePoint:
    def test_simplex_face_is_feasible(self):
        res = feasible_point(frac_rows([[1, 1, 1]]), [F(1)])
        assert res.feasible
        assert sum(res.solution) == 1
        assert all(v >= 0 for v in res.solution)

    def test_negative_sum_is_infeasible_with_certificate(self):
        rows = frac_rows([[1, 1]])
        rhs = [F(-1)]
        res = feasible_point(rows, rhs)
        assert not res.feasible
        assert farkas_contradiction(rows, rhs, res.certificate)

    def test_conflicting_equalities_yield_certificate(self):
        rows = frac_rows([[1, 0], [1, 0]])
        rhs = [F(1), F(2)]
        res = feasible_point(rows, rhs)
        assert not res.feasible
        assert farkas_contradiction(rows, rhs, res.certificate)

    def test_equality_with_upper_bound_conflict(self):
        # x1 + x2 = 1 and x1 + x2 = 3 cannot both hold
        rows = frac_rows([[1, 1], [1, 1]])
        rhs = [F(1), F(3)]
        res = feasible_point(rows, rhs)
        assert not res.feasible
        assert farkas_contradiction(rows, rhs, res.certificate)

    def test_zero_rows_and_zero_rhs(self):
        rows = frac_rows([[0, 0], [1, 2]])
        rhs = [F(0), F(4)]
        res = feasible_point(rows, rhs)
        assert res.feasible
        x = res.solution
        assert x[0] + 2 * x[1] == 4

    def test_empty_system_is_feasible(self):
        res = feasible_point([], [])
        assert res.feasible
        assert res.solution == ()

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DomainError):
            feasible_point(frac_rows([[1, 1]]), [F(1), F(2)])

    def test_random_systems_agree_with_construction(self):
        # systems built from a known nonnegative solution must be feasible,
        # and the returned point must satisfy them exactly
        rng = Random(42)
        for _ in range(30):
            n = rng.randint(2, 6)
            m = rng.randint(1, 4)
            hidden = [F(rng.randint(0, 5), rng.randint(1, 4)) for _ in range(n)]
            rows = [
                [F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)
            ]
            rhs = [sum(r[j] * hidden[j] for j in range(n)) for r in rows]
            res = feasible_point(rows, rhs)
            assert res.feasible
            for r, b in zip(rows, rhs):
                assert sum(rj * xj for rj, xj in zip(r, res.solution)) == b
            assert all(x >= 0 for x in res.solution)

    def test_certificates_always_verify_on_infeasible_instances(self):
        rng = Random(43)
        found = 0
        for _ in range(60):
            n = rng.randint(1, 4)
            m = rng.randint(2, 4)
            rows = [
                [F(rng.randint(0, 2)) for _ in range(n)] for _ in range(m)
            ]
            rhs = [F(rng.randint(-2, 4)) for _ in range(m)]
            res = feasible_point(rows, rhs)
            if not res.feasible:
                found += 1
                assert farkas_contradiction(rows, rhs, res.certificate)
        assert found > 5
