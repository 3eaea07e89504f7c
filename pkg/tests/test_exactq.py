"""Exact q-arithmetic and the fraction-field linear algebra on top of it."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from zonalcycle.exactq import (
    ONE,
    ZERO,
    QFraction,
    QScalar,
    as_fraction_matrix,
    as_fraction_vector,
    frac_det,
    frac_inverse,
    frac_matmul,
    frac_rank,
    frac_solve,
    frac_solve_consistent,
    q_add,
    q_eval,
    q_mul,
    q_number,
    q_power,
    simplify,
)
from zonalcycle.exception import (
    ExactArithmeticError,
    InconsistentSystemError,
    SingularBlockError,
)

Q = q_power(1)
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def test_addition_cancels_and_collects() -> None:
    assert q_power(QUARTER) + q_power(QUARTER, -1) == ZERO
    assert (q_power(HALF) + q_power(-HALF)).as_mapping() == {HALF: 1, -HALF: 1}
    assert (Q - 1) + 1 == Q


def test_multiplication() -> None:
    assert q_power(QUARTER) * q_power(QUARTER) == q_power(HALF)
    assert q_number(1) ** 2 == QScalar.from_mapping({1: 1, 0: -2, -1: 1})
    assert (ZERO * q_power(Fraction(7, 4))).is_zero


def test_negative_power_of_monomial_only() -> None:
    assert q_power(HALF, 2) ** -1 == q_power(-HALF, HALF)
    with pytest.raises(ExactArithmeticError):
        _ = (Q + 1) ** -1


@pytest.mark.parametrize(
    ("scalar", "q0", "expected"),
    [
        (q_power(HALF), 4, 2.0),
        (Q - 1, 1, 0.0),
        (q_power(QUARTER), 16, 2.0),
    ],
)
def test_evaluate(scalar: QScalar, q0: complex, expected: float) -> None:
    assert scalar.evaluate(q0) == pytest.approx(expected)
    assert q_eval(scalar, q0) == pytest.approx(expected)


def test_functional_arithmetic() -> None:
    assert q_add(q_power(HALF), q_power(-HALF)) == q_number(1) + 2 * q_power(-HALF)
    assert q_mul(q_power(QUARTER), q_power(-QUARTER)) == ONE


def test_constants_compare_with_plain_numbers() -> None:
    assert ONE == 1
    assert QScalar.constant(HALF) == HALF
    assert ZERO == 0
    assert not ZERO


def test_json_round_trip() -> None:
    scalar = q_power(-QUARTER, -3) + q_power(2, HALF)
    assert QScalar.from_json(scalar.to_json()) == scalar
    fraction = QFraction.of(Q + 1, Q - 1)
    assert QFraction.from_json(fraction.to_json()) == fraction


def test_json_text_is_byte_identical_after_a_round_trip() -> None:
    scalar = q_number(3) * q_power(-QUARTER, Fraction(2, 3)) + 5
    text = json.dumps(scalar.to_json())
    assert json.dumps(QScalar.from_json(json.loads(text)).to_json()) == text


def random_scalar(rng: np.random.Generator) -> QScalar:
    exponents = rng.integers(-6, 7, size=3)
    coefficients = rng.integers(-4, 5, size=3)
    return QScalar.from_mapping(
        {Fraction(int(e), 4): int(c) for e, c in zip(exponents, coefficients)}
    )


def test_ring_axioms_on_random_scalars(np_random: np.random.Generator) -> None:
    for _ in range(20):
        a, b, c = (random_scalar(np_random) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ZERO
        assert a * ONE == a


def test_fraction_reduces_common_factors() -> None:
    # (q − q^{−1}) / (q^{1/2} − q^{−1/2}) = q^{1/2} + q^{−1/2}
    value = QFraction.of(q_number(2), q_number(1))
    assert value.den == ONE
    assert simplify(value) == q_power(HALF) + q_power(-HALF)


def test_fraction_field_arithmetic() -> None:
    a = QFraction.of(1, Q + 1)
    b = QFraction.of(Q, Q + 1)
    assert a + b == 1
    assert (a / b) * Q == 1
    with pytest.raises(ExactArithmeticError):
        QFraction.of(1, 0)


def test_solve_identity_returns_rhs() -> None:
    identity = as_fraction_matrix([[1, 0], [0, 1]])
    rhs = as_fraction_vector([Q + 2, q_power(-QUARTER)])
    assert list(frac_solve(identity, rhs)) == list(rhs)


def test_solve_one_by_one() -> None:
    (x,) = frac_solve(as_fraction_matrix([[q_power(HALF)]]), as_fraction_vector([Q]))
    assert x == q_power(HALF)


def test_solve_diagonal() -> None:
    matrix = as_fraction_matrix([[Q, 0], [0, q_power(-1)]])
    solution = frac_solve(matrix, as_fraction_vector([Q, q_power(-1)]))
    assert list(solution) == [1, 1]


def test_singular_and_inconsistent_systems() -> None:
    singular = as_fraction_matrix([[Q, Q], [1, 1]])
    with pytest.raises(SingularBlockError) as info:
        frac_solve(singular, as_fraction_vector([Q, 1]), label="(0, 1)")
    assert info.value.label == "(0, 1)"

    tall = as_fraction_matrix([[1], [1]])
    with pytest.raises(InconsistentSystemError):
        frac_solve_consistent(tall, as_fraction_vector([1, 2]))
    (x,) = frac_solve_consistent(tall, as_fraction_vector([Q, Q]))
    assert x == Q


def test_rank_inverse_and_determinant() -> None:
    matrix = as_fraction_matrix([[Q, 1], [1, q_power(-1)]])
    assert frac_rank(matrix) == 1
    assert frac_det(matrix) == 0

    invertible = as_fraction_matrix([[Q, 1], [0, Q + 1]])
    assert frac_rank(invertible) == 2
    assert frac_det(invertible) == Q * (Q + 1)
    product = frac_matmul(invertible, frac_inverse(invertible))
    assert [[product[i, j] == int(i == j) for j in range(2)] for i in range(2)] == [
        [True, True],
        [True, True],
    ]
