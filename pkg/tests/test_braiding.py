from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

import pytest

from zonalcycle.braiding import (
    Generator,
    TensorVector,
    apply_PR,
    apply_vector_PR,
    braid_relation_holds,
    build_R,
    check_intertwining,
    check_string_formulas,
    compute_d,
    coproduct_act,
    flip_matrix,
    half_monodromy_phase,
    inversions,
    lr_tensor_vector,
    pr_projector_decomposition,
    q_antisymmetric_tensor,
    string_word,
    tensor_dual_image,
    tensor_is_zero_in_L,
    tensor_to_module,
    universal_exponent,
    vector_rep_R,
    yang_baxter_holds,
)
from zonalcycle.exactq import QScalar, frac_matmul, q_number, q_power
from zonalcycle.exception import DualVectorError, WeightMismatchError
from zonalcycle.repcore import ModuleVector, RootData

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


def string_pair(n: int, dual: bool = False) -> tuple[RootData, TensorVector]:
    rd = RootData(n)
    string = rd.string_weight()
    v = ModuleVector.highest(rd, string, dual=dual)
    return rd, TensorVector.tensor(v, v)


def test_coproduct_of_K_f_e_on_highest_vectors() -> None:
    _, vv = string_pair(1)
    assert coproduct_act(Generator("K", 1), vv) == vv.scaled(q_power(HALF))
    image = coproduct_act(Generator("f", 1), vv)
    assert image.as_mapping() == {
        ((1,), ()): q_power(QUARTER),
        ((), (1,)): q_power(-QUARTER),
    }
    assert coproduct_act(Generator("e", 1), vv).is_zero


def test_opposite_coproduct_swaps_K_sides() -> None:
    _, vv = string_pair(1)
    image = coproduct_act(Generator("f", 1), vv, opposite=True)
    assert image.as_mapping() == {
        ((1,), ()): q_power(-QUARTER),
        ((), (1,)): q_power(QUARTER),
    }


def test_coproduct_needs_module_factors() -> None:
    _, dual = string_pair(1, dual=True)
    with pytest.raises(DualVectorError):
        coproduct_act(Generator("e", 1), dual)


@pytest.mark.parametrize(
    ("drop", "expected"),
    [((0, 0, 0), 0), ((0, 1, 0), Fraction(-1, 2)), ((0, 1, 1), Fraction(-3, 4))],
)
def test_compute_d(drop: tuple[int, ...], expected: Fraction) -> None:
    assert compute_d(RootData(2), drop) == expected


def test_compute_d_is_listing_independent() -> None:
    rd = RootData(2)
    drops = [d for d in product(range(5), repeat=3) if sum(d) <= 4]
    for drop in drops:
        base = [i for i, count in enumerate(drop) for _ in range(count)]
        values = {compute_d(rd, drop, list(order)) for order in permutations(base)}
        assert values == {compute_d(rd, drop)}
    with pytest.raises(ValueError):
        compute_d(rd, (0, 1, 0), [2])


def test_dual_round_trip_through_L() -> None:
    rd, _ = string_pair(1)
    string = rd.string_weight()
    x = TensorVector.tensor(
        ModuleVector.word(rd, string, (1,)), ModuleVector.highest(rd, string)
    )
    dual = tensor_dual_image(x)
    assert dual.as_mapping() == {((1,), ()): q_number(1)}
    assert tensor_to_module(dual) == x
    assert tensor_is_zero_in_L(x - x)


def test_dual_block_squares_with_the_form() -> None:
    rd, _ = string_pair(1)
    string = rd.string_weight()
    R = build_R(rd, string, string)
    for left, right in [((1,), ()), ((), (1,))]:
        x = TensorVector.tensor(
            ModuleVector.word(rd, string, left), ModuleVector.word(rd, string, right)
        )
        through_dual = tensor_to_module(apply_PR(R, 0, tensor_dual_image(x)))
        assert tensor_is_zero_in_L(through_dual - apply_PR(R, 0, x))


def test_highest_block_is_q() -> None:
    rd, vv = string_pair(1, dual=True)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    image = apply_PR(R, 0, vv)
    assert image.as_mapping() == {((), ()): q_power(1)}


def test_prefactors_of_built_blocks() -> None:
    rd = RootData(1)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    d = {p.drop: p.value for p in R.prefactors()}
    assert d[(0, 0)] == 0
    assert d[(0, 1)] == Fraction(-1, 2)
    assert R.to_json()["d"]["0,0"] == "0"


def test_one_dimensional_blocks_match_the_universal_form() -> None:
    rd = RootData(1)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    checks = {c.drop: c for c in R.diagonal_checks()}
    assert set(checks) == {(0, 2)}
    assert checks[(0, 2)].derived == q_power(1)
    assert checks[(0, 2)].agrees
    assert R.to_json()["diagonal"][0]["agrees"] is True


def test_universal_exponent() -> None:
    rd = RootData(1)
    lowered = rd.string_weight() - rd.simple_root(1)
    assert universal_exponent(rd, lowered, lowered, (0, 0)) == 1
    assert universal_exponent(rd, lowered, lowered, (0, 1)) == HALF


def test_R_intertwines_and_matches_string_formulas() -> None:
    rd = RootData(1)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    assert check_intertwining(R) == []
    checks = check_string_formulas(R, 1)
    assert len(checks) == 4
    assert all(c.passed for c in checks)


@pytest.mark.slow
def test_string_formula_directions() -> None:
    rd = RootData(2)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    by_pair = {(c.left, c.right): c for c in check_string_formulas(R, 2)}
    assert all(c.passed for c in by_pair.values())
    # i < j: a pure swap; i > j: an extra term keeps the strings in place
    assert set(by_pair[(0, 2)].computed) == {(string_word(2), ())}
    assert set(by_pair[(2, 0)].computed) == {((), string_word(2)), (string_word(2), ())}


def test_apply_PR_checks_slots_and_weights() -> None:
    rd, vv = string_pair(1, dual=True)
    R = build_R(rd, rd.string_weight(), rd.string_weight())
    with pytest.raises(WeightMismatchError):
        apply_PR(R, 1, vv)
    other = ModuleVector.highest(rd, rd.fundamental_weight(1), dual=True)
    mixed = TensorVector.tensor(other, other)
    with pytest.raises(WeightMismatchError):
        apply_PR(R, 0, mixed)


def test_string_word() -> None:
    assert string_word(0) == ()
    assert string_word(3) == (3, 2, 1)


def test_vector_R_matrix_entries() -> None:
    r_hat = vector_rep_R(1)
    # columns index e_k ⊗ e_l as 2k + l
    assert r_hat[0, 0] == q_power(1)
    assert r_hat[1, 1] == q_power(HALF)
    assert r_hat[2, 2] == q_power(HALF)
    assert r_hat[1, 2] == q_power(HALF) * q_number(1)
    assert r_hat[2, 1] == 0


@pytest.mark.parametrize("n", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
def test_yang_baxter(n: int) -> None:
    assert yang_baxter_holds(n)


def test_braid_relation_needs_the_flip() -> None:
    assert not braid_relation_holds(vector_rep_R(1), 2)
    assert braid_relation_holds(frac_matmul(flip_matrix(1), vector_rep_R(1)), 2)


@pytest.mark.parametrize(("n", "symmetric", "antisymmetric"), [(1, 3, 1), (2, 6, 3)])
def test_projector_decomposition(n: int, symmetric: int, antisymmetric: int) -> None:
    decomposition = pr_projector_decomposition(n)
    assert decomposition.consistent
    assert decomposition.eigenvalues == (q_power(1), QScalar.constant(-1))
    assert decomposition.symmetric_multiplicity == symmetric
    assert decomposition.antisymmetric_multiplicity == antisymmetric


def test_q_antisymmetric_pair_is_minus_one_eigenvector() -> None:
    vector = {(0, 1): q_power(QUARTER), (1, 0): q_power(-QUARTER, -1)}
    image = apply_vector_PR(1, 0, vector)
    assert image == {w: -c for w, c in vector.items()}


@pytest.mark.parametrize("n", [1, 2])
def test_q_antisymmetric_tensor(n: int) -> None:
    tensor = q_antisymmetric_tensor(n)
    negated = {w: -c for w, c in tensor.items()}
    for slot in range(n):
        assert apply_vector_PR(n, slot, tensor) == negated


def test_inversions() -> None:
    assert inversions((1, 2, 3)) == 0
    assert inversions((2, 1)) == 1
    assert inversions((4, 3, 2, 1)) == 6


def test_half_monodromy_phase_agrees() -> None:
    rd = RootData(1)
    string = rd.string_weight()
    direct, via_q = half_monodromy_phase(string, string, Fraction(1, 2))
    assert direct == pytest.approx(via_q)


@pytest.mark.parametrize(
    ("parts", "n", "expected"),
    [
        ((1,), 2, [(2,), (1, 1)]),
        ((), 2, [(1,)]),
        ((1, 1), 2, [(2, 1), ()]),
        ((2, 1), 2, [(3, 1), (2, 2), (1,)]),
    ],
)
def test_lr_tensor_vector(
    parts: tuple[int, ...], n: int, expected: list[tuple[int, ...]]
) -> None:
    assert lr_tensor_vector(parts, n) == expected


def test_lr_rejects_non_diagrams() -> None:
    with pytest.raises(ValueError):
        lr_tensor_vector((1, 2), 2)
