from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from zonalcycle.exactq import ONE, ZERO, QScalar, frac_rank, q_number, q_power
from zonalcycle.exception import DualVectorError, WeightMismatchError
from zonalcycle.repcore import (
    ModuleVector,
    RootData,
    Weight,
    act_e,
    act_f,
    act_K,
    apply_serre,
    contravariant_form,
    dual_image,
    equal_in_L,
    gram_matrix,
    iter_weight_drops,
    quotient_module,
    weight_of,
    words_of_drop,
)

RD2 = RootData(2)
STRING = RD2.string_weight()


def basis(r: int) -> Weight:
    return RD2.basis_vector(r)


def test_weight_of_words() -> None:
    assert weight_of((), STRING, RD2) == STRING
    assert weight_of((1,), STRING, RD2) == basis(2) - basis(0)
    assert weight_of((2, 1), STRING, RD2) == basis(3) - basis(0)


def test_named_weights() -> None:
    assert [RD2.pairing(STRING, i) for i in RD2.indices] == [-2, 1, 0]
    eta = RD2.fundamental_weight(1)
    assert [RD2.pairing(eta, i) for i in (1, 2)] == [1, 0]
    total = RD2.zero_weight()
    for j in (1, 2, 3):
        total = total + RD2.vector_weight(j)
    assert total == RD2.zero_weight()
    assert RD2.lambda_zero(RD2.zero_weight(), Fraction(1, 2)) == -RD2.delta()


def test_root_data_rejects_rank_zero() -> None:
    with pytest.raises(ValueError):
        RootData(0)


def test_f_prepends_indices() -> None:
    v = ModuleVector.highest(RD2, STRING)
    assert act_f(1, v) == ModuleVector.word(RD2, STRING, (1,))
    assert act_f(2, act_f(1, v)) == ModuleVector.word(RD2, STRING, (2, 1))
    assert act_f(1, v.scaled(0)).is_zero


def test_K_half_eigenvalues() -> None:
    v = ModuleVector.highest(RD2, STRING)
    assert act_K(1, 1, v) == v.scaled(q_power(Fraction(1, 4)))
    f1v = ModuleVector.word(RD2, STRING, (1,))
    assert act_K(1, 1, f1v) == f1v.scaled(q_power(Fraction(-1, 4)))
    # (Λ, α_0) = −2 for the string weight
    assert act_K(0, 1, v) == v.scaled(q_power(Fraction(-1, 2)))


def test_e_commutes_past_f() -> None:
    v = ModuleVector.highest(RD2, STRING)
    assert act_e(1, ModuleVector.word(RD2, STRING, (1,))) == v.scaled(q_number(1))
    assert act_e(2, ModuleVector.word(RD2, STRING, (1,))).is_zero
    # f_2 v survives in M(Λ) but vanishes in L since (Λ, α_2) = 0
    image = act_e(1, ModuleVector.word(RD2, STRING, (2, 1)))
    assert image == ModuleVector.word(RD2, STRING, (2,), q_number(1))
    assert equal_in_L(image, v.scaled(0))


def test_dual_vectors_reject_module_actions() -> None:
    phi = ModuleVector.highest(RD2, STRING, dual=True)
    with pytest.raises(DualVectorError):
        act_f(1, phi)
    with pytest.raises(DualVectorError):
        _ = phi + ModuleVector.highest(RD2, STRING)


def test_contravariant_form() -> None:
    v = ModuleVector.highest(RD2, STRING)
    f1v = ModuleVector.word(RD2, STRING, (1,))
    f2v = ModuleVector.word(RD2, STRING, (2,))
    assert contravariant_form(v, v) == ONE
    assert contravariant_form(f1v, f1v) == q_number(1)
    assert contravariant_form(f1v, f2v) == ZERO


def test_form_rejects_mixed_highest_weights() -> None:
    other = ModuleVector.highest(RD2, RD2.fundamental_weight(2))
    with pytest.raises(WeightMismatchError):
        contravariant_form(ModuleVector.highest(RD2, STRING), other)


def test_gram_matrices() -> None:
    generic = RD2.generic_lambda()
    assert list(gram_matrix(RD2, generic, generic, [()]).flat) == [ONE]

    single = gram_matrix(RD2, STRING, weight_of((1,), STRING, RD2), [(1,)])
    assert single[0, 0] == q_number(1)

    eta = RD2.fundamental_weight(1)
    words = [(2, 1), (1, 2)]
    matrix = gram_matrix(RD2, eta, weight_of((2, 1), eta, RD2), words)
    assert frac_rank(matrix) == 1

    with pytest.raises(WeightMismatchError):
        gram_matrix(RD2, eta, eta, [(1,)])


def test_words_of_drop() -> None:
    assert words_of_drop((0, 1, 1)) == [(1, 2), (2, 1)]
    assert words_of_drop((0, 2, 0)) == [(1, 1)]
    assert words_of_drop((0, 0, 0)) == [()]


def test_iter_weight_drops() -> None:
    assert list(iter_weight_drops(RD2, 1)) == [(0, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_serre_relation_vanishes_in_L() -> None:
    v = ModuleVector.highest(RD2, STRING)
    assert equal_in_L(apply_serre(1, 2, v), v.scaled(0))
    assert equal_in_L(apply_serre(2, 1, v), v.scaled(0))
    x = act_f(1, act_f(2, act_f(1, v)))
    assert equal_in_L(apply_serre(1, 2, x, kind="e"), v.scaled(0))
    assert not equal_in_L(
        ModuleVector.word(RD2, RD2.generic_lambda(), (1,)),
        ModuleVector.word(RD2, RD2.generic_lambda(), (1,), QScalar.constant(2)),
    )


def test_dual_image() -> None:
    v = ModuleVector.highest(RD2, STRING)
    assert dual_image(v) == ModuleVector.highest(RD2, STRING, dual=True)
    f1v = ModuleVector.word(RD2, STRING, (1,))
    assert dual_image(f1v) == ModuleVector.word(
        RD2, STRING, (1,), q_number(1), dual=True
    )
    assert dual_image(v.scaled(0)).is_zero


def test_quotient_module_of_vector_representation() -> None:
    eta = RD2.fundamental_weight(1)
    module = quotient_module(RD2, eta)
    dims = {drop: module.dimension(drop) for drop in iter_weight_drops(RD2, 3)}
    assert sum(dims.values()) == 3
    assert dims[(0, 1, 1)] == 1
    assert dims[(0, 0, 1)] == 0

    phi = ModuleVector.word(RD2, eta, (1,), dual=True)
    assert dual_image(module.to_module(phi)) == phi


@pytest.mark.parametrize("i", [0, 1, 2])
def test_e_f_commutator_is_K_difference(i: int) -> None:
    for word in [(), (1,), (1, 1), *words_of_drop((0, 1, 1))]:
        x = ModuleVector.word(RD2, STRING, word)
        commutator = act_e(i, act_f(i, x)) - act_f(i, act_e(i, x))
        k_difference = act_K(i, 1, act_K(i, 1, x)) - act_K(i, -1, act_K(i, -1, x))
        assert (commutator - k_difference).is_zero


def test_contravariant_form_is_symmetric(np_random: np.random.Generator) -> None:
    words = words_of_drop((1, 1, 1))
    for _ in range(5):
        x, y = (
            ModuleVector(
                root_data=RD2,
                highest_weight=STRING,
                terms=[
                    (w, QScalar.constant(int(c)))
                    for w, c in zip(words, np_random.integers(-3, 4, len(words)))
                ],
            )
            for _ in range(2)
        )
        assert contravariant_form(x, y) == contravariant_form(y, x)
