from __future__ import annotations

import math
from fractions import Fraction

import pytest

from zonalcycle.braiding import tensor_is_zero_in_L
from zonalcycle.cycles import (
    Diagram,
    Permutation,
    arrow_target,
    braid_eigen_check,
    braid_image,
    braid_word_fixes,
    chain_pairings,
    chain_vertex_singular_check,
    coxeter_length,
    cycle_weights,
    decomposition_dims,
    diagram_coefficient,
    diagram_length,
    diagram_to_permutation,
    eigenvalue_of,
    encode_chain_vertex,
    encode_cycle,
    encode_cycle_from_diagrams,
    enumerate_diagrams,
    form_duality_holds,
    left_arrow_count,
    singular_check,
    singular_path_count,
    singular_residuals,
)
from zonalcycle.exactq import QScalar, q_power
from zonalcycle.exception import (
    DiagramError,
    DomainError,
    NotEigenvectorError,
    WeightMismatchError,
)
from zonalcycle.hyperint import weight_from_pairings
from zonalcycle.repcore import RootData

QUARTER = Fraction(1, 4)
MINUS_ONE = QScalar.constant(-1)


def test_arrow_targets() -> None:
    assert arrow_target(Diagram((1, 2)), (1, 1)) == ((1, 2), "left")
    assert arrow_target(Diagram((1, 1)), (1, 1)) == ((2, 2), "right")
    all_ones = Diagram((1, 1, 1, 1))
    assert all(
        arrow_target(all_ones, p)[1] == "right" for p in all_ones.points() if p[1] < 4
    )


def test_arrows_never_hit_marked_points() -> None:
    for d in enumerate_diagrams(4):
        for point in d.points():
            if point[1] < d.n:
                (i, j), _ = arrow_target(d, point)
                assert i != d.marked[j - 1]


def test_arrow_target_rejects_last_row_and_outside_points() -> None:
    d = Diagram((1, 2))
    with pytest.raises(DiagramError):
        arrow_target(d, (1, 2))
    with pytest.raises(DiagramError):
        arrow_target(d, (2, 1))


@pytest.mark.parametrize("marked", [(), (2,), (1, 3), (1, 0)])
def test_invalid_diagrams(marked: tuple[int, ...]) -> None:
    with pytest.raises(DiagramError):
        Diagram(marked)


@pytest.mark.parametrize(
    ("marked", "images"),
    [((1,), (1,)), ((1, 2), (2, 1)), ((1, 1), (1, 2))],
)
def test_diagram_to_permutation(
    marked: tuple[int, ...], images: tuple[int, ...]
) -> None:
    assert diagram_to_permutation(Diagram(marked)) == Permutation(images)


@pytest.mark.parametrize(
    ("marked", "length"),
    [((1, 1, 1), 0), ((1, 2), 1), ((1, 2, 3), 3), ((1, 2, 3, 4), 6)],
)
def test_diagram_length(marked: tuple[int, ...], length: int) -> None:
    d = Diagram(marked)
    assert diagram_length(d) == length
    assert left_arrow_count(d) == length


@pytest.mark.parametrize(
    ("images", "length"), [((1, 2, 3), 0), ((2, 1), 1), ((4, 3, 2, 1), 6)]
)
def test_coxeter_length(images: tuple[int, ...], length: int) -> None:
    assert coxeter_length(Permutation(images)) == length


def test_permutation_rejects_non_bijections() -> None:
    with pytest.raises(ValueError):
        Permutation((1, 1))


@pytest.mark.parametrize(
    "n", [1, 2, 3, 4, 5, 6, pytest.param(7, marks=pytest.mark.slow)]
)
def test_diagrams_biject_onto_permutations(n: int) -> None:
    diagrams = list(enumerate_diagrams(n))
    permutations = {diagram_to_permutation(d) for d in diagrams}
    assert len(diagrams) == math.factorial(n)
    assert len(permutations) == math.factorial(n)
    for d in diagrams:
        assert diagram_length(d) == coxeter_length(diagram_to_permutation(d))


def test_diagram_coefficient() -> None:
    assert diagram_coefficient(Diagram((1, 1))) == q_power(QUARTER)
    assert diagram_coefficient(Diagram((1, 2))) == q_power(-QUARTER, -1)


def test_encode_rank_one() -> None:
    cycle = encode_cycle(1, 1)
    assert cycle.vector.is_dual
    assert cycle.vector.as_mapping() == {
        ((), (), (1,)): q_power(QUARTER),
        ((), (1,), ()): q_power(-QUARTER, -1),
    }
    assert cycle.denominator_power == 0


def test_encode_form_two() -> None:
    cycle = encode_cycle(2, 2)
    assert not cycle.vector.is_dual
    assert cycle.denominator_power == 3
    assert len(cycle.vector.terms) == 6
    assert cycle.to_json()["form"] == 2


@pytest.mark.parametrize("n", [1, 2])
def test_diagram_encoding_matches_permutation_encoding(n: int) -> None:
    assert encode_cycle_from_diagrams(n).vector == encode_cycle(n, 1).vector


@pytest.mark.parametrize("n", [1, 2])
def test_form_duality(n: int) -> None:
    assert form_duality_holds(n)


def test_cycle_is_singular() -> None:
    assert singular_check(encode_cycle(1, 1))
    assert singular_check(encode_cycle(1, 2))


@pytest.mark.slow
def test_rank_two_cycle_is_singular() -> None:
    assert singular_check(encode_cycle(2, 1))


@pytest.mark.slow
def test_rank_three_cycle() -> None:
    cycle = encode_cycle(3, 1)
    assert singular_check(cycle)
    assert form_duality_holds(3)
    for slot in (1, 2, 3):
        assert braid_eigen_check(cycle, slot) == MINUS_ONE


def test_single_term_is_not_singular() -> None:
    vector = encode_cycle(1, 1).vector
    assert not singular_check(vector.with_terms(vector.terms[:1]))


def test_singular_residuals_per_index() -> None:
    vector = encode_cycle(1, 1).vector
    residuals = singular_residuals(vector)
    assert sorted(residuals) == [0, 1]
    assert all(tensor_is_zero_in_L(r) for r in residuals.values())
    broken = singular_residuals(vector.with_terms(vector.terms[:1]), [1])
    assert list(broken) == [1]


def test_braiding_rank_one() -> None:
    cycle = encode_cycle(1, 1)
    assert braid_eigen_check(cycle, 1) == MINUS_ONE
    assert braid_word_fixes(cycle, [1, 1])
    assert not braid_word_fixes(cycle, [1])


@pytest.mark.slow
def test_braiding_rank_two() -> None:
    cycle = encode_cycle(2, 1)
    assert braid_eigen_check(cycle, 1) == MINUS_ONE
    assert braid_eigen_check(cycle, 2) == MINUS_ONE
    assert braid_word_fixes(cycle, [1, 2, 1, 2])


def test_braid_image_rejects_bad_slots() -> None:
    cycle = encode_cycle(1, 1)
    with pytest.raises(DomainError):
        braid_image(cycle, 0)
    with pytest.raises(WeightMismatchError):
        braid_image(cycle, 2)


def test_eigenvalue_of_rejects_non_eigenvectors() -> None:
    vector = encode_cycle(1, 1).vector
    single = vector.with_terms(vector.terms[:1])
    with pytest.raises(NotEigenvectorError) as info:
        eigenvalue_of(single, vector)
    assert not info.value.residual.is_zero
    with pytest.raises(NotEigenvectorError):
        eigenvalue_of(vector, vector.with_terms(()))


def test_chain_vertex_terms() -> None:
    lam = weight_from_pairings([1], 1)
    assert chain_pairings(lam, 2) == [1]
    vertex = encode_chain_vertex(lam, 2)
    assert vertex.as_mapping() == {
        ((1,), ()): q_power(-QUARTER, -1),
        ((), (1,)): q_power(QUARTER),
    }


@pytest.mark.parametrize(
    ("pairings", "n", "s"),
    [
        ([1], 1, 2),
        ([2], 1, 2),
        ([3, 1], 2, 2),
        ([1, 1], 2, 3),
        ([2, 1], 2, 3),
        pytest.param([1, 1, 1], 3, 4, marks=pytest.mark.slow),
    ],
)
def test_chain_vertex_is_singular(pairings: list[int], n: int, s: int) -> None:
    assert chain_vertex_singular_check(weight_from_pairings(pairings, n), s)


def test_chain_vertex_term_counts() -> None:
    assert len(encode_chain_vertex(weight_from_pairings([1, 1], 2), 3).terms) == 3
    assert len(encode_chain_vertex(weight_from_pairings([1, 1, 1], 3), 4).terms) == 4


def test_chain_pairings_errors() -> None:
    lam = weight_from_pairings([1, 0], 2)
    with pytest.raises(DiagramError):
        chain_pairings(lam, 3)
    with pytest.raises(DiagramError):
        chain_pairings(lam, 4)
    with pytest.raises(DiagramError):
        chain_pairings(weight_from_pairings([Fraction(1, 2)], 1), 2)


def test_decomposition_and_path_count() -> None:
    _, lambda_zero, _ = cycle_weights(1)
    rd = RootData(1)
    assert decomposition_dims(lambda_zero, 1) == [
        lambda_zero + rd.vector_weight(1),
        lambda_zero + rd.vector_weight(2),
    ]
    assert singular_path_count(1) == 2
    assert singular_path_count(2) == 6


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_singular_paths_are_permutations(n: int) -> None:
    assert singular_path_count(n) == math.factorial(n + 1)
