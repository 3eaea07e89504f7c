"""Diagrams, permutations and the quantum-group encoding of the cycle Δ."""
from __future__ import annotations

from collections.abc import Iterator, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Any, Literal, TypeAlias

from attrs import evolve, field, frozen

from zonalcycle.braiding import (
    BraidOperator,
    Convention,
    Generator,
    TensorVector,
    apply_PR,
    build_R,
    coproduct_act,
    inversions,
    string_word,
    tensor_dual_image,
    tensor_is_zero_in_L,
    tensor_to_module,
)
from zonalcycle.exactq import (
    ONE,
    ZERO,
    QScalar,
    RationalLike,
    Scalar,
    q_number,
    q_power,
)
from zonalcycle.exception import (
    DiagramError,
    DomainError,
    NotEigenvectorError,
    WeightMismatchError,
)
from zonalcycle.repcore import ModuleVector, RootData, Weight

Point: TypeAlias = tuple[int, int]
Form: TypeAlias = Literal[1, 2]
ArrowDirection: TypeAlias = Literal["left", "right"]

DEFAULT_K = Fraction(1, 2)


@frozen
class Diagram:
    """
    Marked points i_1..i_n, one per row; row j holds the points (1, j)..(j, j) and
    every point above the last row carries an arrow into the next row.
    """

    marked: tuple[int, ...] = field(converter=tuple)

    @marked.validator
    def _check_marked(self, _: Any, value: tuple[int, ...]) -> None:
        if not value:
            raise DiagramError("a diagram needs at least one row")
        for j, i in enumerate(value, start=1):
            if not 1 <= i <= j:
                raise DiagramError(f"marked point {i} outside 1..{j} in row {j}")

    @property
    def n(self) -> int:
        return len(self.marked)

    def points(self) -> Iterator[Point]:
        for j in range(1, self.n + 1):
            for i in range(1, j + 1):
                yield (i, j)


def arrow_target(d: Diagram, point: Point) -> tuple[Point, ArrowDirection]:
    """(i, j+1) by a left arrow if i < i_{j+1}, else (i+1, j+1) by a right arrow."""
    i, j = point
    if not (1 <= i <= j < d.n):
        raise DiagramError(f"point {point} has no arrow in a diagram with {d.n} rows")
    if i < d.marked[j]:
        return (i, j + 1), "left"
    return (i + 1, j + 1), "right"


@frozen
class Permutation:
    images: tuple[int, ...] = field(converter=tuple)

    @images.validator
    def _check_bijective(self, _: Any, value: tuple[int, ...]) -> None:
        if sorted(value) != list(range(1, len(value) + 1)):
            raise ValueError(f"{value} is not a permutation of 1..{len(value)}")

    def __len__(self) -> int:
        return len(self.images)


def diagram_to_permutation(d: Diagram) -> Permutation:
    """w(i) is the size of the connected component of the point (i, n)."""
    # each component is a chain from a marked point down to the last row
    size = {(i, d.n): 1 for i in range(1, d.n + 1)}
    chain_end: dict[Point, Point] = {}
    for j in range(d.n, 0, -1):
        for i in range(1, j + 1):
            point = (i, j)
            if j == d.n:
                chain_end[point] = point
                continue
            target, _ = arrow_target(d, point)
            end = chain_end[target]
            chain_end[point] = end
            size[end] += 1
    images = tuple(size[(i, d.n)] for i in range(1, d.n + 1))
    try:
        return Permutation(images)
    except ValueError as error:
        raise AssertionError(f"diagram {d.marked} produced {images}") from error


def diagram_length(d: Diagram) -> int:
    """Σ_j (i_j − 1), the number of left arrows."""
    return sum(i - 1 for i in d.marked)


def left_arrow_count(d: Diagram) -> int:
    return sum(
        1
        for point in d.points()
        if point[1] < d.n and arrow_target(d, point)[1] == "left"
    )


def coxeter_length(w: Permutation) -> int:
    return inversions(w.images)


def enumerate_diagrams(n: int) -> Iterator[Diagram]:
    """All n! diagrams with n rows, by lexicographic order of marked points."""
    if n < 1:
        raise DiagramError(f"diagrams need n ≥ 1, got {n}")
    for marked in product(*(range(1, j + 1) for j in range(1, n + 1))):
        yield Diagram(marked)


def diagram_coefficient(d: Diagram) -> QScalar:
    """Product over arrows of q^{1/4} (right) and −q^{−1/4} (left)."""
    coefficient = ONE
    for point in d.points():
        if point[1] == d.n:
            continue
        _, direction = arrow_target(d, point)
        if direction == "right":
            coefficient = coefficient * q_power(Fraction(1, 4))
        else:
            coefficient = coefficient * q_power(Fraction(-1, 4), -1)
    return coefficient


@frozen(kw_only=True)
class CycleVector:
    """
    The encoded cycle. For form 2, `vector` is the numerator: the cycle is `vector`
    divided by (q^{1/2} − q^{−1/2})^{denominator_power}.
    """

    n: int
    form: Form
    vector: TensorVector
    denominator_power: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "form": self.form,
            "denominator_power": self.denominator_power,
            "vector": self.vector.to_json(),
        }


def cycle_weights(
    n: int, lam: Weight | None = None, k: RationalLike = DEFAULT_K
) -> tuple[RootData, Weight, Weight]:
    """Root data, Λ(0) = κλ − δ (generic λ by default) and Λ = g_1 − g_0."""
    root_data = RootData(n)
    lam = root_data.generic_lambda() if lam is None else lam
    return root_data, root_data.lambda_zero(lam, k), root_data.string_weight()


def _cycle_vector(
    n: int,
    form: Form,
    terms: Sequence[tuple[tuple[int, ...], Scalar]],
    lam: Weight | None,
    k: RationalLike,
) -> CycleVector:
    if form not in (1, 2):
        raise ValueError(f"form must be 1 or 2, got {form}")
    root_data, lambda_zero, string = cycle_weights(n, lam, k)
    dual = form == 1
    factors = [ModuleVector.highest(root_data, lambda_zero, dual=dual)] + [
        ModuleVector.highest(root_data, string, dual=dual) for _ in range(n + 1)
    ]
    skeleton = TensorVector.tensor(*factors)
    vector = skeleton.with_terms(
        (((),) + tuple(string_word(a - 1) for a in images), c) for images, c in terms
    )
    return CycleVector(
        n=n,
        form=form,
        vector=vector,
        denominator_power=0 if dual else n * (n + 1) // 2,
    )


def encode_cycle(
    n: int, form: Form = 1, lam: Weight | None = None, k: RationalLike = DEFAULT_K
) -> CycleVector:
    """
    Σ_{w ∈ S_{n+1}} (−1)^{l(w)} q^{(N − 2l(w))/4} v_0* ⊗ (f_{w(1)−1}⋯f_1v_1)* ⊗ … with
    N = n(n+1)/2; form 2 carries the same sum on module vectors over
    (q^{1/2} − q^{−1/2})^N.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    top = n * (n + 1) // 2
    terms = []
    for w in permutations(range(1, n + 2)):
        length = inversions(w)
        terms.append((w, q_power(Fraction(top - 2 * length, 4), (-1) ** length)))
    return _cycle_vector(n, form, terms, lam, k)


def encode_cycle_from_diagrams(
    n: int, lam: Weight | None = None, k: RationalLike = DEFAULT_K
) -> CycleVector:
    """Form 1 assembled from the diagrams with n + 1 rows and their arrow weights."""
    terms = [
        (diagram_to_permutation(d).images, diagram_coefficient(d))
        for d in enumerate_diagrams(n + 1)
    ]
    return _cycle_vector(n, 1, terms, lam, k)


def form_duality_holds(n: int) -> bool:
    """S ⊗ … ⊗ S of the form-2 numerator equals (q^{1/2} − q^{−1/2})^N · form 1."""
    first = encode_cycle(n, 1)
    second = encode_cycle(n, 2)
    scale = q_number(1) ** second.denominator_power
    return tensor_dual_image(second.vector) == first.vector.scaled(scale)


def _module_vector(v: TensorVector) -> TensorVector:
    return tensor_to_module(v) if v.is_dual else v


def singular_residuals(
    v: CycleVector | TensorVector, indices: Sequence[int] | None = None
) -> dict[int, TensorVector]:
    """e_i acting on the vector (through S^{−1} for dual factors), per index i."""
    vector = v.vector if isinstance(v, CycleVector) else v
    module = _module_vector(vector)
    chosen = vector.root_data.indices if indices is None else indices
    return {i: coproduct_act(Generator("e", i), module) for i in chosen}


def singular_check(v: CycleVector | TensorVector) -> bool:
    """True iff every e_i, i = 0..n, kills the vector up to the Gram kernels."""
    return all(tensor_is_zero_in_L(r) for r in singular_residuals(v).values())


@lru_cache(maxsize=None)
def braid_operator_for(
    root_data: RootData, string: Weight, convention: Convention = "raise-first"
) -> BraidOperator:
    return build_R(root_data, string, string, convention=convention)


def braid_image(
    v: CycleVector, slot: int, R: BraidOperator | None = None
) -> TensorVector:
    if slot < 1:
        raise DomainError("braiding a factor with the Λ(0) factor is forbidden")
    if slot + 1 >= len(v.vector.factors):
        raise WeightMismatchError(f"slot {slot} has no right neighbour")
    if R is None:
        root_data = v.vector.root_data
        R = braid_operator_for(root_data, root_data.string_weight())
    return apply_PR(R, slot, v.vector)


def eigenvalue_of(image: TensorVector, vector: TensorVector) -> Scalar:
    """The scalar c with image = c·vector; NotEigenvectorError otherwise."""
    if vector.is_zero:
        raise NotEigenvectorError("the zero vector has no eigenvalue", image)
    words, coefficient = vector.terms[0]
    ratio = image.as_mapping().get(words, ZERO) / coefficient
    residual = image.with_terms(
        image.terms, factors=vector.factors
    ) - vector.scaled(ratio)
    if not residual.is_zero:
        raise NotEigenvectorError(
            f"vector is not an eigenvector; {len(residual.terms)} residual terms",
            residual,
        )
    return ratio


def braid_eigen_check(
    v: CycleVector, slot: int, R: BraidOperator | None = None
) -> Scalar:
    """Eigenvalue of PR on the factors (slot, slot + 1); −1 on the cycle."""
    return eigenvalue_of(braid_image(v, slot, R), v.vector)


def braid_word_fixes(
    v: CycleVector, slots: Sequence[int], R: BraidOperator | None = None
) -> bool:
    """Apply PR at each slot in turn and compare the result with the start."""
    current = v
    for slot in slots:
        current = evolve(current, vector=braid_image(current, slot, R))
    return current.vector.with_terms(current.vector.terms, v.vector.factors) == v.vector


def chain_pairings(lam: Weight, s: int) -> list[int]:
    """ℓ_i = (λ, α_i) for i = 1..s−1, checked to be admissible."""
    n = len(lam.coords) - 2
    if not 2 <= s <= n + 1:
        raise DiagramError(f"s must lie in 2..{n + 1}, got {s}")
    root_data = RootData(n)
    pairings = [root_data.pairing(lam, i) for i in range(1, s)]
    if any(p.denominator != 1 or p < 0 for p in pairings):
        raise DiagramError(f"pairings {pairings} are not nonnegative integers")
    if pairings[-1] < 1:
        raise DiagramError(f"no box can be added to row {s} of this diagram")
    return [int(p) for p in pairings]


def encode_chain_vertex(lam: Weight, s: int) -> TensorVector:
    """
    The singular vector of weight λ + h_s in L(λ)* ⊗ L(η_1)*:
    a term (f_1⋯f_{s−1}v_0)* ⊗ v_1*, a term v_0* ⊗ (f_{s−1}⋯f_1v_1)*, and for
    p = 1..s−2 the terms (f_{p+1}⋯f_{s−1}v_0)* ⊗ (f_p⋯f_1v_1)*.
    """
    ell = chain_pairings(lam, s)
    root_data = RootData(len(lam.coords) - 2)

    def tail(start: int) -> Fraction:
        # Σ_{i=start}^{s−1} ℓ_i
        return Fraction(sum(ell[start - 1 :]))

    terms: list[tuple[tuple[tuple[int, ...], ...], Scalar]] = [
        (
            (tuple(range(1, s)), ()),
            q_power(-Fraction(s - 2, 4) - tail(1) / 4, (-1) ** (s - 1)),
        ),
        (((), string_word(s - 1)), q_power(Fraction(s - 1, 4))),
    ]
    for p in range(1, s - 1):
        exponent = -Fraction(s - p - 2, 4) + Fraction(p, 4) - tail(p + 1) / 4
        terms.append(
            (
                (tuple(range(p + 1, s)), string_word(p)),
                q_power(exponent, (-1) ** (s - p - 1)),
            )
        )
    skeleton = TensorVector.tensor(
        ModuleVector.highest(root_data, lam, dual=True),
        ModuleVector.highest(root_data, root_data.string_weight(), dual=True),
    )
    return skeleton.with_terms(terms)


def chain_vertex_singular_check(lam: Weight, s: int) -> bool:
    return singular_check(encode_chain_vertex(lam, s))


def decomposition_dims(lambda_zero: Weight, n: int) -> list[Weight]:
    """Highest weights Λ0 + h_1, …, Λ0 + h_{n+1} of L(Λ0) ⊗ L(η_1)."""
    root_data = RootData(n)
    return [lambda_zero + root_data.vector_weight(j) for j in range(1, n + 2)]


def singular_path_count(n: int) -> int:
    """
    Number of ways n + 1 successive vector-representation steps return to the
    starting weight: sequences of h-weights summing to zero.
    """
    root_data = RootData(n)
    weights = [root_data.vector_weight(j) for j in range(1, n + 2)]
    zero = root_data.zero_weight()
    count = 0
    for path in product(weights, repeat=n + 1):
        total = zero
        for step in path:
            total = total + step
        if total == zero:
            count += 1
    return count
