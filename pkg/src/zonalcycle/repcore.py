"""
Root data, weights, Verma modules on free f-word bases, and the contravariant form.

Irreducible quotients are never materialized: a vector is zero in L(Λ) iff it pairs
to zero with every word of its weight space.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import islice
from typing import Any, ClassVar, Literal, TypeAlias

import numpy as np
from attrs import define, field, frozen

from zonalcycle.exactq import (
    ONE,
    ZERO,
    QScalar,
    RationalLike,
    Scalar,
    as_fraction_matrix,
    as_fraction_vector,
    frac_inverse,
    frac_matvec,
    frac_rank,
    q_number,
    q_power,
    scalar_to_json,
    simplify,
)
from zonalcycle.exception import DualVectorError, WeightMismatchError

FWord: TypeAlias = tuple[int, ...]
"""Index sequence (i_1, …, i_m) standing for f_{i_1}⋯f_{i_m}·v."""

Drop: TypeAlias = tuple[int, ...]
"""Multiplicity of each simple root α_0..α_n in Λ − μ."""

SerreKind: TypeAlias = Literal["f", "e"]


def _as_coords(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@frozen
class Weight:
    """An exact rational vector over the orthonormal basis g_0..g_{n+1}."""

    coords: tuple[Fraction, ...] = field(converter=_as_coords)

    def _check(self, other: Weight) -> None:
        if len(self.coords) != len(other.coords):
            raise WeightMismatchError(f"weights of different rank: {self} vs {other}")

    def __add__(self, other: Weight) -> Weight:
        self._check(other)
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: Weight) -> Weight:
        self._check(other)
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> Weight:
        return Weight(-a for a in self.coords)

    def __mul__(self, scalar: RationalLike) -> Weight:
        return Weight(a * scalar for a in self.coords)

    __rmul__ = __mul__

    def inner(self, other: Weight) -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def to_json(self) -> list[str]:
        return [str(a) for a in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


@frozen
class RootData:
    """Type A_n realized in R^{n+2}: α_i = g_i − g_{i+1} for i = 0..n."""

    n: int = field()

    @n.validator
    def _check_n(self, _: Any, value: int) -> None:
        if value < 1:
            raise ValueError(f"rank must be positive, got {value}")

    @property
    def dimension(self) -> int:
        return self.n + 2

    @property
    def indices(self) -> range:
        return range(self.n + 1)

    def basis_vector(self, i: int) -> Weight:
        return Weight(int(r == i) for r in range(self.dimension))

    def simple_root(self, i: int) -> Weight:
        if i not in self.indices:
            raise IndexError(f"simple root index {i} outside 0..{self.n}")
        return self.basis_vector(i) - self.basis_vector(i + 1)

    def pairing(self, weight: Weight, i: int) -> Fraction:
        """(μ, α_i^∨); every root has length 2 so this is (μ, α_i)."""
        return weight.inner(self.simple_root(i))

    def cartan(self, i: int, j: int) -> Fraction:
        return self.simple_root(i).inner(self.simple_root(j))

    def root_combination(self, drop: Drop) -> Weight:
        total = self.zero_weight()
        for i, count in enumerate(drop):
            total = total + self.simple_root(i) * count
        return total

    def zero_weight(self) -> Weight:
        return Weight([0] * self.dimension)

    def zero_drop(self) -> Drop:
        return (0,) * (self.n + 1)

    def drop_of(self, word: FWord) -> Drop:
        counts = [0] * (self.n + 1)
        for i in word:
            counts[i] += 1
        return tuple(counts)

    # named weights

    def string_weight(self) -> Weight:
        """Λ = g_1 − g_0, carried by every braided factor."""
        return self.basis_vector(1) - self.basis_vector(0)

    def fundamental_weight(self, i: int) -> Weight:
        """η_i with (η_i, α_j) = δ_ij for j = 1..n, in the span of g_1..g_{n+1}."""
        if not 1 <= i <= self.n:
            raise IndexError(f"fundamental weight index {i} outside 1..{self.n}")
        share = Fraction(i, self.n + 1)
        return Weight(
            [0] + [int(r <= i) - share for r in range(1, self.n + 2)]
        )

    def vector_weight(self, j: int) -> Weight:
        """h_j = g_j − (g_1 + … + g_{n+1})/(n+1); h_1 + … + h_{n+1} = 0."""
        if not 1 <= j <= self.n + 1:
            raise IndexError(f"vector weight index {j} outside 1..{self.n + 1}")
        share = Fraction(1, self.n + 1)
        return Weight([0] + [int(r == j) - share for r in range(1, self.n + 2)])

    def delta(self) -> Weight:
        """Half the sum of the positive roots of the A_n spanned by α_1..α_n."""
        total = self.zero_weight()
        for i in range(1, self.n + 1):
            total = total + self.fundamental_weight(i)
        return total

    def rho(self, k: RationalLike) -> Weight:
        return self.delta() * Fraction(k)

    def partition_weight(self, parts: Sequence[int]) -> Weight:
        """Σ_i (λ_i − λ_{i+1}) η_i for a Young diagram with at most n+1 rows."""
        if len(parts) > self.n + 1:
            raise ValueError(
                f"partition {tuple(parts)} has more than {self.n + 1} rows"
            )
        padded = list(parts) + [0] * (self.n + 2 - len(parts))
        total = self.zero_weight()
        for i in range(1, self.n + 1):
            total = total + self.fundamental_weight(i) * (padded[i - 1] - padded[i])
        return total

    PRIMES: ClassVar[tuple[int, ...]] = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

    def generic_lambda(self) -> Weight:
        """3η_1 + 5η_2 + 7η_3 + …, off the resonance hyperplanes at small depth."""
        total = self.zero_weight()
        for i, prime in zip(range(1, self.n + 1), islice(self.PRIMES, self.n)):
            total = total + self.fundamental_weight(i) * prime
        return total

    def lambda_zero(self, lam: Weight, k: RationalLike) -> Weight:
        """Λ(0) = κλ − δ with κ = −1/k."""
        kappa = -1 / Fraction(k)
        return lam * kappa - self.delta()


def weight_of(word: FWord, highest_weight: Weight, root_data: RootData) -> Weight:
    weight = highest_weight
    for i in word:
        weight = weight - root_data.simple_root(i)
    return weight


def _canonical_word_terms(
    items: Mapping[FWord, Scalar] | Iterable[tuple[FWord, Scalar]]
) -> tuple[tuple[FWord, Scalar], ...]:
    pairs = items.items() if isinstance(items, Mapping) else items
    acc: dict[FWord, Scalar] = {}
    for word, coefficient in pairs:
        word = tuple(word)
        acc[word] = acc[word] + coefficient if word in acc else coefficient
    return tuple(
        sorted(
            ((w, simplify(c)) for w, c in acc.items() if not c.is_zero),
            key=lambda item: (len(item[0]), item[0]),
        )
    )


@frozen(kw_only=True)
class ModuleVector:
    """
    A finite combination of f-words in M(Λ), or of dual-basis functionals (w)* in
    M(Λ)* when `dual` is set.
    """

    root_data: RootData
    highest_weight: Weight
    dual: bool = False
    terms: tuple[tuple[FWord, Scalar], ...] = field(
        default=(), converter=_canonical_word_terms
    )

    @classmethod
    def highest(
        cls, root_data: RootData, highest_weight: Weight, dual: bool = False
    ) -> ModuleVector:
        return cls.word(root_data, highest_weight, (), dual=dual)

    @classmethod
    def word(
        cls,
        root_data: RootData,
        highest_weight: Weight,
        word: FWord,
        coefficient: Scalar = ONE,
        dual: bool = False,
    ) -> ModuleVector:
        return cls(
            root_data=root_data,
            highest_weight=highest_weight,
            dual=dual,
            terms=((tuple(word), coefficient),),
        )

    def with_terms(
        self, terms: Mapping[FWord, Scalar] | Iterable[tuple[FWord, Scalar]]
    ) -> ModuleVector:
        return ModuleVector(
            root_data=self.root_data,
            highest_weight=self.highest_weight,
            dual=self.dual,
            terms=terms,
        )

    def as_mapping(self) -> dict[FWord, Scalar]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check_compatible(self, other: ModuleVector) -> None:
        if self.dual != other.dual:
            raise DualVectorError("cannot combine a dual and a non-dual vector")
        if (self.root_data, self.highest_weight) != (
            other.root_data,
            other.highest_weight,
        ):
            raise WeightMismatchError(
                f"highest weights differ: {self.highest_weight} vs "
                f"{other.highest_weight}"
            )

    def __add__(self, other: ModuleVector) -> ModuleVector:
        self._check_compatible(other)
        return self.with_terms(self.terms + other.terms)

    def __neg__(self) -> ModuleVector:
        return self.with_terms((w, -c) for w, c in self.terms)

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        return self + (-other)

    def scaled(self, scalar: Scalar | int) -> ModuleVector:
        return self.with_terms((w, c * scalar) for w, c in self.terms)

    def __rmul__(self, scalar: Scalar | int) -> ModuleVector:
        return self.scaled(scalar)

    def by_drop(self) -> dict[Drop, dict[FWord, Scalar]]:
        grouped: dict[Drop, dict[FWord, Scalar]] = {}
        for word, coefficient in self.terms:
            grouped.setdefault(self.root_data.drop_of(word), {})[word] = coefficient
        return grouped

    def to_json(self) -> dict[str, Any]:
        return {
            "highest_weight": self.highest_weight.to_json(),
            "dual": self.dual,
            "terms": [[list(w), scalar_to_json(c)] for w, c in self.terms],
        }

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        star = "*" if self.dual else ""
        return " + ".join(
            f"({c})·{_word_label(w)}{star}" for w, c in self.terms
        )


def _word_label(word: FWord) -> str:
    return "".join(f"f{i}" for i in word) + "v"


def _require_module(x: ModuleVector, operation: str) -> None:
    if x.dual:
        raise DualVectorError(f"{operation} needs a module vector, got a dual one")


def act_f(i: int, x: ModuleVector) -> ModuleVector:
    _require_module(x, f"f_{i}")
    return x.with_terms(((i,) + w, c) for w, c in x.terms)


def k_half_eigenvalue(
    root_data: RootData, weight: Weight, i: int, half_power: int = 1
) -> QScalar:
    """K_i^{±1/2} acts on weight μ by q^{±(μ, α_i^∨)/4}."""
    return q_power(half_power * root_data.pairing(weight, i) / 4)


def act_K(i: int, half_power: int, x: ModuleVector) -> ModuleVector:
    if half_power not in (1, -1):
        raise ValueError(f"half_power must be ±1, got {half_power}")
    return x.with_terms(
        (
            w,
            c
            * k_half_eigenvalue(
                x.root_data,
                weight_of(w, x.highest_weight, x.root_data),
                i,
                half_power,
            ),
        )
        for w, c in x.terms
    )


@lru_cache(maxsize=None)
def _e_on_word(
    root_data: RootData, highest_weight: Weight, i: int, word: FWord
) -> tuple[tuple[FWord, QScalar], ...]:
    # e_i f_j = f_j e_i + δ_ij (K_i − K_i^{−1}), and e_i v = 0
    result: list[tuple[FWord, QScalar]] = []
    suffix_weight = highest_weight
    for position in reversed(range(len(word))):
        if word[position] == i:
            pairing = root_data.pairing(suffix_weight, i)
            result.append(
                (word[:position] + word[position + 1 :], q_number(pairing))
            )
        suffix_weight = suffix_weight - root_data.simple_root(word[position])
    return tuple((w, c) for w, c in result if not c.is_zero)


def act_e(i: int, x: ModuleVector) -> ModuleVector:
    _require_module(x, f"e_{i}")
    return x.with_terms(
        (word, c * coefficient)
        for w, c in x.terms
        for word, coefficient in _e_on_word(x.root_data, x.highest_weight, i, w)
    )


@lru_cache(maxsize=None)
def word_form(
    root_data: RootData, highest_weight: Weight, left: FWord, right: FWord
) -> QScalar:
    """S(f_left v, f_right v) by the recursion S(f_i x, y) = S(x, e_i y)."""
    if len(left) != len(right) or sorted(left) != sorted(right):
        return ZERO
    if not left:
        return ONE
    total = ZERO
    for word, coefficient in _e_on_word(root_data, highest_weight, left[0], right):
        total = total + coefficient * word_form(
            root_data, highest_weight, left[1:], word
        )
    return total


def contravariant_form(x: ModuleVector, y: ModuleVector) -> Scalar:
    _require_module(x, "the contravariant form")
    _require_module(y, "the contravariant form")
    if (x.root_data, x.highest_weight) != (y.root_data, y.highest_weight):
        raise WeightMismatchError(
            f"contravariant form across highest weights {x.highest_weight} and "
            f"{y.highest_weight}"
        )
    total: Scalar = ZERO
    for left, a in x.terms:
        for right, b in y.terms:
            value = word_form(x.root_data, x.highest_weight, left, right)
            if not value.is_zero:
                total = total + a * b * value
    return simplify(total)


def gram_matrix(
    root_data: RootData, highest_weight: Weight, mu: Weight, basis: Sequence[FWord]
) -> np.ndarray:
    """Matrix of S(w_a, w_b) over words that all have weight μ."""
    for word in basis:
        if weight_of(word, highest_weight, root_data) != mu:
            raise WeightMismatchError(f"word {word} does not have weight {mu}")
    matrix = np.empty((len(basis), len(basis)), dtype=object)
    for a, left in enumerate(basis):
        for b, right in enumerate(basis):
            matrix[a, b] = word_form(root_data, highest_weight, left, right)
    return matrix


def words_of_drop(drop: Drop) -> list[FWord]:
    """All index sequences with the given multiplicities, in lexicographic order."""
    words: list[FWord] = []

    def extend(prefix: FWord, remaining: list[int]) -> None:
        if not any(remaining):
            words.append(prefix)
            return
        for i, count in enumerate(remaining):
            if count:
                remaining[i] -= 1
                extend(prefix + (i,), remaining)
                remaining[i] += 1

    extend((), list(drop))
    return words


@define
class QuotientModule:
    """
    The irreducible quotient L(Λ) realized on f-words: per weight drop, a basis of
    words chosen greedily in lexicographic order, and the inverse Gram matrix on it.
    """

    root_data: RootData
    highest_weight: Weight
    _bases: dict[Drop, tuple[FWord, ...]] = field(factory=dict, init=False)
    _inverses: dict[Drop, np.ndarray] = field(factory=dict, init=False)

    def _gram(self, words: Sequence[FWord]) -> np.ndarray:
        return as_fraction_matrix(
            [
                [word_form(self.root_data, self.highest_weight, a, b) for b in words]
                for a in words
            ]
        )

    def basis(self, drop: Drop) -> tuple[FWord, ...]:
        if drop in self._bases:
            return self._bases[drop]
        if any(count < 0 for count in drop):
            return ()
        if not any(drop):
            self._bases[drop] = ((),)
            return ((),)

        candidates: set[FWord] = set()
        for i, count in enumerate(drop):
            if count:
                lower = drop[:i] + (count - 1,) + drop[i + 1 :]
                candidates.update((i,) + word for word in self.basis(lower))

        chosen: list[FWord] = []
        for candidate in sorted(candidates):
            if frac_rank(self._gram(chosen + [candidate])) > len(chosen):
                chosen.append(candidate)
        self._bases[drop] = tuple(chosen)
        return self._bases[drop]

    def dimension(self, drop: Drop) -> int:
        return len(self.basis(drop))

    def gram_inverse(self, drop: Drop) -> np.ndarray:
        if drop not in self._inverses:
            self._inverses[drop] = frac_inverse(
                self._gram(self.basis(drop)), label=str(drop)
            )
        return self._inverses[drop]

    def pairings(self, terms: Mapping[FWord, Scalar], drop: Drop) -> list[Scalar]:
        """(S(x, b))_b over the basis b of the weight space of `drop`."""
        values: list[Scalar] = []
        for basis_word in self.basis(drop):
            total: Scalar = ZERO
            for word, coefficient in terms.items():
                value = word_form(
                    self.root_data, self.highest_weight, word, basis_word
                )
                if not value.is_zero:
                    total = total + coefficient * value
            values.append(simplify(total))
        return values

    def dual_coordinates(self, x: ModuleVector) -> dict[FWord, Scalar]:
        _require_module(x, "dual_image")
        result: dict[FWord, Scalar] = {}
        for drop, terms in x.by_drop().items():
            for basis_word, value in zip(self.basis(drop), self.pairings(terms, drop)):
                result[basis_word] = value
        return result

    def to_module(self, phi: ModuleVector) -> ModuleVector:
        """Inverse of dual_image on L(Λ): the vector y with S(y, b) = φ(b)."""
        if not phi.dual:
            raise DualVectorError("to_module expects a dual vector")
        result: dict[FWord, Scalar] = {}
        for drop, terms in phi.by_drop().items():
            basis = self.basis(drop)
            unknown = set(terms) - set(basis)
            if unknown:
                raise DualVectorError(
                    f"dual words {sorted(unknown)} are not basis words of L at {drop}"
                )
            values = frac_matvec(
                self.gram_inverse(drop),
                as_fraction_vector(terms.get(b, ZERO) for b in basis),
            )
            for basis_word, value in zip(basis, values):
                result[basis_word] = value
        return ModuleVector(
            root_data=phi.root_data,
            highest_weight=phi.highest_weight,
            dual=False,
            terms=result,
        )

    def is_zero(self, x: ModuleVector) -> bool:
        if x.dual:
            return x.is_zero
        return all(
            value.is_zero
            for drop, terms in x.by_drop().items()
            for value in self.pairings(terms, drop)
        )


@lru_cache(maxsize=None)
def quotient_module(root_data: RootData, highest_weight: Weight) -> QuotientModule:
    return QuotientModule(root_data, highest_weight)


def dual_image(x: ModuleVector) -> ModuleVector:
    """S(x) ∈ M(Λ)*: the coefficient of (b)* is S(x, b)."""
    module = quotient_module(x.root_data, x.highest_weight)
    return ModuleVector(
        root_data=x.root_data,
        highest_weight=x.highest_weight,
        dual=True,
        terms=module.dual_coordinates(x),
    )


def equal_in_L(x: ModuleVector, y: ModuleVector) -> bool:
    difference = x - y
    return quotient_module(x.root_data, x.highest_weight).is_zero(difference)


def q_two() -> QScalar:
    return q_power(Fraction(1, 2)) + q_power(Fraction(-1, 2))


def apply_serre(
    i: int, j: int, x: ModuleVector, kind: SerreKind = "f"
) -> ModuleVector:
    """
    g_i²g_j − (q^{1/2} + q^{−1/2}) g_ig_jg_i + g_jg_i² applied to x, with g = f or
    g = e; zero in L(Λ) whenever α_i and α_j are adjacent.
    """
    act = act_f if kind == "f" else act_e

    def chain(indices: Sequence[int]) -> ModuleVector:
        result = x
        for index in reversed(indices):
            result = act(index, result)
        return result

    return chain((i, i, j)) - chain((i, j, i)).scaled(q_two()) + chain((j, i, i))


def iter_weight_drops(root_data: RootData, height: int) -> Iterator[Drop]:
    """All drops in α_1..α_n of total height ≤ `height`, by increasing height."""

    def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for level in range(height + 1):
        for composition in compositions(level, root_data.n):
            yield (0,) + composition

