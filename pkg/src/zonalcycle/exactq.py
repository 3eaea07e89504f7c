"""
Exact arithmetic for finite sums of rational powers of q, and a fraction field over
them for exact linear algebra.
"""
from __future__ import annotations

import cmath
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from math import lcm
from typing import Any, TypeAlias, Union

import numpy as np
from attrs import field, frozen

from zonalcycle.exception import (
    ExactArithmeticError,
    InconsistentSystemError,
    SingularBlockError,
)

RationalLike: TypeAlias = Union[int, Fraction]
Term: TypeAlias = tuple[Fraction, Fraction]


def _canonical_terms(items: Iterable[Term]) -> tuple[Term, ...]:
    acc: dict[Fraction, Fraction] = {}
    for exponent, coefficient in items:
        exponent = Fraction(exponent)
        acc[exponent] = acc.get(exponent, Fraction(0)) + Fraction(coefficient)
    return tuple(sorted((e, c) for e, c in acc.items() if c != 0))


def _format_exponent(exponent: Fraction) -> str:
    if exponent == 1:
        return "q"
    if exponent.denominator == 1:
        return f"q^{exponent.numerator}"
    return f"q^({exponent})"


@frozen(eq=False)
class QScalar:
    """
    A finite sum of terms c·q^e with rational coefficients c and rational exponents e.

    The terms are kept sorted by exponent with no zero coefficients, so equality is
    structural. Plain ints and Fractions compare equal to the constant QScalar.
    """

    terms: tuple[Term, ...] = field(default=(), converter=_canonical_terms)

    @classmethod
    def constant(cls, value: RationalLike) -> QScalar:
        return cls(((Fraction(0), Fraction(value)),))

    @classmethod
    def q_power(cls, exponent: RationalLike, coefficient: RationalLike = 1) -> QScalar:
        return cls(((Fraction(exponent), Fraction(coefficient)),))

    @classmethod
    def from_mapping(cls, mapping: Mapping[RationalLike, RationalLike]) -> QScalar:
        return cls((Fraction(e), Fraction(c)) for e, c in mapping.items())

    @classmethod
    def coerce(cls, value: object) -> QScalar | None:
        if isinstance(value, QScalar):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls.constant(value)
        return None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_constant(self) -> bool:
        return self.is_zero or (self.is_monomial and self.terms[0][0] == 0)

    def as_mapping(self) -> dict[Fraction, Fraction]:
        return dict(self.terms)

    def coefficient(self, exponent: RationalLike) -> Fraction:
        return self.as_mapping().get(Fraction(exponent), Fraction(0))

    def min_exponent(self) -> Fraction:
        if self.is_zero:
            raise ExactArithmeticError("the zero scalar has no exponents")
        return self.terms[0][0]

    def max_exponent(self) -> Fraction:
        if self.is_zero:
            raise ExactArithmeticError("the zero scalar has no exponents")
        return self.terms[-1][0]

    def __add__(self, other: object) -> QScalar:
        rhs = QScalar.coerce(other)
        if rhs is None:
            return NotImplemented
        return QScalar(self.terms + rhs.terms)

    __radd__ = __add__

    def __neg__(self) -> QScalar:
        return QScalar((e, -c) for e, c in self.terms)

    def __sub__(self, other: object) -> QScalar:
        rhs = QScalar.coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> QScalar:
        lhs = QScalar.coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> QScalar:
        rhs = QScalar.coerce(other)
        if rhs is None:
            return NotImplemented
        return QScalar(
            (e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in rhs.terms
        )

    __rmul__ = __mul__

    def __pow__(self, power: int) -> QScalar:
        if power < 0:
            if not self.is_monomial:
                raise ExactArithmeticError(
                    f"negative power of a non-monomial scalar: {self}"
                )
            ((exponent, coefficient),) = self.terms
            return QScalar.q_power(exponent * power, coefficient**power)
        result = ONE
        for _ in range(power):
            result = result * self
        return result

    def __truediv__(self, other: object) -> QScalar | QFraction:
        if isinstance(other, QFraction):
            return QFraction.of(self) / other
        rhs = QScalar.coerce(other)
        if rhs is None:
            return NotImplemented
        if rhs.is_zero:
            raise ExactArithmeticError(f"division of {self} by zero")
        if rhs.is_monomial:
            return self * rhs**-1
        return QFraction.of(self, rhs)

    def __rtruediv__(self, other: object) -> QScalar | QFraction:
        lhs = QScalar.coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs / self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QFraction):
            return NotImplemented
        rhs = QScalar.coerce(other)
        if rhs is None:
            return NotImplemented
        return self.terms == rhs.terms

    def __hash__(self) -> int:
        if self.is_constant:
            return hash(self.terms[0][1] if self.terms else Fraction(0))
        return hash(self.terms)

    def __bool__(self) -> bool:
        return not self.is_zero

    def evaluate(self, q0: complex) -> complex:
        """Numeric value at q = q0, principal branch for fractional powers."""
        if q0 == 0:
            raise ExactArithmeticError("cannot evaluate at q = 0")
        return self.evaluate_log(cmath.log(q0))

    def evaluate_log(self, log_q: complex) -> complex:
        """Numeric value with q^e read as exp(e·log_q) for a chosen logarithm of q."""
        return sum(
            (float(c) * cmath.exp(float(e) * log_q) for e, c in self.terms),
            start=0j,
        )

    def to_json(self) -> list[list[int]]:
        return [
            [e.numerator, e.denominator, c.numerator, c.denominator]
            for e, c in self.terms
        ]

    @classmethod
    def from_json(cls, obj: Sequence[Sequence[int]]) -> QScalar:
        return cls(
            (Fraction(en, ed), Fraction(cn, cd)) for en, ed, cn, cd in obj
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces: list[str] = []
        for exponent, coefficient in reversed(self.terms):
            sign = "-" if coefficient < 0 else "+"
            magnitude = abs(coefficient)
            if exponent == 0:
                body = str(magnitude)
            elif magnitude == 1:
                body = _format_exponent(exponent)
            else:
                body = f"{magnitude}*{_format_exponent(exponent)}"
            pieces.append(f"{sign} {body}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


ZERO = QScalar()
ONE = QScalar.constant(1)


def q_add(a: QScalar, b: QScalar) -> QScalar:
    return a + b


def q_mul(a: QScalar, b: QScalar) -> QScalar:
    return a * b


def q_eval(a: QScalar, q0: complex) -> complex:
    return a.evaluate(q0)


def q_power(exponent: RationalLike, coefficient: RationalLike = 1) -> QScalar:
    return QScalar.q_power(exponent, coefficient)


def q_number(m: RationalLike) -> QScalar:
    """q^{m/2} − q^{−m/2}, the value of K − K^{−1} on a weight with pairing m."""
    half = Fraction(m) / 2
    return QScalar.q_power(half) - QScalar.q_power(-half)


# Polynomials in x = q^{1/scale}, stored as dense coefficient lists, lowest degree
# first, together with the exponent (in units of 1/scale) of the lowest term.


def _exponent_scale(*scalars: QScalar) -> int:
    return lcm(1, *(e.denominator for s in scalars for e, _ in s.terms))


def _to_poly(scalar: QScalar, scale: int) -> tuple[int, list[Fraction]]:
    degrees = [(int(e * scale), c) for e, c in scalar.terms]
    low = degrees[0][0]
    coefficients = [Fraction(0)] * (degrees[-1][0] - low + 1)
    for degree, coefficient in degrees:
        coefficients[degree - low] = coefficient
    return low, coefficients


def _from_poly(low: int, coefficients: Sequence[Fraction], scale: int) -> QScalar:
    return QScalar(
        (Fraction(low + i, scale), c) for i, c in enumerate(coefficients) if c != 0
    )


def _poly_trim(poly: list[Fraction]) -> list[Fraction]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_divmod(
    numerator: Sequence[Fraction], denominator: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    remainder = list(numerator)
    quotient = [Fraction(0)] * max(len(numerator) - len(denominator) + 1, 1)
    lead = denominator[-1]
    while len(_poly_trim(remainder)) >= len(denominator):
        shift = len(remainder) - len(denominator)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(denominator):
            remainder[shift + i] -= factor * c
        remainder[-1] = Fraction(0)
    return _poly_trim(quotient), remainder


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    return [c / a[-1] for c in a]


@frozen(eq=False)
class QFraction:
    """
    A quotient num/den of QScalars, always stored reduced with a monic denominator
    whose lowest exponent is 0. Build instances with `QFraction.of`.
    """

    num: QScalar
    den: QScalar = field(default=ONE)

    @den.validator
    def _check_den(self, _: Any, value: QScalar) -> None:
        if value.is_zero:
            raise ExactArithmeticError(f"zero denominator under {self.num}")

    @classmethod
    def of(
        cls, num: QScalar | RationalLike, den: QScalar | RationalLike = 1
    ) -> QFraction:
        top = QScalar.coerce(num)
        bottom = QScalar.coerce(den)
        if top is None or bottom is None:
            raise TypeError(f"cannot build a QFraction from {num!r} / {den!r}")
        if bottom.is_zero:
            raise ExactArithmeticError(f"zero denominator under {top}")
        if top.is_zero:
            return cls(ZERO, ONE)

        scale = _exponent_scale(top, bottom)
        low_top, poly_top = _to_poly(top, scale)
        low_bottom, poly_bottom = _to_poly(bottom, scale)
        if len(poly_bottom) > 1:
            common = _poly_gcd(poly_top, poly_bottom)
            if len(common) > 1:
                poly_top = _poly_divmod(poly_top, common)[0]
                poly_bottom = _poly_divmod(poly_bottom, common)[0]
        lead = poly_bottom[-1]
        return cls(
            _from_poly(low_top - low_bottom, [c / lead for c in poly_top], scale),
            _from_poly(0, [c / lead for c in poly_bottom], scale),
        )

    @classmethod
    def coerce(cls, value: object) -> QFraction | None:
        if isinstance(value, QFraction):
            return value
        scalar = QScalar.coerce(value)
        return None if scalar is None else cls.of(scalar)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def to_qscalar(self) -> QScalar:
        if self.den != ONE:
            raise ExactArithmeticError(f"{self} is not a finite sum of powers of q")
        return self.num

    def __add__(self, other: object) -> QFraction:
        rhs = QFraction.coerce(other)
        if rhs is None:
            return NotImplemented
        return QFraction.of(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)

    __radd__ = __add__

    def __neg__(self) -> QFraction:
        return QFraction(-self.num, self.den)

    def __sub__(self, other: object) -> QFraction:
        rhs = QFraction.coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> QFraction:
        lhs = QFraction.coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> QFraction:
        rhs = QFraction.coerce(other)
        if rhs is None:
            return NotImplemented
        return QFraction.of(self.num * rhs.num, self.den * rhs.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QFraction:
        rhs = QFraction.coerce(other)
        if rhs is None:
            return NotImplemented
        if rhs.is_zero:
            raise ExactArithmeticError(f"division of {self} by zero")
        return QFraction.of(self.num * rhs.den, self.den * rhs.num)

    def __rtruediv__(self, other: object) -> QFraction:
        lhs = QFraction.coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs / self

    def __eq__(self, other: object) -> bool:
        rhs = QFraction.coerce(other)
        if rhs is None:
            return NotImplemented
        return self.num * rhs.den == rhs.num * self.den

    def __hash__(self) -> int:
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero

    def evaluate(self, q0: complex) -> complex:
        return self.num.evaluate(q0) / self.den.evaluate(q0)

    def to_json(self) -> dict[str, list[list[int]]]:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: Mapping[str, Sequence[Sequence[int]]]) -> QFraction:
        return cls.of(QScalar.from_json(obj["num"]), QScalar.from_json(obj["den"]))

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


FRACTION_ZERO = QFraction.of(0)
FRACTION_ONE = QFraction.of(1)


def as_fraction_matrix(rows: Iterable[Iterable[object]]) -> np.ndarray:
    """Object array of QFractions from nested rows of scalars."""
    matrix = [[_as_fraction(x) for x in row] for row in rows]
    array = np.empty((len(matrix), len(matrix[0]) if matrix else 0), dtype=object)
    for i, row in enumerate(matrix):
        for j, entry in enumerate(row):
            array[i, j] = entry
    return array


def as_fraction_vector(values: Iterable[object]) -> np.ndarray:
    entries = [_as_fraction(x) for x in values]
    array = np.empty(len(entries), dtype=object)
    for i, entry in enumerate(entries):
        array[i] = entry
    return array


def _as_fraction(value: object) -> QFraction:
    fraction = QFraction.coerce(value)
    if fraction is None:
        raise TypeError(f"not an exact scalar: {value!r}")
    return fraction


def frac_matvec(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    result = np.empty(matrix.shape[0], dtype=object)
    for i in range(matrix.shape[0]):
        total = FRACTION_ZERO
        for j in range(matrix.shape[1]):
            if matrix[i, j] and vector[j]:
                total = total + matrix[i, j] * vector[j]
        result[i] = total
    return result


def frac_row_reduce(matrix: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over the fraction field, together with the pivot
    columns.
    """
    reduced = matrix.copy()
    rows, cols = reduced.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        for candidate in range(row, rows):
            if reduced[candidate, col]:
                break
        else:
            continue
        if candidate != row:
            reduced[[row, candidate], :] = reduced[[candidate, row], :]

        pivot = reduced[row, col]
        reduced[row, :] = [entry / pivot for entry in reduced[row, :]]
        for other in range(rows):
            factor = reduced[other, col]
            if other != row and factor:
                reduced[other, :] = [
                    a - factor * b if b else a
                    for a, b in zip(reduced[other, :], reduced[row, :])
                ]
        pivots.append(col)
        row += 1
    return reduced, pivots


def frac_rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return len(frac_row_reduce(matrix)[1])


def frac_solve_consistent(
    matrix: np.ndarray, rhs: np.ndarray, label: str = ""
) -> np.ndarray:
    """
    Unique exact solution of a possibly overdetermined system. Raises
    InconsistentSystemError when no solution exists and SingularBlockError when the
    solution is not unique.
    """
    rows, unknowns = matrix.shape
    augmented = np.empty((rows, unknowns + 1), dtype=object)
    augmented[:, :unknowns] = matrix
    augmented[:, unknowns] = rhs
    reduced, pivots = frac_row_reduce(augmented)
    if unknowns in pivots:
        raise InconsistentSystemError(label)
    if len(pivots) < unknowns:
        raise SingularBlockError(label)

    solution = reduced[:unknowns, unknowns].copy()
    if not all(a == b for a, b in zip(frac_matvec(matrix, solution), rhs)):
        raise ExactArithmeticError(f"back-substitution failed at weight block {label}")
    return solution


def frac_solve(matrix: np.ndarray, rhs: np.ndarray, label: str = "") -> np.ndarray:
    """Exact solution x of the square system A·x = b, verified by back-substitution."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ExactArithmeticError(
            f"frac_solve needs a square matrix, got {matrix.shape}"
        )
    try:
        return frac_solve_consistent(matrix, rhs, label)
    except InconsistentSystemError as error:
        # a square system without solution is singular
        raise SingularBlockError(label) from error


def frac_inverse(matrix: np.ndarray, label: str = "") -> np.ndarray:
    size = matrix.shape[0]
    identity = as_fraction_matrix(
        [[int(i == j) for j in range(size)] for i in range(size)]
    )
    inverse = np.empty((size, size), dtype=object)
    for col in range(size):
        inverse[:, col] = frac_solve(matrix, identity[:, col], label)
    return inverse


Scalar: TypeAlias = Union[QScalar, QFraction]


def simplify(value: Scalar) -> Scalar:
    """Collapse a QFraction with unit denominator back to a QScalar."""
    if isinstance(value, QFraction) and value.den == ONE:
        return value.num
    return value


def scalar_to_json(value: Scalar) -> Any:
    return simplify(value).to_json()


def frac_matmul(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Product of exact object matrices, skipping zero entries."""
    if left.shape[1] != right.shape[0]:
        raise ExactArithmeticError(f"shapes {left.shape} and {right.shape} mismatch")
    result = np.empty((left.shape[0], right.shape[1]), dtype=object)
    result.fill(FRACTION_ZERO)
    for i, j in zip(*np.nonzero(left)):
        a = left[i, j]
        for k in range(right.shape[1]):
            b = right[j, k]
            if b:
                result[i, k] = result[i, k] + a * b
    return result


def frac_det(matrix: np.ndarray) -> QFraction:
    """Exact determinant by elimination, tracking row swaps."""
    work = as_fraction_matrix(matrix.tolist())
    size = work.shape[0]
    determinant = FRACTION_ONE
    for col in range(size):
        for candidate in range(col, size):
            if work[candidate, col]:
                break
        else:
            return FRACTION_ZERO
        if candidate != col:
            work[[col, candidate], :] = work[[candidate, col], :]
            determinant = -determinant
        pivot = work[col, col]
        determinant = determinant * pivot
        for row in range(col + 1, size):
            factor = work[row, col] / pivot
            if factor:
                work[row, :] = [
                    a - factor * b if b else a
                    for a, b in zip(work[row, :], work[col, :])
                ]
    return determinant
