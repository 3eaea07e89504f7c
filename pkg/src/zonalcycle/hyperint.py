"""
The integral of the form ω_Δ over the cycle Δ, its Gelfand–Naimark coordinates τ, and
the Gamma-function closed forms the integrals are compared against.

Points of Δ are stored row by row: row j holds t_{1j} < … < t_{jj}, and the
coordinates z_1 < … < z_{n+1} act as an extra row n + 1, so every constraint of Δ is
the interlacing t_{i,j+1} ≤ t_{ij} ≤ t_{i+1,j+1}.
"""
from __future__ import annotations

import cmath
import math
import time
from collections.abc import Callable, Sequence
from fractions import Fraction
from itertools import combinations
from typing import Any, ClassVar, Literal, TypeAlias

import numpy as np
from attrs import evolve, field, frozen
from scipy import integrate, special
from scipy.stats import qmc

from zonalcycle.console import CONSOLE
from zonalcycle.exactq import RationalLike
from zonalcycle.exception import (
    DomainError,
    GammaPoleError,
    GuardError,
    QuadratureNonConvergence,
)
from zonalcycle.repcore import RootData, Weight

Scheme: TypeAlias = Literal["gauss-jacobi-tensor", "monte-carlo"]
Row: TypeAlias = tuple[float, ...]


def _floats(values: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@frozen(kw_only=True)
class FormSpec:
    """Parameters of ω_Δ: the rank n, the exponent k, λ_1..λ_{n+1} and z_1..z_{n+1}."""

    n: int = field()
    k: float = field(converter=float)
    lambdas: tuple[float, ...] = field(converter=_floats)
    z: tuple[float, ...] = field(converter=_floats)

    HOMOGENEITY_TOLERANCE: ClassVar[float] = 1e-12

    @n.validator
    def _check_n(self, _: Any, value: int) -> None:
        if value < 1:
            raise DomainError(f"n must be positive, got {value}")

    @k.validator
    def _check_k(self, _: Any, value: float) -> None:
        if not value > 0:
            raise DomainError(f"k must be positive, got {value}")

    @lambdas.validator
    def _check_lambdas(self, _: Any, value: tuple[float, ...]) -> None:
        if len(value) != self.n + 1:
            raise DomainError(f"expected {self.n + 1} values of λ, got {len(value)}")
        scale = max(1.0, *(abs(v) for v in value))
        if abs(math.fsum(value)) > self.HOMOGENEITY_TOLERANCE * scale:
            raise DomainError(f"λ must sum to zero, got {math.fsum(value)}")

    @z.validator
    def _check_z(self, _: Any, value: tuple[float, ...]) -> None:
        if len(value) != self.n + 1:
            raise DomainError(f"expected {self.n + 1} values of z, got {len(value)}")
        if not 0 < value[0] or any(a >= b for a, b in zip(value, value[1:])):
            raise DomainError(f"z must satisfy 0 < z_1 < … < z_{self.n + 1}: {value}")

    @classmethod
    def affine_killed(
        cls, n: int, k: float, z: Sequence[float] | None = None
    ) -> FormSpec:
        """λ_i = k(i − 1 − n/2): every t- and z-power of the form vanishes."""
        return cls(
            n=n,
            k=k,
            lambdas=[k * (i - 1 - n / 2) for i in range(1, n + 2)],
            z=range(1, n + 2) if z is None else z,
        )

    @property
    def dimension(self) -> int:
        return self.n * (self.n + 1) // 2

    @property
    def z_exponent(self) -> float:
        return self.lambdas[0] + self.k * self.n / 2

    def row_exponent(self, j: int) -> float:
        """Exponent λ_{n−j+2} − λ_{n−j+1} − k carried by every t_{ij} of row j."""
        return self.lambdas[self.n - j + 1] - self.lambdas[self.n - j] - self.k

    @property
    def is_affine_killed(self) -> bool:
        exponents = [self.z_exponent] + [
            self.row_exponent(j) for j in range(1, self.n + 1)
        ]
        return all(abs(e) <= self.HOMOGENEITY_TOLERANCE for e in exponents)

    def with_z(self, z: Sequence[float]) -> FormSpec:
        return evolve(self, z=z)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "lambdas": list(self.lambdas),
            "z": list(self.z),
        }


def _rows(values: Sequence[Sequence[float]]) -> tuple[Row, ...]:
    return tuple(_floats(row) for row in values)


@frozen
class TPoint:
    """t_{ij} for 1 ≤ i ≤ j ≤ n; `rows[j − 1]` is row j."""

    rows: tuple[Row, ...] = field(converter=_rows)

    @rows.validator
    def _check_shape(self, _: Any, value: tuple[Row, ...]) -> None:
        for j, row in enumerate(value, start=1):
            if len(row) != j:
                raise DomainError(f"row {j} must hold {j} values, got {len(row)}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def value(self, i: int, j: int) -> float:
        return self.rows[j - 1][i - 1]

    def flat(self) -> np.ndarray:
        return np.array([v for row in self.rows for v in row])

    @classmethod
    def from_flat(cls, n: int, values: Sequence[float]) -> TPoint:
        if len(values) != n * (n + 1) // 2:
            raise DomainError(f"{len(values)} values do not fill {n} rows")
        rows, start = [], 0
        for j in range(1, n + 1):
            rows.append(values[start : start + j])
            start += j
        return cls(rows)


def _with_z(spec: FormSpec, t: TPoint) -> list[Row]:
    if t.n != spec.n:
        raise DomainError(f"point has {t.n} rows, the form has n = {spec.n}")
    return list(t.rows) + [spec.z]


def contains(spec: FormSpec, t: TPoint, strict: bool = False) -> bool:
    """Membership in Δ; with `strict`, in its interior."""
    rows = _with_z(spec, t)
    for j in range(1, spec.n + 1):
        lower, upper = rows[j - 1], rows[j]
        for i in range(j):
            a, value, b = upper[i], lower[i], upper[i + 1]
            if strict and not a < value < b:
                return False
            if not a <= value <= b:
                return False
    return True


def _power(base: float, exponent: float) -> float:
    if base == 0.0:
        if exponent > 0:
            return 0.0
        return 1.0 if exponent == 0 else math.inf
    return base**exponent


def _vandermonde(row: Sequence[float]) -> float:
    return math.prod(b - a for a, b in combinations(row, 2))


def eval_form(spec: FormSpec, t: TPoint) -> float:
    """
    The density of ω_Δ at a point of Δ. Every factor is oriented to be nonnegative on
    Δ: (t_{i1,j} − t_{i2,j+1}) for i1 ≥ i2 and (t_{i2,j+1} − t_{i1,j}) for i2 > i1,
    with z as row n + 1.
    """
    if not contains(spec, t):
        raise DomainError("point lies outside the cycle")
    k = spec.k
    rows = _with_z(spec, t)
    value = math.prod(_power(z, spec.z_exponent) for z in spec.z)
    value *= _power(_vandermonde(spec.z), 1 - 2 * k)
    for j in range(1, spec.n + 1):
        lower, upper = rows[j - 1], rows[j]
        for i1, x in enumerate(lower):
            for i2, y in enumerate(upper):
                value *= _power(x - y if i1 >= i2 else y - x, k - 1)
        if j >= 2:
            value *= _power(_vandermonde(lower), 2 - 2 * k)
        value *= math.prod(_power(x, spec.row_exponent(j)) for x in lower)
    return value


@frozen(kw_only=True)
class TauCoordinates:
    """τ_{ij} for rows j = 2..n+1, all j entries, and |det ∂τ/∂t| by products."""

    rows: tuple[Row, ...] = field(converter=_rows)
    jacobian: float

    def row(self, j: int) -> Row:
        return self.rows[j - 2]

    @property
    def row_sums(self) -> list[float]:
        return [math.fsum(row) for row in self.rows]

    @property
    def max_row_sum_error(self) -> float:
        return max(abs(s - 1) for s in self.row_sums)

    def free(self) -> np.ndarray:
        """τ_{1j}..τ_{j−1,j} of every row: coordinates on the product of simplices."""
        return np.array([v for row in self.rows for v in row[:-1]])


def _tau_row(inner: Sequence[float], outer: Sequence[float]) -> list[float]:
    return [
        math.prod(x - y for x in inner)
        / math.prod(b - y for p, b in enumerate(outer) if p != i)
        for i, y in enumerate(outer)
    ]


def _tau_rows(rows: Sequence[Sequence[float]]) -> list[list[float]]:
    return [_tau_row(rows[j - 2], rows[j - 1]) for j in range(2, len(rows) + 1)]


def tau_transform(spec: FormSpec, t: TPoint) -> TauCoordinates:
    """
    τ_{ij} = ∏_a (t_{a,j−1} − t_{ij}) / ∏_{p≠i} (t_{pj} − t_{ij}), with z as row n + 1.
    """
    if not contains(spec, t, strict=True):
        raise DomainError("τ-coordinates need a point strictly inside the cycle")
    rows = _with_z(spec, t)
    jacobian = 1.0
    for j in range(2, spec.n + 2):
        jacobian *= abs(_vandermonde(rows[j - 2])) / abs(_vandermonde(rows[j - 1]))
    tau = TauCoordinates(rows=_tau_rows(rows), jacobian=jacobian)
    if tau.max_row_sum_error > 1e-9:
        CONSOLE.log(f"τ row sums drift from 1 by {tau.max_row_sum_error:.3e}")
    return tau


def finite_difference_jacobian(spec: FormSpec, t: TPoint, h: float = 1e-6) -> float:
    """|det ∂τ/∂t| by central differences in every t_{ij}."""

    def free_tau(values: np.ndarray) -> np.ndarray:
        point = TPoint.from_flat(spec.n, list(values))
        return np.array(
            [v for row in _tau_rows(_with_z(spec, point)) for v in row[:-1]]
        )

    base = t.flat()
    columns = []
    for c in range(len(base)):
        step = np.zeros_like(base)
        step[c] = h
        columns.append((free_tau(base + step) - free_tau(base - step)) / (2 * h))
    return float(abs(np.linalg.det(np.column_stack(columns))))


def tau_density(spec: FormSpec, tau: TauCoordinates) -> float:
    """∏_j (τ_{1j}⋯τ_{j−1,j}(1 − Σ_i τ_{ij}))^{k−1} times |det ∂τ/∂t|."""
    value = tau.jacobian
    for row in tau.rows:
        value *= math.prod(row) ** (spec.k - 1)
    return value


def tau_pointwise_check(spec: FormSpec, t: TPoint) -> float:
    """|ω_Δ(z, t) − τ-density at t|; zero up to rounding."""
    if not spec.is_affine_killed:
        raise DomainError("the τ-form of ω_Δ needs the affine-killed λ")
    return abs(eval_form(spec, t) - tau_density(spec, tau_transform(spec, t)))


def random_interior_point(spec: FormSpec, rng: np.random.Generator) -> TPoint:
    """Rows sampled from row n up, each t_{ij} uniform between its two neighbours."""
    rows: list[Row] = [spec.z]
    for j in range(spec.n, 0, -1):
        upper = rows[0]
        rows.insert(0, tuple(rng.uniform(upper[i], upper[i + 1]) for i in range(j)))
    return TPoint(rows[:-1])


def hyperplane_exponents(spec: FormSpec) -> dict[str, float]:
    """The exponent attached to each hyperplane family of the configuration."""
    exponents = {
        "z_i": spec.z_exponent,
        "z_i - z_j": 1 - 2 * spec.k,
        "t_in - z_l": spec.k - 1,
        "t_ij - t_l,j+1": spec.k - 1,
        "t_ij - t_lj": 2 - 2 * spec.k,
    }
    for j in range(1, spec.n + 1):
        exponents[f"t_i{j}"] = spec.row_exponent(j)
    return exponents


# quadrature


@frozen(kw_only=True)
class QuadratureSpec:
    scheme: Scheme = "gauss-jacobi-tensor"
    nodes: int = field(default=32)
    samples: int = field(default=200_000)
    seed: int = 0
    max_points: int = 5_000_000

    @nodes.validator
    def _check_nodes(self, _: Any, value: int) -> None:
        if value < 2:
            raise DomainError(f"at least 2 nodes per dimension are needed, got {value}")

    @samples.validator
    def _check_samples(self, _: Any, value: int) -> None:
        if value < 2:
            raise DomainError(f"at least 2 samples are needed, got {value}")

    @classmethod
    def for_rank(cls, n: int, **kwargs: Any) -> QuadratureSpec:
        """Tensor Gauss–Jacobi up to n = 2, stratified Monte Carlo above."""
        scheme: Scheme = "gauss-jacobi-tensor" if n <= 2 else "monte-carlo"
        return cls(scheme=scheme, **kwargs)


@frozen(kw_only=True)
class QuadratureResult:
    value: float
    error_estimate: float
    scheme: Scheme
    points: int
    runtime_ms: float

    def to_json(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "scheme": self.scheme,
            "points": self.points,
            "runtime_ms": self.runtime_ms,
        }


def _z_log_prefactor(spec: FormSpec) -> float:
    return spec.z_exponent * math.fsum(math.log(z) for z in spec.z) + (
        1 - 2 * spec.k
    ) * math.log(_vandermonde(spec.z))


def _row_log_density(lower: np.ndarray, upper: np.ndarray, k: float) -> np.ndarray:
    """
    Log of the factors tying row j, shape (P, j), to row j + 1, shape (P, j + 1), apart
    from the two endpoint factors of every t_{ij}, which the sampling rule absorbs.
    """
    j = lower.shape[1]
    out = np.zeros(lower.shape[0])
    for i in range(j):
        for l in range(j + 1):
            if l not in (i, i + 1):
                out += (k - 1) * np.log(np.abs(lower[:, i] - upper[:, l]))
    for a, b in combinations(range(j), 2):
        out += (2 - 2 * k) * np.log(lower[:, b] - lower[:, a])
    return out


def _grid(values: np.ndarray, width: int) -> np.ndarray:
    mesh = np.meshgrid(*([values] * width), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, width)


def nested_gauss_jacobi(spec: FormSpec, nodes: int) -> float:
    """
    ∫_Δ ω_Δ from row n up to row 1; each t_{ij} runs over [t_{i,j+1}, t_{i+1,j+1}]
    mapped onto [−1, 1], where Jacobi weights with exponents (k − 1, k − 1) carry the
    two endpoint factors.
    """
    x, w = special.roots_jacobi(nodes, spec.k - 1, spec.k - 1)
    upper = np.array([spec.z])
    log_weight = np.array([_z_log_prefactor(spec)])
    for j in range(spec.n, 0, -1):
        offsets = _grid(x, j)
        log_w = _grid(np.log(w), j).sum(axis=1)
        half = (upper[:, 1:] - upper[:, :-1]) / 2
        lower = upper[:, None, :-1] + half[:, None, :] * (1 + offsets[None, :, :])
        # pairs with the (2 − 2k) factors of adjacent upper points: net power 1
        parent = log_weight + (2 * spec.k - 1) * np.log(half).sum(axis=1)
        log_weight = (parent[:, None] + log_w[None, :]).reshape(-1)
        upper = np.repeat(upper, len(offsets), axis=0)
        lower = lower.reshape(-1, j)
        log_weight += _row_log_density(lower, upper, spec.k)
        upper = lower
    return math.fsum(np.exp(log_weight))


def latin_hypercube_estimate(
    spec: FormSpec, samples: int, seed: int
) -> tuple[float, float]:
    """
    Importance sampling of ∫_Δ ω_Δ with every t_{ij} drawn from Beta(k, k) on its
    interval; Latin-hypercube uniforms go through the inverse incomplete beta.
    Returns the estimate and its standard error.
    """
    k = spec.k
    sampler = qmc.LatinHypercube(d=spec.dimension, seed=seed)
    eps = np.finfo(float).eps
    units = special.betaincinv(k, k, np.clip(sampler.random(samples), eps, 1 - eps))
    upper = np.tile(np.array(spec.z), (samples, 1))
    log_weight = np.full(samples, _z_log_prefactor(spec))
    log_beta = special.betaln(k, k)
    column = 0
    for j in range(spec.n, 0, -1):
        width = upper[:, 1:] - upper[:, :-1]
        lower = upper[:, :-1] + width * units[:, column : column + j]
        column += j
        log_weight += ((2 * k - 1) * np.log(width) + log_beta).sum(axis=1)
        log_weight += _row_log_density(lower, upper, k)
        upper = lower
    values = np.exp(log_weight)
    mean = math.fsum(values) / samples
    return mean, float(np.std(values, ddof=1) / math.sqrt(samples))


def _tensor_points(spec: FormSpec, nodes: int) -> int:
    return nodes**spec.dimension


def integrate_zonal(
    spec: FormSpec, quad: QuadratureSpec, tolerance: float = 1e-8
) -> QuadratureResult:
    """
    ∫_Δ ω_Δ for the affine-killed λ. The tensor rule is compared against the rule with
    half the nodes; a relative gap above `tolerance` raises QuadratureNonConvergence.
    """
    if not spec.is_affine_killed:
        raise DomainError("only the affine-killed λ has a closed form to integrate to")
    started = time.perf_counter()
    if quad.scheme == "monte-carlo":
        value, error = latin_hypercube_estimate(spec, quad.samples, quad.seed)
        points = quad.samples
    else:
        points = _tensor_points(spec, quad.nodes)
        if points > quad.max_points:
            raise GuardError(
                f"{quad.nodes} nodes give {points} points in dimension "
                f"{spec.dimension}; lower the node count or sample instead"
            )
        coarse_nodes = max(2, quad.nodes // 2)
        coarse = nested_gauss_jacobi(spec, coarse_nodes)
        value = nested_gauss_jacobi(spec, quad.nodes)
        error = abs(value - coarse)
        if error > tolerance * max(1.0, abs(value)):
            raise QuadratureNonConvergence(coarse, value, tolerance)
    runtime_ms = (time.perf_counter() - started) * 1000
    CONSOLE.log(
        f"{quad.scheme}: n={spec.n} k={spec.k:g} points={points} value={value!r} "
        f"({runtime_ms:.1f} ms)"
    )
    return QuadratureResult(
        value=value,
        error_estimate=error,
        scheme=quad.scheme,
        points=points,
        runtime_ms=runtime_ms,
    )


def z_independence(
    spec: FormSpec, other: FormSpec, quad: QuadratureSpec, tolerance: float = 1e-8
) -> float:
    if (spec.n, spec.k, spec.lambdas) != (other.n, other.k, other.lambdas):
        raise DomainError("forms to compare may differ in z only")
    first = integrate_zonal(spec, quad, tolerance).value
    second = integrate_zonal(other, quad, tolerance).value
    return abs(first - second)


# closed forms


def _check_positive_k(k: float) -> None:
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")


def gamma_ratio(n: int, k: float) -> float:
    """∏_{i=1}^{n+1} Γ(k)^i / Γ(ik), through log-Gamma."""
    _check_positive_k(k)
    return math.exp(
        math.fsum(
            i * special.gammaln(k) - special.gammaln(i * k) for i in range(1, n + 2)
        )
    )


def dirichlet_simplex(j: int, k: float) -> float:
    """Dirichlet's integral over the j-simplex: Γ(k)^{j+1} / Γ((j + 1)k)."""
    if j < 1:
        raise DomainError(f"simplex dimension must be positive, got {j}")
    _check_positive_k(k)
    return math.exp((j + 1) * special.gammaln(k) - special.gammaln((j + 1) * k))


def dirichlet_product(n: int, k: float) -> float:
    return math.prod(dirichlet_simplex(j, k) for j in range(1, n + 1))


@frozen(kw_only=True)
class NumericCheck:
    numeric: float
    closed_form: float

    @property
    def abs_err(self) -> float:
        return abs(self.numeric - self.closed_form)

    @property
    def rel_err(self) -> float:
        return self.abs_err / abs(self.closed_form) if self.closed_form else math.inf


def _quad_alg(
    function: Callable[[float], float], a: float, b: float, alpha: float, beta: float
) -> float:
    """∫_a^b f(t)(t − a)^alpha (b − t)^beta dt."""
    value, _ = integrate.quad(
        function, a, b, weight="alg", wvar=(alpha, beta), epsabs=1e-14, epsrel=1e-12
    )
    return float(value)


def euler_beta(a: float, b: float) -> NumericCheck:
    if not (a > 0 and b > 0):
        raise DomainError(f"Euler's beta needs positive arguments, got ({a}, {b})")
    return NumericCheck(
        numeric=_quad_alg(lambda _t: 1.0, 0.0, 1.0, a - 1, b - 1),
        closed_form=float(special.beta(a, b)),
    )


def beta_check(k: float, z1: float, z2: float) -> NumericCheck:
    """
    ∫_{z1}^{z2} (t − z1)^{−k}(z2 − t)^{−k} dt against its closed form
    (z2 − z1)^{1−2k} B(1 − k, 1 − k).
    """
    if not k < 1:
        raise DomainError(f"the integral diverges for k ≥ 1, got {k}")
    if not z1 < z2:
        raise DomainError(f"need z1 < z2, got ({z1}, {z2})")
    closed_form = (z2 - z1) ** (1 - 2 * k) * math.exp(
        2 * special.gammaln(1 - k) - special.gammaln(2 - 2 * k)
    )
    return NumericCheck(
        numeric=_quad_alg(lambda _t: 1.0, z1, z2, -k, -k), closed_form=closed_form
    )


def beta_monodromy_factor(k: float) -> complex:
    """exp(2πi·(−2k)): the phase of the beta integral when z_2 circles z_1."""
    return cmath.exp(2j * math.pi * (-2 * k))


# leading asymptotic coefficient


def weight_from_pairings(pairings: Sequence[RationalLike], n: int) -> Weight:
    """The weight Σ_i ℓ_i η_i, so that (λ, α_i) = ℓ_i for i = 1..len(pairings)."""
    if len(pairings) > n:
        raise DomainError(f"{len(pairings)} pairings do not fit rank {n}")
    root_data = RootData(n)
    total = root_data.zero_weight()
    for i, ell in enumerate(pairings, start=1):
        total = total + root_data.fundamental_weight(i) * Fraction(ell)
    return total


def asymptotic_closed_form(pairings: Sequence[float], k: float) -> float:
    """
    ∏_{p=1}^{s−1} Γ(kL_p + k(p − 1)) Γ(1 + k) / Γ(kL_p + 1 + kp) with
    L_p = ℓ_{s−p} + … + ℓ_{s−1}.
    """
    _check_positive_k(k)
    s = len(pairings) + 1
    total = 0.0
    for p in range(1, s):
        tail = math.fsum(pairings[s - p - 1 :])
        argument = k * tail + k * (p - 1)
        if argument <= 0:
            raise GammaPoleError(
                f"Γ({argument:g}) at p={p}: the integral diverges at the origin"
            )
        total += (
            special.gammaln(argument)
            + special.gammaln(1 + k)
            - special.gammaln(argument + 1 + k)
        )
    return math.exp(total)


def asymptotic_integral(pairings: Sequence[float], k: float, z: float = 1.0) -> float:
    """
    ∫ ∏_i t_i^{kℓ_i − 1}(t_{i−1} − t_i)^k over 0 ≤ t_{s−1} ≤ … ≤ t_1 ≤ t_0 = z, by
    nested adaptive quadrature. Each level hands the degree of the inner integral to the
    weight at the origin.
    """
    _check_positive_k(k)
    depth = len(pairings)
    degrees = [
        math.fsum(k * ell + k for ell in pairings[level:])
        for level in range(depth + 1)
    ]

    def level_integral(level: int, upper: float) -> float:
        if level == depth:
            return 1.0
        alpha = k * pairings[level] - 1 + degrees[level + 1]
        if alpha <= -1:
            raise GammaPoleError(
                f"exponent {alpha:g} at level {level} is not integrable"
            )

        def reduced(t: float) -> float:
            # homogeneous of degree degrees[level + 1] in t, so the limit at 0 is
            # the value at 1
            if t <= 0.0:
                return level_integral(level + 1, 1.0)
            return level_integral(level + 1, t) / t ** degrees[level + 1]

        return _quad_alg(reduced, 0.0, upper, alpha, k)

    return level_integral(0, z)


@frozen(kw_only=True)
class AsymptoticCheck(NumericCheck):
    pairings: tuple[float, ...] = field(converter=_floats)
    k: float


def asymptotic_coefficient(
    lam: Weight, s: int, k: float, z: float = 1.0
) -> AsymptoticCheck:
    """
    The leading coefficient of the chain integral: the closed form against the
    iterated integral divided by z^{kΣℓ + k(s−1)}.
    """
    n = len(lam.coords) - 2
    if not 2 <= s <= n + 1:
        raise DomainError(f"s must lie in 2..{n + 1}, got {s}")
    root_data = RootData(n)
    pairings = [float(root_data.pairing(lam, i)) for i in range(1, s)]
    closed_form = asymptotic_closed_form(pairings, k)
    leading_power = k * math.fsum(pairings) + k * (s - 1)
    numeric = asymptotic_integral(pairings, k, z) / z**leading_power
    return AsymptoticCheck(
        numeric=numeric, closed_form=closed_form, pairings=pairings, k=k
    )
