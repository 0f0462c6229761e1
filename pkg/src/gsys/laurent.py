"""Sparse Laurent polynomials over ZZ and cluster-variable mutation."""

from __future__ import annotations

import logging
import random
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy import ZZ, ImmutableMatrix, Poly, Rational, symbols

from .errors import InternalLaurentFailure, NotDivisible, SingularPoint, ValidationError
from .matrix import ExchangeMatrix, check_index, mutate_matrix

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]

POINT_RANGE = (2, 97)


def _order_key(exponent: Exponent) -> Exponent:
    # highest-indexed variable is compared first
    return tuple(reversed(exponent))


@dataclass(frozen=True)
class LaurentPoly:
    """Element of ZZ[x1^±1, …, xn^±1] in canonical sparse form.

    ``terms`` holds (exponent, coefficient) pairs with nonzero coefficients,
    sorted in text order, so structural equality is ring equality.
    """

    n: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]]) -> LaurentPoly:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = defaultdict(int)
        for exponent, coeff in items:
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != n:
                raise ValidationError(f"exponent {exponent} does not have length {n}")
            acc[exponent] += int(coeff)
        kept = [(e, c) for e, c in acc.items() if c != 0]
        kept.sort(key=lambda item: _order_key(item[0]), reverse=True)
        return cls(n, tuple(kept))

    @classmethod
    def zero(cls, n: int) -> LaurentPoly:
        return cls(n, ())

    @classmethod
    def constant(cls, value: int, n: int) -> LaurentPoly:
        return cls.from_terms(n, {(0,) * n: value})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> LaurentPoly:
        return cls.from_terms(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def variable(cls, i: int, n: int) -> LaurentPoly:
        """The initial variable x_i (1-based)."""
        position = check_index(i, n)
        return cls.monomial(tuple(1 if j == position else 0 for j in range(n)))

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def _check(self, other: LaurentPoly) -> None:
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"expected LaurentPoly, got {type(other).__name__}")
        if other.n != self.n:
            raise ValidationError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        return LaurentPoly.from_terms(self.n, [*self.terms, *other.terms])

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        acc: dict[Exponent, int] = defaultdict(int)
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly.from_terms(self.n, acc)

    def __pow__(self, power: int) -> LaurentPoly:
        if power < 0:
            if not self.is_monomial() or abs(self.terms[0][1]) != 1:
                raise NotDivisible("only unit monomials have Laurent inverses")
            (exponent, coeff), = self.terms
            return LaurentPoly.monomial(tuple(-e * -power for e in exponent), coeff ** (-power))
        result = LaurentPoly.constant(1, self.n)
        for _ in range(power):
            result = result * self
        return result

    def exact_divide(self, other: LaurentPoly) -> LaurentPoly:
        return lp_exact_divide(self, other)

    def derivative(self, i: int) -> LaurentPoly:
        """Formal partial derivative with respect to x_i (1-based)."""
        position = check_index(i, self.n)
        terms = []
        for exponent, coeff in self.terms:
            power = exponent[position]
            if power == 0:
                continue
            shifted = tuple(e - 1 if j == position else e for j, e in enumerate(exponent))
            terms.append((shifted, coeff * power))
        return LaurentPoly.from_terms(self.n, terms)

    def shift(self, exponent: Sequence[int]) -> LaurentPoly:
        """Multiply by the monomial x^exponent."""
        return LaurentPoly(
            self.n,
            tuple((tuple(a + b for a, b in zip(e, exponent)), c) for e, c in self.terms),
        )

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.n
        return tuple(min(e[i] for e, _ in self.terms) for i in range(self.n))

    def split_denominator(self) -> tuple[LaurentPoly, Exponent]:
        """Write self as p / x^m with p an ordinary polynomial and m ≥ 0 minimal."""
        m = tuple(max(0, -e) for e in self.min_exponents())
        return self.shift(m), m

    def has_positive_numerator(self) -> bool:
        return all(coeff > 0 for _, coeff in self.terms)

    def evaluate(self, point: Sequence[int | Rational]) -> Rational:
        if len(point) != self.n:
            raise ValidationError(f"point has length {len(point)}, expected {self.n}")
        values = [Rational(v) for v in point]
        if any(v == 0 for v in values):
            raise SingularPoint("evaluation point has a zero coordinate")
        total = Rational(0)
        for exponent, coeff in self.terms:
            term = Rational(coeff)
            for value, power in zip(values, exponent):
                if power:
                    term *= value**power
            total += term
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for index, (exponent, coeff) in enumerate(self.terms):
            body = _term_text(exponent, abs(coeff))
            if index == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(parts)

    def to_fraction_text(self) -> str:
        """Render as numerator over a monomial, e.g. ``(x1+x3)/x2``."""
        numerator, denominator = self.split_denominator()
        parts = []
        for index, (exponent, coeff) in enumerate(reversed(numerator.terms)):
            sign = "-" if coeff < 0 else ("+" if index else "")
            parts.append(sign + _term_text(exponent, abs(coeff)))
        top = "".join(parts) or "0"
        if not any(denominator):
            return top
        if len(numerator.terms) > 1:
            top = f"({top})"
        bottom = _term_text(denominator, 1)
        if sum(1 for e in denominator if e) > 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def __str__(self) -> str:
        return self.to_text()


def _term_text(exponent: Exponent, magnitude: int) -> str:
    factors = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exponent) if e != 0]
    monomial = "*".join(factors)
    if not monomial:
        return str(magnitude)
    if magnitude == 1:
        return monomial
    return f"{magnitude}*{monomial}"


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValidationError(f"unknown operation: {op}")


def lp_exact_divide(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return q with q·den = num in the Laurent ring, or raise NotDivisible.

    Both sides are shifted to polynomials not divisible by any variable; a
    Laurent quotient exists iff the shifted polynomials divide exactly.
    """
    num._check(den)
    if den.is_zero():
        raise ValidationError("division by the zero polynomial")
    if num.is_zero():
        return num
    n = num.n
    a = num.min_exponents()
    b = den.min_exponents()

    if den.is_monomial():
        (exponent, coeff), = den.terms
        if any(c % coeff for _, c in num.terms):
            raise NotDivisible(f"coefficients of {num} are not divisible by {coeff}")
        return LaurentPoly.from_terms(
            n, [(tuple(x - y for x, y in zip(e, exponent)), c // coeff) for e, c in num.terms]
        )

    gens = symbols(f"x1:{n + 1}")
    p_num = Poly.from_dict(num.shift([-x for x in a]).as_dict(), *gens, domain=ZZ)
    p_den = Poly.from_dict(den.shift([-x for x in b]).as_dict(), *gens, domain=ZZ)
    quotient, remainder = p_num.div(p_den)
    if not remainder.is_zero:
        raise NotDivisible(f"{num} is not divisible by {den}")
    terms = []
    for monom, coeff in quotient.terms():
        if not coeff.is_Integer:
            raise NotDivisible(f"{num} is not divisible by {den} over the integers")
        terms.append((monom, int(coeff)))
    result = LaurentPoly.from_terms(n, terms).shift([x - y for x, y in zip(a, b)])
    if result * den != num:
        raise NotDivisible(f"{num} is not divisible by {den}")
    return result


def is_laurent_over_initial(p: object) -> bool:
    """True for any canonical LaurentPoly; mutation never produces anything else."""
    if not isinstance(p, LaurentPoly):
        return False
    return all(
        isinstance(c, int) and c != 0 and len(e) == p.n and all(isinstance(x, int) for x in e)
        for e, c in p.terms
    )


@dataclass(frozen=True)
class LaurentSeed:
    """Cluster (x_{1;t}, …, x_{n;t}) in the initial variables, with B_t."""

    cluster: tuple[LaurentPoly, ...]
    b: ExchangeMatrix
    history: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if len(self.cluster) != self.b.n:
            raise ValidationError("cluster size differs from the exchange matrix dimension")
        if len(set(self.cluster)) != len(self.cluster):
            raise ValidationError("cluster variables must be pairwise distinct")

    @classmethod
    def initial(cls, b0: ExchangeMatrix) -> LaurentSeed:
        n = b0.n
        return cls(tuple(LaurentPoly.variable(i, n) for i in range(1, n + 1)), b0, ())

    @property
    def n(self) -> int:
        return self.b.n

    def mutate(self, k: int) -> LaurentSeed:
        return mutate_cluster(self, k)

    def texts(self) -> list[str]:
        return [p.to_text() for p in self.cluster]

    def to_dict(self) -> dict[str, Any]:
        return {"cluster": self.texts(), "b": self.b.rows(), "history": list(self.history)}


def mutate_cluster(seed: LaurentSeed, k: int) -> LaurentSeed:
    """Exchange relation x_k·x'_k = ∏_{b_jk>0} x_j^{b_jk} + ∏_{b_jk<0} x_j^{-b_jk}."""
    n = seed.n
    kk = check_index(k, n)
    one = LaurentPoly.constant(1, n)
    positive, negative = one, one
    for j in range(n):
        b_jk = seed.b[j, kk]
        if b_jk > 0:
            positive = positive * seed.cluster[j] ** b_jk
        elif b_jk < 0:
            negative = negative * seed.cluster[j] ** (-b_jk)
    try:
        new_variable = lp_exact_divide(positive + negative, seed.cluster[kk])
    except NotDivisible as exc:
        raise InternalLaurentFailure(f"mutation at {k} after {seed.history} left the Laurent ring") from exc
    cluster = tuple(new_variable if i == kk else x for i, x in enumerate(seed.cluster))
    return LaurentSeed(cluster, mutate_matrix(seed.b, k), (*seed.history, k))


def laurent_seed_at(b0: ExchangeMatrix, seq: Sequence[int]) -> LaurentSeed:
    seed = LaurentSeed.initial(b0)
    for k in seq:
        seed = seed.mutate(k)
    return seed


def cluster_monomial(seed: LaurentSeed, v: Sequence[int]) -> LaurentPoly:
    """x_t^v for a nonnegative exponent vector ``v``."""
    if len(v) != seed.n or any(x < 0 for x in v):
        raise ValidationError("cluster monomial exponents must be a nonnegative vector of length n")
    result = LaurentPoly.constant(1, seed.n)
    for x, power in zip(seed.cluster, v):
        result = result * x**power
    return result


def random_point(rng: random.Random, n: int) -> tuple[int, ...]:
    low, high = POINT_RANGE
    return tuple(rng.randint(low, high) for _ in range(n))


def h_matrix(seed: LaurentSeed, point: Sequence[int]) -> ImmutableMatrix:
    """H_{t0}^t evaluated exactly at ``point``.

    Entry (i, j) is x_{i;t0}·∂x_{j;t}/∂x_{i;t0}·x_{j;t}⁻¹, a rational function;
    the result is therefore a rational matrix.
    """
    n = seed.n
    values = [x.evaluate(point) for x in seed.cluster]
    if any(v == 0 for v in values):
        raise SingularPoint(f"a cluster variable vanishes at {tuple(point)}")
    entries = [[Rational(0)] * n for _ in range(n)]
    for j, x_j in enumerate(seed.cluster):
        for i in range(n):
            numerator = LaurentPoly.variable(i + 1, n) * x_j.derivative(i + 1)
            entries[i][j] = numerator.evaluate(point) / values[j]
    return ImmutableMatrix(entries)


@dataclass(frozen=True)
class ClusterFormulaReport:
    passed: bool
    points: tuple[tuple[int, ...], ...]
    determinants: tuple[Rational, ...]
    failing_point: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.passed


def check_cluster_formula(
    seed: LaurentSeed,
    b0: ExchangeMatrix,
    rng: random.Random,
    samples: int = 3,
) -> ClusterFormulaReport:
    """Check det(H) = ±1 and H·(B_t S⁻¹)·Hᵀ = B_{t0}·S⁻¹ at random points."""
    s_inverse = b0.s_inverse()
    target = b0.entries * s_inverse
    middle = seed.b.entries * s_inverse
    points: list[tuple[int, ...]] = []
    determinants: list[Rational] = []
    for _ in range(samples):
        point = random_point(rng, seed.n)
        points.append(point)
        h = h_matrix(seed, point)
        det = h.det()
        determinants.append(det)
        if det not in (1, -1) or h * middle * h.T != target:
            logger.debug("cluster formula fails for %s at %s", seed.history, point)
            return ClusterFormulaReport(False, tuple(points), tuple(determinants), point)
    return ClusterFormulaReport(True, tuple(points), tuple(determinants))
