"""Exact rational polynomials, Sturm root isolation and rational intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, Fraction]

DEFAULT_WIDTH = Fraction(1, 10**4)
WIDTH_CAP = Fraction(1, 10**16)


class DivisionDomainError(ZeroDivisionError):
    """Interval division by an interval containing zero."""


class DistinctnessError(ValueError):
    """Eigenvalue enclosures overlap."""


class PreconditionError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or a decimal string."""
    return Fraction(text.strip())


def format_rational(r: Number) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


# -- polynomials ------------------------------------------------------------

class Poly:
    """Polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "Poly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", Number]) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / other.lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        return self * (1 / self.lead) if self.coeffs else self

    def reflected(self) -> "Poly":
        """p(-t)."""
        return Poly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = "t" if i == 1 else f"t^{i}"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return p
    return divmod(p, poly_gcd(p, p.derivative()))[0].monic()


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return [s for s in seq if not s.is_zero()]


def _variations(seq: Sequence[Poly], t: Number) -> int:
    signs = [v > 0 for v in (s(t) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def char_poly(M: Sequence[Sequence[Number]]) -> Poly:
    """det(tI - M) by the Faddeev-LeVerrier recurrence."""
    k = len(M)
    if any(len(row) != k for row in M):
        raise ValueError("char_poly needs a square matrix")
    A = [[Fraction(v) for v in row] for row in M]
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    N = [[Fraction(0)] * k for _ in range(k)]
    for m in range(1, k + 1):
        # N <- A N + c_{k-m+1} I, then c_{k-m} = -tr(A N) / m
        AN = [[sum(A[i][l] * N[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        for i in range(k):
            AN[i][i] += coeffs[k - m + 1]
        N = AN
        trace = sum(sum(A[i][l] * N[l][i] for l in range(k)) for i in range(k))
        coeffs[k - m] = -trace / m
    return Poly(coeffs)


# -- intervals --------------------------------------------------------------

@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __init__(self, lo: Number, hi: Number | None = None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @staticmethod
    def _coerce(other) -> "RationalInterval":
        return other if isinstance(other, RationalInterval) else RationalInterval(other)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, t: Number) -> bool:
        return self.lo <= t <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.contains_zero():
            raise DivisionDomainError(f"division by interval [{o.lo}, {o.hi}] containing 0")
        return self * RationalInterval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self ** -n)
        if n == 0:
            return RationalInterval(1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0:
            if self.contains_zero():
                return RationalInterval(0, max(a, b))
            return RationalInterval(min(a, b), max(a, b))
        return RationalInterval(a, b)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(0, max(-self.lo, self.hi))

    def to_pair(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_pair(cls, pair: Sequence[str]) -> "RationalInterval":
        return cls(parse_rational(pair[0]), parse_rational(pair[1]))

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def poly_eval(p: Poly, I: RationalInterval) -> RationalInterval:
    """Enclosure of p over I by interval Horner evaluation."""
    acc = RationalInterval(0)
    for c in reversed(p.coeffs):
        acc = acc * I + c
    return acc


# -- root counting and isolation -------------------------------------------

def sturm_root_count(p: Poly, I: RationalInterval) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    seq = sturm_sequence(squarefree_part(p))
    return _variations(seq, I.lo) - _variations(seq, I.hi)


def closed_root_count(p: Poly, I: RationalInterval) -> int:
    """Distinct real roots of p in [lo, hi]."""
    return sturm_root_count(p, I) + (1 if p(I.lo) == 0 else 0)


def cauchy_bound(p: Poly) -> Fraction:
    """Strict upper bound on the magnitude of every root."""
    return 1 + max((abs(c / p.lead) for c in p.coeffs[:-1]), default=Fraction(0))


def _split_point(sq: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    step = (hi - lo) / 4
    while sq(mid) == 0:
        mid += step
        step /= 2
    return mid


def _grid_cell(sq: Poly, seq: list[Poly], I: RationalInterval, step: Fraction) -> RationalInterval | None:
    """The ``step``-aligned cell holding the single root inside I, if that cell isolates it.

    Requires I.width <= step with a sign change of ``sq`` across I.
    """
    left = math.floor(I.lo / step) * step
    g = left + step
    if g <= I.hi:
        vg = sq(g)
        if vg == 0:
            return RationalInterval(g)
        cell = RationalInterval(left, g) if (vg > 0) != (sq(I.lo) > 0) else RationalInterval(g, g + step)
    else:
        cell = RationalInterval(left, g)
    if sq(cell.lo) == 0 or sq(cell.hi) == 0:
        return None
    if _variations(seq, cell.lo) - _variations(seq, cell.hi) != 1:
        return None
    return cell


def _shrink(sq: Poly, I: RationalInterval) -> RationalInterval:
    """Halve an isolating interval, keeping the half with the sign change."""
    if I.width == 0:
        return I
    m = I.mid
    v = sq(m)
    if v == 0:
        return RationalInterval(m)
    if (sq(I.lo) > 0) != (v > 0):
        return RationalInterval(I.lo, m)
    return RationalInterval(m, I.hi)


def isolate_real_roots(p: Poly, width: Number = DEFAULT_WIDTH) -> list[RationalInterval]:
    """Disjoint closed intervals, each holding exactly one real root of p.

    Intervals have width at most ``width``; where possible they are cells of
    the grid ``width * Z`` (so decimal widths give decimal brackets).  Roots
    that are grid points come back as point intervals.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    sq = squarefree_part(p)
    if sq.degree < 1:
        return []
    seq = sturm_sequence(sq)
    B = cauchy_bound(sq)

    coarse: list[RationalInterval] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        count = _variations(seq, lo) - _variations(seq, hi)
        if count == 0:
            continue
        if count == 1:
            coarse.append(RationalInterval(lo, hi))
            continue
        mid = _split_point(sq, lo, hi)
        stack.append((lo, mid))
        stack.append((mid, hi))

    result = []
    for I in coarse:
        while I.width > width:
            I = _shrink(sq, I)
        if I.width > 0:
            step = width
            cell = _grid_cell(sq, seq, I, step)
            while cell is None:
                # a neighbouring root shares the cell; drop to a finer grid
                step /= 2
                while I.width > step:
                    I = _shrink(sq, I)
                cell = I if I.width == 0 else _grid_cell(sq, seq, I, step)
            I = cell
        result.append(I)
    result.sort(key=lambda r: r.lo)

    # separate neighbours that share an endpoint
    changed = True
    while changed:
        changed = False
        for i in range(len(result) - 1):
            if result[i].overlaps(result[i + 1]):
                result[i] = _shrink(sq, result[i])
                result[i + 1] = _shrink(sq, result[i + 1])
                changed = True
    return result


def refine_root(p: Poly, I: RationalInterval, width: Number) -> RationalInterval:
    sq = squarefree_part(p)
    if closed_root_count(sq, I) != 1:
        raise PreconditionError("interval does not isolate a single root")
    while I.width > width:
        I = _shrink(sq, I)
    return I


# -- coefficient enclosures -------------------------------------------------

def _check_disjoint(intervals: Sequence[RationalInterval]) -> None:
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            if intervals[i].overlaps(intervals[j]):
                raise DistinctnessError(f"enclosures {i} and {j} overlap: {intervals[i]} and {intervals[j]}")


def vandermonde_coefficients(
    lambdas: Sequence[RationalInterval], values: Sequence[Number]
) -> list[RationalInterval]:
    """Enclose c with sum_i c_i lambda_i^n = values[n] for n = 0..k-1.

    Row i of the inverse Vandermonde matrix holds the coefficients of
    prod_{j != i} (t - lambda_j), divided by prod_{j != i} (lambda_i - lambda_j).
    """
    k = len(lambdas)
    if len(values) != k:
        raise ValueError("need as many values as eigenvalue enclosures")
    _check_disjoint(lambdas)
    out = []
    for i in range(k):
        # coefficients of prod_{j != i}(t - lambda_j), lowest degree first
        poly = [RationalInterval(1)]
        denom = RationalInterval(1)
        for j in range(k):
            if j == i:
                continue
            shifted = [RationalInterval(0)] + poly
            for d in range(len(poly)):
                shifted[d] = shifted[d] - lambdas[j] * poly[d]
            poly = shifted
            denom = denom * (lambdas[i] - lambdas[j])
        numer = RationalInterval(0)
        for n in range(k):
            numer = numer + poly[n] * values[n]
        out.append(numer / denom)
    return out


class RemainingRoots(NamedTuple):
    """Elementary symmetric functions of the roots other than the isolated one."""

    total: RationalInterval  # sum
    pair_sum: RationalInterval  # sum of pairwise products
    product: RationalInterval


def vieta_reduce(p: Poly, lambda1: RationalInterval) -> RemainingRoots:
    if p.degree != 4 or p.lead != 1:
        raise ValueError("vieta_reduce expects a monic quartic")
    if closed_root_count(p, lambda1) != 1:
        raise PreconditionError(f"{lambda1} does not isolate exactly one root")
    if lambda1.contains_zero():
        raise PreconditionError("isolated root enclosure contains 0")
    a0, a1, _a2, a3 = p.coeffs[:4]
    inv = 1 / lambda1
    return RemainingRoots(
        total=-a3 - lambda1,
        pair_sum=-a1 * inv - a0 * inv * inv,
        product=a0 * inv,
    )


def discriminant(p: Poly) -> Fraction:
    if p.degree != 3:
        raise ValueError("discriminant is implemented for cubics only")
    d, c, b, a = p.coeffs
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2
