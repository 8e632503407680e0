"""Exact certificates that one path-like family eventually has more colorings than another.

Counts of a path-like family are sums c_i * lambda_i^n over the eigenvalues
of the quotient matrix.  A certificate stores rational enclosures of the
eigenvalues, the exact small-n counts, the coefficient bounds derived from
them in interval arithmetic, and an explicit index N from which the
comparison holds.  Every stored quantity is a deterministic function of the
target parameters and the enclosures, so :func:`replay` rebuilds the
certificate from those and demands byte-for-byte agreement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .exactalg import (
    DEFAULT_WIDTH,
    WIDTH_CAP,
    Number,
    Poly,
    RationalInterval,
    char_poly,
    closed_root_count,
    discriminant,
    format_rational,
    isolate_real_roots,
    parse_rational,
    poly_gcd,
    squarefree_part,
    vandermonde_coefficients,
)
from .graphs import PathLikeFamily, e_family, path_family, tree_to_dict
from .homcount import hom_pathlike
from .orbits import OrbitQuotient, structural_orbits_T

A_WINS = "A_exceeds_B_eventually"
B_WINS = "B_exceeds_A_eventually"
INCONCLUSIVE = "inconclusive"

PARITY = "parity"
DOMINANT = "dominant"

# largest family index tried when searching for the threshold N
THRESHOLD_SEARCH_LIMIT = 200_000


class StructureError(ValueError):
    """The eigenvalue structure a certification method relies on is absent."""


class CertificateFormatError(ValueError):
    pass


def _q(r: Number | None) -> str | None:
    return None if r is None else format_rational(r)


def _iv(I: RationalInterval) -> list[str]:
    return I.to_pair()


@dataclass
class Certificate:
    method: str
    target: dict
    family_a: dict
    family_b: dict
    scope: str
    char_poly: list[str]
    eigen_enclosures: list[RationalInterval]
    counts_a: dict[int, int]
    counts_b: dict[int, int]
    a_lower: Fraction
    b_upper: Fraction
    conclusion: str
    threshold_n: int | None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.conclusion != INCONCLUSIVE

    @property
    def threshold_vertices(self) -> int | None:
        if self.threshold_n is None:
            return None
        return self.threshold_n + len(self.family_a["seed"]["parent"])

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "target": self.target,
            "family_a": self.family_a,
            "family_b": self.family_b,
            "scope": self.scope,
            "char_poly": self.char_poly,
            "eigen_enclosures": [_iv(I) for I in self.eigen_enclosures],
            "counts_a": {str(n): str(v) for n, v in sorted(self.counts_a.items())},
            "counts_b": {str(n): str(v) for n, v in sorted(self.counts_b.items())},
            "a_lower": _q(self.a_lower),
            "b_upper": _q(self.b_upper),
            "conclusion": self.conclusion,
            "threshold_n": self.threshold_n,
            "evidence": self.evidence,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "Certificate":
        try:
            return cls(
                method=doc["method"],
                target=doc["target"],
                family_a=doc["family_a"],
                family_b=doc["family_b"],
                scope=doc["scope"],
                char_poly=list(doc["char_poly"]),
                eigen_enclosures=[RationalInterval.from_pair(p) for p in doc["eigen_enclosures"]],
                counts_a={int(n): int(v) for n, v in doc["counts_a"].items()},
                counts_b={int(n): int(v) for n, v in doc["counts_b"].items()},
                a_lower=parse_rational(doc["a_lower"]),
                b_upper=parse_rational(doc["b_upper"]),
                conclusion=doc["conclusion"],
                threshold_n=doc["threshold_n"],
                evidence=doc["evidence"],
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"{exc.msg} (line {exc.lineno}, column {exc.colno})") from None
        if not isinstance(doc, dict):
            raise CertificateFormatError("certificate must be an object")
        return cls.from_dict(doc)


def _family_doc(fam: PathLikeFamily) -> dict:
    return {"seed": tree_to_dict(fam.seed), "attach": fam.attach_vertex}


def _target_doc(x: int, y: int, z: int, looped: bool, q: OrbitQuotient) -> dict:
    return {
        "x": x,
        "y": y,
        "z": z,
        "looped": looped,
        "sizes": list(q.class_sizes),
        "matrix": [list(r) for r in q.quotient],
    }


def _dominates(gap: Fraction, big: Fraction, D: Fraction, small: Fraction, n: int) -> bool:
    """gap * big^n > D * small^n, compared in integers."""
    lhs = gap.numerator * big.numerator**n * D.denominator * small.denominator**n
    rhs = D.numerator * small.numerator**n * gap.denominator * big.denominator**n
    return lhs > rhs


def _least_threshold(gap: Fraction, big: Fraction, D: Fraction, small: Fraction, start: int, step: int) -> int | None:
    """Least n = start + step*j with gap * big^n > D * small^n, given big > small >= 0.

    The predicate is monotone in n, so an exponential probe followed by
    bisection finds the least index.
    """
    if gap <= 0 or big <= small:
        return None

    def holds(j: int) -> bool:
        return _dominates(gap, big, D, small, start + step * j)

    if holds(0):
        return start
    hi = 1
    while not holds(hi):
        hi *= 2
        if start + step * hi > THRESHOLD_SEARCH_LIMIT:
            return None
    lo = hi // 2
    # holds(lo) is false, holds(hi) is true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return start + step * hi


def _check_enclosures(f: Poly, enclosures: Sequence[RationalInterval]) -> None:
    for I in enclosures:
        if closed_root_count(f, I) != 1:
            raise StructureError(f"{I} does not isolate exactly one root of the characteristic polynomial")
    for i in range(len(enclosures)):
        for j in range(i + 1, len(enclosures)):
            if enclosures[i].overlaps(enclosures[j]):
                raise StructureError(f"enclosures {enclosures[i]} and {enclosures[j]} overlap")


# -- parity certificates ----------------------------------------------------

def _parity_structure(x: int, y: int, z: int, width: Fraction) -> tuple[Poly, RationalInterval, RationalInterval]:
    """Isolate lambda > mu > 0 for the even quartic of unlooped T(x,y,z)."""
    q = structural_orbits_T(x, y, z, False)
    f = char_poly(q.quotient)
    if f != f.reflected():
        raise StructureError("characteristic polynomial is not even; the +-lambda, +-mu scheme needs it")
    if squarefree_part(f).degree != f.degree:
        raise StructureError("characteristic polynomial has repeated roots")
    roots = isolate_real_roots(f, width)
    if len(roots) != 4:
        raise StructureError(f"expected 4 real roots, found {len(roots)}")
    positive = [I for I in roots if I.lo > 0]
    if len(positive) != 2:
        raise StructureError("expected exactly two positive roots (mu = 0 is excluded)")
    mu, lam = positive
    return f, lam, mu


def assemble_parity(x: int, y: int, z: int, parity: str, lam: RationalInterval, mu: RationalInterval) -> Certificate:
    """Build the parity certificate determined by the brackets of lambda and mu."""
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    q = structural_orbits_T(x, y, z, False)
    f = char_poly(q.quotient)
    _check_enclosures(f, [mu, lam])
    if not (mu.lo > 0 and lam.lo > mu.hi):
        raise StructureError("need rational brackets with 0 < mu_l <= mu_u < lambda_l <= lambda_u")
    fam_a, fam_b = path_family(), e_family()
    ns = (1, 3) if parity == "odd" else (0, 2)
    counts_a = {n: hom_pathlike(fam_a, q, n) for n in ns}
    counts_b = {n: hom_pathlike(fam_b, q, n) for n in ns}

    # In lambda^2, mu^2 the two scope terms form a 2x2 Vandermonde system.
    nodes = [lam**2, mu**2]

    def coefficients(counts: dict[int, int]) -> tuple[RationalInterval, RationalInterval]:
        c, d = vandermonde_coefficients(nodes, [counts[n] for n in ns])
        if parity == "odd":
            c, d = c / lam, d / mu
        return c, d

    c_a, d_a = coefficients(counts_a)
    c_b, d_b = coefficients(counts_b)
    D = abs(d_a).hi + abs(d_b).hi
    if c_a.lo > c_b.hi:
        conclusion, gap = A_WINS, c_a.lo - c_b.hi
    elif c_b.lo > c_a.hi:
        conclusion, gap = B_WINS, c_b.lo - c_a.hi
    else:
        conclusion, gap = INCONCLUSIVE, None
    threshold = None
    if gap is not None:
        threshold = _least_threshold(gap, lam.lo, D, mu.hi, ns[0], 2)
        if threshold is None:
            conclusion = INCONCLUSIVE
    return Certificate(
        method=PARITY,
        target=_target_doc(x, y, z, False, q),
        family_a=_family_doc(fam_a),
        family_b=_family_doc(fam_b),
        scope=parity,
        char_poly=[format_rational(c) for c in f.coeffs],
        eigen_enclosures=[lam, mu],
        counts_a=counts_a,
        counts_b=counts_b,
        a_lower=c_a.lo,
        b_upper=c_b.hi,
        conclusion=conclusion,
        threshold_n=threshold,
        evidence={
            "coefficients": {"c_a": _iv(c_a), "d_a": _iv(d_a), "c_b": _iv(c_b), "d_b": _iv(d_b)},
            "gap": _q(gap),
            "subdominant_bound": _q(D),
        },
    )


def certify_parity(x: int, y: int, z: int, parity: str = "odd", width: Number = DEFAULT_WIDTH) -> Certificate:
    """Compare P_{n+4} with E_{n+4} over T(x,y,z) for n of one parity.

    Brackets are tightened by halving the isolation width until the
    coefficient enclosures separate, or the width cap is reached.
    """
    width = Fraction(width)
    while True:
        _f, lam, mu = _parity_structure(x, y, z, width)
        cert = assemble_parity(x, y, z, parity, lam, mu)
        if cert.conclusive or width / 2 < WIDTH_CAP:
            cert.evidence["width"] = format_rational(width)
            return cert
        width /= 2


# -- dominant-root certificates ---------------------------------------------

def _dominant_order(roots: Sequence[RationalInterval]) -> list[RationalInterval] | None:
    """Dominant positive root first, the rest descending; None if not yet separated."""
    top = max(roots, key=lambda I: I.hi)
    others = [I for I in roots if I is not top]
    if top.lo <= 0 or any(abs(I).hi >= top.lo for I in others):
        return None
    return [top] + sorted(others, key=lambda I: -I.lo)


def _dominant_structure(f: Poly, width: Fraction) -> list[RationalInterval] | None:
    k = f.degree
    if k != 4:
        raise StructureError(f"dominant-root certification handles quartics, got degree {k}")
    sq = squarefree_part(f)
    if sq.degree != k:
        raise StructureError("characteristic polynomial has repeated roots")
    roots = isolate_real_roots(f, width)
    if len(roots) != k:
        raise StructureError(f"expected {k} real roots, found {len(roots)}")
    top, bottom = roots[-1], roots[0]
    mirrored = poly_gcd(sq, sq.reflected())
    if mirrored.degree >= 1 and closed_root_count(mirrored, top) == 1 and closed_root_count(mirrored, bottom) == 1:
        raise StructureError(
            f"roots in {top} and {bottom} are negatives of each other; no unique dominant root"
        )
    if abs(bottom).lo > top.hi:
        raise StructureError(f"the root in {bottom} dominates in magnitude but is negative")
    return _dominant_order(roots)


def assemble_dominant(x: int, y: int, z: int, looped: bool, ordered: Sequence[RationalInterval]) -> Certificate:
    """Build the all-n certificate from root enclosures (dominant one first)."""
    q = structural_orbits_T(x, y, z, looped)
    f = char_poly(q.quotient)
    ordered = list(ordered)
    _check_enclosures(f, ordered)
    if _dominant_order(ordered) != ordered:
        raise StructureError("enclosures do not exhibit a unique positive dominant root first")
    lam1 = ordered[0]
    fam_a, fam_b = path_family(), e_family()
    ns = range(4)
    p = {n: hom_pathlike(fam_a, q, n) for n in ns}
    e = {n: hom_pathlike(fam_b, q, n) for n in ns}
    delta = [p[n] - e[n] for n in ns]

    # c_1 - c'_1 times lambda_1^2 prod_{j>1}(lambda_1 - lambda_j) is this cubic in lambda_1
    a0, a1, _a2, a3 = f.coeffs[:4]
    h = Poly([
        -delta[1] * a0,
        -(delta[0] * a0 + delta[1] * a1),
        delta[3] + a3 * delta[2],
        delta[2],
    ])
    cubic_sign = 0
    roots_in_enclosure = None
    endpoint_value = None
    if not h.is_zero():
        roots_in_enclosure = closed_root_count(h, lam1)
        endpoint_value = h(lam1.hi)
        if roots_in_enclosure == 0:
            cubic_sign = 1 if endpoint_value > 0 else -1
    disc = discriminant(h) if h.degree == 3 else None

    c_a = vandermonde_coefficients(ordered, [p[n] for n in ns])
    c_b = vandermonde_coefficients(ordered, [e[n] for n in ns])
    c_diff = vandermonde_coefficients(ordered, delta)
    if c_diff[0].lo > 0:
        vandermonde_sign, gap = 1, c_diff[0].lo
    elif c_diff[0].hi < 0:
        vandermonde_sign, gap = -1, -c_diff[0].hi
    else:
        vandermonde_sign, gap = 0, None
    if cubic_sign and vandermonde_sign and cubic_sign != vandermonde_sign:
        raise RuntimeError("cubic-sign and Vandermonde routes disagree; enclosures are unsound")

    D = sum((abs(c).hi for c in c_diff[1:]), Fraction(0))
    rho = max(abs(I).hi for I in ordered[1:])
    threshold = None
    conclusion = INCONCLUSIVE
    if cubic_sign and vandermonde_sign:
        threshold = _least_threshold(gap, lam1.lo, D, rho, 0, 1)
        if threshold is not None:
            conclusion = A_WINS if cubic_sign > 0 else B_WINS

    return Certificate(
        method=DOMINANT,
        target=_target_doc(x, y, z, looped, q),
        family_a=_family_doc(fam_a),
        family_b=_family_doc(fam_b),
        scope="all",
        char_poly=[format_rational(c) for c in f.coeffs],
        eigen_enclosures=ordered,
        counts_a=p,
        counts_b=e,
        a_lower=c_a[0].lo,
        b_upper=c_b[0].hi,
        conclusion=conclusion,
        threshold_n=threshold,
        evidence={
            "count_differences": [str(d) for d in delta],
            "cubic": [format_rational(c) for c in h.coeffs],
            "cubic_discriminant": _q(disc),
            "cubic_roots_in_enclosure": roots_in_enclosure,
            "cubic_at_upper_endpoint": _q(endpoint_value),
            "cubic_sign": cubic_sign,
            "coefficients_a": [_iv(c) for c in c_a],
            "coefficients_b": [_iv(c) for c in c_b],
            "coefficient_differences": [_iv(c) for c in c_diff],
            "gap": _q(gap),
            "subdominant_bound": _q(D),
            "subdominant_radius": _q(rho),
        },
    )


def certify_dominant(x: int, y: int, z: int, looped: bool = True, width: Number = DEFAULT_WIDTH) -> Certificate:
    """Compare P_{n+4} with E_{n+4} over T(x,y,z) (looped or not) for all large n."""
    width = Fraction(width)
    f = char_poly(structural_orbits_T(x, y, z, looped).quotient)
    last = None
    while True:
        ordered = _dominant_structure(f, width)
        if ordered is not None:
            last = assemble_dominant(x, y, z, looped, ordered)
            if last.conclusive:
                break
        if width / 2 < WIDTH_CAP:
            break
        width /= 2
    if last is None:
        raise StructureError(f"could not separate a dominant root at width {format_rational(width)}")
    last.evidence["width"] = format_rational(width)
    return last


# -- replay and finite comparison -------------------------------------------

def _holds_at(doc: dict, n: int) -> bool:
    ev = doc["evidence"]
    gap = parse_rational(ev["gap"])
    D = parse_rational(ev["subdominant_bound"])
    encl = [RationalInterval.from_pair(p) for p in doc["eigen_enclosures"]]
    if doc["method"] == PARITY:
        big, small = encl[0].lo, encl[1].hi
    else:
        big, small = encl[0].lo, parse_rational(ev["subdominant_radius"])
    return _dominates(gap, Fraction(big), D, Fraction(small), n)


def replay(cert: Certificate | dict | str) -> bool:
    """Re-verify a certificate from its stored fields; True iff every check holds."""
    if isinstance(cert, str):
        cert = Certificate.loads(cert)
    elif isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    doc = cert.to_dict()
    t = doc["target"]
    try:
        x, y, z, looped = int(t["x"]), int(t["y"]), int(t["z"]), bool(t["looped"])
        if cert.method == PARITY:
            lam, mu = cert.eigen_enclosures
            rebuilt = assemble_parity(x, y, z, cert.scope, lam, mu)
        elif cert.method == DOMINANT:
            rebuilt = assemble_dominant(x, y, z, looped, cert.eigen_enclosures)
        else:
            return False
    except (StructureError, ValueError, ZeroDivisionError, RuntimeError):
        return False
    if "width" in doc["evidence"]:
        rebuilt.evidence["width"] = doc["evidence"]["width"]
    if rebuilt.to_dict() != doc:
        return False
    if not cert.conclusive:
        return True
    if cert.method == PARITY:
        c = cert.evidence["coefficients"]
        winner, loser = ("c_a", "c_b") if cert.conclusion == A_WINS else ("c_b", "c_a")
        if not parse_rational(c[winner][0]) > parse_rational(c[loser][1]):
            return False
    N = cert.threshold_n
    step = 2 if cert.method == PARITY else 1
    start = min(cert.counts_a)
    if N is None or not _holds_at(doc, N):
        return False
    return N == start or not _holds_at(doc, N - step)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    vertices: int
    count_a: int
    count_b: int

    @property
    def difference(self) -> int:
        return self.count_a - self.count_b

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "vertices": self.vertices,
            "count_a": str(self.count_a),
            "count_b": str(self.count_b),
            "difference": str(self.difference),
        }


def exact_compare(
    fam_a: PathLikeFamily, fam_b: PathLikeFamily, q: OrbitQuotient, n_list: Sequence[int]
) -> list[ComparisonRow]:
    if fam_a.seed.vertex_count != fam_b.seed.vertex_count:
        raise ValueError("families must have equal vertex counts at each index")
    m = fam_a.seed.vertex_count
    return [
        ComparisonRow(n, m + n, hom_pathlike(fam_a, q, n), hom_pathlike(fam_b, q, n))
        for n in n_list
    ]
