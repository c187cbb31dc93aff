"""Counting series derived from Kac polynomials: Lusztig nilpotent varieties,
moment-map fibers, Nakajima quiver varieties and the stratification
identities relating them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .hua import FLAVORS, KacTable, kac_table, r_series
from .quiver import DimVector, Quiver, subquiver
from .symcore import (
    ONE,
    ZERO,
    IntPoly,
    MultiSeries,
    NotAPolynomialError,
    PoleError,
    RatFun,
    box_keys,
    pleth_exp,
    rf_as_polynomial,
    rf_eval,
    series_inverse,
    series_mul,
    series_substitute_inverse,
)

VARIANTS = ("M", "M0", "M1", "L", "L0", "L1")
_VARIANT_FLAVOR = {"M": "plain", "M0": "nil0", "M1": "nil1", "L": "plain", "L0": "nil0", "L1": "nil1"}


@dataclass
class CountSeries:
    quiver: Quiver
    kind: str
    box: DimVector
    series: MultiSeries

    def coefficient(self, v: Sequence[int]) -> RatFun:
        return self.series[tuple(v)]

    def evaluate(self, v: Sequence[int], q) -> Fraction:
        q = Fraction(q)
        if q == 1:
            raise PoleError("counting series are only regular away from t = 1")
        return rf_eval(self.coefficient(v), q)


def group_order(v: Sequence[int], q) -> int | Fraction:
    """|G_v(F_q)| = prod_i |GL_{v_i}(F_q)|."""
    total = 1
    for n in v:
        for k in range(n):
            total *= q ** n - q ** k
    return total


@lru_cache(maxsize=None)
def _table(Q: Quiver, flavor: str, box: DimVector) -> KacTable:
    return kac_table(Q, flavor, box)


def _scaled_exp(Q: Quiver, flavor: str, box: DimVector, scale: RatFun, invert: bool, keep=None) -> MultiSeries:
    table = _table(Q, flavor, box)
    terms = {}
    for v, p in table.polynomials.items():
        if keep is not None and not keep(v):
            continue
        a = RatFun(p)
        if invert:
            a = a.invert_variable()
        terms[v] = a * scale
    return pleth_exp(MultiSeries(box, terms))


def _one_minus_tinv_inverse() -> RatFun:
    # 1/(1 - t^{-1}) = t/(t - 1)
    return RatFun([0, 1], [-1, 1])


def p_series(Q: Quiver, flavor: str, box: Sequence[int]) -> CountSeries:
    box = tuple(box)
    s = _scaled_exp(Q, flavor, box, _one_minus_tinv_inverse(), invert=True)
    return CountSeries(Q, f"P_{flavor}", box, s)


def mu_fiber_series(Q: Quiver, box: Sequence[int]) -> CountSeries:
    box = tuple(box)
    s = _scaled_exp(Q, "plain", box, RatFun([0, 1], [-1, 1]), invert=False)
    return CountSeries(Q, "mu_fiber", box, s)


@dataclass
class IdentityReport:
    name: str
    failures: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def reciprocal_identity_check(Q: Quiver, flavor: str, box: Sequence[int]) -> IdentityReport:
    box = tuple(box)
    P = p_series(Q, flavor, box).series
    r = series_substitute_inverse(r_series(Q, (0,) * Q.n, flavor, box))
    prod = series_mul(P, r)
    one = MultiSeries.one(box)
    report = IdentityReport(f"reciprocal[{flavor}]")
    for v in box_keys(box):
        if prod[v] != one[v]:
            report.failures[v] = prod[v]
    return report


def _unpack_count(coeff: RatFun, Q: Quiver, v: DimVector, q: Fraction) -> Fraction:
    return rf_eval(coeff, q) * group_order(v, q) * q ** (-Q.euler(v, v))


def predicted_lambda_count(Q: Quiver, v: Sequence[int], q, flavor: str = "plain") -> Fraction:
    """|Lambda^flavor_v(F_q)| as predicted by the P-series; returned as a
    Fraction so that a non-integer (a bug or a small-field effect) is visible."""
    v = tuple(v)
    q = Fraction(q)
    if q <= 1:
        raise ValueError("q must exceed 1")
    return _unpack_count(p_series(Q, flavor, v).coefficient(v), Q, v, q)


def predicted_mu_fiber_count(Q: Quiver, v: Sequence[int], q) -> Fraction:
    v = tuple(v)
    q = Fraction(q)
    return _unpack_count(mu_fiber_series(Q, v).coefficient(v), Q, v, q)


# ---------------------------------------------------------------------------
# Grassmannians and the q-binomial identity


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int) -> IntPoly:
    if k < 0 or k > n:
        return IntPoly()
    num = RatFun(1)
    for j in range(k):
        num = num * RatFun([1] + [0] * (n - j - 1) + [-1]) / RatFun([1] + [0] * j + [-1])
    return rf_as_polynomial(num)


def gauss_grassmannian(w: Sequence[int], wp: Sequence[int]) -> RatFun:
    if len(w) != len(wp) or any(b > a or b < 0 for a, b in zip(w, wp)):
        raise ValueError(f"{list(wp)} is not <= {list(w)}")
    acc = ONE
    for a, b in zip(w, wp):
        acc = acc * RatFun(gaussian_binomial(a, b))
    return acc


def qbinomial_alternating_sum(w: int, a: int) -> RatFun:
    total = ZERO
    for k in range(w + 1):
        total = total + RatFun((-1) ** k) * RatFun.t_power(k * (k - 1) // 2 - a * k) * RatFun(gaussian_binomial(w, k))
    return total


def qbinomial_identity_holds(w: int, a: int) -> bool:
    """The alternating sum vanishes for a < w and equals prod (1 - t^-k) for a = w."""
    lhs = qbinomial_alternating_sum(w, a)
    if a < w:
        return lhs.is_zero()
    if a == w:
        rhs = ONE
        for k in range(1, w + 1):
            rhs = rhs * (ONE - RatFun.t_power(-k))
        return lhs == rhs
    raise ValueError("identity is stated for 0 <= a <= w")


def u_weight(w: Sequence[int], wp: Sequence[int]) -> int:
    return sum((a - b) * (a - b - 1) // 2 for a, b in zip(w, wp))


# ---------------------------------------------------------------------------
# Nakajima varieties


def half_dimension(Q: Quiver, v: Sequence[int], w: Sequence[int]) -> int:
    vv = Q.sym(v, v)
    if vv % 2:
        raise ArithmeticError(f"(v,v) = {vv} is odd")
    return sum(a * b for a, b in zip(v, w)) - vv // 2


@dataclass(frozen=True)
class NakajimaPoly:
    v: DimVector
    w: DimVector
    variant: str
    polynomial: IntPoly
    half_dim: int


class PurityError(ValueError):
    pass


@lru_cache(maxsize=None)
def _nakajima_ratio(Q: Quiver, w: DimVector, flavor: str, box: DimVector) -> MultiSeries:
    num = r_series(Q, w, flavor, box)
    den = r_series(Q, (0,) * Q.n, flavor, box)
    return series_mul(num, series_inverse(den))


def nakajima_poly(Q: Quiver, v: Sequence[int], w: Sequence[int], variant: str) -> NakajimaPoly:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    v, w = tuple(v), tuple(w)
    d = half_dimension(Q, v, w)
    coeff = _nakajima_ratio(Q, w, _VARIANT_FLAVOR[variant], v)[v]
    if variant.startswith("L"):
        coeff = coeff.invert_variable()
    val = coeff * RatFun.t_power(d)
    try:
        poly = rf_as_polynomial(val)
    except NotAPolynomialError as exc:
        raise PurityError(f"{variant}(v={list(v)}, w={list(w)}) is not a polynomial: {val}") from exc
    if any(c < 0 for c in poly.coefficients):
        raise PurityError(f"{variant}(v={list(v)}, w={list(w)}) has a negative coefficient: {poly}")
    return NakajimaPoly(v, w, variant, poly, d)


def nakajima_duality_holds(Q: Quiver, v: Sequence[int], w: Sequence[int], flavor_suffix: str = "") -> bool:
    """P(L)(t) == t^{2d} P(M)(t^{-1})."""
    M = nakajima_poly(Q, v, w, "M" + flavor_suffix)
    L = nakajima_poly(Q, v, w, "L" + flavor_suffix)
    dual = RatFun(M.polynomial).invert_variable() * RatFun.t_power(2 * M.half_dim)
    return RatFun(L.polynomial) == dual


def _leq_vectors(w: DimVector):
    return itertools.product(*(range(x + 1) for x in w))


def l_top_stratum_count(Q: Quiver, v: Sequence[int], w: Sequence[int], q) -> Fraction:
    """|L(v,w)_w(F_q)| by Moebius inversion over w'' <= w."""
    q = Fraction(q)
    v, w = tuple(v), tuple(w)
    total = Fraction(0)
    for wpp in _leq_vectors(w):
        sign = (-1) ** (sum(w) - sum(wpp))
        L = nakajima_poly(Q, v, wpp, "L").polynomial(q)
        total += sign * q ** u_weight(w, wpp) * rf_eval(gauss_grassmannian(w, wpp), q) * L
    return total


def l_strata_count(Q: Quiver, v: Sequence[int], w: Sequence[int], wp: Sequence[int], q) -> Fraction:
    """|L(v,w)_{w'}(F_q)| = |Gr^w_{w'}| |L(v,w')_{w'}|."""
    q = Fraction(q)
    return rf_eval(gauss_grassmannian(w, wp), q) * l_top_stratum_count(Q, v, wp, q)


def lambda_count_by_inversion(Q: Quiver, v: Sequence[int], q) -> Fraction:
    """|Lambda_v(F_q)| as the top stratum of L(v, v)."""
    return l_top_stratum_count(Q, v, v, q)


# ---------------------------------------------------------------------------
# restriction to a full subquiver


def _embed(series_terms: dict, J_positions: list[int], n: int) -> dict:
    out = {}
    for v, c in series_terms.items():
        full = [0] * n
        for pos, x in zip(J_positions, v):
            full[pos] = x
        out[tuple(full)] = c
    return out


def crystal_factorization_check(Q: Quiver, J: Sequence[str], box: Sequence[int]) -> IdentityReport:
    box = tuple(box)
    J = [x for x in Q.vertices if x in set(map(str, J))]
    QJ = subquiver(Q, J)
    pos = [Q.index(x) for x in J]
    report = IdentityReport(f"factorization[J={J}]")
    full = _table(Q, "nil0", box)
    if pos:
        sub_box = tuple(box[p] for p in pos)
        sub = _table(QJ, "nil0", sub_box)
        for u, p in sub.polynomials.items():
            v = [0] * Q.n
            for k, x in zip(pos, u):
                v[k] = x
            if full[tuple(v)] != p:
                report.failures[("restriction", tuple(v))] = (full[tuple(v)], p)
        lam_J = MultiSeries(box, _embed(p_series(QJ, "nil0", sub_box).series.terms, pos, Q.n))
    else:
        lam_J = MultiSeries.one(box)
    outside = set(range(Q.n)) - set(pos)
    lam_rest = _scaled_exp(
        Q, "nil0", box, _one_minus_tinv_inverse(), invert=True,
        keep=lambda v: any(v[k] for k in outside),
    )
    lhs = p_series(Q, "nil0", box).series
    rhs = series_mul(lam_J, lam_rest)
    for v in box_keys(box):
        if lhs[v] != rhs[v]:
            report.failures[("factorization", v)] = (lhs[v], rhs[v])
    return report


# ---------------------------------------------------------------------------


def zeta_series(A: IntPoly, q, depth: int) -> list[Fraction]:
    """Coefficients of exp(sum_{l<=depth} A(q^l) u^l / l) up to u^depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    q = Fraction(q)
    g = [Fraction(0)] + [Fraction(A(q ** l)) / l for l in range(1, depth + 1)]
    E = [Fraction(1)]
    for n in range(1, depth + 1):
        E.append(sum(k * g[k] * E[n - k] for k in range(1, n + 1)) / n)
    return E
