"""Characters of the generalized Kac-Moody algebra attached to a quiver,
root multiplicities by PBW peel-off, and necklace polynomials.

Characters are written in z^a = e^{-a}, normalized by the highest weight, so
every series lives on N^I with integer coefficients. A weight lambda enters
only through its pairings (i, lambda)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .hua import kac_table
from .quiver import DimVector, Quiver
from .symcore import box_keys, mobius

IntSeries = dict[DimVector, int]


@dataclass
class CharSeries:
    quiver: Quiver
    box: DimVector
    terms: IntSeries = field(default_factory=dict)

    def __getitem__(self, v: Sequence[int]) -> int:
        return self.terms.get(tuple(v), 0)

    def dense(self) -> list[tuple[DimVector, int]]:
        return [(v, self[v]) for v in box_keys(self.box)]


@dataclass(frozen=True)
class OrthogonalSum:
    """The value s = -sum_k l_k i_k, stored as the total l at each vertex used."""

    totals: tuple[tuple[int, int], ...]  # (vertex position, total), sorted

    def vector(self, n: int) -> DimVector:
        out = [0] * n
        for i, c in self.totals:
            out[i] = c
        return tuple(out)


def _leq(v, b) -> bool:
    return all(x <= y for x, y in zip(v, b))


def sigma_enum(Q: Quiver, pairings: Sequence[int], box: Sequence[int]) -> Iterator[OrthogonalSum]:
    """All values of sums over pairwise orthogonal imaginary vertices
    perpendicular to lambda, with totals inside the box (empty sum first)."""
    n = Q.n
    cand = [i for i in range(n) if Q.is_imaginary(i) and pairings[i] == 0 and box[i] > 0]
    for r in range(len(cand) + 1):
        for subset in itertools.combinations(cand, r):
            if any(Q.sym(Q.unit(a), Q.unit(b)) != 0 for a, b in itertools.combinations(subset, 2)):
                continue
            for totals in itertools.product(*(range(1, box[i] + 1) for i in subset)):
                yield OrthogonalSum(tuple(zip(subset, totals)))


@lru_cache(maxsize=None)
def euler_function_coefficient(l: int) -> int:
    """phi_l with prod_{k>=1} (1 - q^k) = sum_l phi_l q^l (pentagonal numbers)."""
    if l < 0:
        return 0
    k = 0
    while True:
        for m in (k, -k) if k else (0,):
            if (3 * m * m - m) // 2 == l:
                return -1 if m % 2 else 1
        k += 1
        if (3 * k * k - k) // 2 > l and (3 * k * k + k) // 2 > l:
            return 0


def epsilon_weight(Q: Quiver, s: OrthogonalSum) -> int:
    sign = 1
    for i, c in s.totals:
        if Q.is_isotropic(i):
            sign *= euler_function_coefficient(c)
        else:
            sign = -sign
    return sign


def _reflect(Q: Quiver, j: int, beta: Sequence[int]) -> DimVector:
    c = Q.sym(beta, Q.unit(j))
    return tuple(b - (c if k == j else 0) for k, b in enumerate(beta))


def _weyl_elements(Q: Quiver, pairings: Sequence[int], box: DimVector):
    """(length, D(w) = (lambda+rho) - w(lambda+rho), columns of w) for every w
    with D(w) inside the box."""
    n = Q.n
    real = [j for j in range(n) if Q.is_real(j)]
    start = (tuple(0 for _ in range(n)), tuple(Q.unit(k) for k in range(n)))
    found = {start[0]: (0, start[1])}
    frontier = [start]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for D, cols in frontier:
            for j in real:
                c = pairings[j] + 1 - Q.sym(D, Q.unit(j))
                if c <= 0:
                    continue
                D2 = tuple(d + (c if k == j else 0) for k, d in enumerate(D))
                if not _leq(D2, box) or D2 in found:
                    continue
                cols2 = tuple(_reflect(Q, j, col) for col in cols)
                found[D2] = (length, cols2)
                nxt.append((D2, cols2))
        frontier = nxt
    for D in sorted(found, key=lambda d: (sum(d), d)):
        yield found[D][0], D, found[D][1]


def weyl_denominator_series(Q: Quiver, pairings: Sequence[int], box: Sequence[int]) -> CharSeries:
    box = tuple(box)
    pairings = tuple(pairings)
    if any(x < 0 for x in pairings):
        raise ValueError("lambda must be dominant")
    sig = [(s.vector(Q.n), epsilon_weight(Q, s)) for s in sigma_enum(Q, pairings, box)]
    terms: IntSeries = {}
    for length, D, cols in _weyl_elements(Q, pairings, box):
        sign = -1 if length % 2 else 1
        for c, eps in sig:
            wc = [sum(cols[k][r] * c[k] for k in range(Q.n)) for r in range(Q.n)]
            if min(wc, default=0) < 0:
                raise ArithmeticError("reflected imaginary sum left the positive cone")
            key = tuple(d + x for d, x in zip(D, wc))
            if _leq(key, box):
                terms[key] = terms.get(key, 0) + sign * eps
    return CharSeries(Q, box, {k: x for k, x in terms.items() if x})


def _int_mul(f: IntSeries, g: IntSeries, box: DimVector) -> IntSeries:
    out: IntSeries = {}
    for u, a in f.items():
        for w, b in g.items():
            v = tuple(x + y for x, y in zip(u, w))
            if _leq(v, box):
                out[v] = out.get(v, 0) + a * b
    return {k: x for k, x in out.items() if x}


def _int_inverse(f: IntSeries, box: DimVector) -> IntSeries:
    zero = tuple(0 for _ in box)
    if f.get(zero) not in (1, -1):
        raise ZeroDivisionError("character series needs constant term +-1 to be inverted over Z")
    c0 = f[zero]
    g: IntSeries = {}
    for v in box_keys(box):
        if v == zero:
            g[v] = c0
            continue
        acc = sum(a * g.get(tuple(x - y for x, y in zip(v, u)), 0) for u, a in f.items() if u != zero and _leq(u, v))
        if acc:
            g[v] = -acc * c0
    return g


def ch_uq_minus(Q: Quiver, box: Sequence[int]) -> CharSeries:
    box = tuple(box)
    den = weyl_denominator_series(Q, (0,) * Q.n, box)
    return CharSeries(Q, box, _int_inverse(den.terms, box))


def ch_highest_weight(Q: Quiver, pairings: Sequence[int], box: Sequence[int]) -> CharSeries:
    box = tuple(box)
    num = weyl_denominator_series(Q, pairings, box)
    return CharSeries(Q, box, _int_mul(num.terms, ch_uq_minus(Q, box).terms, box))


class MultiplicityError(ArithmeticError):
    pass


def _binomial_factor(alpha: DimVector, m: int, box: DimVector) -> IntSeries:
    """(1 - z^alpha)^m truncated to the box."""
    out: IntSeries = {}
    k = 0
    while True:
        v = tuple(k * a for a in alpha)
        if not _leq(v, box) or k > m:
            break
        out[v] = (-1) ** k * comb(m, k)
        k += 1
    return out


def root_multiplicities(Q: Quiver, box: Sequence[int]) -> dict[DimVector, int]:
    """dim g[alpha] from Ch(U^-) = prod_alpha (1 - z^alpha)^{-dim g[alpha]}."""
    box = tuple(box)
    rest = dict(ch_uq_minus(Q, box).terms)
    mult: dict[DimVector, int] = {}
    for alpha in box_keys(box):
        if not any(alpha):
            continue
        m = rest.get(alpha, 0)
        if m < 0:
            raise MultiplicityError(f"negative multiplicity {m} at {list(alpha)}")
        mult[alpha] = m
        if m:
            rest = _int_mul(rest, _binomial_factor(alpha, m, box), box)
    return mult


def necklace(k: int, n: int) -> int:
    if k < 1 or n < 1:
        raise ValueError("necklace needs k, n >= 1")
    total = sum(mobius(n // d) * k ** d for d in range(1, n + 1) if n % d == 0)
    if total % n:
        raise ArithmeticError("necklace count is not an integer")
    return total // n


@dataclass
class ConstantTermReport:
    multiplicities: dict[DimVector, int]
    constant_terms: dict[DimVector, int]

    @property
    def mismatches(self) -> list[DimVector]:
        return [v for v in self.multiplicities if self.multiplicities[v] != self.constant_terms.get(v, 0)]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def kac_constant_term_check(Q: Quiver, box: Sequence[int]) -> ConstantTermReport:
    box = tuple(box)
    mult = root_multiplicities(Q, box)
    table = kac_table(Q, "nil1", box)
    consts = {v: (p.coefficients[0] if not p.is_zero() else 0) for v, p in table.polynomials.items()}
    return ConstantTermReport(mult, consts)
