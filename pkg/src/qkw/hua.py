"""Hua-type generating functions and extraction of Kac polynomials.

The three flavors are ``plain`` (all representations), ``nil1``
(1-nilpotent: loops at each vertex nilpotent) and ``nil0`` (nilpotent)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .quiver import DimVector, Quiver
from .symcore import (
    ONE,
    ZERO,
    IntPoly,
    MultiSeries,
    NotAPolynomialError,
    RatFun,
    box_keys,
    pleth_log,
    rf_as_polynomial,
    rf_eval,
)

FLAVORS = ("plain", "nil1", "nil0")

# Readings of the weight b: both square coordinates; "transposed" pairs
# <v^(l2), v^(l1)> for l1 <= l2 (the order produced by the nilpotent
# stratification), "displayed" pairs <v^(l1), v^(l2)>. They agree for
# quivers with a symmetric Euler form.
B_READINGS = ("transposed", "displayed")


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


# ---------------------------------------------------------------------------
# partitions


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[tuple[int, ...], ...]:
    """Partitions of n in reverse lexicographic order, e.g. 3 -> (3,), (2,1), (1,1,1)."""
    out: list[tuple[int, ...]] = []

    def rec(rest: int, cap: int, acc: tuple[int, ...]):
        if rest == 0:
            out.append(acc)
            return
        for part in range(min(rest, cap), 0, -1):
            rec(rest - part, part, acc + (part,))

    rec(n, n, ())
    return tuple(out)


@dataclass(frozen=True)
class IPartition:
    """One partition per vertex."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for p in self.parts:
            if any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
                raise ValueError(f"{p} is not a partition")

    @classmethod
    def empty(cls, n: int) -> "IPartition":
        return cls(tuple(() for _ in range(n)))

    @property
    def size(self) -> DimVector:
        return tuple(sum(p) for p in self.parts)

    @property
    def length(self) -> int:
        return max((len(p) for p in self.parts), default=0)

    def is_empty(self) -> bool:
        return all(not p for p in self.parts)

    def row(self, k: int) -> DimVector:
        """nu_k (1-based), zero beyond the last part."""
        return tuple(p[k - 1] if k <= len(p) else 0 for p in self.parts)

    def __str__(self) -> str:
        return "(" + ", ".join(str(list(p)) for p in self.parts) + ")"


@dataclass(frozen=True)
class IPartitionSeq:
    terms: tuple[IPartition, ...]

    @property
    def size(self) -> DimVector:
        if not self.terms:
            raise ValueError("size of the empty sequence needs the vertex count")
        return tuple(map(sum, zip(*(nu.size for nu in self.terms))))

    @property
    def length(self) -> int:
        return max((nu.length for nu in self.terms), default=0)

    def row(self, k: int, n: int) -> DimVector:
        """nu_k = sum_l nu^(l)_k."""
        acc = [0] * n
        for nu in self.terms:
            for i, x in enumerate(nu.row(k)):
                acc[i] += x
        return tuple(acc)

    def v(self, l: int, k: int, n: int) -> DimVector:
        """v^(l)_k = nu^(l)_k - nu^(l)_{k+1} (l, k 1-based); zero for l past the end."""
        if l > len(self.terms):
            return (0,) * n
        nu = self.terms[l - 1]
        return tuple(a - b for a, b in zip(nu.row(k), nu.row(k + 1)))


def enum_ipartitions(box: Sequence[int]) -> Iterator[IPartition]:
    per_vertex = [
        [p for m in range(b + 1) for p in partitions_of(m)] for b in box
    ]
    for combo in itertools.product(*per_vertex):
        yield IPartition(tuple(combo))


def _nonzero_ipartitions(box: Sequence[int]) -> list[IPartition]:
    return [nu for nu in enum_ipartitions(box) if not nu.is_empty()]


def enum_ipartition_seqs(box: Sequence[int]) -> Iterator[IPartitionSeq]:
    """Sequences of nonzero I-partitions with total size <= box.

    Sequences with an empty term followed by a nonzero one contribute zero to
    every formula using them, so only gap-free sequences are listed."""
    box = tuple(box)

    def rec(room: tuple[int, ...], acc: tuple[IPartition, ...]):
        yield IPartitionSeq(acc)
        for nu in _nonzero_ipartitions(room):
            yield from rec(tuple(r - s for r, s in zip(room, nu.size)), acc + (nu,))

    yield from rec(box, ())


# ---------------------------------------------------------------------------
# elementary factors


@lru_cache(maxsize=None)
def inf_pochhammer(n: int) -> RatFun:
    if n < 0:
        raise ValueError("negative Pochhammer argument; callers must guard")
    if n == 0:
        return ONE
    return inf_pochhammer(n - 1) * RatFun(1, [1] + [0] * (n - 1) + [-1])


def inf_pochhammer_vec(n: Sequence[int]) -> RatFun:
    acc = ONE
    for x in n:
        if x < 0:
            return ZERO
        acc = acc * inf_pochhammer(x)
    return acc


def _compositions(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def h_loop(n: int, g: int, printed: bool = False) -> RatFun:
    """Volume factor for g-tuples of nilpotent n x n matrices.

    With ``printed=True`` the leading factor [oo, e_1] is left out, which is
    the form that fails the one-loop check vol = 1/(q-1)."""
    if n < 0 or g < 0:
        raise ValueError("h_loop needs nonnegative arguments")
    if g == 0:
        return inf_pochhammer(n)
    total = ZERO
    for e in _compositions(n):
        s = len(e)
        expo = (g - 1) * sum(e[a] * e[b] for a in range(s) for b in range(a + 1, s)) + g * sum(x * x for x in e)
        term = RatFun.t_power(expo)
        if not printed and s:
            term = term * inf_pochhammer(e[0])
        dead = False
        for k in range(s):
            nxt = e[k + 1] if k + 1 < s else 0
            if g * e[k] - nxt < 0:
                dead = True
                break
            term = term * inf_pochhammer(g * e[k] - nxt) * inf_pochhammer(nxt) / inf_pochhammer(g * e[k])
        if not dead:
            total = total + term
    return total


def h_vec(Q: Quiver, n: Sequence[int], printed: bool = False) -> RatFun:
    acc = ONE
    for i, x in enumerate(n):
        if x < 0:
            return ZERO
        acc = acc * h_loop(x, Q.loops(i), printed)
    return acc


def h_head(Q: Quiver, v: Sequence[int], w: Sequence[int]) -> RatFun:
    acc = ONE
    for i in range(Q.n):
        s = Q.in_degree(v, i)
        if w[i] > s:
            return ZERO
        if w[i]:
            acc = acc * inf_pochhammer(s - w[i]) / inf_pochhammer(s)
    return acc


# ---------------------------------------------------------------------------
# stratification weights


def _weight_o(Q: Quiver, vs: Sequence[DimVector]) -> int:
    s = len(vs)
    total = -sum((i) * Q.euler(vs[i], vs[i]) for i in range(s))
    for i in range(s):
        for j in range(i + 1, s):
            total -= (i + 1) * Q.sym(vs[i], vs[j])
    return total


def _weight_a(Q: Quiver, vs: Sequence[DimVector]) -> int:
    s = len(vs)
    total = sum(Q.euler(vs[k], vs[l]) for k in range(s) for l in range(k + 1, s))
    return total + sum(x * x for v in vs for x in v)


def _weight_b(Q: Quiver, seq: IPartitionSeq, reading: str = "transposed") -> int:
    n = Q.n
    L = len(seq.terms)
    total = 0
    for k in range(1, seq.length + 1):
        nu_k = seq.row(k, n)
        total += Q.euler(nu_k, nu_k)
        vk = [seq.v(l, k, n) for l in range(1, L + 1)]
        for a in range(L):
            for b in range(a, L):
                if reading == "transposed":
                    total -= Q.euler(vk[b], vk[a])
                elif reading == "displayed":
                    total -= Q.euler(vk[a], vk[b])
                else:
                    raise ValueError(f"unknown reading {reading!r}")
        total += sum(x * x for v in vk for x in v)
    return total


def strat_weight(Q: Quiver, kind: str, data, reading: str = "transposed") -> int:
    if kind in ("o", "a"):
        if isinstance(data, IPartitionSeq) or not all(len(v) == Q.n for v in data):
            raise ValueError(f"weight {kind} takes a tuple of dimension vectors")
        return _weight_o(Q, data) if kind == "o" else _weight_a(Q, data)
    if kind == "b":
        if not isinstance(data, IPartitionSeq):
            raise ValueError("weight b takes a sequence of I-partitions")
        return _weight_b(Q, data, reading)
    raise ValueError(f"unknown weight kind {kind!r}")


# ---------------------------------------------------------------------------
# summands


def x_summand(Q: Quiver, flavor: str, data, *, reading: str = "transposed", printed_h: bool = False) -> RatFun:
    _check_flavor(flavor)
    n = Q.n
    if flavor == "nil0":
        if not isinstance(data, IPartitionSeq):
            raise ValueError("nil0 summands take a sequence of I-partitions")
        acc = RatFun.t_power(_weight_b(Q, data, reading))
        L = len(data.terms)
        for l in range(1, L + 1):
            for k in range(1, data.terms[l - 1].length + 1):
                vlk = data.v(l, k, n)
                acc = acc * inf_pochhammer_vec(vlk) * h_head(Q, vlk, data.v(l + 1, k, n))
                if acc.is_zero():
                    return ZERO
        return acc
    if not isinstance(data, IPartition):
        raise ValueError(f"{flavor} summands take an I-partition")
    acc = ONE
    for k in range(1, data.length + 1):
        nu_k = data.row(k)
        diff = tuple(a - b for a, b in zip(nu_k, data.row(k + 1)))
        factor = inf_pochhammer_vec(diff) if flavor == "plain" else h_vec(Q, diff, printed_h)
        acc = acc * RatFun.t_power(Q.euler(nu_k, nu_k)) * factor
    return acc


def _head_ok(Q: Quiver, prev: IPartition, nxt: IPartition) -> bool:
    """All H(v^(l)_k, v^(l+1)_k) factors between consecutive terms are nonzero."""
    for k in range(1, nxt.length + 1):
        v = tuple(a - b for a, b in zip(prev.row(k), prev.row(k + 1)))
        w = tuple(a - b for a, b in zip(nxt.row(k), nxt.row(k + 1)))
        if any(w[i] > Q.in_degree(v, i) for i in range(Q.n)):
            return False
    return True


def _live_seqs(Q: Quiver, box: DimVector) -> Iterator[IPartitionSeq]:
    """Gap-free sequences whose head factors are all nonzero."""

    def rec(room, acc):
        yield IPartitionSeq(acc)
        for nu in _nonzero_ipartitions(room):
            if acc and not _head_ok(Q, acc[-1], nu):
                continue
            yield from rec(tuple(r - s for r, s in zip(room, nu.size)), acc + (nu,))

    yield from rec(box, ())


def r_series(
    Q: Quiver,
    w: Sequence[int],
    flavor: str,
    box: Sequence[int],
    *,
    reading: str = "transposed",
    printed_h: bool = False,
) -> MultiSeries:
    _check_flavor(flavor)
    box = tuple(box)
    if len(box) != Q.n or len(w) != Q.n:
        raise ValueError("box and w must have one entry per vertex")
    terms: dict[DimVector, RatFun] = {}
    if flavor == "nil0":
        items = ((seq, seq.size if seq.terms else (0,) * Q.n, seq.row(1, Q.n)) for seq in _live_seqs(Q, box))
    else:
        items = ((nu, nu.size, nu.row(1)) for nu in enum_ipartitions(box))
    for data, size, first in items:
        x = x_summand(Q, flavor, data, reading=reading, printed_h=printed_h)
        if x.is_zero():
            continue
        val = x.invert_variable() * RatFun.t_power(sum(a * b for a, b in zip(w, first)))
        terms[size] = terms[size] + val if size in terms else val
    return MultiSeries(box, terms)


# ---------------------------------------------------------------------------
# Kac polynomials


class PolynomialRecognitionError(ValueError):
    pass


@dataclass
class KacTable:
    quiver: Quiver
    flavor: str
    box: DimVector
    polynomials: dict[DimVector, IntPoly] = field(default_factory=dict)

    def __getitem__(self, v: Sequence[int]) -> IntPoly:
        return self.polynomials.get(tuple(v), IntPoly())

    def nonzero(self) -> dict[DimVector, IntPoly]:
        return {v: p for v, p in self.polynomials.items() if not p.is_zero()}

    def negative_coefficients(self) -> dict[DimVector, IntPoly]:
        """Entries with a negative coefficient (reported, not rejected)."""
        return {v: p for v, p in self.polynomials.items() if any(c < 0 for c in p.coefficients)}


def kac_series(Q: Quiver, flavor: str, box: Sequence[int], **kw) -> MultiSeries:
    """sum_v A_v(t) z^v as a series of rational functions."""
    r = r_series(Q, (0,) * Q.n, flavor, box, **kw)
    return pleth_log(r).scale(RatFun([-1, 1]))


def kac_table(Q: Quiver, flavor: str, box: Sequence[int], **kw) -> KacTable:
    _check_flavor(flavor)
    box = tuple(box)
    series = kac_series(Q, flavor, box, **kw)
    table = KacTable(Q, flavor, box)
    for v in box_keys(box):
        if not any(v):
            continue
        try:
            p = rf_as_polynomial(series[v])
        except NotAPolynomialError as exc:
            raise PolynomialRecognitionError(
                f"{flavor} coefficient at v={list(v)} is not a polynomial: {exc.value}; remainder {exc.remainder}"
            ) from exc
        if flavor == "plain" and not p.is_zero():
            expected = 1 - Q.euler(v, v)
            if p.degree != expected or p.leading() != 1:
                raise PolynomialRecognitionError(
                    f"A_v at v={list(v)} is {p}, expected monic of degree {expected}"
                )
        table.polynomials[v] = p
    return table


# ---------------------------------------------------------------------------
# stack volumes


def _tuples_summing_to(v: DimVector) -> Iterator[tuple[DimVector, ...]]:
    """Ordered tuples of nonzero vectors with sum v."""
    if not any(v):
        yield ()
        return
    for first in itertools.product(*(range(x + 1) for x in v)):
        if not any(first):
            continue
        rest = tuple(a - b for a, b in zip(v, first))
        for tail in _tuples_summing_to(rest):
            yield (first,) + tail


def vol_rep_formula(Q: Quiver, flavor: str, v: Sequence[int], printed_h: bool = False) -> RatFun:
    """Stack volume of the representations of flavor ``flavor`` as a function of t = q."""
    _check_flavor(flavor)
    v = tuple(v)
    if flavor == "plain":
        return (RatFun.t_power(-Q.euler(v, v)) * inf_pochhammer_vec(v).invert_variable())
    if flavor == "nil1":
        return RatFun.t_power(-Q.euler(v, v)) * h_vec(Q, v, printed_h).invert_variable()
    total = ZERO
    for vs in _tuples_summing_to(v):
        term = ONE
        for l, vl in enumerate(vs):
            nxt = vs[l + 1] if l + 1 < len(vs) else (0,) * Q.n
            term = term * h_head(Q, vl, nxt) * inf_pochhammer_vec(vl)
            if term.is_zero():
                break
        if term.is_zero():
            continue
        total = total + RatFun.t_power(-_weight_a(Q, vs)) * term.invert_variable()
    return total


def vol_rep_closed(Q: Quiver, flavor: str, v: Sequence[int], q) -> Fraction:
    return rf_eval(vol_rep_formula(Q, flavor, v), Fraction(q))


def _tuples_weighted(v: DimVector) -> Iterator[tuple[DimVector, ...]]:
    """Tuples (v_1..v_s), v_s nonzero, with sum_i i*v_i = v."""

    def rec(rest: DimVector, i: int, acc: tuple):
        if not any(rest):
            # strip trailing zero entries
            k = len(acc)
            while k and not any(acc[k - 1]):
                k -= 1
            if k == len(acc):
                yield acc
            return
        if any(x < i for x in rest) and all(x < i for x in rest if x):
            return
        for vi in itertools.product(*(range(x // i + 1) for x in rest)):
            yield from rec(tuple(a - i * b for a, b in zip(rest, vi)), i + 1, acc + (vi,))

    yield from rec(v, 1, ())


@dataclass
class VolumeCheckReport:
    flavor: str
    q: Fraction
    lhs: dict[DimVector, Fraction]
    rhs: dict[DimVector, Fraction]

    @property
    def mismatches(self) -> list[DimVector]:
        return [v for v in self.lhs if self.lhs[v] != self.rhs[v]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def nilpair_volume_check(Q: Quiver, flavor: str, box: Sequence[int], q) -> VolumeCheckReport:
    """Compare the stratified volume of pairs (representation, nilpotent
    endomorphism) with exp(sum_l sum_v A_v(q^l)/(q^l-1) z^{lv}/l)."""
    q = Fraction(q)
    box = tuple(box)
    table = kac_table(Q, flavor, box)
    vols = {v: vol_rep_closed(Q, flavor, v, q) for v in box_keys(box)}
    lhs = {}
    for v in box_keys(box):
        total = Fraction(0)
        for vs in _tuples_weighted(v):
            term = Fraction(q) ** _weight_o(Q, vs)
            for vi in vs:
                term *= vols[vi]
            total += term
        lhs[v] = total
    # right side as a numeric series: exp of g with g_{lv} += A_v(q^l)/(q^l-1)/l
    g: dict[DimVector, Fraction] = {}
    for v, p in table.polynomials.items():
        for l in range(1, max(box) + 1):
            lv = tuple(l * x for x in v)
            if all(a <= b for a, b in zip(lv, box)):
                ql = q ** l
                g[lv] = g.get(lv, Fraction(0)) + Fraction(p(ql)) / (ql - 1) / l
    rhs = _numeric_exp(g, box)
    return VolumeCheckReport(flavor, q, lhs, rhs)


def _numeric_exp(g: dict[DimVector, Fraction], box: DimVector) -> dict[DimVector, Fraction]:
    zero = (0,) * len(box)
    E = {zero: Fraction(1)}
    for v in box_keys(box):
        if v == zero:
            continue
        acc = Fraction(0)
        for u, a in g.items():
            if any(x > y for x, y in zip(u, v)):
                continue
            acc += sum(u) * a * E[tuple(x - y for x, y in zip(v, u))]
        E[v] = acc / sum(v)
    return E
