"""Exhaustive finite-field censuses.

Every counted quantity is a sum over all points of a G_v-invariant function.
One matrix slot is replaced by representatives of its G_v-orbits, weighted by
orbit size; the remaining slots are enumerated in full. The result equals the
plain exhaustive sum exactly."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..quiver import DimVector, Quiver
from .linalg import (
    Mat,
    all_matrices,
    canonical_subspace,
    gl_order,
    is_zero_matrix,
    mat_mul,
    mat_sub,
    nullspace,
    rank_r_count,
    zero_matrix,
)
from .predicates import (
    CapacityError,
    FFRep,
    configured_cap,
    is_absolutely_indecomposable,
    is_nilpotent_rep,
    is_one_nilpotent,
    is_semi_nilpotent,
    is_strongly_semi_nilpotent,
)

LOOP_ORBIT_LIMIT = 2 ** 20


def group_order(v: Sequence[int], p: int) -> int:
    total = 1
    for n in v:
        total *= gl_order(n, p)
    return total


# -- orbit representatives for one slot --------------------------------------------


@lru_cache(maxsize=None)
def rank_orbits(rows: int, cols: int, p: int) -> tuple[tuple[Mat, int], ...]:
    """Orbits of rows x cols matrices under GL_rows x GL_cols: one per rank."""
    out = []
    for r in range(min(rows, cols) + 1):
        M = tuple(tuple(int(i == j and i < r) for j in range(cols)) for i in range(rows))
        out.append((M, rank_r_count(rows, cols, r, p)))
    return tuple(out)


def _gl_generators(n: int, p: int) -> list[np.ndarray]:
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                g = np.eye(n, dtype=np.int64)
                g[i, j] = 1
                gens.append(g)
    if p > 2:
        root = next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)))
        g = np.eye(n, dtype=np.int64)
        g[0, 0] = root
        gens.append(g)
    return gens


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _inverse_mod(g: np.ndarray, p: int) -> np.ndarray:
    n = g.shape[0]
    aug = np.concatenate([g % p, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        r = next(r for r in range(c, n) if aug[r, c] % p)
        aug[[c, r]] = aug[[r, c]]
        aug[c] = (aug[c] * pow(int(aug[c, c]), -1, p)) % p
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % p
    return aug[:, n:]


@lru_cache(maxsize=None)
def conjugacy_orbits(n: int, p: int) -> tuple[tuple[Mat, int], ...]:
    """Conjugacy classes of n x n matrices over F_p with their sizes."""
    total = p ** (n * n)
    if total > LOOP_ORBIT_LIMIT:
        raise CapacityError(f"conjugacy classes of {n}x{n} matrices over F_{p} are too many to enumerate")
    if n == 0:
        return (((), 1),)
    codes = np.arange(total, dtype=np.int64)
    digits = np.stack([(codes // p ** k) % p for k in range(n * n - 1, -1, -1)], axis=1)
    mats = digits.reshape(total, n, n)
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    src, dst = [], []
    for g in _gl_generators(n, p):
        gi = _inverse_mod(g, p)
        conj = np.einsum("ij,njk,kl->nil", g, mats, gi) % p
        src.append(codes)
        dst.append(conj.reshape(total, n * n) @ weights)
    # the trivial group (n = 1, p = 2) has no generators: every class is a point
    src = np.concatenate(src) if src else codes
    dst = np.concatenate(dst) if dst else codes
    graph = coo_matrix((np.ones_like(src), (src, dst)), shape=(total, total))
    _, labels = connected_components(graph, directed=True, connection="weak")
    sizes = np.bincount(labels)
    first = {}
    for code, lab in zip(codes.tolist(), labels.tolist()):
        first.setdefault(lab, code)
    out = []
    for lab, code in sorted(first.items(), key=lambda kv: kv[1]):
        M = tuple(tuple(int(x) for x in row) for row in mats[code])
        out.append((M, int(sizes[lab])))
    return tuple(out)


# -- slots ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Slot:
    rows: int
    cols: int
    tail: int | None  # vertex positions for arrow slots, None for framing
    head: int | None
    fixed_zero: bool = False

    @property
    def size_log(self) -> int:
        return 0 if self.fixed_zero else self.rows * self.cols


def _arrow_slots(Q: Quiver, v: DimVector, doubled: bool) -> list[Slot]:
    arrows = Q.arrow_indices()
    slots = [Slot(v[b], v[a], a, b) for a, b in arrows]
    if doubled:
        slots += [Slot(v[a], v[b], b, a) for a, b in arrows]
    return slots


def _choose_reduced(slots: list[Slot], p: int) -> int | None:
    best, best_size = None, 0
    for k, s in enumerate(slots):
        if s.tail is None or s.fixed_zero or s.rows * s.cols == 0:
            continue
        if s.tail == s.head and p ** (s.rows * s.cols) > LOOP_ORBIT_LIMIT:
            continue
        if s.rows * s.cols > best_size:
            best, best_size = k, s.rows * s.cols
    return best


def _slot_orbits(s: Slot, p: int):
    if s.tail == s.head:
        return conjugacy_orbits(s.rows, p)
    return rank_orbits(s.rows, s.cols, p)


def space_size(slots: list[Slot], p: int) -> int:
    return p ** sum(s.size_log for s in slots)


def _check_cap(slots: list[Slot], p: int, cap: int | None) -> int:
    size = space_size(slots, p)
    cap = configured_cap() if cap is None else cap
    if size > cap:
        raise CapacityError(f"search space {size} exceeds cap {cap}")
    return size


def _slot_values(s: Slot, p: int) -> list[Mat]:
    if s.fixed_zero:
        return [zero_matrix(s.rows, s.cols)]
    return all_matrices(s.rows, s.cols, p)


def _shards(slots: list[Slot], p: int):
    """List of (weight, fixed index, fixed matrix) shards covering the space."""
    k = _choose_reduced(slots, p)
    if k is None:
        return None, [(1, None)]
    return k, [(w, M) for M, w in _slot_orbits(slots[k], p)]


def _iterate_shard(slots: list[Slot], p: int, k, M):
    choices = [_slot_values(s, p) if j != k else [M] for j, s in enumerate(slots)]
    return itertools.product(*choices)


# -- evaluators -----------------------------------------------------------------------


def _moment(Q: Quiver, v: DimVector, p: int, x, xs) -> list[Mat]:
    """Per vertex: sum_{tail=i} x*_h x_h - sum_{head=i} x_h x*_h."""
    out = [zero_matrix(n, n) for n in v]
    for (a, b), X, Xs in zip(Q.arrow_indices(), x, xs):
        if v[a] and v[b]:
            out[a] = _add(out[a], mat_mul(Xs, X, p), p)
            out[b] = mat_sub(out[b], mat_mul(X, Xs, p), p)
    return out


def _add(A: Mat, B: Mat, p: int) -> Mat:
    return tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(A, B))


def _flavor_rep_predicate(flavor: str):
    if flavor == "plain":
        return lambda rep: True
    if flavor == "nil1":
        return is_one_nilpotent
    if flavor == "nil0":
        return is_nilpotent_rep
    raise ValueError(f"unknown flavor {flavor!r}")


def _lambda_predicate(flavor: str, ssn_method: str):
    if flavor == "plain":
        return is_nilpotent_rep
    if flavor == "nil1":
        return lambda rep: is_strongly_semi_nilpotent(rep, ssn_method)
    if flavor == "nil0":
        return is_semi_nilpotent
    raise ValueError(f"unknown flavor {flavor!r}")


def _eval_census(job):
    Q, v, p, flavor, method, slots, k, shards = job
    pred = _flavor_rep_predicate(flavor)
    visited = flavored = aut_sum = 0
    for w, M in shards:
        for mats in _iterate_shard(slots, p, k, M):
            visited += w
            rep = FFRep(Q, v, p, tuple(mats))
            if not pred(rep):
                continue
            flavored += w
            ok, aut = is_absolutely_indecomposable(rep, method)
            if ok:
                aut_sum += w * aut
    return visited, flavored, aut_sum


def _eval_lambda(job):
    Q, v, p, flavor, ssn_method, slots, k, shards, mu_only = job
    pred = None if mu_only else _lambda_predicate(flavor, ssn_method)
    m = len(Q.arrows)
    visited = count = 0
    for w, M in shards:
        for mats in _iterate_shard(slots, p, k, M):
            visited += w
            x, xs = mats[:m], mats[m:]
            if not all(is_zero_matrix(Z) for Z in _moment(Q, v, p, x, xs)):
                continue
            if pred is None or pred(FFRep(Q, v, p, tuple(x), tuple(xs))):
                count += w
    return visited, count, 0


def _run(evaluator, make_job, slots, p, jobs: int):
    k, shards = _shards(slots, p)
    if jobs <= 1 or len(shards) == 1:
        parts = [evaluator(make_job(k, shards))]
    else:
        chunks = [shards[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(evaluator, [make_job(k, c) for c in chunks if c]))
    return tuple(sum(col) for col in zip(*parts))


@dataclass
class CensusReport:
    quiver: Quiver
    v: DimVector
    p: int
    flavor: str
    total_visited: int
    flavored: int
    a_value: int
    elapsed: float
    space_size: int
    cap: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "v": list(self.v),
            "p": self.p,
            "flavor": self.flavor,
            "total_visited": self.total_visited,
            "flavored": self.flavored,
            "a_value": self.a_value,
            "space_size": self.space_size,
            "cap": self.cap,
        }


def census_abs_indec(
    Q: Quiver, v: Sequence[int], p: int, flavor: str, *,
    jobs: int = 1, cap: int | None = None, method: str = "local",
) -> CensusReport:
    v = Q.dim(v)
    slots = _arrow_slots(Q, v, doubled=False)
    size = _check_cap(slots, p, cap)
    t0 = time.perf_counter()
    visited, flavored, aut_sum = _run(
        _eval_census, lambda k, sh: (Q, v, p, flavor, method, slots, k, sh), slots, p, jobs
    )
    if visited != size:
        raise AssertionError(f"visited {visited} points, expected {size}")
    G = group_order(v, p)
    if aut_sum % G:
        raise ArithmeticError(f"orbit count {Fraction(aut_sum, G)} is not an integer")
    return CensusReport(
        Q, v, p, flavor, visited, flavored, aut_sum // G, time.perf_counter() - t0, size,
        configured_cap() if cap is None else cap,
    )


def flavored_volume(Q: Quiver, v: Sequence[int], p: int, flavor: str, **kw) -> Fraction:
    """(number of flavored representations) / |G_v(F_p)|."""
    rep = census_abs_indec(Q, v, p, flavor, **kw)
    return Fraction(rep.flavored, group_order(rep.v, p))


def lambda_count(
    Q: Quiver, v: Sequence[int], p: int, flavor: str, *,
    jobs: int = 1, cap: int | None = None, ssn_method: str = "search",
) -> int:
    v = Q.dim(v)
    slots = _arrow_slots(Q, v, doubled=True)
    _check_cap(slots, p, cap)
    _, count, _ = _run(
        _eval_lambda, lambda k, sh: (Q, v, p, flavor, ssn_method, slots, k, sh, False), slots, p, jobs
    )
    return count


def mu_fiber_count(Q: Quiver, v: Sequence[int], p: int, *, jobs: int = 1, cap: int | None = None) -> int:
    v = Q.dim(v)
    slots = _arrow_slots(Q, v, doubled=True)
    _check_cap(slots, p, cap)
    _, count, _ = _run(
        _eval_lambda, lambda k, sh: (Q, v, p, "plain", "search", slots, k, sh, True), slots, p, jobs
    )
    return count


# -- Nakajima varieties ---------------------------------------------------------------


def _stable(v: DimVector, p: int, arrows, pmaps) -> bool:
    """The largest subspace inside ker(p) stable under all arrows is zero."""
    eqs = [[tuple(r) for r in pmaps[i]] for i in range(len(v))]
    while True:
        changed = False
        anns = [canonical_subspace(e, p) if v[i] else () for i, e in enumerate(eqs)]
        for a, b, M in arrows:
            if not v[a] or not v[b]:
                continue
            for f in anns[b]:
                row = tuple(sum(f[r] * M[r][c] for r in range(v[b])) % p for c in range(v[a]))
                eqs[a].append(row)
        new = [canonical_subspace(e, p) if v[i] else () for i, e in enumerate(eqs)]
        if all(len(n) == len(o) for n, o in zip(new, anns)):
            return all(len(n) == v[i] for i, n in enumerate(new))
        eqs = [list(n) for n in new]


def _stabilizer_trivial(v: DimVector, p: int, arrows, pmaps, qmaps) -> bool:
    """No nonzero phi with phi x = x phi, p phi = 0, phi q = 0."""
    offs = list(itertools.accumulate([0] + [n * n for n in v]))
    D = offs[-1]

    def idx(i, r, c):
        return offs[i] + r * v[i] + c

    rows = []
    for a, b, M in arrows:
        for r in range(v[b]):
            for c in range(v[a]):
                row = [0] * D
                for k in range(v[b]):
                    row[idx(b, r, k)] += M[k][c]
                for k in range(v[a]):
                    row[idx(a, k, c)] -= M[r][k]
                rows.append(row)
    for i, n in enumerate(v):
        P, Qm = pmaps[i], qmaps[i]
        for r in range(len(P)):
            for c in range(n):
                row = [0] * D
                for k in range(n):
                    row[idx(i, k, c)] += P[r][k]
                rows.append(row)
        wi = len(Qm[0]) if Qm else 0
        for r in range(n):
            for c in range(wi):
                row = [0] * D
                for k in range(n):
                    row[idx(i, r, k)] += Qm[k][c]
                rows.append(row)
    return not nullspace(rows, D, p)


_NAK_PRED = {
    "M": lambda rep: True,
    "M0": lambda rep: is_nilpotent_rep(FFRep(rep.quiver, rep.v, rep.p, rep.x)),
    "M1": lambda rep: is_one_nilpotent(rep),
    "L": is_nilpotent_rep,
    "L0": is_semi_nilpotent,
    "L1": lambda rep: is_strongly_semi_nilpotent(rep, "search"),
}


def _eval_nakajima(job):
    Q, v, w, p, variant, slots, k, shards = job
    m = len(Q.arrows)
    n = len(v)
    pred = _NAK_PRED[variant]
    count = 0
    for wt, M in shards:
        for mats in _iterate_shard(slots, p, k, M):
            x, xs = mats[:m], mats[m:2 * m]
            pm, qm = mats[2 * m:2 * m + n], mats[2 * m + n:]
            mu = _moment(Q, v, p, x, xs)
            for i in range(n):
                if v[i] and w[i]:
                    mu[i] = _add(mu[i], mat_mul(qm[i], pm[i], p), p)
            if not all(is_zero_matrix(mu[i]) for i in range(n)):
                continue
            rep = FFRep(Q, v, p, tuple(x), tuple(xs))
            arrows = rep.all_arrows()
            if not _stable(v, p, arrows, pm):
                continue
            if not pred(rep):
                continue
            if not _stabilizer_trivial(v, p, arrows, pm, qm):
                raise ArithmeticError("stable point with nontrivial stabilizer")
            count += wt
    return count, 0, 0


def nakajima_count(
    Q: Quiver, v: Sequence[int], w: Sequence[int], p: int, variant: str, *,
    jobs: int = 1, cap: int | None = None,
) -> int:
    if variant not in _NAK_PRED:
        raise ValueError(f"unknown variant {variant!r}")
    v, w = Q.dim(v), Q.dim(w)
    zero_q = variant.startswith("L")
    slots = _arrow_slots(Q, v, doubled=True)
    slots += [Slot(w[i], v[i], None, None) for i in range(Q.n)]
    slots += [Slot(v[i], w[i], None, None, fixed_zero=zero_q) for i in range(Q.n)]
    _check_cap(slots, p, cap)
    (count, _, _) = _run(_eval_nakajima, lambda k, sh: (Q, v, w, p, variant, slots, k, sh), slots, p, jobs)
    G = group_order(v, p)
    if count % G:
        raise ArithmeticError(f"point count {Fraction(count, G)} is not an integer")
    return count // G
