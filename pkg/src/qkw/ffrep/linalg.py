"""Small dense linear algebra over a prime field F_p.

Matrices are tuples of row tuples; vectors are tuples. Dimensions are
small (at most a few dozen), so everything is plain Python."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


def zero_matrix(rows: int, cols: int) -> Mat:
    return tuple((0,) * cols for _ in range(rows))


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(A: Mat, B: Mat, p: int, inner: int | None = None) -> Mat:
    if inner is None:
        inner = len(B)
    cols = len(B[0]) if B else 0
    if not A:
        return ()
    Bt = list(zip(*B)) if B else [()] * cols
    if not B:
        return tuple((0,) * cols for _ in A)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % p for col in Bt) for row in A)


def mat_vec(A: Mat, u: Sequence[int], p: int) -> Vec:
    return tuple(sum(a * b for a, b in zip(row, u)) % p for row in A)


def mat_add(A: Mat, B: Mat, p: int) -> Mat:
    return tuple(tuple((a + b) % p for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Mat, B: Mat, p: int) -> Mat:
    return tuple(tuple((a - b) % p for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scalar_shift(A: Mat, c: int, p: int) -> Mat:
    """A - c*I."""
    return tuple(tuple((x - (c if i == j else 0)) % p for j, x in enumerate(row)) for i, row in enumerate(A))


def is_zero_matrix(A: Mat) -> bool:
    return all(not any(row) for row in A)


def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of the span of ``rows``; returns (basis, pivots)."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for r in rows:
        r = [x % p for x in r]
        for b, pc in zip(basis, pivots):
            c = r[pc]
            if c:
                r = [(x - c * y) % p for x, y in zip(r, b)]
        lead = next((k for k, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = pow(r[lead], -1, p)
        r = [(x * inv) % p for x in r]
        for idx, b in enumerate(basis):
            c = b[lead]
            if c:
                basis[idx] = [(x - c * y) % p for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(lead)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [basis[k] for k in order], [pivots[k] for k in order]


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def canonical_subspace(rows: Iterable[Sequence[int]], p: int) -> tuple[Vec, ...]:
    return tuple(tuple(r) for r in rref(rows, p)[0])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[Vec]:
    """Basis of {u : rows . u = 0}."""
    basis, pivots = rref(rows, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        u = [0] * ncols
        u[f] = 1
        for b, pc in zip(basis, pivots):
            u[pc] = (-b[f]) % p
        out.append(tuple(u))
    return out


def is_nilpotent_matrix(A: Mat, p: int) -> bool:
    n = len(A)
    if n == 0:
        return True
    M = A
    for _ in range(n - 1):
        if is_zero_matrix(M):
            return True
        M = mat_mul(M, A, p)
    return is_zero_matrix(M)


def all_matrices(rows: int, cols: int, p: int) -> list[Mat]:
    out = []
    for flat in itertools.product(range(p), repeat=rows * cols):
        out.append(tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows)))
    return out


@lru_cache(maxsize=None)
def all_subspaces(n: int, p: int) -> tuple[tuple[Vec, ...], ...]:
    """Every subspace of F_p^n as a canonical RREF basis."""
    seen = {()}
    frontier = [()]
    vectors = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    while frontier:
        nxt = []
        for S in frontier:
            for u in vectors:
                T = canonical_subspace(list(S) + [u], p)
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return tuple(sorted(seen, key=lambda S: (len(S), S)))


def contains(S: Sequence[Vec], u: Sequence[int], p: int) -> bool:
    return rank(list(S) + [u], p) == len(S)


def is_subspace(S: Sequence[Vec], T: Sequence[Vec], p: int) -> bool:
    """S subset of T (both given by bases)."""
    return rank(list(T) + list(S), p) == len(T)


def gl_order(n: int, p: int) -> int:
    total = 1
    for k in range(n):
        total *= p ** n - p ** k
    return total


def rank_r_count(rows: int, cols: int, r: int, p: int) -> int:
    """Number of rows x cols matrices of rank r over F_p."""
    num = 1
    for k in range(r):
        num *= (p ** rows - p ** k) * (p ** cols - p ** k)
    return num // gl_order(r, p)
