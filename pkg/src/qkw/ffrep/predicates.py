"""Representations over F_p, nilpotency predicates and endomorphism algebras."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Sequence

from ..quiver import DimVector, Quiver
from .linalg import (
    Mat,
    Vec,
    all_subspaces,
    canonical_subspace,
    identity,
    is_nilpotent_matrix,
    is_zero_matrix,
    mat_mul,
    mat_scalar_shift,
    mat_vec,
    nullspace,
    rank,
)


class CapacityError(RuntimeError):
    pass


DEFAULT_CAP = 2 ** 24


def configured_cap() -> int:
    return int(os.environ.get("QKW_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class FFRep:
    """x_h is a v[head] x v[tail] matrix; xstar[h] (doubled data) is v[tail] x v[head]."""

    quiver: Quiver
    v: DimVector
    p: int
    x: tuple[Mat, ...]
    xstar: tuple[Mat, ...] | None = None

    def __post_init__(self):
        arrows = self.quiver.arrow_indices()
        if len(self.x) != len(arrows):
            raise ValueError("one matrix per arrow expected")
        if self.xstar is not None and len(self.xstar) != len(arrows):
            raise ValueError("one reversed matrix per arrow expected")
        for (a, b), M in zip(arrows, self.x):
            _check_shape(M, self.v[b], self.v[a])
        for (a, b), M in zip(arrows, self.xstar or ()):
            _check_shape(M, self.v[a], self.v[b])

    def omega(self) -> list[tuple[int, int, Mat]]:
        return [(a, b, M) for (a, b), M in zip(self.quiver.arrow_indices(), self.x)]

    def star(self) -> list[tuple[int, int, Mat]]:
        if self.xstar is None:
            return []
        return [(b, a, M) for (a, b), M in zip(self.quiver.arrow_indices(), self.xstar)]

    def all_arrows(self) -> list[tuple[int, int, Mat]]:
        return self.omega() + self.star()


def _check_shape(M: Mat, rows: int, cols: int) -> None:
    if len(M) != rows or any(len(r) != cols for r in M):
        raise ValueError(f"matrix shape mismatch: expected {rows}x{cols}")


Graded = tuple[tuple[Vec, ...], ...]


def _full(v: DimVector) -> Graded:
    return tuple(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)) for n in v)


def _images(arrows, S: Graded, v: DimVector, p: int) -> list[list[Vec]]:
    out: list[list[Vec]] = [[] for _ in v]
    for a, b, M in arrows:
        for u in S[a]:
            out[b].append(mat_vec(M, u, p))
    return out


def _canon(spans: Sequence[Sequence[Vec]], p: int) -> Graded:
    return tuple(canonical_subspace(s, p) for s in spans)


def _dim(S: Graded) -> int:
    return sum(len(s) for s in S)


def _descends_to_zero(step, v: DimVector, p: int) -> bool:
    S = _full(v)
    while _dim(S):
        T = step(S)
        if _dim(T) == _dim(S):
            return False
        S = T
    return True


def is_nilpotent_rep(rep: FFRep) -> bool:
    """Nilpotent on all arrows present (the doubled arrows too for doubled data)."""
    arrows = rep.all_arrows()
    return _descends_to_zero(lambda S: _canon(_images(arrows, S, rep.v, rep.p), rep.p), rep.v, rep.p)


def is_one_nilpotent(rep: FFRep) -> bool:
    """The loops at every vertex generate a nilpotent algebra."""
    p = rep.p
    for i, n in enumerate(rep.v):
        loops = [M for a, b, M in rep.omega() if a == b == i]
        if not loops or n == 0:
            continue
        S = canonical_subspace(identity(n), p)
        while S:
            T = canonical_subspace([mat_vec(M, u, p) for M in loops for u in S], p)
            if len(T) == len(S):
                return False
            S = T
    return True


def _star_closure(rep: FFRep, S: list[list[Vec]]) -> Graded:
    p = rep.p
    cur = _canon(S, p)
    star = rep.star()
    while True:
        imgs = _images(star, cur, rep.v, p)
        nxt = _canon([list(cur[i]) + imgs[i] for i in range(len(cur))], p)
        if _dim(nxt) == _dim(cur):
            return cur
        cur = nxt


def is_semi_nilpotent(rep: FFRep) -> bool:
    """Every path with enough arrows from the original quiver vanishes."""
    if rep.xstar is None:
        raise ValueError("semi-nilpotency needs doubled data")
    omega = rep.omega()
    return _descends_to_zero(lambda S: _star_closure(rep, _images(omega, S, rep.v, rep.p)), rep.v, rep.p)


# -- strong semi-nilpotency --------------------------------------------------


def _step_conditions(rep: FFRep):
    """Per vertex i: maps out of i that must land in the current L, and the
    reversed loops at i under which the new piece must be stable."""
    into_L: list[list[tuple[int, Mat]]] = [[] for _ in rep.v]
    loop_star: list[list[Mat]] = [[] for _ in rep.v]
    for a, b, M in rep.omega():
        into_L[a].append((b, M))
    for a, b, M in rep.star():
        if a == b:
            loop_star[a].append(M)
        else:
            into_L[a].append((b, M))
    return into_L, loop_star


def _annihilator(S: Sequence[Vec], n: int, p: int) -> list[Vec]:
    return nullspace(S, n, p)


def _largest_step(rep: FFRep, L: Graded, i: int, into_L, loop_star) -> tuple[Vec, ...]:
    p, v = rep.p, rep.v
    eqs: list[Vec] = []
    for b, M in into_L[i]:
        for f in _annihilator(L[b], v[b], p):
            eqs.append(tuple(sum(f[r] * M[r][c] for r in range(v[b])) % p for c in range(v[i])))
    T = canonical_subspace(nullspace(eqs, v[i], p), p) if v[i] else ()
    while loop_star[i]:
        ann = _annihilator(T, v[i], p)
        more = list(ann)
        for M in loop_star[i]:
            for f in ann:
                more.append(tuple(sum(f[r] * M[r][c] for r in range(v[i])) % p for c in range(v[i])))
        T2 = canonical_subspace(nullspace(more, v[i], p), p)
        if len(T2) == len(T):
            break
        T = T2
    return T


def _ssn_greedy(rep: FFRep) -> bool:
    into_L, loop_star = _step_conditions(rep)
    L: Graded = tuple(() for _ in rep.v)
    target = sum(rep.v)
    progress = True
    while progress and _dim(L) < target:
        progress = False
        for i in range(len(rep.v)):
            T = _largest_step(rep, L, i, into_L, loop_star)
            if len(T) > len(L[i]):
                L = L[:i] + (T,) + L[i + 1:]
                progress = True
    return _dim(L) == target


def _maps_into(M: Mat, T: Sequence[Vec], S: Sequence[Vec], p: int) -> bool:
    if not T:
        return True
    imgs = [mat_vec(M, u, p) for u in T]
    return rank(list(S) + imgs, p) == len(S)


def _ssn_search(rep: FFRep, max_dim: int = 4) -> bool:
    if sum(rep.v) > max_dim:
        raise CapacityError(f"restricted-flag search capped at total dimension {max_dim}, got {sum(rep.v)}")
    p, v = rep.p, rep.v
    into_L, loop_star = _step_conditions(rep)
    seen: set = set()

    def ok_step(L: Graded, i: int, T) -> bool:
        if any(not _maps_into(M, T, L[b], p) for b, M in into_L[i]):
            return False
        return all(_maps_into(M, T, T, p) for M in loop_star[i])

    def dfs(L: Graded) -> bool:
        if _dim(L) == sum(v):
            return True
        if L in seen:
            return False
        seen.add(L)
        for i in range(len(v)):
            if len(L[i]) == v[i]:
                continue
            for T in all_subspaces(v[i], p):
                if len(T) <= len(L[i]) or rank(list(T) + list(L[i]), p) != len(T):
                    continue
                if ok_step(L, i, T) and dfs(L[:i] + (T,) + L[i + 1:]):
                    return True
        return False

    return dfs(tuple(() for _ in v))


def is_strongly_semi_nilpotent(rep: FFRep, method: str = "search") -> bool:
    """A restricted flag with x_h(L^l) in L^{l-1} and x_h*(L^l) in L^l exists.

    ``search`` explores every restricted flag (small dimensions only);
    ``greedy`` grows the flag by the largest admissible one-vertex step,
    which reaches the whole space exactly when some restricted flag does."""
    if rep.xstar is None:
        raise ValueError("strong semi-nilpotency needs doubled data")
    if method == "search":
        return _ssn_search(rep)
    if method == "greedy":
        return _ssn_greedy(rep)
    raise ValueError(f"unknown method {method!r}")


# -- endomorphism algebras ------------------------------------------------------

Element = tuple[Mat, ...]  # one square block per vertex


def end_algebra(rep: FFRep) -> list[Element]:
    """Basis of {phi : phi_head x_h = x_h phi_tail for every arrow present}."""
    v, p = rep.v, rep.p
    offs = list(itertools.accumulate([0] + [n * n for n in v]))
    D = offs[-1]

    def idx(i, r, c):
        return offs[i] + r * v[i] + c

    rows = []
    for a, b, M in rep.all_arrows():
        for r in range(v[b]):
            for c in range(v[a]):
                row = [0] * D
                for k in range(v[b]):
                    row[idx(b, r, k)] += M[k][c]
                for k in range(v[a]):
                    row[idx(a, k, c)] -= M[r][k]
                rows.append(row)
    return [_unflatten(u, v, offs) for u in nullspace(rows, D, p)]


def _unflatten(u: Sequence[int], v: DimVector, offs) -> Element:
    return tuple(
        tuple(tuple(u[offs[i] + r * n + c] for c in range(n)) for r in range(n)) for i, n in enumerate(v)
    )


def elem_mul(a: Element, b: Element, p: int) -> Element:
    return tuple(mat_mul(x, y, p) if x else () for x, y in zip(a, b))


def elem_combo(basis: Sequence[Element], coeffs: Sequence[int], p: int) -> Element:
    out = []
    for i in range(len(basis[0])):
        n = len(basis[0][i])
        out.append(tuple(
            tuple(sum(c * e[i][r][s] for c, e in zip(coeffs, basis)) % p for s in range(n)) for r in range(n)
        ))
    return tuple(out)


def elem_is_invertible(a: Element, p: int) -> bool:
    return all(rank(block, p) == len(block) for block in a)


def elem_identity(dims: Sequence[int]) -> Element:
    return tuple(identity(n) for n in dims)


def _elem_flat(a: Element) -> Vec:
    return tuple(x for block in a for row in block for x in row)


def radical_and_units(basis: Sequence[Element], p: int, cap: int | None = None) -> tuple[int, int]:
    """Jacobson radical dimension and unit count by exhaustive scan.

    The radical is {a : 1 - b a invertible for every b}."""
    d = len(basis)
    cap = configured_cap() if cap is None else cap
    if p ** (2 * d) > cap:
        raise CapacityError(f"algebra of dimension {d} over F_{p} is too large for exhaustive scan")
    if d == 0:
        return 0, 0
    dims = [len(block) for block in basis[0]]
    one = elem_identity(dims)
    elems = [elem_combo(basis, c, p) for c in itertools.product(range(p), repeat=d)]
    units = sum(1 for a in elems if elem_is_invertible(a, p))
    radical = []
    for a in elems:
        if all(elem_is_invertible(_elem_sub(one, elem_mul(b, a, p), p), p) for b in elems):
            radical.append(_elem_flat(a))
    rad_dim = rank(radical, p)
    if p ** rad_dim != len(radical):
        raise ArithmeticError("radical is not a subspace")
    return rad_dim, units


def _elem_sub(a: Element, b: Element, p: int) -> Element:
    return tuple(tuple(tuple((x - y) % p for x, y in zip(ra, rb)) for ra, rb in zip(A, B)) for A, B in zip(a, b))


def local_residue_is_prime_field(basis: Sequence[Element], p: int) -> bool:
    """True iff the algebra is local with residue field F_p.

    Each basis element must be c + (nilpotent) with c in F_p, and the
    nilpotent parts must generate a nilpotent (non-unital) algebra; that
    algebra is then the radical and has codimension one."""
    if not basis:
        return False
    if len(basis) == 1:
        return True
    nil_parts: list[Element] = []
    for e in basis:
        found = None
        for c in range(p):
            shifted = tuple(mat_scalar_shift(block, c, p) for block in e)
            if all(is_nilpotent_matrix(block, p) for block in shifted):
                found = shifted
                break
        if found is None:
            return False
        if any(not is_zero_matrix(b) for b in found):
            nil_parts.append(found)
    bound = max(len(b) for b in basis[0])
    layer = [_elem_flat(a) for a in nil_parts]
    layer_elems = nil_parts
    for _ in range(bound):
        if not layer_elems:
            return True
        prods = [elem_mul(a, b, p) for a in layer_elems for b in nil_parts]
        flat = [_elem_flat(x) for x in prods]
        basis_rows = canonical_subspace(flat, p)
        if not basis_rows:
            return True
        dims = [len(block) for block in basis[0]]
        layer_elems = [_unflat_elem(r, dims) for r in basis_rows]
    return False


def _unflat_elem(u: Sequence[int], dims: Sequence[int]) -> Element:
    offs = list(itertools.accumulate([0] + [n * n for n in dims]))
    return _unflatten(u, tuple(dims), offs)


def is_absolutely_indecomposable(rep: FFRep, method: str = "local") -> tuple[bool, int]:
    """(absolutely indecomposable?, |Aut|). ``local`` uses the residue-field
    test, ``jacobson`` the exhaustive radical scan."""
    if not any(rep.v):
        return False, 1
    basis = end_algebra(rep)
    d = len(basis)
    if method == "jacobson":
        rad, units = radical_and_units(basis, rep.p)
        return d - rad == 1, units
    if method != "local":
        raise ValueError(f"unknown method {method!r}")
    if local_residue_is_prime_field(basis, rep.p):
        return True, (rep.p - 1) * rep.p ** (d - 1)
    return False, 0
