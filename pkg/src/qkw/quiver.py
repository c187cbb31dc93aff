"""Quivers, dimension vectors, Euler forms and the JSON quiver format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

DimVector = tuple[int, ...]


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _counts: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        arrows = tuple((str(a), str(b)) for a, b in self.arrows)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        if len(set(verts)) != len(verts):
            raise QuiverError(f"duplicate vertex id in {list(verts)}")
        index = {v: k for k, v in enumerate(verts)}
        counts = [[0] * len(verts) for _ in verts]
        for pos, (a, b) in enumerate(arrows):
            for end in (a, b):
                if end not in index:
                    raise QuiverError(f"arrow #{pos} [{a!r}, {b!r}] references unknown vertex {end!r}")
            counts[index[a]][index[b]] += 1
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_counts", tuple(tuple(r) for r in counts))

    # structure ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        return self._index[str(vertex)]

    def arrow_indices(self) -> list[tuple[int, int]]:
        return [(self._index[a], self._index[b]) for a, b in self.arrows]

    def arrow_count(self, i: int, j: int) -> int:
        """Number of arrows i -> j (vertex positions)."""
        return self._counts[i][j]

    def loops(self, i: int) -> int:
        return self._counts[i][i]

    def is_real(self, i: int) -> bool:
        return self.loops(i) == 0

    def is_imaginary(self, i: int) -> bool:
        return self.loops(i) >= 1

    def is_isotropic(self, i: int) -> bool:
        return self.loops(i) == 1

    def in_degree(self, v: Sequence[int], i: int) -> int:
        """sum of v_{tail} over arrows with head i."""
        return sum(self._counts[j][i] * v[j] for j in range(self.n))

    def has_cycles_besides_loops(self) -> bool:
        adj = {i: [j for j in range(self.n) if j != i and self._counts[i][j]] for i in range(self.n)}
        state = [0] * self.n

        def visit(i):
            state[i] = 1
            for j in adj[i]:
                if state[j] == 1 or (state[j] == 0 and visit(j)):
                    return True
            state[i] = 2
            return False

        return any(state[i] == 0 and visit(i) for i in range(self.n))

    # dimension vectors ----------------------------------------------------

    def dim(self, v: Mapping[str, int] | Sequence[int] | int) -> DimVector:
        """Normalize a dimension vector (mapping, sequence or scalar for one vertex)."""
        if isinstance(v, int):
            v = [v]
        if isinstance(v, Mapping):
            unknown = set(map(str, v)) - set(self.vertices)
            if unknown:
                raise QuiverError(f"unknown vertices {sorted(unknown)}")
            out = tuple(int(v.get(x, 0)) for x in self.vertices)
        else:
            out = tuple(int(x) for x in v)
            if len(out) != self.n:
                raise QuiverError(f"dimension vector {list(out)} does not match {self.n} vertices")
        return out

    def unit(self, i: int) -> DimVector:
        return tuple(int(k == i) for k in range(self.n))

    # forms -----------------------------------------------------------------

    def _check(self, *vs: Sequence[int]) -> None:
        for v in vs:
            if len(v) != self.n:
                raise QuiverError(f"vector {list(v)} does not match {self.n} vertices")

    def euler(self, v: Sequence[int], w: Sequence[int]) -> int:
        return euler_form(self, v, w)

    def sym(self, v: Sequence[int], w: Sequence[int]) -> int:
        return sym_form(self, v, w)

    # serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "arrows": [list(a) for a in self.arrows]}

    def __str__(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def euler_form(Q: Quiver, v: Sequence[int], w: Sequence[int]) -> int:
    Q._check(v, w)
    c = Q._counts
    total = sum(a * b for a, b in zip(v, w))
    for i in range(Q.n):
        if v[i]:
            row = c[i]
            for j in range(Q.n):
                if row[j]:
                    total -= row[j] * v[i] * w[j]
    return total


def sym_form(Q: Quiver, v: Sequence[int], w: Sequence[int]) -> int:
    return euler_form(Q, v, w) + euler_form(Q, w, v)


def parse_quiver(text: str | bytes | Mapping) -> Quiver:
    if isinstance(text, Mapping):
        data = text
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise QuiverError(f"malformed quiver JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, Mapping):
        raise QuiverError("quiver file must be a JSON object")
    extra = set(data) - {"vertices", "arrows"}
    if extra:
        raise QuiverError(f"unexpected fields {sorted(extra)}")
    verts = data.get("vertices")
    arrows = data.get("arrows", [])
    if not isinstance(verts, list) or not all(isinstance(x, str) for x in verts):
        raise QuiverError('"vertices" must be an array of strings')
    if not isinstance(arrows, list):
        raise QuiverError('"arrows" must be an array')
    for pos, a in enumerate(arrows):
        if not (isinstance(a, list) and len(a) == 2 and all(isinstance(x, str) for x in a)):
            raise QuiverError(f"arrow #{pos} must be a 2-element array of strings, got {a!r}")
    return Quiver(tuple(verts), tuple((a, b) for a, b in arrows))


def load_quiver(path: str) -> Quiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())


def subquiver(Q: Quiver, J: Iterable[str]) -> Quiver:
    J = {str(x) for x in J}
    missing = J - set(Q.vertices)
    if missing:
        raise QuiverError(f"vertices {sorted(missing)} are not in the quiver")
    verts = tuple(v for v in Q.vertices if v in J)
    return Quiver(verts, tuple(a for a in Q.arrows if a[0] in J and a[1] in J))


def reverse_all_arrows(Q: Quiver) -> Quiver:
    return Quiver(Q.vertices, tuple((b, a) for a, b in Q.arrows))


def reverse_arrow(Q: Quiver, k: int) -> Quiver:
    arrows = list(Q.arrows)
    a, b = arrows[k]
    arrows[k] = (b, a)
    return Quiver(Q.vertices, tuple(arrows))


def loop_quiver(g: int) -> Quiver:
    return Quiver(("0",), tuple(("0", "0") for _ in range(g)))


def jordan_quiver() -> Quiver:
    return loop_quiver(1)


def a2_quiver() -> Quiver:
    return Quiver(("0", "1"), (("0", "1"),))


def kronecker_quiver() -> Quiver:
    return Quiver(("0", "1"), (("0", "1"), ("0", "1")))


def cyclic_quiver(n: int = 2) -> Quiver:
    verts = tuple(str(k) for k in range(n))
    return Quiver(verts, tuple((verts[k], verts[(k + 1) % n]) for k in range(n)))


def loop_plus_edge() -> Quiver:
    return Quiver(("0", "1"), (("0", "0"), ("0", "1")))


NAMED_QUIVERS = {
    "jordan": jordan_quiver,
    "2-loop": lambda: loop_quiver(2),
    "3-loop": lambda: loop_quiver(3),
    "a2": a2_quiver,
    "kronecker": kronecker_quiver,
    "cyclic2": cyclic_quiver,
    "loop-edge": loop_plus_edge,
}
