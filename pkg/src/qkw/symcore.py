"""Exact arithmetic: integer polynomials, the field Q(t), and truncated
multivariate power series over Q(t) with Adams operators and plethystic
Exp/Log."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from flint import fmpq_poly, fmpz_poly


class PoleError(ZeroDivisionError):
    pass


class NotAPolynomialError(ValueError):
    def __init__(self, f: "RatFun", remainder: "RatFun"):
        self.value = f
        self.remainder = remainder
        super().__init__(f"not a polynomial: {f} (remainder {remainder})")


class IntPoly:
    """Dense univariate polynomial in t with integer coefficients.

    Arithmetic is delegated to FLINT; the public face is the coefficient
    tuple (index = degree)."""

    __slots__ = ("_p",)

    def __init__(self, coefficients: Iterable[int] | fmpz_poly = ()):
        if isinstance(coefficients, fmpz_poly):
            self._p = coefficients
        else:
            self._p = fmpz_poly([int(c) for c in coefficients])

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        if k < 0:
            raise ValueError("negative exponent")
        return cls(fmpz_poly([0] * k + [c]))

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self._p.coeffs())

    @property
    def degree(self) -> int:
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def leading(self) -> int:
        return int(self._p.leading_coefficient()) if not self.is_zero() else 0

    def __call__(self, q):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * q + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(self._p + _as_fmpz(other))

    __radd__ = __add__

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(self._p - _as_fmpz(other))

    def __rsub__(self, other) -> "IntPoly":
        return IntPoly(_as_fmpz(other) - self._p)

    def __neg__(self) -> "IntPoly":
        return IntPoly(-self._p)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(self._p * _as_fmpz(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        return IntPoly(self._p ** n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (IntPoly, int)):
            return self._p == _as_fmpz(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coefficients)})"

    def __str__(self) -> str:
        return _poly_str(self.coefficients)


def _as_fmpz(x) -> fmpz_poly:
    if isinstance(x, IntPoly):
        return x._p
    if isinstance(x, int):
        return fmpz_poly([x])
    raise TypeError(f"cannot use {type(x).__name__} as an integer polynomial")


def _poly_str(coeffs: Sequence[int], var: str = "t") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{'*' + mono if mono else ''}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _int_gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = _gcd(g, v)
        if g == 1:
            break
    return g


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


class RatFun:
    """Element of Q(t), stored as numerator/denominator in Z[t].

    Canonical form: the two parts are coprime over Q, the joint integer
    content of (numerator, denominator) is 1 and the denominator has a
    positive leading coefficient. Equal field elements therefore have
    identical representations."""

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, numerator=0, denominator=1, *, _normalized: bool = False):
        n = _coerce_fmpz(numerator)
        d = _coerce_fmpz(denominator)
        if not _normalized:
            n, d = _normalize(n, d)
        self._n = n
        self._d = d
        self._hash = None

    @classmethod
    def t_power(cls, k: int) -> "RatFun":
        if k >= 0:
            return cls(fmpz_poly([0] * k + [1]), fmpz_poly([1]), _normalized=True)
        return cls(fmpz_poly([1]), fmpz_poly([0] * (-k) + [1]), _normalized=True)

    @classmethod
    def from_fraction(cls, x) -> "RatFun":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def numerator(self) -> IntPoly:
        return IntPoly(self._n)

    @property
    def denominator(self) -> IntPoly:
        return IntPoly(self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_polynomial(self) -> bool:
        return self._d.is_one()

    def __add__(self, other) -> "RatFun":
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if self._d == other._d:
            return RatFun(self._n + other._n, self._d)
        return RatFun(self._n * other._d + other._n * self._d, self._d * other._d)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self._n, self._d, _normalized=True)

    def __sub__(self, other) -> "RatFun":
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFun":
        return (-self) + other

    def __mul__(self, other) -> "RatFun":
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if other._d.is_one() and self._d.is_one():
            n = self._n * other._n
            return RatFun(n, fmpz_poly([1]), _normalized=True) if not n.is_zero() else ZERO
        # cross-cancel before multiplying to keep sizes small
        g1 = self._n.gcd(other._d)
        g2 = other._n.gcd(self._d)
        return RatFun((self._n // g1) * (other._n // g2), (self._d // g2) * (other._d // g1))

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self._d, self._n)

    def __truediv__(self, other) -> "RatFun":
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFun":
        return _coerce_rf(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFun(self._n ** k, self._d ** k, _normalized=True)

    def __eq__(self, other) -> bool:
        other = _coerce_rf(other)
        if other is None:
            return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self._n.coeffs()), tuple(self._d.coeffs())))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFun({self})"

    def __str__(self) -> str:
        n = _poly_str([int(c) for c in self._n.coeffs()])
        if self._d.is_one():
            return n
        d = _poly_str([int(c) for c in self._d.coeffs()])
        return f"({n})/({d})"

    # substitutions -------------------------------------------------------

    def adams(self, l: int) -> "RatFun":
        return rf_adams(self, l)

    def invert_variable(self) -> "RatFun":
        """f(t) -> f(1/t)."""
        if self.is_zero():
            return self
        n = [int(c) for c in self._n.coeffs()]
        d = [int(c) for c in self._d.coeffs()]
        shift = len(d) - len(n)
        rn, rd = n[::-1], d[::-1]
        if shift >= 0:
            rn = [0] * shift + rn
        else:
            rd = [0] * (-shift) + rd
        return RatFun(fmpz_poly(rn), fmpz_poly(rd))

    def __call__(self, q):
        return rf_eval(self, q)


def _coerce_fmpz(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, IntPoly):
        return x._p
    if isinstance(x, int):
        return fmpz_poly([x])
    if isinstance(x, (list, tuple)):
        return fmpz_poly([int(c) for c in x])
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


def _coerce_rf(x) -> RatFun | None:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, IntPoly)):
        return RatFun(x)
    if isinstance(x, Fraction):
        return RatFun.from_fraction(x)
    return None


def _normalize(n: fmpz_poly, d: fmpz_poly) -> tuple[fmpz_poly, fmpz_poly]:
    if d.is_zero():
        raise ZeroDivisionError("zero denominator")
    if n.is_zero():
        return fmpz_poly([]), fmpz_poly([1])
    if d.degree() > 0:
        g = n.gcd(d)
        if g.degree() > 0:
            n = n // g
            d = d // g
    c = _gcd(int(n.content()), int(d.content()))
    if c != 1:
        n = n // c
        d = d // c
    if d.leading_coefficient() < 0:
        n, d = -n, -d
    return n, d


ZERO = RatFun(0)
ONE = RatFun(1)
T = RatFun([0, 1])


def rf_arith(lhs: RatFun, rhs: RatFun, kind: str) -> RatFun:
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {kind!r}")


def rf_eval(f: RatFun, q) -> Fraction:
    q = Fraction(q)
    den = _eval_poly(f._d, q)
    if den == 0:
        raise PoleError(f"denominator {f.denominator} vanishes at t = {q}")
    return _eval_poly(f._n, q) / den


def _eval_poly(p: fmpz_poly, q: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p.coeffs()):
        acc = acc * q + int(c)
    return acc


def _inflate(p: fmpz_poly, l: int) -> fmpz_poly:
    if l == 1 or p.degree() <= 0:
        return p
    coeffs = p.coeffs()
    out = [0] * ((len(coeffs) - 1) * l + 1)
    for k, c in enumerate(coeffs):
        out[k * l] = c
    return fmpz_poly(out)


def rf_adams(f: RatFun, l: int) -> RatFun:
    if l < 1:
        raise ValueError("Adams operator index must be positive")
    if l == 1:
        return f
    # t -> t^l preserves coprimality, content and the sign of the leading term
    return RatFun(_inflate(f._n, l), _inflate(f._d, l), _normalized=True)


def rf_as_polynomial(f: RatFun) -> IntPoly:
    if f.is_polynomial():
        return IntPoly(f._n)
    qn = fmpq_poly([int(c) for c in f._n.coeffs()])
    qd = fmpq_poly([int(c) for c in f._d.coeffs()])
    _, rem = divmod(qn, qd)
    # a reduced fraction is integral only when its denominator is 1; the
    # remainder reported is the polynomial remainder over Q
    raise NotAPolynomialError(f, RatFun(rem.numer(), int(rem.denom())))


# ---------------------------------------------------------------------------
# truncated multivariate series

DimKey = tuple[int, ...]


def _leq(v: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(v, b))


@lru_cache(maxsize=None)
def box_keys(box: DimKey) -> tuple[DimKey, ...]:
    """All v <= box, sorted by total degree then lexicographically."""
    keys = list(itertools.product(*(range(b + 1) for b in box)))
    keys.sort(key=lambda v: (sum(v), v))
    return tuple(keys)


@lru_cache(maxsize=None)
def _sub_keys(v: DimKey) -> tuple[DimKey, ...]:
    return tuple(itertools.product(*(range(x + 1) for x in v)))


class MultiSeries:
    """Truncated power series sum_v c_v z^v over Q(t) with v <= box."""

    __slots__ = ("nvars", "box", "terms")

    def __init__(self, box: Sequence[int], terms: Mapping[DimKey, RatFun] | None = None):
        self.box: DimKey = tuple(int(b) for b in box)
        self.nvars = len(self.box)
        clean: dict[DimKey, RatFun] = {}
        for v, c in (terms or {}).items():
            v = tuple(int(x) for x in v)
            if len(v) != self.nvars:
                raise ValueError(f"key {v} has wrong length for box {self.box}")
            if min(v, default=0) < 0:
                raise ValueError(f"negative exponent in key {v}")
            if not _leq(v, self.box):
                continue
            c = _coerce_rf(c)
            if c is None:
                raise TypeError("series coefficients must be rational functions")
            if not c.is_zero():
                clean[v] = clean[v] + c if v in clean else c
        self.terms = {v: c for v, c in clean.items() if not c.is_zero()}

    @classmethod
    def one(cls, box: Sequence[int]) -> "MultiSeries":
        return cls(box, {tuple(0 for _ in box): ONE})

    @classmethod
    def monomial(cls, box: Sequence[int], v: Sequence[int], c=ONE) -> "MultiSeries":
        return cls(box, {tuple(v): c})

    def zero_key(self) -> DimKey:
        return tuple(0 for _ in self.box)

    def __getitem__(self, v: Sequence[int]) -> RatFun:
        return self.terms.get(tuple(v), ZERO)

    def constant_term(self) -> RatFun:
        return self[self.zero_key()]

    def items(self) -> Iterator[tuple[DimKey, RatFun]]:
        for v in sorted(self.terms, key=lambda k: (sum(k), k)):
            yield v, self.terms[v]

    def _check(self, other: "MultiSeries") -> None:
        if not isinstance(other, MultiSeries):
            raise TypeError("expected a MultiSeries")
        if other.box != self.box:
            raise ValueError(f"box mismatch: {self.box} vs {other.box}")

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        out = dict(self.terms)
        for v, c in other.terms.items():
            out[v] = out[v] + c if v in out else c
        return MultiSeries(self.box, out)

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(self.box, {v: -c for v, c in self.terms.items()})

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def __mul__(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            return series_mul(self, other)
        c = _coerce_rf(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiSeries":
        c = _coerce_rf(c)
        return MultiSeries(self.box, {v: c * x for v, x in self.terms.items()})

    def map_coefficients(self, fn) -> "MultiSeries":
        return MultiSeries(self.box, {v: fn(c) for v, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.box == other.box and self.terms == other.terms

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*z^{v}" for v, c in self.items()) or "0"
        return f"MultiSeries(box={self.box}: {body})"


def series_mul(f: MultiSeries, g: MultiSeries) -> MultiSeries:
    f._check(g)
    box = f.box
    out: dict[DimKey, RatFun] = {}
    for u, a in f.terms.items():
        for w, b in g.terms.items():
            v = tuple(x + y for x, y in zip(u, w))
            if not _leq(v, box):
                continue
            p = a * b
            out[v] = out[v] + p if v in out else p
    return MultiSeries(box, out)


def series_inverse(f: MultiSeries) -> MultiSeries:
    c0 = f.constant_term()
    if c0.is_zero():
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = c0.inverse()
    g: dict[DimKey, RatFun] = {}
    zero = f.zero_key()
    for v in box_keys(f.box):
        if v == zero:
            g[v] = inv0
            continue
        acc = ZERO
        for u in _sub_keys(v):
            if u == zero:
                continue
            a = f.terms.get(u)
            if a is None:
                continue
            b = g.get(tuple(x - y for x, y in zip(v, u)))
            if b is not None:
                acc = acc + a * b
        if not acc.is_zero():
            g[v] = -(acc * inv0)
    return MultiSeries(f.box, g)


def series_adams(f: MultiSeries, l: int) -> MultiSeries:
    if l < 1:
        raise ValueError("Adams operator index must be positive")
    if l == 1:
        return f
    out = {}
    for v, c in f.terms.items():
        lv = tuple(l * x for x in v)
        if _leq(lv, f.box):
            out[lv] = rf_adams(c, l)
    return MultiSeries(f.box, out)


def series_monomial_twist(f: MultiSeries, w: Sequence[int]) -> MultiSeries:
    if len(w) != f.nvars:
        raise ValueError("twist vector has wrong length")
    return MultiSeries(
        f.box,
        {v: c * RatFun.t_power(sum(a * b for a, b in zip(w, v))) for v, c in f.terms.items()},
    )


def series_substitute_inverse(f: MultiSeries) -> MultiSeries:
    """Coefficientwise t -> 1/t."""
    return f.map_coefficients(RatFun.invert_variable)


def _max_adams(box: DimKey) -> int:
    return max(box, default=0)


def _euler_exp(g: MultiSeries) -> MultiSeries:
    """exp(g) for g without constant term, via |v| E_v = sum |u| g_u E_{v-u}."""
    zero = g.zero_key()
    E: dict[DimKey, RatFun] = {zero: ONE}
    for v in box_keys(g.box):
        if v == zero:
            continue
        acc = ZERO
        for u, a in g.terms.items():
            if not _leq(u, v):
                continue
            b = E.get(tuple(x - y for x, y in zip(v, u)))
            if b is not None:
                acc = acc + a * b * sum(u)
        if not acc.is_zero():
            E[v] = acc * RatFun(1, sum(v))
    return MultiSeries(g.box, E)


def _euler_log(F: MultiSeries) -> MultiSeries:
    """log(F) for F with constant term 1, via |v| F_v = sum |u| L_u F_{v-u}."""
    zero = F.zero_key()
    L: dict[DimKey, RatFun] = {}
    for v in box_keys(F.box):
        if v == zero:
            continue
        acc = F.terms.get(v, ZERO) * sum(v)
        for u, a in L.items():
            if u == v or not _leq(u, v):
                continue
            b = F.terms.get(tuple(x - y for x, y in zip(v, u)))
            if b is not None:
                acc = acc - a * b * sum(u)
        if not acc.is_zero():
            L[v] = acc * RatFun(1, sum(v))
    return MultiSeries(F.box, L)


def pleth_exp(f: MultiSeries) -> MultiSeries:
    if not f.constant_term().is_zero():
        raise ValueError("plethystic exponential needs zero constant term")
    acc = MultiSeries(f.box)
    for l in range(1, _max_adams(f.box) + 1):
        acc = acc + series_adams(f, l).scale(RatFun(1, l))
    return _euler_exp(acc)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("Moebius function needs a positive argument")
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def pleth_log(F: MultiSeries) -> MultiSeries:
    if F.constant_term() != ONE:
        raise ValueError("plethystic logarithm needs constant term 1")
    h = _euler_log(F)
    acc = MultiSeries(F.box)
    for l in range(1, _max_adams(F.box) + 1):
        mu = mobius(l)
        if mu:
            acc = acc + series_adams(h, l).scale(RatFun(mu, l))
    return acc
