"""Exact truncated power series in q with a tracked variable x.

A :class:`Series` stores, for every power of x, a dense coefficient vector in q
(index = q-degree), cut off at the truncation order ``T``.  Coefficients are
Python integers, so nothing ever overflows; products go through numpy with an
int64 fast path whenever the coefficient bound guarantees no overflow.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

_INT64_SAFE = 1 << 62


def _strip(row: Iterable[int]) -> tuple[int, ...]:
    row = tuple(row)
    end = len(row)
    while end and not row[end - 1]:
        end -= 1
    return row[:end]


def _convolve(a: tuple[int, ...], b: tuple[int, ...], limit: int) -> list[int]:
    """Product of two q-vectors, keeping indices < limit."""
    a = a[:limit]
    b = b[:limit]
    if not a or not b:
        return []
    if len(a) == 1:
        c = a[0]
        return [c * v for v in b]
    if len(b) == 1:
        c = b[0]
        return [c * v for v in a]
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    if bound < _INT64_SAFE:
        out = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
        return out[:limit].tolist()
    out = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    return list(out[:limit])


def _add_into(acc: list[int], row: Sequence[int], offset: int = 0, scale: int = 1) -> None:
    """acc[offset + t] += scale * row[t], ignoring indices past the end of acc."""
    n = min(len(row), len(acc) - offset)
    if n <= 0:
        return
    window = acc[offset:offset + n]
    if scale == 1:
        acc[offset:offset + n] = [x + y for x, y in zip(window, row)]
    else:
        acc[offset:offset + n] = [x + scale * y for x, y in zip(window, row)]


class Series:
    """Truncated bivariate series ``sum c[d, e] q^d x^e`` with ``d <= T``.

    Instances are immutable.  Two series are equal when they have the same
    truncation order and the same coefficients.
    """

    __slots__ = ("trunc", "_rows", "_hash")

    def __init__(self, trunc: int, rows: Mapping[int, Iterable[int]] | None = None):
        if trunc < 0:
            raise ValueError(f"truncation order must be non-negative, got {trunc}")
        self.trunc = trunc
        clean = {}
        for e, row in (rows or {}).items():
            r = _strip(row[: trunc + 1] if isinstance(row, (list, tuple)) else list(row)[: trunc + 1])
            if r:
                clean[e] = r
        self._rows: dict[int, tuple[int, ...]] = dict(sorted(clean.items()))
        self._hash = None

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int) -> Series:
        return cls(trunc)

    @classmethod
    def one(cls, trunc: int) -> Series:
        return cls(trunc, {0: (1,)})

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]],
                   trunc: int) -> Series:
        """Build from ``{(d, e): c}`` or an iterable of ``(d, e, c)``.

        Terms beyond the truncation order are dropped.  Every term must carry
        at least as many powers of q as of x.
        """
        if isinstance(terms, Mapping):
            items = [(d, e, c) for (d, e), c in terms.items()]
        else:
            items = list(terms)
        rows: dict[int, list[int]] = {}
        for d, e, c in items:
            if d < 0 or e < 0:
                raise ValueError(f"negative exponent in term q^{d} x^{e}")
            if e > d:
                raise ValueError(f"term q^{d} x^{e} has more powers of x than of q")
            if d > trunc or c == 0:
                continue
            row = rows.setdefault(e, [0] * (trunc + 1))
            row[d] += c
        return cls(trunc, rows)

    @classmethod
    def from_poly(cls, coeffs: Iterable[int], trunc: int) -> Series:
        """x-free series from a list of q-coefficients (index = degree)."""
        return cls(trunc, {0: coeffs})

    # -- inspection --------------------------------------------------------

    def rows(self) -> dict[int, tuple[int, ...]]:
        return dict(self._rows)

    def row(self, e: int) -> tuple[int, ...]:
        return self._rows.get(e, ())

    def terms(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero terms as ``(d, e, c)``, sorted by ``(d, e)``."""
        out = [(d, e, c) for e, row in self._rows.items() for d, c in enumerate(row) if c]
        out.sort()
        return iter(out)

    def __getitem__(self, key: tuple[int, int]) -> int:
        d, e = key
        row = self._rows.get(e, ())
        return row[d] if 0 <= d < len(row) else 0

    def is_zero(self) -> bool:
        return not self._rows

    def x_free(self) -> bool:
        return all(e == 0 for e in self._rows)

    def q_degree(self) -> int:
        """Highest q-degree with a nonzero coefficient (-1 for zero)."""
        return max((len(r) - 1 for r in self._rows.values()), default=-1)

    def x_degree(self) -> int:
        return max(self._rows, default=-1)

    def valuation(self) -> int | None:
        """Lowest q-degree with a nonzero coefficient, or None for zero."""
        best = None
        for row in self._rows.values():
            for d, c in enumerate(row):
                if c:
                    best = d if best is None else min(best, d)
                    break
        return best

    def coefficients(self) -> list[int]:
        """q-coefficients of an x-free series, padded to length T+1."""
        if not self.x_free():
            raise ValueError("series depends on x; use eval_x_one first")
        row = list(self._rows.get(0, ()))
        return row + [0] * (self.trunc + 1 - len(row))

    def coeff(self, d: int) -> list[tuple[int, int]]:
        """The x-polynomial multiplying q^d as a list of ``(x_degree, c)``."""
        if d < 0 or d > self.trunc:
            raise ValueError(f"q-degree {d} outside 0..{self.trunc}")
        return [(e, row[d]) for e, row in self._rows.items() if d < len(row) and row[d]]

    # -- ring operations ---------------------------------------------------

    def _binary(self, other: Series | int, sign: int) -> Series:
        if isinstance(other, int):
            other = Series(self.trunc, {0: (other,)})
        T = min(self.trunc, other.trunc)
        rows: dict[int, list[int]] = {}
        for e in set(self._rows) | set(other._rows):
            a = self._rows.get(e, ())[: T + 1]
            b = other._rows.get(e, ())[: T + 1]
            n = max(len(a), len(b))
            acc = list(a) + [0] * (n - len(a))
            _add_into(acc, b, scale=sign)
            rows[e] = acc
        return Series(T, rows)

    def __add__(self, other):
        return self._binary(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, -1)

    def __rsub__(self, other):
        return (-self)._binary(other, 1)

    def __neg__(self) -> Series:
        return Series(self.trunc, {e: [-c for c in row] for e, row in self._rows.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return Series(self.trunc, {e: [other * c for c in row] for e, row in self._rows.items()})
        if not isinstance(other, Series):
            return NotImplemented
        T = min(self.trunc, other.trunc)
        rows: dict[int, list[int]] = {}
        for e1, a in self._rows.items():
            for e2, b in other._rows.items():
                prod = _convolve(a, b, T + 1)
                acc = rows.get(e1 + e2)
                if acc is None:
                    rows[e1 + e2] = prod
                else:
                    if len(prod) > len(acc):
                        acc.extend([0] * (len(prod) - len(acc)))
                    _add_into(acc, prod)
        return Series(T, rows)

    __rmul__ = __mul__

    def shift(self, c: int, a: int, b: int = 0) -> Series:
        """Multiply by the monomial ``c q^a x^b`` (cheaper than :meth:`__mul__`)."""
        if a < 0 or b < 0:
            raise ValueError("negative exponent")
        T = self.trunc
        if c == 0 or a > T:
            return Series(T)
        rows = {e + b: [0] * a + [c * v for v in row[: T + 1 - a]] for e, row in self._rows.items()}
        return Series(T, rows)

    def __pow__(self, k: int) -> Series:
        if k < 0:
            return inverse(self) ** (-k)
        out = Series.one(self.trunc)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- truncation --------------------------------------------------------

    def truncate(self, T: int) -> Series:
        if T > self.trunc:
            raise ValueError(f"cannot raise truncation from {self.trunc} to {T}; use pad()")
        return Series(T, self._rows)

    def pad(self, T: int) -> Series:
        """Reinterpret an exact polynomial at truncation order ``T``.

        Only valid when the caller knows the series is a polynomial whose true
        degree does not exceed ``self.trunc``; lowering simply truncates.
        """
        return Series(T, self._rows)

    # -- comparison, hashing, display --------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == Series(self.trunc, {0: (other,)})
        if not isinstance(other, Series):
            return NotImplemented
        return self.trunc == other.trunc and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.trunc, tuple(self._rows.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Series({self!s}, T={self.trunc})"

    def __str__(self) -> str:
        parts = []
        for d, e, c in self.terms():
            mono = "*".join(p for p in (
                "" if d == 0 else ("q" if d == 1 else f"q^{d}"),
                "" if e == 0 else ("x" if e == 1 else f"x^{e}"),
            ) if p)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "truncation": self.trunc,
            "terms": [{"q": d, "x": e, "c": str(c)} for d, e, c in self.terms()],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: Mapping) -> Series:
        T = int(data["truncation"])
        return cls.from_terms([(int(t["q"]), int(t["x"]), int(t["c"])) for t in data["terms"]], T)

    @classmethod
    def from_json(cls, text: str) -> Series:
        return cls.from_dict(json.loads(text))


# -- free-function API -------------------------------------------------------

def add(a: Series, b: Series) -> Series:
    return a + b


def sub(a: Series, b: Series) -> Series:
    return a - b


def neg(a: Series) -> Series:
    return -a


def mul(a: Series, b: Series) -> Series:
    return a * b


def monomial(c: int, a: int, b: int, T: int) -> Series:
    """``c q^a x^b`` truncated at ``T`` (zero if ``a > T``)."""
    if a < 0 or b < 0:
        raise ValueError(f"negative exponent in monomial q^{a} x^{b}")
    return Series.from_terms([(a, b, c)], T)


def subst_x(s: Series, p: int) -> Series:
    """Substitute ``x -> x q^p``."""
    if p < 0:
        raise ValueError("substitution power must be non-negative")
    if p == 0:
        return s
    T = s.trunc
    rows = {}
    for e, row in s.rows().items():
        off = p * e
        if off <= T:
            rows[e] = [0] * off + list(row[: T + 1 - off])
    return Series(T, rows)


def eval_x_one(s: Series) -> Series:
    """Set ``x = 1``."""
    acc = [0] * (s.trunc + 1)
    for row in s.rows().values():
        _add_into(acc, row)
    return Series(s.trunc, {0: acc})


def coeff(s: Series, d: int) -> list[tuple[int, int]]:
    return s.coeff(d)


def poch_finite(a: int, step: int, n: int, T: int, x_weight: int = 0) -> Series:
    """``prod_{j<n} (1 - x^w q^(a + step*j))`` truncated at T."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if step < 1:
        raise ValueError("step must be positive")
    if x_weight > 0 and a < x_weight:
        raise ValueError("each factor needs at least as many q's as x's")
    if x_weight == 0:
        return Series.from_poly(_poch_poly(a, step, min(n, _factors_below(a, step, T)), T), T)
    out = Series.one(T)
    for j in range(n):
        d = a + step * j
        if d > T:
            break
        out = out - out.shift(1, d, x_weight)
    return out


def poch_infinite(a: int, step: int, T: int, x_weight: int = 0) -> Series:
    """``(x^w q^a; q^step)_inf`` truncated at T."""
    if a < 1:
        raise ValueError("infinite product needs a >= 1")
    return poch_finite(a, step, _factors_below(a, step, T), T, x_weight)


def _factors_below(a: int, step: int, T: int) -> int:
    return 0 if a > T else (T - a) // step + 1


@lru_cache(maxsize=4096)
def _poch_poly(a: int, step: int, n: int, T: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = list(_poch_poly(a, step, n - 1, T))
    d = a + step * (n - 1)
    out = prev + [0] * min(d, max(0, T + 1 - len(prev)))
    for idx in range(len(prev)):
        if idx + d > T:
            break
        out[idx + d] -= prev[idx]
    return _strip(out)


def inverse(s: Series) -> Series:
    """Multiplicative inverse of a series whose q^0 part is exactly 1."""
    if s.coeff(0) != [(0, 1)]:
        raise ValueError("series is not invertible here: its q^0 part must be exactly 1")
    T = s.trunc
    if s.x_free():
        return Series.from_poly(_inverse_poly(s.row(0), T), T)
    # degree-by-degree in q over x-polynomials
    by_d: list[dict[int, int]] = [dict() for _ in range(T + 1)]
    for d, e, c in s.terms():
        by_d[d][e] = c
    support = [d for d in range(1, T + 1) if by_d[d]]
    inv: list[dict[int, int]] = [{0: 1}]
    for d in range(1, T + 1):
        acc: dict[int, int] = {}
        for j in support:
            if j > d:
                break
            for e1, c1 in by_d[j].items():
                for e2, c2 in inv[d - j].items():
                    acc[e1 + e2] = acc.get(e1 + e2, 0) - c1 * c2
        inv.append({e: c for e, c in acc.items() if c})
    return Series.from_terms([(d, e, c) for d, row in enumerate(inv) for e, c in row.items()], T)


def _inverse_poly(row: tuple[int, ...], T: int) -> list[int]:
    nz = [(j, c) for j, c in enumerate(row) if j and c]
    inv = [1] + [0] * T
    for d in range(1, T + 1):
        acc = 0
        for j, c in nz:
            if j > d:
                break
            acc -= c * inv[d - j]
        inv[d] = acc
    return inv


@lru_cache(maxsize=1 << 15)
def _qbinom_poly(A: int, B: int, r: int, T: int | None) -> tuple[int, ...]:
    # Pascal: [A, B] = [A-1, B-1] + q^(B r) [A-1, B]; T=None means untruncated
    if B < 0 or B > A:
        return ()
    if B == 0 or B == A:
        return (1,)
    if B > A - B:
        return _qbinom_poly(A, A - B, r, T)
    left = _qbinom_poly(A - 1, B - 1, r, T)
    right = _qbinom_poly(A - 1, B, r, T)
    sh = B * r
    top = len(right) + sh if T is None else min(T + 1, len(right) + sh)
    out = list(left) + [0] * max(0, top - len(left))
    for idx, v in enumerate(right):
        if idx + sh >= top:
            break
        out[idx + sh] += v
    return _strip(out)


def qbinom_poly(A: int, B: int, r: int, T: int) -> tuple[int, ...]:
    """Coefficient vector of the Gaussian binomial ``[A, B]`` in ``q^r``, cut at T."""
    if r < 1:
        raise ValueError("base power r must be positive")
    if B < 0 or B > A:
        return ()
    if r * B * (A - B) <= T:
        return _qbinom_poly(A, B, r, None)
    return _qbinom_poly(A, B, r, T)


def qbinom(A: int, B: int, r: int, T: int) -> Series:
    """Gaussian binomial coefficient in base ``q^r``; zero when ``B < 0`` or ``B > A``."""
    return Series.from_poly(qbinom_poly(A, B, r, T), T)
