"""The series families: F_N(i,j,k;x), F(i,k;x), the k=0 closed forms, f_N and b_N.

Every polynomial family defaults to ``T=None``, meaning "at a truncation order
large enough to hold the whole polynomial", so identities between them are
exact polynomial identities rather than truncated ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from qpl.qcore import (
    Series,
    _add_into,
    _convolve,
    eval_x_one,
    inverse,
    poch_infinite,
    qbinom_poly,
)
from qpl.report import PASS, Resolution


@dataclass(frozen=True)
class FamilyParams:
    i: int
    j: int
    k: int
    N: int

    def __post_init__(self):
        if min(self.i, self.j, self.k) < 0:
            raise ValueError(f"i, j, k must be non-negative: {self}")

    @property
    def s(self) -> int:
        return 2 * self.k + 1

    def at(self, N: int) -> FamilyParams:
        return FamilyParams(self.i, self.j, self.k, N)


def _tri(n: int) -> int:
    return n * (n + 1) // 2


def _upper_terms(p: FamilyParams) -> Iterator[tuple[int, int, int, int, int, int]]:
    """Nonvanishing (m, n) of the F_N double sum.

    Yields ``(m, n, exponent, x_degree, A1, A2)`` where the brackets are
    ``[A1, m]_q`` and ``[A2, n]_{q^s}``.
    """
    if p.N < 0:
        return
    s, k, i = p.s, p.k, p.i
    n = 0
    while s * n <= p.N:
        m = 0
        while True:
            A1 = p.N - s * n - m + p.j
            A2 = p.N - 2 * k * n - m
            if m > A1 or n > A2:
                break
            e = _tri(s * n) + m * m + s * m * n + i * (m + n)
            yield m, n, e, m + s * n, A1, A2
            m += 1
        n += 1


@lru_cache(maxsize=8192)
def f_upper_degree(p: FamilyParams) -> tuple[int, int]:
    """(q-degree bound, x-degree bound) of F_N; (-1, -1) for the zero polynomial."""
    qd = xd = -1
    for m, n, e, xe, A1, A2 in _upper_terms(p):
        qd = max(qd, e + m * (A1 - m) + p.s * n * (A2 - n))
        xd = max(xd, xe)
    return qd, xd


def f_upper_N(p: FamilyParams, T: int | None = None) -> Series:
    """F_N(i,j,k;x) from its defining double sum (zero for N < 0)."""
    if T is None:
        T = max(f_upper_degree(p)[0], 0)
    return _f_upper_cached(p, T)


@lru_cache(maxsize=4096)
def _f_upper_cached(p: FamilyParams, T: int) -> Series:
    rows: dict[int, list[int]] = {}
    for m, n, e, xe, A1, A2 in _upper_terms(p):
        if e > T:
            continue
        lim = T + 1 - e
        prod = _convolve(qbinom_poly(A1, m, 1, T - e), qbinom_poly(A2, n, p.s, T - e), lim)
        _add_into(rows.setdefault(xe, [0] * (T + 1)), prod, e, -1 if n % 2 else 1)
    return Series(T, rows)


# -- infinite double sums ----------------------------------------------------

@lru_cache(maxsize=1024)
def _inv_qq(step: int, n: int, T: int) -> tuple[int, ...]:
    """Coefficients of 1/(q^step; q^step)_n to order T, built incrementally."""
    if n == 0:
        return (1,) + (0,) * T
    prev = list(_inv_qq(step, n - 1, T))
    d = step * n
    # multiply by 1/(1 - q^d): running sums with stride d
    for idx in range(d, T + 1):
        prev[idx] += prev[idx - d]
    return tuple(prev)


def double_sum(i: int, k: int, T: int, x_tracked: bool = True,
               m_extra: int = 0, n_extra: int = 0, const: int = 0) -> Series:
    """Sum over m, n >= 0 of

        (-1)^n q^(C(s n + 1, 2) + m^2 + s m n + i(m+n) + m_extra m + n_extra n + const) x^(m + s n)
        / ((q;q)_m (q^s;q^s)_n),        s = 2k + 1,

    truncated at T.  With ``x_tracked`` false, x is set to 1.
    """
    return _double_sum(i, k, T, x_tracked, m_extra, n_extra, const)


@lru_cache(maxsize=256)
def _double_sum(i, k, T, x_tracked, m_extra, n_extra, const) -> Series:
    if k < 0 or T < 0:
        raise ValueError("k and T must be non-negative")
    s = 2 * k + 1
    rows: dict[int, list[int]] = {}

    def exponent(m, n):
        return _tri(s * n) + m * m + s * m * n + i * (m + n) + m_extra * m + n_extra * n + const

    n = 0
    while exponent(0, n) <= T:
        inv_n = _inv_qq(s, n, T)
        m = 0
        while (e := exponent(m, n)) <= T:
            lim = T + 1 - e
            prod = _convolve(_inv_qq(1, m, T)[:lim], inv_n[:lim], lim)
            xe = m + s * n if x_tracked else 0
            row = rows.setdefault(xe, [0] * (T + 1))
            sign = -1 if n % 2 else 1
            for idx, c in enumerate(prod, start=e):
                row[idx] += sign * c
            m += 1
        n += 1
    return Series(T, rows)


def f_infinite(i: int, k: int, T: int, x_tracked: bool = True) -> Series:
    """F(i,k;x), the N -> infinity limit of F_N(i,0,k;x)."""
    return double_sum(i, k, T, x_tracked)


def overpartition_gf(i: int, k: int, T: int) -> Series:
    """F(i,k;x) / (xq;q)_inf; x counts parts."""
    return f_infinite(i, k, T, True) * inverse(poch_infinite(1, 1, T, x_weight=1))


# -- k = 0 closed forms -------------------------------------------------------

K0_VARIANTS = ("statement", "proof", "unsigned", "corrected")


def f_k0_closed(i: int, j: int, N: int, T: int | None = None, variant: str = "corrected") -> Series:
    """Candidate closed forms for F_N(i,j,0;x).

    statement:  sum_{n<j}  [j-1, n] x^n q^(n(N+i+j))
    proof:      sum_M (-1)^M [j-1, M] x^M q^(M(N+i+1))
    unsigned:   sum_M        [j-1, M] x^M q^(M(N+i+1))
    corrected:  as unsigned, restricted to M <= N

    Only ``corrected`` agrees with the double sum for every N >= 0; see
    :func:`resolve_k0_closed`.
    """
    if j < 1:
        raise ValueError("closed form needs j >= 1")
    if variant not in K0_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {K0_VARIANTS}")
    if variant == "statement":
        step, sign, top = N + i + j, 1, j - 1
    else:
        step = N + i + 1
        sign = -1 if variant == "proof" else 1
        top = min(j - 1, N) if variant == "corrected" else j - 1
    if N < 0:
        return Series.zero(0 if T is None else T)
    if T is None:
        T = max(M * step + M * (j - 1 - M) for M in range(top + 1))
    out: dict[int, list[int]] = {}
    for M in range(top + 1):
        e = M * step
        if e > T:
            break
        row = out.setdefault(M, [0] * (T + 1))
        for idx, c in enumerate(qbinom_poly(j - 1, M, 1, T - e), start=e):
            row[idx] += c * sign ** M
    return Series(T, out)


def resolve_k0_closed(N_max: int = 20, j_max: int = 6, i_max: int = 3) -> Resolution:
    """Test every closed-form variant against the double sum on a grid."""
    outcome = {}
    for variant in K0_VARIANTS:
        outcome[variant] = PASS
        for i in range(i_max + 1):
            for j in range(1, j_max + 1):
                for N in range(N_max + 1):
                    target = f_upper_N(FamilyParams(i, j, 0, N))
                    cand = f_k0_closed(i, j, N, variant=variant)
                    T = max(target.trunc, cand.trunc)
                    if target.pad(T) != cand.pad(T):
                        outcome[variant] = f"fails at (i, j, N) = ({i}, {j}, {N})"
                        break
                if outcome[variant] != PASS:
                    break
            if outcome[variant] != PASS:
                break
    passing = [v for v, r in outcome.items() if r == PASS]
    return Resolution(
        item="closed form of F_N(i,j,0;x)",
        printed="statement",
        chosen=passing[0] if len(passing) == 1 else None,
        candidates=outcome,
        note=f"grid N <= {N_max}, 1 <= j <= {j_max}, i <= {i_max}",
    )


# -- the sequences f_N and b_N --------------------------------------------------

F_SMALL_READINGS = ("semicolon", "pair")


def _f_small_terms(N: int, reading: str):
    j = 0
    while 3 * j <= N:
        if reading == "semicolon":
            poch = [(2 + 3 * t, 1) for t in range(j)]  # (q^2; q^3)_j
        elif reading == "pair":
            poch = [(2 + t, 1) for t in range(j)] + [(3 + t, 1) for t in range(j)]  # (q^2, q^3; q)_j
        else:
            raise ValueError(f"unknown reading {reading!r}")
        yield j, 3 * j * j - 2 * j, poch
        j += 1


def f_small_degree(N: int, reading: str = "semicolon") -> int:
    return max((e + 3 * j * (N - 3 * j) + sum(a for a, _ in poch)
                for j, e, poch in _f_small_terms(N, reading)), default=0)


def f_small(N: int, T: int | None = None, reading: str = "semicolon") -> Series:
    """f_N = sum_j q^(3j^2 - 2j) [N, 3j] (q^2;q^3)_j.

    ``reading="pair"`` uses (q^2, q^3; q)_j instead of (q^2; q^3)_j.
    """
    if N < 0:
        raise ValueError("f_N needs N >= 0")
    if T is None:
        T = f_small_degree(N, reading)
    acc = Series.zero(T)
    for j, e, poch in _f_small_terms(N, reading):
        if e > T:
            break
        prod = Series.from_poly(qbinom_poly(N, 3 * j, 1, T), T)
        for a, _ in poch:
            prod = prod - prod.shift(1, a)
        acc = acc + prod.shift(1, e)
    return acc


def F011_at_one(N: int) -> Series:
    """F_N(0,1,1;1) as an exact polynomial."""
    return eval_x_one(f_upper_N(FamilyParams(0, 1, 1, N)))


def b_degree(N: int) -> int:
    d1 = f_upper_degree(FamilyParams(0, 1, 1, N - 1))[0]
    d2 = f_upper_degree(FamilyParams(0, 1, 1, N - 2))[0]
    return max(d1, (N - 1 + d2) if d2 >= 0 else -1, 0)


def b_seq(N: int, T: int | None = None, sign: int = -1) -> Series:
    """b_N = F_{N-1}(0,1,1;1) + sign * q^(N-1) F_{N-2}(0,1,1;1).

    The sign defaults to -1, the value that makes f_N = b_N hold
    (see :func:`resolve_b_sign`).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if T is None:
        T = b_degree(N)
    first = F011_at_one(N - 1).pad(T)
    if N - 2 < 0:
        return first
    return first + F011_at_one(N - 2).pad(T).shift(sign, N - 1)


def resolve_b_sign(N_max: int = 41) -> Resolution:
    """Decide the sign in f_N = F_{N-1}(0,1,1;1) +- q^(N-1) F_{N-2}(0,1,1;1).

    Checked for 1 <= N <= N_max, i.e. the claim f_{N+1} = ... for 0 <= N < N_max.
    """
    outcome = {}
    for label, sign in (("+", 1), ("-", -1)):
        outcome[label] = PASS
        for N in range(1, N_max + 1):
            T = max(f_small_degree(N), b_degree(N))
            if f_small(N, T) != b_seq(N, T, sign):
                outcome[label] = f"fails at N = {N}"
                break
    passing = [v for v, r in outcome.items() if r == PASS]
    return Resolution(
        item="sign in f_(N+1) = F_N(0,1,1;1) +- q^N F_(N-1)(0,1,1;1)",
        printed="+",
        chosen=passing[0] if len(passing) == 1 else None,
        candidates=outcome,
        note=f"checked 1 <= N <= {N_max} (claim index 0..{N_max - 1})",
    )


def conjecture_sides(T: int) -> tuple[Series, Series]:
    """Both sides of the (2,3 mod 6) identity at x = 1, to order T."""
    lhs = f_infinite(1, 1, T, x_tracked=False)
    rhs = inverse(poch_infinite(2, 6, T) * poch_infinite(3, 6, T))
    return lhs, rhs


def one_mod_three_sides(T: int) -> tuple[Series, Series]:
    lhs = eval_x_one(f_infinite(0, 1, T, x_tracked=True))
    rhs = inverse(poch_infinite(1, 3, T))
    return lhs, rhs
