"""Banded (upper-Hessenberg) determinant representations of F_N.

Rows and columns are 0-based in code and in the JSON dump; docstrings quote
entries with 1-based row index r as is customary for these matrices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

from qpl import fnfamily as fam
from qpl.fnfamily import FamilyParams
from qpl.qcore import Series, subst_x
from qpl.report import PASS, Report, Resolution, status_of

EntryRule = Callable[[int], Series]  # 1-based row -> exact polynomial entry


@dataclass
class BandMatrixSpec:
    """Square matrix with exact polynomial entries, stored sparsely.

    Entries below the first subdiagonal are rejected.  The determinant
    representations here have subdiagonal -1 throughout; the diagonal is 1
    for the general family and 1 + x q^r for the tridiagonal one.
    """

    size: int
    entries: dict[tuple[int, int], Series] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        for (r, c), v in list(self.entries.items()):
            if not (0 <= r < self.size and 0 <= c < self.size):
                raise ValueError(f"entry ({r}, {c}) outside a {self.size}x{self.size} matrix")
            if r > c + 1:
                raise ValueError(f"entry ({r}, {c}) breaks upper-Hessenberg form")
            if v.is_zero():
                del self.entries[(r, c)]

    def get(self, r: int, c: int) -> Series | None:
        return self.entries.get((r, c))

    def degree_bound(self) -> int:
        """Upper bound for the q-degree of the determinant."""
        n = self.size
        bounds = [0]  # deg D_0
        for col in range(n):
            best = -1
            sub = 0
            for r in range(col, -1, -1):
                h = self.entries.get((r, col))
                if h is not None and bounds[r] >= 0:
                    best = max(best, h.q_degree() + sub + bounds[r])
                if r > 0:
                    s = self.entries.get((r, r - 1))
                    if s is None:
                        break
                    sub += max(s.q_degree(), 0)
            bounds.append(best)
        return max(bounds[-1], 0)

    def to_list(self) -> list[dict]:
        return [{"row": r, "col": c, "entry": v.to_dict()} for (r, c), v in sorted(self.entries.items())]

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_list(), **kw)

    @classmethod
    def from_list(cls, size: int, data: list[dict], label: str = "") -> BandMatrixSpec:
        return cls(size, {(d["row"], d["col"]): Series.from_dict(d["entry"]) for d in data}, label)


def band_from_rules(size: int, rules, label: str = "") -> BandMatrixSpec:
    """Assemble a matrix from per-diagonal rules; offset -1 is the subdiagonal.

    ``rules`` is a mapping or a list of ``(offset, rule)`` pairs; rules that
    land on the same cell are added.
    """
    pairs = rules.items() if isinstance(rules, dict) else rules
    entries: dict[tuple[int, int], Series] = {}
    for offset, rule in pairs:
        for r in range(size):
            c = r + offset
            if 0 <= c < size:
                v = rule(r + 1)
                if (r, c) in entries:
                    old = entries[r, c]
                    T = max(v.trunc, old.trunc)
                    v = v.pad(T) + old.pad(T)
                entries[r, c] = v
    return BandMatrixSpec(size, entries, label)


def _mono(c: int, a: int, b: int) -> Series:
    return Series.from_terms([(a, b, c)], max(a, 0))


def _const(c: int) -> Series:
    return Series.from_poly([c], 0)


@dataclass(frozen=True)
class GeneralRules:
    """Entry schedule for the F_N(i,0,k;x) matrix.

    first: superdiagonal entries x q^(r + first)
    second: if not None, extra entries x^2 q^(2r + second) two above the diagonal
    The (2k)-th superdiagonal always carries -x^(2k+1) q^((2k+1)(r+k)+i).
    """

    first: int
    second: int | None

    def describe(self, i: int, k: int) -> str:
        s = 2 * k + 1
        parts = ["diag 1", "sub -1", f"super1 x q^(r+{self.first})"]
        if self.second is not None:
            parts.append(f"super2 x^2 q^(2r+{self.second})")
        parts.append(f"super{2 * k} -x^{s} q^({s}(r+{k})+{i})")
        return ", ".join(parts)


def build_general(N: int, i: int, k: int, rules: GeneralRules | None = None) -> BandMatrixSpec:
    """Matrix whose determinant is F_N(i,0,k;x) (with the reconstructed rules by default)."""
    if N < 1 or k < 1:
        raise ValueError("needs N >= 1 and k >= 1")
    if rules is None:
        rules = GeneralRules(first=i, second=None)
    s = 2 * k + 1
    table: list[tuple[int, EntryRule]] = [
        (0, lambda r: _const(1)),
        (-1, lambda r: _const(-1)),
        (1, lambda r: _mono(1, r + rules.first, 1)),
        (2 * k, lambda r: _mono(-1, s * (r + k) + i, s)),
    ]
    if rules.second is not None:
        table.append((2, lambda r: _mono(1, 2 * r + rules.second, 2)))
    return band_from_rules(N, table, f"general N={N} i={i} k={k} [{rules.describe(i, k)}]")


PRINTED_GENERAL = GeneralRules(first=0, second=1)


def build_tridiagonal(N: int) -> BandMatrixSpec:
    """Diagonal 1 + x q^r, superdiagonal -x^2 q^(2r+1), subdiagonal -1; det = F_N(0,1,1;x)."""
    if N < 1:
        raise ValueError("needs N >= 1")
    return band_from_rules(N, {
        0: lambda r: Series.from_terms([(0, 0, 1), (r, 1, 1)], r),
        1: lambda r: _mono(-1, 2 * r + 1, 2),
        -1: lambda r: _const(-1),
    }, f"tridiagonal N={N}")


def det(spec: BandMatrixSpec, T: int | None = None) -> Series:
    """Determinant by last-column expansion of an upper-Hessenberg matrix.

    D_n = sum_r h[r, n] * (-1)^(n-r) * prod_{t=r}^{n-1} h[t+1, t] * D_{r-1}
    (1-based), which needs one product per nonzero entry plus the running
    subdiagonal products.
    """
    if T is None:
        T = spec.degree_bound()
    one = Series.one(T)
    D = [one]
    for col in range(spec.size):
        acc = Series.zero(T)
        run = one  # (-1)^(n-r) prod of subdiagonal entries between r and n
        for r in range(col, -1, -1):
            h = spec.entries.get((r, col))
            if h is not None:
                acc = acc + h.pad(T) * run * D[r]
            if r > 0:
                sub = spec.entries.get((r, r - 1))
                if sub is None:
                    break
                run = -(run * sub.pad(T))
        D.append(acc)
    return D[-1]


def det_bruteforce(spec: BandMatrixSpec, T: int | None = None) -> Series:
    """Leibniz expansion over all permutations; only for small matrices."""
    if spec.size > 7:
        raise ValueError("brute-force determinant limited to size <= 7")
    if T is None:
        T = spec.degree_bound()
    total = Series.zero(T)
    n = spec.size
    for perm in itertools.permutations(range(n)):
        term = Series.one(T)
        for r, c in enumerate(perm):
            v = spec.entries.get((r, c))
            if v is None:
                break
            term = term * v.pad(T)
        else:
            inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
            total = total + (-term if inversions % 2 else term)
    return total


def minor(spec: BandMatrixSpec, row: int, col: int) -> BandMatrixSpec:
    """Delete one row and column; for row 0 the result is again upper-Hessenberg."""
    def re(i, cut):
        return i - (i > cut)

    entries = {(re(r, row), re(c, col)): v for (r, c), v in spec.entries.items() if r != row and c != col}
    return BandMatrixSpec(spec.size - 1, entries, f"minor({row},{col}) of {spec.label}")


def _exact_equal(a: Series, b: Series) -> bool:
    T = max(a.trunc, b.trunc)
    return a.pad(T) == b.pad(T)


def reconstruct_general(i: int, k: int, N_max: int = 12,
                        first_range: range = range(-1, 4),
                        second_options: tuple = (None, -1, 0, 1, 2, 3)) -> Resolution:
    """Search entry schedules whose determinants equal F_N(i,0,k;x) for 1 <= N <= N_max."""
    cands = {}
    for first in first_range:
        for second in second_options:
            rules = GeneralRules(first, second)
            verdict = PASS
            for N in range(1, N_max + 1):
                try:
                    got = det(build_general(N, i, k, rules))
                except ValueError as exc:
                    verdict = f"invalid: {exc}"
                    break
                want = fam.f_upper_N(FamilyParams(i, 0, k, N))
                if not _exact_equal(got, want):
                    verdict = f"fails at N = {N}"
                    break
            cands[rules.describe(i, k)] = verdict
    passing = [c for c, v in cands.items() if v == PASS]
    return Resolution(
        item=f"entry schedule of the F_N({i},0,{k};x) matrix",
        printed=PRINTED_GENERAL.describe(i, k),
        chosen=passing[0] if len(passing) == 1 else None,
        candidates=cands,
        note=f"det compared with the double sum for 1 <= N <= {N_max}"
             + ("" if len(passing) <= 1 else f"; non-unique: {passing}"),
    )


def last_column_matches_recurrence(N: int, i: int, k: int) -> bool:
    """Last column of the general matrix carries the shift-recurrence coefficients at j=0."""
    s = 2 * k + 1
    spec = build_general(N, i, k)
    expected = {N - 1: _const(1)}
    if N >= 2:
        expected[N - 2] = _mono(1, N + i - 1, 1)
    if N - 2 * k - 1 >= 0:
        expected[N - 2 * k - 1] = _mono(-1, s * (N - k) + i, s)
    got = {r: v for (r, c), v in spec.entries.items() if c == N - 1}
    return set(got) == set(expected) and all(_exact_equal(got[r], expected[r]) for r in got)


def top_row_check(spec: BandMatrixSpec, predicted: dict[int, Series]) -> Report:
    """Expand along row 0 and compare each cofactor with its predicted value.

    ``predicted`` maps a column c to the expected cofactor
    (-1)^c * det(minor(0, c)).  The report fails if a nonzero top entry has
    no prediction, a cofactor differs, or the recombined sum differs from det.
    """
    total = det(spec)
    T = total.trunc
    acc = Series.zero(T)
    mismatch = None
    for (r, c), h in sorted(spec.entries.items()):
        if r != 0:
            continue
        cof = det(minor(spec, 0, c))
        cof = -cof if c % 2 else cof
        want = predicted.get(c)
        if want is None or not _exact_equal(cof, want):
            mismatch = mismatch or {"col": c}
        Tm = max(T, cof.trunc, h.trunc)
        acc = acc.pad(Tm) + h.pad(Tm) * cof.pad(Tm)
    ok = mismatch is None and _exact_equal(acc, total)
    return Report(f"top-row expansion of {spec.label}", None, status_of(ok), first_failure=mismatch)


def predicted_cofactors_general(N: int, i: int, k: int) -> dict[int, Series]:
    """Cofactors along row 0 as substituted smaller determinants: the x-shift recurrence with x q^(i+1)."""
    out = {}
    for c in (0, 1, 2 * k):
        rest = N - c - 1
        if rest < 0:
            continue
        sub = fam.f_upper_N(FamilyParams(i, 0, k, rest))
        sub = subst_x(sub.pad(sub.trunc + (c + 1) * max(sub.x_degree(), 0)), c + 1)
        out[c] = sub
    return out


def predicted_cofactors_tridiagonal(N: int) -> dict[int, Series]:
    out = {}
    for c in (0, 1):
        rest = N - c - 1
        if rest < 0:
            continue
        sub = fam.f_upper_N(FamilyParams(0, 1, 1, rest))
        sub = subst_x(sub.pad(sub.trunc + (c + 1) * max(sub.x_degree(), 0)), c + 1)
        out[c] = sub
    return out


def top_row_sign_tridiagonal(N: int) -> int:
    """Sign with which x^2 q^3 F_(N-2)(0,1,1;xq^2) enters the row-0 expansion.

    The row-0 cofactor of column 1 is +F_(N-2)(0,1,1;xq^2), so the sign is
    that of the (0, 1) entry, whose magnitude is x^2 q^3.
    """
    if N < 2:
        raise ValueError("needs N >= 2")
    h = build_tridiagonal(N).get(0, 1)
    ((d, e, c),) = list(h.terms())
    if (d, e) != (3, 2) or abs(c) != 1:
        raise AssertionError(f"unexpected (0,1) entry {h}")
    return c
