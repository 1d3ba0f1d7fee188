"""Exact checking of linear q-recurrences with x -> x q^p rescaling.

A recurrence is a list of :class:`RecTerm`; at each N the residual

    sum_t  coeff_t(N) * member_t(N - shift_t)(x q^xsub_t)

must vanish identically.  Coefficients are short lists of monomials
``(c, q_exp, x_exp)``, which lets the checker pick a truncation order above
every degree that can occur, so a PASS is an exact polynomial identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb
from typing import Callable, Sequence

from qpl import fnfamily as fam
from qpl.fnfamily import FamilyParams
from qpl.qcore import Series, _add_into, eval_x_one, inverse, poch_finite, poch_infinite, subst_x
from qpl.report import FAIL, PASS, Report, Resolution, leading_term, status_of

Monomials = list[tuple[int, int, int]]


# -- families ---------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """A sequence of exact polynomials indexed by N, plus degree bounds."""

    name: str
    value: Callable[[int], Series]
    degree: Callable[[int], tuple[int, int]]

    def __call__(self, N: int) -> Series:
        return self.value(N)


def F_family(i: int, j: int, k: int, x_one: bool = False) -> Family:
    def value(N):
        s = fam.f_upper_N(FamilyParams(i, j, k, N))
        return eval_x_one(s) if x_one else s

    def degree(N):
        qd, xd = fam.f_upper_degree(FamilyParams(i, j, k, N))
        return (qd, 0 if x_one else xd)

    label = f"F_N({i},{j},{k};{'1' if x_one else 'x'})"
    return Family(label, value, degree)


def f_small_family() -> Family:
    return Family("f_N", lambda N: fam.f_small(N) if N >= 0 else Series.zero(0),
                  lambda N: (fam.f_small_degree(N), 0) if N >= 0 else (-1, -1))


def b_family(sign: int = -1) -> Family:
    return Family(f"b_N(sign={sign:+d})", lambda N: fam.b_seq(N, sign=sign),
                  lambda N: (fam.b_degree(N), 0))


# -- schemas ------------------------------------------------------------------

@dataclass(frozen=True)
class RecTerm:
    coeff: Callable[[int], Monomials]
    shift: int
    xsub: int = 0
    family: Family | None = None


@dataclass
class RecurrenceSchema:
    name: str
    terms: list[RecTerm]
    family: Family | None
    range: tuple[int, int]
    printed: dict = field(default_factory=dict)

    def member(self, term: RecTerm) -> Family:
        fm = term.family or self.family
        if fm is None:
            raise ValueError(f"schema {self.name!r}: term has no family")
        return fm


def _coeff_at(term: RecTerm, N: int) -> Monomials:
    mons = [(c, a, b) for c, a, b in term.coeff(N) if c]
    for _, a, b in mons:
        if a < 0 or b < 0:
            raise ValueError(f"negative exponent q^{a} x^{b} at N={N}")
    return mons


def residual(schema: RecurrenceSchema, N: int, T: int | None = None) -> Series:
    """The schema's left-hand side at N, exact unless T is forced lower."""
    parts = []
    bound = 0
    for term in schema.terms:
        fm = schema.member(term)
        qd, xd = fm.degree(N - term.shift)
        if qd < 0:
            continue
        mons = _coeff_at(term, N)
        if not mons:
            continue
        top = max(a for _, a, _ in mons)
        bound = max(bound, top + qd + term.xsub * max(xd, 0))
        parts.append((mons, fm(N - term.shift), term.xsub))
    if T is None:
        T = bound
    rows: dict[int, list[int]] = {}
    for mons, value, xsub in parts:
        v = subst_x(value.pad(T), xsub)
        for c, a, b in mons:
            for e, row in v.rows().items():
                _add_into(rows.setdefault(e + b, [0] * (T + 1)), row, a, c)
    return Series(T, rows)


def check(schema: RecurrenceSchema, T: int | None = None) -> Report:
    lo, hi = schema.range
    for N in range(lo, hi + 1):
        res = residual(schema, N, T)
        if not res.is_zero():
            return Report(schema.name, (lo, hi), FAIL,
                          first_failure={"N": N, "residual_leading": leading_term(res)})
    return Report(schema.name, (lo, hi), PASS)


def perturbed(schema: RecurrenceSchema, term_index: int, mon_index: int = 0, by: int = 1) -> RecurrenceSchema:
    """Copy of the schema with one monomial's q-exponent raised by ``by``."""
    terms = list(schema.terms)
    old = terms[term_index]

    def coeff(N, old=old):
        mons = list(old.coeff(N))
        if mon_index < len(mons):
            c, a, b = mons[mon_index]
            mons[mon_index] = (c, a + by, b)
        return mons

    terms[term_index] = replace(old, coeff=coeff)
    return replace(schema, name=f"{schema.name} [perturbed term {term_index}]", terms=terms)


def negative_controls(schema: RecurrenceSchema) -> dict[int, Report]:
    """Perturb each term in turn; every perturbation is expected to FAIL."""
    return {t: check(perturbed(schema, t)) for t in range(len(schema.terms))}


def merge_terms(terms: Sequence[RecTerm]) -> list[RecTerm]:
    """Combine terms that act on the same shifted member."""
    groups: dict[tuple, list[RecTerm]] = {}
    for t in terms:
        groups.setdefault((t.shift, t.xsub, t.family), []).append(t)
    out = []
    for (shift, xsub, fm), ts in groups.items():
        if len(ts) == 1:
            out.append(ts[0])
            continue

        def coeff(N, ts=ts):
            acc: dict[tuple[int, int], int] = {}
            for t in ts:
                for c, a, b in t.coeff(N):
                    acc[a, b] = acc.get((a, b), 0) + c
            return [(c, a, b) for (a, b), c in sorted(acc.items()) if c]

        out.append(RecTerm(coeff, shift, xsub, fm))
    return out


# -- fitting a single exponent offset -----------------------------------------

@dataclass
class FitResult:
    delta: int | None
    passing: list[int]
    outcomes: dict[int, Report]

    @property
    def degenerate(self) -> bool:
        return len(self.passing) > 1


def fit_exponent(template: Callable[[int], RecurrenceSchema], candidates: range) -> FitResult:
    """Find the unique offset delta for which ``template(delta)`` passes.

    Returns ``delta=None`` when no candidate passes or several do; in the
    latter case all passing values are listed rather than one being chosen.
    """
    outcomes = {}
    for delta in candidates:
        try:
            outcomes[delta] = check(template(delta))
        except ValueError as exc:  # offset drives an exponent negative inside the range
            outcomes[delta] = Report(f"delta={delta}", None, FAIL, first_failure={"error": str(exc)})
    passing = [d for d, r in outcomes.items() if r.passed]
    return FitResult(passing[0] if len(passing) == 1 else None, passing, outcomes)


def fit_resolution(item: str, fit: FitResult, printed: int = 0, note: str = "") -> Resolution:
    cands = {}
    for d, r in fit.outcomes.items():
        cands[f"delta={d}"] = PASS if r.passed else f"fails at N = {(r.first_failure or {}).get('N')}"
    chosen = None if fit.delta is None else f"delta={fit.delta}"
    if fit.degenerate:
        note = (note + "; " if note else "") + f"several offsets pass: {fit.passing}"
    return Resolution(item, f"delta={printed}", chosen, cands, note)


# -- recurrences of the families -------------------------------------------------

def schema_shift_recurrence(i: int, j: int, k: int, delta: int = 0, lo: int | None = None, hi: int = 40) -> RecurrenceSchema:
    """F_N = F_{N-1} + x q^(N+j+k-1+delta) F_{N-2} - x^s q^(s(N-k)+i) F_{N-s}, written as residual.

    The printed middle exponent corresponds to delta = 0; the identity holds
    with delta = i - k, i.e. exponent N + i + j - 1, and only from N = j + 1 on.
    """
    if lo is None:
        lo = j + 1
    s = 2 * k + 1
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0)], 1),
        RecTerm(lambda N: [(-1, N + j + k - 1 + delta, 1)], 2),
        RecTerm(lambda N: [(1, s * (N - k) + i, s)], s),
    ]
    return RecurrenceSchema(f"shift recurrence (i,j,k)=({i},{j},{k}) delta={delta}", merge_terms(terms),
                            F_family(i, j, k), (lo, hi))


def schema_f011_recurrence(lo: int = 1, hi: int = 40) -> RecurrenceSchema:
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0), (-1, N, 1)], 1),
        RecTerm(lambda N: [(1, 2 * N - 1, 2)], 2),
    ]
    return RecurrenceSchema("F_N(0,1,1) recurrence", terms, F_family(0, 1, 1), (lo, hi))


def schema_f011_telescoping(lo: int = 2, hi: int = 40) -> RecurrenceSchema:
    """S(N) + x q^N S(N-1) with S(N) = F_N - (1 + x q^N) F_{N-1} + x^2 q^(2N-1) F_{N-2}."""
    terms = [
        # S(N)
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0), (-1, N, 1)], 1),
        RecTerm(lambda N: [(1, 2 * N - 1, 2)], 2),
        # x q^N S(N-1)
        RecTerm(lambda N: [(1, N, 1)], 1),
        RecTerm(lambda N: [(-1, N, 1), (-1, 2 * N - 1, 2)], 2),
        RecTerm(lambda N: [(1, 3 * N - 3, 3)], 3),
    ]
    return RecurrenceSchema("S(N) telescoping", terms, F_family(0, 1, 1), (lo, hi))


def schema_j_lowering(i: int, j: int, k: int, delta: int = 0, lo: int = 0, hi: int = 25) -> RecurrenceSchema:
    """F_N(i,j,k) - F_N(i,j-1,k) - x q^(N+i+j-1+delta) F_{N-1}(i,j-1,k)."""
    if j < 1:
        raise ValueError("needs j >= 1")
    prev = F_family(i, j - 1, k)
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0)], 0, family=prev),
        RecTerm(lambda N: [(-1, N + i + j - 1 + delta, 1)], 1, family=prev),
    ]
    return RecurrenceSchema(f"j-lowering (i,j,k)=({i},{j},{k}) delta={delta}", terms, F_family(i, j, k), (lo, hi))


def schema_x_shift(i: int, k: int, delta: int = 0, lo: int = 1, hi: int = 40) -> RecurrenceSchema:
    """F_N(x) - F_{N-1}(xq) - x q^(1+delta) F_{N-2}(xq^2) + x^s q^(C(2k+2,2)+i) F_{N-s}(xq^s).

    Printed with delta = 0; holds with delta = i.
    """
    s = 2 * k + 1
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0)], 1, xsub=1),
        RecTerm(lambda N: [(-1, 1 + delta, 1)], 2, xsub=2),
        RecTerm(lambda N: [(1, comb(2 * k + 2, 2) + i, s)], s, xsub=s),
    ]
    return RecurrenceSchema(f"x-shift recurrence (i,k)=({i},{k}) delta={delta}", merge_terms(terms),
                            F_family(i, 0, k), (lo, hi))


def schema_f011_x_shift(sign: int = 1, lo: int = 1, hi: int = 40) -> RecurrenceSchema:
    """F_N(x) - (1 + xq) F_{N-1}(xq) - sign x^2 q^3 F_{N-2}(xq^2); printed sign is +."""
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0), (-1, 1, 1)], 1, xsub=1),
        RecTerm(lambda N: [(-sign, 3, 2)], 2, xsub=2),
    ]
    return RecurrenceSchema(f"F_N(0,1,1) x-shift sign={sign:+d}", terms, F_family(0, 1, 1), (lo, hi))


def _f_small_rec_terms(perturb: bool = False) -> list[RecTerm]:
    return [
        RecTerm(lambda N: [(1, 0, 0), (-1, N - 2, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0), (1, 2 * N - 3, 0)], 1),
        RecTerm(lambda N: [(1, 2 * N - 4 + perturb, 0), (-1, 3 * N - 5 + perturb, 0)], 2),
    ]


def schema_f_small_recurrence(lo: int = 2, hi: int = 40, perturb: bool = False) -> RecurrenceSchema:
    """(1-q^(N-2)) f_N - (1-q^(2N-3)) f_{N-1} + q^(2N-4)(1-q^(N-1)) f_{N-2}."""
    name = "f_N recurrence" + (" [q^(2N-4) -> q^(2N-3)]" if perturb else "")
    return RecurrenceSchema(name, _f_small_rec_terms(perturb), f_small_family(), (lo, hi))


def schema_b_recurrence(sign: int = -1, lo: int = 3, hi: int = 40) -> RecurrenceSchema:
    return RecurrenceSchema(f"b_N recurrence(sign={sign:+d})", _f_small_rec_terms(), b_family(sign), (lo, hi))


def schema_f_small_from_f011(sign: int = 1, lo: int = 1, hi: int = 41) -> RecurrenceSchema:
    """f_N - F_{N-1}(0,1,1;1) - sign q^(N-1) F_{N-2}(0,1,1;1); printed sign is +."""
    F1 = F_family(0, 1, 1, x_one=True)
    terms = [
        RecTerm(lambda N: [(1, 0, 0)], 0),
        RecTerm(lambda N: [(-1, 0, 0)], 1, family=F1),
        RecTerm(lambda N: [(-sign, N - 1, 0)], 2, family=F1),
    ]
    return RecurrenceSchema(f"f_N from F(0,1,1;1) sign={sign:+d}", terms, f_small_family(), (lo, hi))


def check_f_small_rec(T: int | None = None, Nmax: int = 40, perturb: bool = False) -> Report:
    return check(schema_f_small_recurrence(2, Nmax, perturb), T)


# -- checks that are not shift recurrences ---------------------------------------

def check_functional_equation(i: int, k: int, T: int) -> Report:
    """f(x) = f(xq)/(1-xq) + x q^(i+1) f(xq^2)/((1-xq)(1-xq^2))
              - x^s q^(C(2k+2,2)+i) f(xq^s)/(xq;q)_s,   f = F(i,k;x)/(xq;q)_inf."""
    if T < 1:
        raise ValueError("needs T >= 1")
    s = 2 * k + 1
    f = fam.overpartition_gf(i, k, T)
    rhs = (
        inverse(poch_finite(1, 1, 1, T, x_weight=1)) * subst_x(f, 1)
        + inverse(poch_finite(1, 1, 2, T, x_weight=1)) * subst_x(f, 2).shift(1, i + 1, 1)
        - inverse(poch_finite(1, 1, s, T, x_weight=1)) * subst_x(f, s).shift(1, comb(2 * k + 2, 2) + i, s)
    )
    diff = f - rhs
    boundary = f.coeff(0) == [(0, 1)] and f.row(0) == (1,)
    ok = diff.is_zero() and boundary
    report = Report(f"functional equation (i,k)=({i},{k}) T={T}", None, status_of(ok),
                    details={"boundary_conditions": boundary})
    if not diff.is_zero():
        report.first_failure = {"residual_leading": leading_term(diff)}
    elif not boundary:
        report.first_failure = {"boundary": "f(x,0) or f(0,q) differs from 1"}
    return report


QGAUSS_READINGS = ("j", "infinity")


def qgauss_lhs(T: int, reading: str = "j") -> Series:
    """sum_j q^(3j^2-2j) P / (q;q)_{3j} with P = (q^2;q^3)_j or (q^2;q^3)_inf."""
    acc = Series.zero(T)
    j = 0
    while 3 * j * j - 2 * j <= T:
        term = Series.from_poly(fam._inv_qq(1, 3 * j, T), T)
        if reading == "j":
            term = term * poch_finite(2, 3, j, T)
        elif reading != "infinity":
            raise ValueError(f"unknown reading {reading!r}")
        acc = acc + term.shift(1, 3 * j * j - 2 * j)
        j += 1
    if reading == "infinity":
        acc = acc * poch_infinite(2, 3, T)
    return acc


def check_qgauss_limit(T: int) -> Report:
    target = inverse(poch_infinite(1, 3, T))
    cands = {}
    for reading in QGAUSS_READINGS:
        diff = qgauss_lhs(T, reading) - target
        cands[reading] = PASS if diff.is_zero() else f"differs from q^{diff.valuation()}"
    passing = [r for r, v in cands.items() if v == PASS]
    res = Resolution("Pochhammer in the q-Gauss limit sum", "infinity",
                     passing[0] if len(passing) == 1 else None, cands,
                     note=f"compared with 1/(q;q^3)_inf to order {T}")
    return Report(f"q-Gauss limit T={T}", None, status_of(res.chosen is not None), resolution=res)


# -- resolutions of the printed constants -------------------------------------------

def resolve_shift_recurrence(grid: Sequence[tuple[int, int, int]], hi: int = 40,
                  candidates: range = range(-3, 4)) -> tuple[Resolution, dict]:
    """Fit the middle exponent for each (i,j,k), N in [j+1, hi], and test the rule delta = i - k."""
    per = {}
    for i, j, k in grid:
        per[(i, j, k)] = fit_exponent(lambda d: schema_shift_recurrence(i, j, k, d, None, hi), candidates)
    rule = all(f.delta == i - k for (i, j, k), f in per.items())
    cands = {
        "delta=0 (printed N+j+k-1)": PASS if all(0 in f.passing for f in per.values()) else
        f"fails for {[p for p, f in per.items() if 0 not in f.passing][:3]}",
        "delta=i-k (N+i+j-1)": PASS if rule else "fails",
    }
    chosen = "delta=i-k (N+i+j-1)" if rule and cands["delta=0 (printed N+j+k-1)"] != PASS else None
    res = Resolution("middle exponent of the shift recurrence", "delta=0 (printed N+j+k-1)", chosen, cands,
                     note=f"fitted over {len(per)} parameter triples, N in [j+1, {hi}]")
    return res, per


def resolve_j_lowering(grid: Sequence[tuple[int, int, int]], hi: int = 25,
                  candidates: range = range(-3, 4)) -> tuple[Resolution, dict]:
    per = {p: fit_exponent(lambda d, p=p: schema_j_lowering(*p, d, 0, hi), candidates) for p in grid}
    ok = all(f.delta == 0 for f in per.values())
    cands = {"delta=0 (printed N+i+j-1)": PASS if ok else "fails"}
    return Resolution("exponent of the j-lowering relation", "delta=0 (printed N+i+j-1)",
                      "delta=0 (printed N+i+j-1)" if ok else None, cands,
                      note=f"fitted over {len(per)} parameter triples, N in [0, {hi}]"), per


def resolve_x_shift(grid: Sequence[tuple[int, int]], hi: int = 40,
                  candidates: range = range(-2, 5)) -> tuple[Resolution, dict]:
    per = {p: fit_exponent(lambda d, p=p: schema_x_shift(*p, d, 1, hi), candidates) for p in grid}
    rule = all(f.delta == i for (i, k), f in per.items())
    printed = "delta=0 (x q)"
    cands = {
        printed: PASS if all(0 in f.passing for f in per.values()) else
        f"fails for (i,k) in {[p for p, f in per.items() if 0 not in f.passing]}",
        "delta=i (x q^(i+1))": PASS if rule else "fails",
    }
    chosen = "delta=i (x q^(i+1))" if rule and cands[printed] != PASS else (printed if cands[printed] == PASS else None)
    return Resolution("middle coefficient of the x-shift recurrence", printed, chosen, cands,
                      note=f"(i,k) grid {sorted(per)}, N in [1, {hi}]"), per


def resolve_sign(item: str, builder: Callable[[int], RecurrenceSchema], printed: int) -> Resolution:
    cands = {}
    for sign in (1, -1):
        r = check(builder(sign))
        cands[f"{sign:+d}"] = PASS if r.passed else f"fails at N = {r.first_failure['N']}"
    passing = [c for c, v in cands.items() if v == PASS]
    return Resolution(item, f"{printed:+d}", passing[0] if len(passing) == 1 else None, cands)
