"""Continued fractions with series-valued partial quotients.

Finite identities are checked by cross-multiplying numerator and denominator
polynomials, never by dividing.  Infinite fractions are compared through their
convergents, keeping a table of how far each convergent agrees with its
target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from qpl import fnfamily as fam
from qpl.fnfamily import FamilyParams
from qpl.qcore import Series, eval_x_one, inverse, poch_finite, poch_infinite, subst_x
from qpl.report import FAIL, PASS, Report, Resolution, leading_term, status_of


@dataclass
class ContinuedFraction:
    """head + a_1/(b_1 + a_2/(b_2 + ...)), stored as ``pairs = [(a_1, b_1), ...]``."""

    head: Series
    pairs: list[tuple[Series, Series]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    def degree_bound(self, depth: int | None = None) -> int:
        """q-degree bound for P and Q of the depth-d convergent (exact entries)."""
        depth = len(self) if depth is None else depth
        dp = [0, max(self.head.q_degree(), 0)]
        dq = [-1, 0]
        for a, b in self.pairs[:depth]:
            da, db = max(a.q_degree(), 0), max(b.q_degree(), 0)
            dp.append(max(db + dp[-1], da + dp[-2]))
            dq.append(max(db + dq[-1], da + dq[-2]))
        return max(dp[-1], dq[-1], 0)


def convergent(cf: ContinuedFraction, depth: int | None = None, T: int | None = None) -> tuple[Series, Series]:
    """(P_d, Q_d) from P_t = b_t P_{t-1} + a_t P_{t-2}, Q_t likewise."""
    depth = len(cf) if depth is None else depth
    if depth > len(cf):
        raise ValueError(f"depth {depth} exceeds fraction length {len(cf)}")
    if T is None:
        T = cf.degree_bound(depth)
    P_prev, P = Series.one(T), cf.head.pad(T)
    Q_prev, Q = Series.zero(T), Series.one(T)
    for a, b in cf.pairs[:depth]:
        a, b = a.pad(T), b.pad(T)
        P_prev, P = P, b * P + a * P_prev
        Q_prev, Q = Q, b * Q + a * Q_prev
    return P, Q


def value(cf: ContinuedFraction, depth: int, T: int) -> Series:
    """P/Q as a power series to order T; Q must have q^0 part exactly 1."""
    P, Q = convergent(cf, depth, T)
    try:
        return P * inverse(Q)
    except ValueError as exc:
        raise ValueError(f"convergent denominator at depth {depth} is not invertible: {exc}") from exc


def agreement_order(a: Series, b: Series) -> int:
    """Lowest q-degree where the series differ; T+1 if they agree to order T."""
    v = (a - b).valuation()
    return min(a.trunc, b.trunc) + 1 if v is None else v


def determinant_identity_holds(cf: ContinuedFraction, depth: int | None = None) -> bool:
    """P_t Q_{t-1} - P_{t-1} Q_t = (-1)^(t-1) a_1 ... a_t for every t up to depth."""
    depth = len(cf) if depth is None else depth
    T = cf.degree_bound(depth) * 2 + 1
    P_prev, P = Series.one(T), cf.head.pad(T)
    Q_prev, Q = Series.zero(T), Series.one(T)
    prod = Series.one(T)
    for t, (a, b) in enumerate(cf.pairs[:depth], start=1):
        a, b = a.pad(T), b.pad(T)
        P_prev, P = P, b * P + a * P_prev
        Q_prev, Q = Q, b * Q + a * Q_prev
        prod = prod * a
        lhs = P * Q_prev - P_prev * Q
        if lhs != (prod if t % 2 else -prod):
            return False
    return True


def _mono(c: int, a: int, b: int = 0) -> Series:
    return Series.from_terms([(a, b, c)], a)


def _one_plus(a: int, b: int = 1) -> Series:
    return Series.from_terms([(0, 0, 1), (a, b, 1)], a)


# -- finite fractions for F_N(0,1,1;x) ----------------------------------------

RATIO_NUMERATOR_VARIANTS = ("printed", "resolved")


def ratio_fraction(N: int, variant: str = "resolved") -> ContinuedFraction:
    """Fraction for F_N/F_{N-1}: head 1 + x q^N, then b_t = 1 + x q^t for t = N-1 .. 1.

    The numerator above b_t is -x^2 q^t as printed, -x^2 q^(2t+1) as resolved.
    """
    if N < 1:
        raise ValueError("needs N >= 1")
    if variant not in RATIO_NUMERATOR_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    pairs = []
    for t in range(N - 1, 0, -1):
        e = t if variant == "printed" else 2 * t + 1
        pairs.append((_mono(-1, e, 2), _one_plus(t)))
    return ContinuedFraction(_one_plus(N), pairs)


SHIFTED_RATIO_SIGN_SCHEDULES = ("printed", "all_minus", "all_plus", "alternating")


def _shifted_ratio_signs(N: int, schedule: str) -> list[int]:
    count = N - 1
    if schedule == "printed":
        # + on the first numerator, - in the middle, + on the last
        return [1 if t in (0, count - 1) else -1 for t in range(count)]
    if schedule == "all_minus":
        return [-1] * count
    if schedule == "all_plus":
        return [1] * count
    if schedule == "alternating":
        return [1 if t % 2 == 0 else -1 for t in range(count)]
    raise ValueError(f"unknown sign schedule {schedule!r}")


def shifted_ratio_fraction(N: int, schedule: str = "all_minus") -> ContinuedFraction:
    """Fraction for F_N(x)/F_{N-1}(xq): head 1 + xq, then (+-x^2 q^(2t-1), 1 + x q^t) for t = 2..N."""
    if N < 1:
        raise ValueError("needs N >= 1")
    signs = _shifted_ratio_signs(N, schedule)
    pairs = [(_mono(sg, 2 * t - 1, 2), _one_plus(t)) for sg, t in zip(signs, range(2, N + 1))]
    return ContinuedFraction(_one_plus(1), pairs)


def _F011(N: int) -> Series:
    return fam.f_upper_N(FamilyParams(0, 1, 1, N))


def _cross_check(name: str, N: int, cf: ContinuedFraction, num: Series, den: Series) -> Report:
    """P * den == Q * num as exact polynomials."""
    P, Q = convergent(cf)
    T = max(P.trunc + den.trunc, Q.trunc + num.trunc, 0)
    diff = P.pad(T) * den.pad(T) - Q.pad(T) * num.pad(T)
    rep = Report(name, (N, N), status_of(diff.is_zero()))
    if not diff.is_zero():
        rep.first_failure = {"N": N, "residual_leading": leading_term(diff)}
    return rep


def verify_ratio_fraction(N: int, variant: str = "resolved") -> Report:
    name = f"ratio fraction [{variant}]"
    try:
        cf = ratio_fraction(N, variant)
    except ValueError as exc:
        # the printed numerators x^2 q^t with t < 2 have fewer q's than x's
        return Report(name, (N, N), FAIL, first_failure={"N": N, "invalid": str(exc)})
    return _cross_check(name, N, cf, _F011(N), _F011(N - 1))


def _shifted_F011(N: int) -> Series:
    f = _F011(N)
    return subst_x(f.pad(f.trunc + max(f.x_degree(), 0)), 1)


def verify_shifted_ratio_fraction(N: int, schedule: str = "all_minus") -> Report:
    return _cross_check(f"shifted ratio fraction [{schedule}]", N, shifted_ratio_fraction(N, schedule), _F011(N), _shifted_F011(N - 1))


def _sweep(check, name: str, N_max: int) -> Report:
    for N in range(1, N_max + 1):
        r = check(N)
        if not r.passed:
            return Report(name, (1, N_max), FAIL, first_failure=r.first_failure)
    return Report(name, (1, N_max), PASS)


def _describe_failure(ff: dict) -> str:
    if "invalid" in ff:
        return f"not a valid series at N = {ff['N']}: {ff['invalid']}"
    return f"fails at N = {ff['N']}"


def _resolve(item: str, variants, check, N_max: int, note: str = "") -> tuple[Resolution, dict[str, Report]]:
    sweeps = {v: _sweep(lambda N, v=v: check(N, v), v, N_max) for v in variants}
    cands = {v: PASS if r.passed else _describe_failure(r.first_failure) for v, r in sweeps.items()}
    passing = [v for v, r in cands.items() if r == PASS]
    res = Resolution(item, "printed", passing[0] if len(passing) == 1 else None, cands, note=note)
    return res, sweeps


def resolve_ratio_numerators(N_max: int = 30) -> Resolution:
    return _resolve("partial numerators of the F_N/F_(N-1) fraction", RATIO_NUMERATOR_VARIANTS,
                    verify_ratio_fraction, N_max,
                    note="printed: -x^2 q^t over 1 + x q^t; resolved: -x^2 q^(2t+1)")[0]


def resolve_shifted_ratio_signs(N_max: int = 30) -> Resolution:
    return _resolve("sign schedule of the F_N(x)/F_(N-1)(xq) fraction", SHIFTED_RATIO_SIGN_SCHEDULES,
                    verify_shifted_ratio_fraction, N_max)[0]


def _checked(name: str, resolved: tuple[Resolution, dict[str, Report]], N_max: int) -> Report:
    res, sweeps = resolved
    if res.chosen is None:
        return Report(name, (1, N_max), FAIL, resolution=res)
    rep = sweeps[res.chosen]
    return Report(name, (1, N_max), rep.status, resolution=res, first_failure=rep.first_failure)


def check_ratio_fraction(N_max: int = 30) -> Report:
    return _checked("ratio fraction", _resolve(
        "partial numerators of the F_N/F_(N-1) fraction", RATIO_NUMERATOR_VARIANTS, verify_ratio_fraction,
        N_max, note="printed: -x^2 q^t over 1 + x q^t; resolved: -x^2 q^(2t+1)"), N_max)


def check_shifted_ratio_fraction(N_max: int = 30) -> Report:
    return _checked("shifted ratio fraction", _resolve(
        "sign schedule of the F_N(x)/F_(N-1)(xq) fraction", SHIFTED_RATIO_SIGN_SCHEDULES,
        verify_shifted_ratio_fraction, N_max), N_max)


def ratio_fraction_tends_to_one(N_max: int = 30) -> Report:
    """Valuation of F_N(1)/F_{N-1}(1) - 1 from the depth N-1 fraction at x=1; must grow."""
    table = []
    for N in range(1, N_max + 1):
        P, Q = convergent(ratio_fraction(N))
        T = max(P.trunc, Q.trunc)
        val = eval_x_one(P.pad(T)) * inverse(eval_x_one(Q.pad(T))) - Series.one(T)
        v = val.valuation()
        table.append({"N": N, "valuation": T + 1 if v is None else v})
    orders = [row["valuation"] for row in table]
    ok = all(b > a for a, b in zip(orders, orders[1:]))
    return Report("ratio fraction tends to 1", (1, N_max), status_of(ok), details={"table": table})


# -- infinite fractions -----------------------------------------------------------

def ramanujan_cf(depth: int) -> ContinuedFraction:
    """1/(1 - q/(1 + q - q^3/(1 + q^2 - q^5/(1 + q^3 - ...)))), ``depth`` pairs."""
    pairs = [(Series.one(0), Series.one(0))]
    for t in range(1, depth):
        a = Series.from_terms([(1, 0, -1)], 1) if t == 1 else _mono(-1, 2 * t - 1)
        pairs.append((a, _one_plus(t, 0)))
    return ContinuedFraction(Series.zero(0), pairs[:depth])


def mod3_tail_fraction(depth: int) -> ContinuedFraction:
    """q/(1 + q - q^3/(1 + q^2 - q^5/(1 + q^3 - ...))), ``depth`` pairs."""
    pairs = []
    for t in range(1, depth + 1):
        a = _mono(1, 1) if t == 1 else _mono(-1, 2 * t - 1)
        pairs.append((a, _one_plus(t, 0)))
    return ContinuedFraction(Series.zero(0), pairs)


def agreement_table(make_cf, target: Series, depths) -> list[dict]:
    T = target.trunc
    return [{"depth": d, "agreement_order": agreement_order(value(make_cf(d), d, T), target)}
            for d in depths]


def ramanujan_target(T: int) -> Series:
    return poch_infinite(2, 3, T) * inverse(poch_infinite(1, 3, T))


def check_ramanujan(max_depth: int = 30, need: int = 50, T: int | None = None) -> Report:
    """Agreement orders of the convergents with (q^2;q^3)_inf/(q;q^3)_inf.

    PASS iff the orders strictly increase over depths 1..max_depth and some
    depth in the table reaches ``need``.  The observed order at depth d is
    d^2, so the default T leaves room for the deepest row to be measured.
    """
    if T is None:
        T = max(max_depth * max_depth, need) + 1
    target = ramanujan_target(T)
    table = agreement_table(ramanujan_cf, target, range(1, max_depth + 1))
    orders = [row["agreement_order"] for row in table]
    increasing = all(b > a for a, b in zip(orders, orders[1:])) and orders[-1] <= T
    reach = next((row["depth"] for row in table if row["agreement_order"] >= need), None)
    ok = increasing and reach is not None
    return Report("Ramanujan fraction", (1, max_depth), status_of(ok),
                  details={"table": table, "depth_reaching": {"need": need, "depth": reach}})


def stable_depth(make_cf, T: int, start: int = 1, limit: int = 10_000) -> int:
    """Smallest depth whose convergent agrees with the next one through q^T."""
    d = start
    while d < limit:
        if agreement_order(value(make_cf(d + 1), d + 1, T), value(make_cf(d), d, T)) > T:
            return d
        d += 1
    raise RuntimeError(f"convergents not stable to order {T} by depth {limit}")


def mod3_tail_series(T: int, prefactor: str = "left") -> Series:
    """(q;q^3)_inf times the shifted double sum (printed), or the sum divided by it."""
    s = fam.double_sum(0, 1, T, x_tracked=False, m_extra=1, n_extra=3, const=1)
    p = poch_infinite(1, 3, T)
    return s * p if prefactor == "left" else s * inverse(p)


def verify_mod3_tail_fraction(T: int = 100) -> Report:
    if T < 1:
        raise ValueError("needs T >= 1")
    D = stable_depth(mod3_tail_fraction, T)
    rhs = value(mod3_tail_fraction(D), D, T)
    cands = {}
    for placement in ("left", "other side"):
        diff = mod3_tail_series(T, "left" if placement == "left" else "right") - rhs
        cands[placement] = PASS if diff.is_zero() else f"differs from q^{diff.valuation()}"
    res = Resolution("placement of (q;q^3)_inf in the mod-3 tail identity", "left",
                     "left" if cands["left"] == PASS else ("other side" if cands["other side"] == PASS else None),
                     cands, note=f"convergent depth {D} stable through q^{T}")
    constant_terms_vanish = mod3_tail_series(T)[0, 0] == 0 and rhs[0, 0] == 0
    ok = res.chosen is not None and constant_terms_vanish
    return Report(f"mod-3 tail fraction T={T}", None, status_of(ok), resolution=res,
                  details={"depth": D, "agreement_order": agreement_order(mod3_tail_series(T), rhs)})


def verify_product_difference(T: int = 100) -> Report:
    lhs = fam.double_sum(0, 1, T, x_tracked=False, m_extra=1, n_extra=3, const=1)
    rhs = inverse(poch_infinite(1, 3, T)) - inverse(poch_infinite(2, 3, T))
    diff = lhs - rhs
    rep = Report(f"product difference T={T}", None, status_of(diff.is_zero()))
    if not diff.is_zero():
        rep.first_failure = {"residual_leading": leading_term(diff)}
    return rep


def inverse_two_mod_three_series(T: int) -> Series:
    """sum (-1)^n q^(3n(3n+1)/2 + m^2 + 3mn) (1 - q^(m+3n+1)) / ((q;q)_m (q^3;q^3)_n), termwise."""
    acc = Series.zero(T)
    n = 0
    while 3 * n * (3 * n + 1) // 2 <= T:
        inv_n = inverse(poch_finite(3, 3, n, T))
        m = 0
        while (e := 3 * n * (3 * n + 1) // 2 + m * m + 3 * m * n) <= T:
            term = inverse(poch_finite(1, 1, m, T)) * inv_n
            term = term - term.shift(1, m + 3 * n + 1)
            acc = acc + term.shift(-1 if n % 2 else 1, e)
            m += 1
        n += 1
    return acc


def verify_inverse_two_mod_three(T: int = 100) -> Report:
    diff = inverse_two_mod_three_series(T) - inverse(poch_infinite(2, 3, T))
    rep = Report(f"1/(q^2;q^3)_inf expansion T={T}", None, status_of(diff.is_zero()))
    if not diff.is_zero():
        rep.first_failure = {"residual_leading": leading_term(diff)}
    return rep
