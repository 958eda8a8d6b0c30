"""Exact verification of the inequalities behind the cubed-sum closed form.

Everything lives in Q(sqrt(D)) with D = a^2 - 4, where
alpha = (a + sqrt(D))/2, beta = 1/alpha and alpha - beta = sqrt(D).
Each check builds its quantities exactly and decides the stated relation
with :func:`~recipfib.quadfield.qf_sign`; there is no tolerance anywhere.

A report is *claimed* when its parameters fall inside the range where the
relation is asserted to hold.  Unclaimed reports are boundary probes: the
outcome is recorded but never counted as a failure.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .quadfield import QuadElem, qf_cmp_rational, qf_sign
from .sequence import SequenceParams, seq_term
from .tailsum import DEFAULT_MAX_TERMS, PowerSumQuery, RationalInterval, refine

__all__ = [
    "CHECK_IDS",
    "CheckReport",
    "SuiteSummary",
    "check_constant_bounds",
    "check_delta1_bound",
    "check_epsilon_bound",
    "check_geometric_tail_identity",
    "check_lambda_bounds",
    "check_mod5_decomposition",
    "check_remainder_bound",
    "check_sandwich",
    "check_term_expansion",
    "run_proof_suite",
    "summarize",
]

log = logging.getLogger(__name__)

LAMBDA1_MAX = Fraction(1681, 10000)
LAMBDA1_MAX_A4 = Fraction(53, 10000)
EPSILON_MAX = Fraction(3, 10)
EPSILON_SQUARE_FACTOR = Fraction(7, 10)
CONST3_LOWER = Fraction(87, 100)


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    params: dict[str, int]
    passed: bool
    witness: str
    claimed: bool = True
    enclosure: RationalInterval | None = field(default=None, compare=False)

    @property
    def status(self) -> str:
        if not self.claimed:
            return "probe"
        return "pass" if self.passed else "fail"


# -- shared quantities ------------------------------------------------------


class _Field:
    """alpha, sqrt(D) and the fixed polynomials in alpha for one ``a``."""

    def __init__(self, a: int) -> None:
        if a < 3:
            raise ValueError(f"a must be >= 3 (got {a})")
        self.a = a
        self.params = SequenceParams(a, -1)
        self.alpha = self.params.alpha
        self.sqrt_d = self.alpha - self.params.beta
        self.sqrt_d3 = self.sqrt_d ** 3
        self.a3m1 = self.pow(3) - 1
        self.a5m1 = self.pow(5) - 1
        self.a7m1 = self.pow(7) - 1
        self.cyc = self.pow(6) + self.pow(3) + 1  # (alpha^9 - 1)/(alpha^3 - 1)
        self.x5 = self.sqrt_d * self.a5m1

    def pow(self, k: int) -> QuadElem:
        return _alpha_pow(self.a, k)

    def G(self, k: int) -> int:
        return seq_term(self.params, k)


@lru_cache(maxsize=None)
def _field(a: int) -> _Field:
    return _Field(a)


@lru_cache(maxsize=4096)
def _alpha_pow(a: int, k: int) -> QuadElem:
    # alpha*beta = 1, so negative powers are powers of beta.
    params = SequenceParams(a, -1)
    base = params.alpha if k >= 0 else params.beta
    return base ** abs(k)


def lambda1(a: int, n: int) -> QuadElem:
    f = _field(a)
    return 3 * (f.alpha - 1) * f.pow(-n) / f.sqrt_d3 + 4 * f.pow(-n - 3)


def lambda2(a: int, n: int) -> QuadElem:
    f = _field(a)
    return (
        3 * (f.alpha - 1) * f.pow(-n) / f.sqrt_d3
        - f.a3m1 * f.pow(-3 * n) / f.sqrt_d3
        - 6 * f.alpha * f.a3m1 ** 2 * f.pow(-n) / (f.sqrt_d3 * f.a7m1)
        - 11 * f.pow(3) * f.a3m1 * f.pow(-3 * n) / (f.sqrt_d3 * f.cyc)
        + Fraction(63, 10) * f.alpha * f.a3m1 ** 3 * f.pow(-n) / (f.sqrt_d3 * f.a5m1 ** 2)
    )


def delta1(a: int, n: int) -> QuadElem:
    f = _field(a)
    c3, c5, c7, cyc = f.a3m1, f.a5m1, f.a7m1, f.cyc
    terms = [
        -6 * f.alpha * c3 ** 2 * f.pow(-n) / c7,
        -10 * f.pow(3) * c3 * f.pow(-3 * n) / cyc,
        9 * f.alpha * c3 ** 3 * f.pow(-n) / c5 ** 2,
        36 * f.pow(3) * c3 ** 3 * f.pow(-3 * n) / (c5 * c7),
        36 * f.pow(5) * c3 ** 3 * f.pow(-5 * n) / c7 ** 2,
        60 * f.pow(5) * c3 ** 2 * f.pow(-5 * n) / (c5 * cyc),
        120 * f.pow(7) * c3 ** 2 * f.pow(-7 * n) / (c7 * cyc),
        100 * f.pow(9) * c3 * f.pow(-9 * n) / cyc ** 2,
    ]
    return sum(terms[1:], terms[0]) / f.sqrt_d3


def epsilon(a: int, n: int) -> QuadElem:
    f = _field(a)
    return (
        3 * f.pow(2) * f.a3m1 * f.pow(-2 * n) / f.a5m1
        + 6 * f.pow(4) * f.a3m1 * f.pow(-4 * n) / f.a7m1
        + 11 * f.pow(6) * f.pow(-6 * n) / f.cyc
    )


def main_term(a: int, n: int, literal: bool = False) -> QuadElem:
    """``alpha^{n+2} / ((alpha - beta)(alpha^5 - 1))``.

    With ``literal=True`` the denominator carries an extra factor alpha; that
    variant does not follow from the cube-difference expansion and fails the
    checks that use it.
    """
    f = _field(a)
    den = f.x5 * f.alpha if literal else f.x5
    return f.pow(n + 2) / den


def mod5_constant(a: int, residue: int) -> QuadElem:
    f = _field(a)
    if residue in (0, 1):
        num = f.pow(2) + f.pow(3)
    elif residue in (2, 4):
        num = f.alpha + f.pow(4)
    else:
        num = 1 + f.pow(5)
    return num / f.x5


def mod5_sum_indices(n: int) -> list[int]:
    """Indices n-3, n-8, ... down to the terminal index fixed by n mod 5."""
    terminal = {0: 2, 1: 3, 2: 4, 3: 5, 4: 1}[n % 5]
    return list(range(n - 3, terminal - 1, -5))


# -- rendering ----------------------------------------------------------------


def _show(v: QuadElem | Fraction | int, limit: int = 120) -> str:
    """Exact rendering when short, otherwise a decimal marked with '~'."""
    if not isinstance(v, QuadElem):
        v = QuadElem.rational(v, 5)
    parts = (v.x.numerator, v.x.denominator, v.y.numerator, v.y.denominator)
    if sum(p.bit_length() for p in parts) <= 3 * limit:
        exact = str(v)
        if len(exact) <= limit:
            return exact
    return f"~{v.approx(12)}"


def _require(a: int, idx: int, name: str) -> None:
    if a < 3:
        raise ValueError(f"a must be >= 3 (got {a})")
    if idx < 1:
        raise ValueError(f"{name} must be >= 1 (got {idx})")


# -- checks -------------------------------------------------------------------


def check_term_expansion(
    a: int, k: int, coefficients: tuple[int, int, int] = (1, 3, 6)
) -> CheckReport:
    """1/G_k^3 = (a-b)^3 [c0/alpha^{3k} + c1/alpha^{5k} + c2/alpha^{7k} + rem_k]."""
    _require(a, k, "k")
    f = _field(a)
    c0, c1, c2 = coefficients
    y = f.pow(2 * k)
    rem = (10 * f.pow(4 * k) - 15 * y + 6) * f.pow(-7 * k) / (y - 1) ** 3
    rhs = f.sqrt_d3 * (c0 * f.pow(-3 * k) + c1 * f.pow(-5 * k) + c2 * f.pow(-7 * k) + rem)
    lhs = Fraction(1, f.G(k) ** 3)
    ok = rhs == lhs
    return CheckReport(
        "term_expansion",
        {"a": a, "k": k},
        ok,
        f"1/G_k^3 = {lhs}; expansion = {_show(rhs)}; coefficients {coefficients}",
        claimed=k >= 2,
    )


def check_remainder_bound(a: int, k: int, lower: int = 10, upper: int = 11) -> CheckReport:
    """lower/alpha^{9k} < rem_k < upper/alpha^{9k}."""
    _require(a, k, "k")
    f = _field(a)
    y = f.pow(2 * k)
    rem = (10 * f.pow(4 * k) - 15 * y + 6) * f.pow(-7 * k) / (y - 1) ** 3
    scaled = rem * f.pow(9 * k)  # compare alpha^{9k} * rem against the constants
    lo_ok = qf_cmp_rational(scaled, lower) > 0
    hi_ok = qf_cmp_rational(scaled, upper) < 0
    return CheckReport(
        "remainder_bound",
        {"a": a, "k": k},
        lo_ok and hi_ok,
        f"alpha^(9k)*rem = {_show(scaled)}; >{lower}: {lo_ok}; <{upper}: {hi_ok}",
        claimed=k >= 2,
    )


def check_geometric_tail_identity(a: int, n: int, c: int | Fraction | None = None) -> CheckReport:
    """((alpha^3-1) alpha^{3n}/alpha^3) * c * alpha^9/(alpha^{9n}(alpha^9-1))
    equals c*alpha^6/(alpha^{6n}(alpha^6+alpha^3+1)); ``c=None`` checks 10 and 11."""
    _require(a, n, "n")
    f = _field(a)
    cs = (10, 11) if c is None else (c,)
    prefactor = f.a3m1 * f.pow(3 * n) / f.pow(3)
    geometric = f.pow(9) * f.pow(-9 * n) / (f.pow(9) - 1)
    verdicts = []
    for cc in cs:
        lhs = prefactor * cc * geometric
        rhs = cc * f.pow(6) * f.pow(-6 * n) / f.cyc
        verdicts.append((cc, lhs == rhs))
    return CheckReport(
        "geometric_tail",
        {"a": a, "n": n},
        all(ok for _, ok in verdicts),
        "; ".join(f"c={cc}: {ok}" for cc, ok in verdicts)
        + " (range qualifier 'k>=2' read as n>=2)",
        claimed=n >= 2,
    )


def check_delta1_bound(a: int, n: int, bound: int | Fraction = 4) -> CheckReport:
    _require(a, n, "n")
    f = _field(a)
    d = delta1(a, n)
    limit = bound * f.pow(-n - 3)
    ok = qf_sign(limit - d) >= 0
    return CheckReport(
        "delta1_bound",
        {"a": a, "n": n},
        ok,
        f"delta1 = {_show(d)}; {bound}/alpha^(n+3) = {_show(limit)}",
        claimed=n >= 2,
    )


def check_lambda_bounds(a: int, n: int) -> CheckReport:
    _require(a, n, "n")
    l1, l2 = lambda1(a, n), lambda2(a, n)
    clauses = {
        "0<lambda2": qf_sign(l2) > 0,
        "lambda2<lambda1": qf_sign(l1 - l2) > 0,
        "lambda1<0.1681": qf_cmp_rational(l1, LAMBDA1_MAX) < 0,
    }
    if a >= 4 and n >= 3:
        clauses["lambda1<0.0053"] = qf_cmp_rational(l1, LAMBDA1_MAX_A4) < 0
    return CheckReport(
        "lambda_bounds",
        {"a": a, "n": n},
        all(clauses.values()),
        f"lambda1 = {_show(l1)}; lambda2 = {_show(l2)}; "
        + ", ".join(f"{k}: {v}" for k, v in clauses.items()),
        claimed=n >= 2,
    )


def check_epsilon_bound(a: int, n: int) -> CheckReport:
    _require(a, n, "n")
    e = epsilon(a, n)
    small = qf_cmp_rational(e, EPSILON_MAX) < 0
    e2 = e * e
    square = qf_sign(e2 - e2 * e - EPSILON_SQUARE_FACTOR * e2) > 0
    return CheckReport(
        "epsilon_bound",
        {"a": a, "n": n},
        small and square,
        f"epsilon = {_show(e)}; <0.3: {small}; eps^2-eps^3>0.7eps^2: {square}",
        claimed=n >= 2,
    )


def check_mod5_decomposition(a: int, n: int, literal: bool = False) -> CheckReport:
    """alpha^{n+2}/((a-b)(alpha^5-1)) = sum G_j + C_{n mod 5} - alpha^{3-n}/((a-b)(alpha^5-1)).

    ``C`` is (alpha^2+alpha^3), (alpha+alpha^4) or (1+alpha^5) over
    (a-b)(alpha^5-1).  The last term vanishes as n grows and is needed for
    exact equality.  ``literal=True`` tests instead
    alpha^{n+2}/((a-b) alpha (alpha^5-1)) = sum G_j - C, which is false.
    """
    _require(a, n, "n")
    f = _field(a)
    r = n % 5
    idx = mod5_sum_indices(n)
    gsum = sum(f.G(j) for j in idx)
    const = mod5_constant(a, r)
    vanishing = f.pow(3 - n) / f.x5
    corrected = main_term(a, n) == gsum + const - vanishing
    as_displayed = main_term(a, n, literal=True) == gsum - const
    ok = as_displayed if literal else corrected
    return CheckReport(
        "mod5",
        {"a": a, "n": n},
        ok,
        f"n mod 5 = {r}; indices {idx}; constant = {_show(const)}; "
        f"vanishing term = {_show(vanishing)}; corrected form: {corrected}; "
        f"displayed form: {as_displayed}",
        claimed=n >= 5,
    )


def check_constant_bounds(a: int, n: int) -> CheckReport:
    _require(a, n, "n")
    l1 = lambda1(a, n)
    c01 = 3 * mod5_constant(a, 0)
    c24 = 3 * mod5_constant(a, 2)
    c3 = 3 * mod5_constant(a, 3)
    clauses = {
        "3C01>lambda1": qf_sign(c01 - l1) > 0,
        "3C24>lambda1": qf_sign(c24 - l1) > 0,
    }
    if a == 3 and n >= 3:
        clauses["3C3>lambda1+1"] = qf_sign(c3 - l1 - 1) > 0
    if a > 3:
        # The constant does not depend on n, so the clause is checked for every n.
        clauses["0.87<3C3"] = qf_cmp_rational(c3, CONST3_LOWER) > 0
        clauses["3C3<1"] = qf_cmp_rational(c3, 1) < 0
    return CheckReport(
        "constant_bounds",
        {"a": a, "n": n},
        all(clauses.values()),
        f"3C01 = {_show(c01)}; 3C24 = {_show(c24)}; 3C3 = {_show(c3)}; "
        f"lambda1 = {_show(l1)}; "
        + ", ".join(f"{k}: {v}" for k, v in clauses.items()),
        claimed=n >= 2,
    )


def check_sandwich(
    a: int, n: int, literal: bool = False, max_terms: int = DEFAULT_MAX_TERMS
) -> CheckReport:
    """M + lambda2 < (sum_{k>=n} 1/G_k^3)^-1 < M + lambda1,
    M = G_n^3 - G_{n-1}^3 - 3 alpha^{n+2}/((a-b)(alpha^5-1)).

    Also confirms that M agrees with the cube-difference expansion it comes
    from, so the main term is pinned down independently of the display.
    Raises :class:`~recipfib.tailsum.Undecided` if a bound cannot be
    separated from the certified enclosure within ``max_terms`` terms.
    """
    _require(a, n, "n")
    if n < 2:
        raise ValueError(f"n must be >= 2 (got {n})")
    f = _field(a)
    gn, gm = f.G(n), f.G(n - 1)
    m = gn ** 3 - gm ** 3 - 3 * main_term(a, n, literal)
    # (alpha^{3n} - alpha^{3n-3})/(a-b)^3 - 3(alpha^3-1)^2 alpha^n/((a-b)^3 alpha (alpha^5-1))
    expanded = (
        (f.pow(3 * n) - f.pow(3 * n - 3)) / f.sqrt_d3
        - 3 * f.a3m1 ** 2 * f.pow(n - 1) / (f.sqrt_d3 * f.a5m1)
        - 3 * (f.alpha - 1) * f.pow(-n) / f.sqrt_d3
        + f.a3m1 * f.pow(-3 * n) / f.sqrt_d3
    )
    derivation_ok = expanded == m
    lower = m + lambda2(a, n)
    upper = m + lambda1(a, n)

    def separated(e: RationalInterval) -> bool:
        lo_sep = qf_cmp_rational(lower, e.lo) < 0 or qf_cmp_rational(lower, e.hi) > 0
        hi_sep = qf_cmp_rational(upper, e.hi) > 0 or qf_cmp_rational(upper, e.lo) < 0
        return lo_sep and hi_sep

    query = PowerSumQuery(f.params, 3, n, max_terms)
    terms, enc = refine(query, separated)
    lo_ok = qf_cmp_rational(lower, enc.lo) < 0
    hi_ok = qf_cmp_rational(upper, enc.hi) > 0
    return CheckReport(
        "sandwich",
        {"a": a, "n": n},
        derivation_ok and lo_ok and hi_ok,
        f"lower = {_show(lower)}; enclosure = [{_show(enc.lo)}, {_show(enc.hi)}] "
        f"({terms} terms); upper = {_show(upper)}; main term matches expansion: "
        f"{derivation_ok}",
        claimed=True,
        enclosure=enc,
    )


# -- suite ----------------------------------------------------------------------

_CHECKS: dict[str, Callable[[int, int], CheckReport]] = {
    "term_expansion": check_term_expansion,
    "remainder_bound": check_remainder_bound,
    "geometric_tail": check_geometric_tail_identity,
    "delta1_bound": check_delta1_bound,
    "lambda_bounds": check_lambda_bounds,
    "epsilon_bound": check_epsilon_bound,
    "mod5": check_mod5_decomposition,
    "constant_bounds": check_constant_bounds,
    "sandwich": check_sandwich,
}
CHECK_IDS: tuple[str, ...] = tuple(_CHECKS)


def _run_point(point: tuple[int, int, tuple[str, ...]]) -> list[CheckReport]:
    a, n, ids = point
    return [_CHECKS[cid](a, n) for cid in ids]


def _as_range(r: Iterable[int] | tuple[int, int]) -> Sequence[int]:
    if isinstance(r, tuple) and len(r) == 2:
        return range(r[0], r[1] + 1)
    return list(r)


def run_proof_suite(
    a_range: Iterable[int] | tuple[int, int],
    n_range: Iterable[int] | tuple[int, int],
    only: Iterable[str] | None = None,
    jobs: int = 1,
) -> list[CheckReport]:
    """Run the selected checks over the (a, n) grid.

    A ``(lo, hi)`` tuple is an inclusive range.  The grid index doubles as k
    for the k-indexed checks.  Reports come back ordered by (a, n, check).
    """
    ids = tuple(CHECK_IDS if only is None else only)
    unknown = set(ids) - set(CHECK_IDS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    ids = tuple(c for c in CHECK_IDS if c in ids)
    points = [(a, n, ids) for a in _as_range(a_range) for n in _as_range(n_range)]
    for a, n, _ in points:
        if a < 3 or n < 2:
            raise ValueError(f"grid point (a={a}, n={n}) outside a >= 3, n >= 2")
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_point, points))
    else:
        chunks = [_run_point(p) for p in points]
    reports = [r for chunk in chunks for r in chunk]
    order = {cid: i for i, cid in enumerate(CHECK_IDS)}
    reports.sort(key=lambda r: (r.params["a"], r.params.get("n", r.params.get("k")), order[r.check_id]))
    return reports


@dataclass(frozen=True)
class SuiteSummary:
    passed: int
    failed: int
    probes: int

    @property
    def ok(self) -> bool:
        return self.failed == 0


def summarize(reports: Iterable[CheckReport]) -> SuiteSummary:
    passed = failed = probes = 0
    for r in reports:
        if r.status == "pass":
            passed += 1
        elif r.status == "fail":
            failed += 1
        else:
            probes += 1
    return SuiteSummary(passed, failed, probes)
