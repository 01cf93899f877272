"""Complex-analytic evaluation machinery for bounded-coefficient Dirichlet series.

Four evaluation routes live here, each tagging its results:

* ``hurwitz_em`` — Euler-Maclaurin evaluation of the Hurwitz zeta function,
  valid far left of the convergence abscissa (up to the configured
  Bernoulli order);
* ``direct``    — truncated coefficient sum with an exact zeta-tail
  completion of the mean (density) part;
* ``abel``      — summation by parts through the fluctuation
  E(n) = A(n) - delta*n, continuing any bounded stream into 0 < Re(s) <= 1;
* ``shift``     — the binomial forward/backward shift expansions with
  truncation driven by the absolute-convergence bound of the double series.

All arithmetic is binary64; every result carries a truncation-error
estimate and a warning whenever a heuristic envelope entered the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    DidNotConverge,
    OutOfDomain,
    PoleAt1,
    ToleranceUnreachable,
)
from .sequences import CoefficientStream

__all__ = [
    "EvalResult",
    "DEFAULT_N_MAX",
    "DEFAULT_M_MAX",
    "hurwitz_zeta",
    "riemann_zeta",
    "zeta_partial_tail",
    "direct_sum",
    "abel_continuation",
    "binom_neg_s",
    "shift_truncation_bound",
    "shift_backward_eval",
    "shift_forward_eval",
    "residue_probe",
]

DEFAULT_N_MAX = 10 ** 6
DEFAULT_M_MAX = 64

_POLE_EPS = 1e-8          # proximity to s = 1 treated as a pole hit inside shifts
_DIRECT_MARGIN = 0.05     # direct summation requires sigma > 1 + margin


@dataclass(frozen=True)
class EvalResult:
    """Complex value, truncation-error estimate, producing method, warnings."""

    value: complex
    err: float
    method: str
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def with_warning(self, msg: str) -> "EvalResult":
        return EvalResult(self.value, self.err, self.method, self.warnings + (msg,))


# ---------------------------------------------------------------------------
# Euler-Maclaurin Hurwitz zeta
# ---------------------------------------------------------------------------

_EM_ORDER = 15  # Bernoulli order K; valid for sigma > -(2K - 1)


def _bernoulli_even(k_max: int) -> list[Fraction]:
    """B_0, B_2, ..., B_{2k_max} as exact fractions (B_1 = -1/2 convention)."""
    m_top = 2 * k_max
    bern = [Fraction(0)] * (m_top + 1)
    bern[0] = Fraction(1)
    for m in range(1, m_top + 1):
        acc = Fraction(0)
        comb = 1
        for j in range(m):
            acc += comb * bern[j]
            comb = comb * (m + 1 - j) // (j + 1)
        bern[m] = -acc / (m + 1)
    return [bern[2 * j] for j in range(k_max + 1)]


_BERN_EVEN = _bernoulli_even(_EM_ORDER + 2)
# B_{2j} / (2j)! as floats, j = 1..order+1
_BERN_FACT = [float(_BERN_EVEN[j]) / math.factorial(2 * j) for j in range(len(_BERN_EVEN))]


def _em_hurwitz(s: complex, a: float, tol: Optional[float]) -> EvalResult:
    """Euler-Maclaurin sum of sum_{n>=0} (n+a)^{-s} for real a > 0."""
    if s == 1:
        raise PoleAt1("Hurwitz zeta has its pole at s = 1")
    sigma = s.real
    if sigma <= -(2 * _EM_ORDER - 1):
        raise OutOfDomain(
            f"Euler-Maclaurin order {_EM_ORDER} only reaches Re(s) > {-(2 * _EM_ORDER - 1)}")
    target = tol if tol is not None else 1e-12
    m_cut = max(24, math.ceil(abs(s.imag) / 3), math.ceil((abs(s) + 2 * _EM_ORDER) / (2 * math.pi)) + 2)
    for _ in range(6):
        res = _em_hurwitz_at(s, a, m_cut)
        if res.err <= target or m_cut >= (1 << 20):
            return res
        m_cut *= 2
    return res


def _em_hurwitz_at(s: complex, a: float, m_cut: int) -> EvalResult:
    logs = np.log(np.arange(m_cut, dtype=np.float64) + a)
    terms = np.exp(-s * logs)
    partial = terms.sum()
    abs_partial = float(np.abs(terms).sum())
    x = m_cut + a
    x_minus_s = complex(np.exp(-s * math.log(x)))
    integral = x_minus_s * x / (s - 1.0)
    value = partial + integral + 0.5 * x_minus_s

    rising = s  # s (s+1) ... (s + 2j - 2), accumulated with j
    x_shift = x_minus_s / x
    corr_abs = 0.0
    for j in range(1, _EM_ORDER + 1):
        term = _BERN_FACT[j] * rising * x_shift
        value += term
        corr_abs += abs(term)
        rising = rising * (s + (2 * j - 1)) * (s + 2 * j)
        x_shift = x_shift / (x * x)
    # first omitted correction bounds the remainder up to |s+2K+1|/(sigma+2K+1)
    next_term = _BERN_FACT[_EM_ORDER + 1] * rising * x_shift
    ratio = abs(s + 2 * _EM_ORDER + 1) / (s.real + 2 * _EM_ORDER + 1)
    trunc = abs(next_term) * max(ratio, 1.0)
    rounding = 2e-16 * (abs_partial + abs(integral) + corr_abs + 1.0)
    return EvalResult(value=complex(value), err=trunc + rounding, method="hurwitz_em")


def hurwitz_zeta(s: complex, gamma: float, tol: float = 1e-10) -> EvalResult:
    """Hurwitz zeta zeta(s; gamma) for gamma in (0, 1], s != 1.

    Euler-Maclaurin with Bernoulli order 15: partial sum, integral term,
    half-term and even-order corrections; raises ToleranceUnreachable when
    the requested tol sits below the method floor (~1e-12 at moderate |s|).
    """
    s = complex(s)
    if not 0 < gamma <= 1:
        raise OutOfDomain("gamma must lie in (0, 1]")
    if tol is not None and tol <= 0:
        raise OutOfDomain("tol must be positive")
    res = _em_hurwitz(s, float(gamma), tol)
    if tol is not None and res.err > tol:
        raise ToleranceUnreachable(
            f"requested tol {tol:g} below the Euler-Maclaurin floor {res.err:.2e} at s={s}")
    return res


@lru_cache(maxsize=4096)
def _riemann_cached(s: complex, tol: float) -> EvalResult:
    return hurwitz_zeta(s, 1.0, tol)


def riemann_zeta(s: complex, tol: float = 1e-10) -> EvalResult:
    """zeta(s) = zeta(s; 1)."""
    return _riemann_cached(complex(s), float(tol) if tol is not None else 1e-12)


def zeta_partial_tail(s: complex, n: int, tol: float = 1e-12) -> EvalResult:
    """zeta(s) - sum_{k<=n} k^{-s} = sum_{k>n} k^{-s}, via Euler-Maclaurin at shift n+1."""
    return _em_hurwitz(complex(s), float(n + 1), tol)


# ---------------------------------------------------------------------------
# power-array helpers
# ---------------------------------------------------------------------------

_LOGN: np.ndarray = np.zeros(0)


def _log_n(n_max: int) -> np.ndarray:
    global _LOGN
    if len(_LOGN) < n_max:
        _LOGN = np.log(np.arange(1, max(n_max, 2 * len(_LOGN)) + 1, dtype=np.float64))
    return _LOGN[:n_max]


def _powers(s: complex, n_max: int) -> np.ndarray:
    """n^{-s} for n = 1..n_max."""
    return np.exp(-s * _log_n(n_max))


# ---------------------------------------------------------------------------
# tail envelopes shared by direct/abel error models
# ---------------------------------------------------------------------------


def _tail_bound(model: tuple[str, float, bool], n: int, s: complex, sigma: float,
                boundary: bool) -> float:
    """Bound on the summation-by-parts tail past n for the envelope model.

    boundary=True adds the |E(N)| * N^-sigma edge term (direct summation);
    the abel series only needs the |s| * integral part.
    """
    kind, coef, _exact = model
    if coef == 0.0:
        return 0.0
    npow = n ** (-sigma)
    if kind == "const":
        bound = coef * abs(s) / max(sigma, 1e-300) * npow
        if boundary:
            bound += coef * npow
        return bound
    ln = 1.0 + math.log(n)
    bound = abs(s) * coef * npow * (ln / sigma + 1.0 / (sigma * sigma))
    if boundary:
        bound += coef * ln * npow
    return bound


def _fp_noise(block_abs_dot: float, n: int) -> float:
    return 4e-16 * block_abs_dot + 1e-15 * math.sqrt(n)


# ---------------------------------------------------------------------------
# direct summation (with zeta-tail completion of the density part)
# ---------------------------------------------------------------------------


def direct_sum(stream: CoefficientStream, s: complex, tol: Optional[float] = 1e-8,
               n_max: int = DEFAULT_N_MAX) -> EvalResult:
    """sum a_n n^{-s} for sigma > 1 + margin by truncated summation.

    The truncation point comes from the generic tail bound
    ||omega||_inf * N^{1-sigma}/(sigma-1) <= tol when that is feasible;
    otherwise N = n_max and the density part delta * sum_{n>N} n^{-s} is
    completed exactly (Euler-Maclaurin tail), leaving only the fluctuation
    tail in the error estimate.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 1 + _DIRECT_MARGIN:
        raise OutOfDomain(f"direct summation needs Re(s) > {1 + _DIRECT_MARGIN}")
    target = tol if tol is not None else math.inf
    warnings: list[str] = []

    n_pick = n_max
    if stream.norm_inf > 0 and target < math.inf:
        exponent = 1.0 / (sigma - 1.0)
        try:
            n_formula = (stream.norm_inf / (target * (sigma - 1.0))) ** exponent
        except OverflowError:
            n_formula = math.inf
        n_pick = int(min(n_max, max(256, math.ceil(min(n_formula, n_max)))))
    block = stream.coeff_block(n_pick)
    pows = _powers(s, n_pick)
    value = complex(np.dot(block, pows))

    em_err = 0.0
    delta = stream.delta
    if delta != 0.0:
        tail = zeta_partial_tail(s, n_pick)
        value += delta * tail.value
        em_err = abs(delta) * tail.err

    model = stream.envelope_model(n_pick)
    if not model[2]:
        warnings.append(f"heuristic fluctuation envelope for {stream.label}")
    fluct_tail = _tail_bound(model, n_pick, s, sigma, boundary=True)
    generic_tail = stream.norm_inf * n_pick ** (1.0 - sigma) / (sigma - 1.0)
    tail_err = min(fluct_tail, generic_tail)
    fp = _fp_noise(float(np.dot(np.abs(block), np.abs(pows))), n_pick)
    err = tail_err + em_err + fp
    if tol is not None and err > tol:
        raise DidNotConverge(
            f"direct tail estimate {err:.2e} exceeds tol {tol:g} at n_max={n_pick}")
    return EvalResult(value=value, err=err, method="direct", warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Abel-summation continuation
# ---------------------------------------------------------------------------


def abel_continuation(stream: CoefficientStream, s: complex, tol: Optional[float] = 1e-8,
                      n_max: int = DEFAULT_N_MAX) -> EvalResult:
    """Continuation of sum a_n n^{-s} into Re(s) > 0 by summation by parts.

    Implements f(s) = delta*zeta(s) + sum_{n>=1} E(n) (n^{-s} - (n+1)^{-s})
    with E(n) = A(n) - delta*n, truncated at N with the fluctuation-mean
    tail sum_{n>N} mean * (...)  added in closed form (it telescopes to
    mean*(N+1)^{-s}); what remains in the error estimate is the oscillating
    residual bounded by |s| * env(N) * N^{-sigma} / sigma.
    """
    s = complex(s)
    sigma = s.real
    if sigma <= 0:
        raise OutOfDomain("abel continuation needs Re(s) > 0")
    delta = stream.delta
    if s == 1 and delta != 0.0:
        raise PoleAt1("simple pole at s = 1 (residue = stream density)")
    target = tol if tol is not None else 1e-12  # best-effort mode still drives N up
    warnings: list[str] = []

    mean, mean_analytic = stream.fluct_mean()
    model = stream.envelope_model(1024)
    if not model[2]:
        warnings.append(f"heuristic fluctuation envelope for {stream.label}")
    if not mean_analytic:
        warnings.append("empirical fluctuation mean used for the tail term")

    # smallest N with tail bound below target (doubling search against the model)
    n_pick = 1024
    while n_pick < n_max and _tail_bound(stream.envelope_model(n_pick), n_pick, s, sigma,
                                         boundary=False) > target:
        n_pick = min(2 * n_pick, n_max)
    model = stream.envelope_model(n_pick)
    tail_err = _tail_bound(model, n_pick, s, sigma, boundary=False)
    if tol is not None and tail_err > tol:
        raise DidNotConverge(
            f"abel tail estimate {tail_err:.2e} exceeds tol {tol:g} at n_max={n_max}")
    if tol is None and tail_err > 1e-12:
        warnings.append(f"best-effort truncation at N={n_pick}; tail estimate {tail_err:.2e}")

    fluct = stream.fluct_block(n_pick)
    pows = _powers(s, n_pick + 1)
    diffs = pows[:-1] - pows[1:]
    value = complex(np.dot(fluct, diffs))
    value += mean * pows[-1]  # exact telescoped tail of the mean part

    em_err = 0.0
    if delta != 0.0:
        zeta_val = riemann_zeta(s, None if tol is None else min(tol, 1e-10))
        value += delta * zeta_val.value
        em_err = abs(delta) * zeta_val.err

    fp = _fp_noise(float(np.dot(np.abs(fluct), np.abs(diffs))), n_pick)
    err = tail_err + em_err + fp
    return EvalResult(value=value, err=err, method="abel", warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# binomial shift expansion (forward / backward)
# ---------------------------------------------------------------------------


def binom_neg_s(s: complex, m: int) -> complex:
    """binom(-s, m) by the multiplicative recurrence; binom(-s, 0) = 1."""
    if m < 0:
        raise OutOfDomain("binomial order must be >= 0")
    out = complex(1.0)
    for j in range(1, m + 1):
        out *= (-s - (j - 1)) / j
    return out


def shift_truncation_bound(norm: float, q: int, m0: int, s: complex, sigma: float) -> float:
    """Closed absolute bound ||omega|| (q+1)^{m0+|s|} zeta(sigma+m0) of the
    shift double series truncated below order m0; finite for sigma + m0 > 1."""
    if sigma + m0 <= 1:
        raise OutOfDomain("bound needs sigma + m0 > 1")
    if norm == 0:
        return 0.0
    zeta_val = riemann_zeta(complex(sigma + m0), 1e-10).value.real
    return norm * (q + 1) ** (m0 + abs(s)) * zeta_val


def _phi_tail_bound(norm: float, q: int, sigma_m: float) -> float:
    """Bound on |phi_{q,m}(s)| = |sum_{n>q} a_n n^{-s-m}| for sigma+m > 1."""
    head = (q + 1) ** (-sigma_m)
    return norm * head * (1.0 + (q + 1) / (sigma_m - 1.0))


def _shift_eval(stream: CoefficientStream, q: int, s: complex, tol: Optional[float],
                base_eval: Callable[[complex], EvalResult], forward: bool,
                m_max: int, m_start: int = 0,
                head_value: complex = 0.0) -> EvalResult:
    """Shared core of the forward/backward binomial shift expansions."""
    s = complex(s)
    sigma = s.real
    target = tol if tol is not None else math.inf
    warnings: list[str] = []
    w = q if forward else -q

    head_coeffs = [complex(stream.coefficient(n)) for n in range(1, q + 1)]

    value = complex(head_value)
    err = 0.0
    binom = binom_neg_s(s, m_start)
    ratio_cut = q / (q + 1.0)
    tail_est = math.inf
    m = m_start
    while m <= m_max:
        sm = s + m
        if abs(sm - 1.0) < _POLE_EPS:
            # binom(-s, m) carries the vanishing factor (1 - m - s); the
            # product with the simple pole of the base series tends to
            # -binom_rest * residue, residue = stream density
            binom_rest = binom_neg_s(s, m - 1) / m if m >= 1 else 0.0
            term = -(w ** m) * binom_rest * stream.delta
            value += term
            err += abs(w ** m * binom_rest) * 1e-7 + 1e-12
            warnings.append(f"shift term m={m} crossed the pole at s+m=1; residue value used")
        else:
            base = base_eval(sm)
            head = sum(head_coeffs[n - 1] * complex(n) ** (-sm) for n in range(1, q + 1))
            phi = base.value - head
            weight = (w ** m) * binom
            value += weight * phi
            err += abs(weight) * base.err
        # absolute bound for the next term and the geometric tail behind it
        m_next = m + 1
        binom = binom * (-s - m) / (m + 1)
        bound_next = abs(w ** m_next * binom) * _phi_tail_bound(stream.norm_inf, q, sigma + m_next) \
            if sigma + m_next > 1 else math.inf
        rho = ratio_cut * (abs(s) + m_next + 1) / (m_next + 1)
        if bound_next < math.inf and rho < 0.9:
            tail_est = bound_next / (1.0 - rho)
            if tail_est <= max(target * 0.25, 1e-16) and m >= 3:
                m = m_next
                break
        m = m_next
    else:
        if tol is not None and (not math.isfinite(tail_est) or tail_est > tol):
            raise DidNotConverge(
                f"shift expansion did not reach tol {tol:g} within m_max={m_max}")
        warnings.append("shift expansion truncated at m_max; tail estimate retained")
    err += tail_est if math.isfinite(tail_est) else 0.0
    return EvalResult(value=value, err=err, method="shift", warnings=tuple(warnings))


def shift_backward_eval(stream: CoefficientStream, q: int, s: complex,
                        tol: Optional[float], base_eval: Callable[[complex], EvalResult],
                        m_max: int = DEFAULT_M_MAX) -> EvalResult:
    """Backward shift: sum a_{n+q} n^{-s} = sum_m (-q)^m binom(-s,m) phi_{q,m}(s),
    phi_{q,m}(s) = base(s+m) - sum_{n<=q} a_n n^{-s-m}."""
    if q < 1:
        raise OutOfDomain("shift distance must be >= 1")
    return _shift_eval(stream, q, s, tol, base_eval, forward=False, m_max=m_max)


def shift_forward_eval(stream: CoefficientStream, p: int, s: complex,
                       tol: Optional[float], base_eval: Callable[[complex], EvalResult],
                       m_max: int = DEFAULT_M_MAX) -> EvalResult:
    """Forward shift: sum a_{n-p} n^{-s} (n > p) =
    sum_{n=p+1}^{2p} a_{n-p} n^{-s} + sum_m p^m binom(-s,m) phi_{p,m}(s)."""
    if p < 1:
        raise OutOfDomain("shift distance must be >= 1")
    s = complex(s)
    head = complex(0.0)
    for n in range(p + 1, 2 * p + 1):
        head += complex(stream.coefficient(n - p)) * complex(n) ** (-s)
    return _shift_eval(stream, p, s, tol, base_eval, forward=True, m_max=m_max,
                       head_value=head)


# ---------------------------------------------------------------------------
# residue probe
# ---------------------------------------------------------------------------


def residue_probe(evaluator: Callable[[complex], EvalResult], tol: float = 1e-6) -> float:
    """Estimate the residue of a simple pole at s = 1.

    Evaluates (s-1) f(s) at s = 1 + eps for eps in {1e-2, 1e-3, 1e-4} and
    applies one step of Richardson extrapolation under a linear-in-eps
    model to the two smallest eps.
    """
    eps_grid = (1e-2, 1e-3, 1e-4)
    vals = []
    for eps in eps_grid:
        res = evaluator(complex(1.0 + eps))
        vals.append((eps * res.value).real)
    # linear model v(eps) = r + c*eps with a 10:1 eps ratio
    return (10.0 * vals[2] - vals[1]) / 9.0
