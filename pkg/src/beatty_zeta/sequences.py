"""Exact sequence generation and bounded-coefficient streams.

Per-index operations (Beatty terms, Sturmian coefficients, sawtooth values,
Hecke-set indicators, summatory functions) are exact: integer/surd
arithmetic decides every floor, ceiling and fractional-part comparison.

For numerical series evaluation the same data is needed for millions of
indices at once, so a cached :class:`AlphaTable` materializes exact floors
and certified-float fractional parts of alpha*n in one incremental integer
sweep, and :class:`CoefficientStream` subclasses derive coefficient blocks,
summatory fluctuations E(n) = A(n) - delta*n, and tail-envelope models
from it.  Block data is float64 but each entry is exact to ~1e-16.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import InvalidSpec, PrecisionExhausted, RationalAlpha
from .realspec import RealSpec, Surd

__all__ = [
    "beatty_term",
    "sturmian_coefficient",
    "sawtooth",
    "hecke_indicator",
    "summatory",
    "AlphaTable",
    "alpha_table",
    "CoefficientStream",
    "ConstantStream",
    "BeattyIndicatorStream",
    "SturmianStream",
    "HeckeIndicatorStream",
    "SawtoothStream",
    "ShiftedStream",
]


# ---------------------------------------------------------------------------
# exact per-index operations
# ---------------------------------------------------------------------------


def beatty_term(alpha: RealSpec, n: int) -> int:
    """Exact floor(alpha*n) for n >= 1 (never float rounding)."""
    if n < 1:
        raise InvalidSpec("Beatty terms start at n = 1")
    return alpha.floor_mul(n)


def sturmian_coefficient(beta: RealSpec, n: int) -> int:
    """Exact ceil(beta*n) - ceil(beta*(n-1)) for n >= 1."""
    if n < 1:
        raise InvalidSpec("Sturmian coefficients start at n = 1")
    return beta.ceil_mul(n) - beta.ceil_mul(n - 1)


def sawtooth(x) -> Union[Fraction, Surd, float]:
    """Centered sawtooth: {x} - 1/2 off integers, 0 at integers; odd, 1-periodic.

    Accepts int, float, Fraction, Surd or RealSpec and answers in kind
    (exact for exact inputs, certified float otherwise).
    """
    if isinstance(x, int):
        return Fraction(0)
    if isinstance(x, Fraction):
        f = x - math.floor(x)
        return Fraction(0) if f == 0 else f - Fraction(1, 2)
    if isinstance(x, Surd):
        if x.is_rational():
            return sawtooth(x.to_fraction())
        return x.frac() - Fraction(1, 2)
    if isinstance(x, RealSpec):
        if x.kind == "rational":
            return sawtooth(x.fraction())
        if x.kind == "quadratic":
            return sawtooth(x.surd())
        lo, hi = x.interval()
        flo, fhi = math.floor(lo), math.floor(hi)
        if flo != fhi or lo - flo == 0:
            raise PrecisionExhausted("integrality of the decimal value cannot be decided")
        return float((lo - flo + hi - fhi) / 2) - 0.5
    if isinstance(x, float):
        if x == math.floor(x):
            return 0.0
        return x - math.floor(x) - 0.5
    raise TypeError(f"unsupported sawtooth argument {type(x).__name__}")


def _hecke_threshold_exact(alpha: RealSpec, q: int):
    """{alpha*q} for q != 0 as an exact value ({alpha*q} = 1 - {alpha*|q|} for q < 0)."""
    if q == 0:
        raise InvalidSpec("Hecke shift q must be non-zero")
    f = alpha.frac_mul_exact(abs(q))
    if (isinstance(f, Fraction) and f == 0) or (isinstance(f, Surd) and not f):
        raise RationalAlpha("alpha*q is an integer; the Hecke set is undefined")
    return f if q > 0 else 1 - f


def hecke_indicator(alpha: RealSpec, q: int, n: int) -> int:
    """1 if {alpha*n} < {alpha*q}, else 0, decided exactly.

    alpha must be irrational (quadratic, or decimal within budget): for
    rational alpha fractional parts collide and the set is undefined.
    """
    if n < 1:
        raise InvalidSpec("indices start at n = 1")
    if alpha.is_rational():
        raise RationalAlpha("Hecke indicator requires irrational alpha")
    if alpha.kind == "quadratic":
        thresh = _hecke_threshold_exact(alpha, q)
        return 1 if alpha.frac_mul_exact(n) < thresh else 0
    # decimal: interval comparison, certified or refused
    lo, hi = alpha.interval()
    mq = alpha.floor_mul(abs(q))
    t_lo, t_hi = abs(q) * lo - mq, abs(q) * hi - mq
    if q < 0:
        t_lo, t_hi = 1 - t_hi, 1 - t_lo
    mn = alpha.floor_mul(n)
    f_lo, f_hi = n * lo - mn, n * hi - mn
    if f_hi < t_lo:
        return 1
    if f_lo > t_hi:
        return 0
    raise PrecisionExhausted(f"fractional-part comparison at n={n} not certified")


def summatory(kind: str, spec: RealSpec, x, q: int = 1):
    """Exact summatory values at real x >= 1.

    beatty_count   #{n : floor(alpha*n) <= x}            (= floor((floor(x)+1)/alpha) off integer multiples)
    sturmian_sum   sum_{n<=x} (ceil(beta*n)-ceil(beta*(n-1))) = ceil(beta*floor(x)) by telescoping
    sawtooth_sum   sum_{n<=x} R(alpha*n)                 (exact Fraction/Surd)
    hecke_count    #{n <= x : {alpha*n} < {alpha*q}}

    ``spec`` is alpha for beatty_count/sawtooth_sum/hecke_count and beta for
    sturmian_sum, mirroring the series definitions.
    """
    big_x = math.floor(x) if not isinstance(x, int) else x
    if big_x < 1:
        raise InvalidSpec("summatory functions need x >= 1")
    if kind == "beatty_count":
        # floor(alpha*m) <= X  <=>  m <= ceil((X+1)/alpha) - 1
        return spec.reciprocal().ceil_mul(big_x + 1) - 1
    if kind == "sturmian_sum":
        return spec.ceil_mul(big_x)
    if kind == "sawtooth_sum":
        # sum {alpha n} - X/2, with the integer-hit correction for rational alpha
        floors_sum = sum(spec.floor_mul(n) for n in range(1, big_x + 1))
        if spec.kind == "rational":
            val = Fraction(spec.p, spec.q) * Fraction(big_x * (big_x + 1), 2)
            hits = big_x // spec.q
            return val - floors_sum - Fraction(big_x, 2) + Fraction(hits, 2)
        if spec.kind == "quadratic":
            val = spec.surd() * Fraction(big_x * (big_x + 1), 2)
            return val - floors_sum - Fraction(big_x, 2)
        raise InvalidSpec("exact sawtooth sums need an exact (rational/quadratic) spec")
    if kind == "hecke_count":
        return sum(hecke_indicator(spec, q, n) for n in range(1, big_x + 1))
    raise InvalidSpec(f"unknown summatory kind {kind!r}")


# ---------------------------------------------------------------------------
# vectorized exact tables
# ---------------------------------------------------------------------------

_FIXED_BITS = 80  # fixed-point precision for {alpha n}; error < n * 2**-80


class AlphaTable:
    """Exact floors and certified-float fractional parts of alpha*n, n = 1..n_max."""

    def __init__(self, spec: RealSpec, n_max: int):
        self.spec = spec
        self.n_max = n_max
        self.floors, self.fracs = _build_table(spec, n_max)


def _build_table(spec: RealSpec, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    floors = np.empty(n_max, dtype=np.int64)
    fracs = np.empty(n_max, dtype=np.float64)
    if spec.kind == "rational":
        num_w, den = spec.p, spec.q
        lo_w = hi_w = num_w * (1 << _FIXED_BITS)
        den <<= _FIXED_BITS
    elif spec.kind == "quadratic":
        root = math.isqrt(spec.d << (2 * _FIXED_BITS))  # floor(sqrt(d) * 2^bits)
        base = spec.a << _FIXED_BITS
        if spec.b >= 0:
            lo_w, hi_w = base + spec.b * root, base + spec.b * (root + 1)
        else:
            lo_w, hi_w = base + spec.b * (root + 1), base + spec.b * root
        den = spec.c << _FIXED_BITS
    else:
        lo, hi = spec.interval()
        common = spec.scale
        lo_w, hi_w = (spec.val_num - spec.rad_num) << _FIXED_BITS, (spec.val_num + spec.rad_num) << _FIXED_BITS
        den = common << _FIXED_BITS
    if float(spec) * n_max >= 2 ** 62:
        raise InvalidSpec("alpha * n_max overflows the table's int64 floors")

    fden = float(den)
    q_lo, r_lo0 = divmod(lo_w, den)
    q_hi, r_hi0 = divmod(hi_w, den)
    acc_lo = 0
    acc_hi = 0
    m_lo = 0
    m_hi = 0
    for i in range(n_max):
        acc_lo += r_lo0
        if acc_lo >= den:
            acc_lo -= den
            m_lo += 1
        m_lo += q_lo
        acc_hi += r_hi0
        if acc_hi >= den:
            acc_hi -= den
            m_hi += 1
        m_hi += q_hi
        if m_lo != m_hi:
            if spec.kind == "decimal":
                raise PrecisionExhausted(
                    f"floor({spec.describe()}*{i + 1}) not certified by the decimal budget")
            # surd fixed-point bounds straddle an integer: decide exactly
            exact = spec.floor_mul(i + 1)
            fr = float(spec.frac_mul_exact(i + 1).approx_fraction(24)) if spec.kind == "quadratic" else 0.0
            floors[i] = exact
            fracs[i] = fr
            m_lo = m_hi = exact
            acc_lo = acc_hi = round(fr * fden)
            continue
        floors[i] = m_lo
        fracs[i] = acc_lo / fden
    return floors, fracs


_TABLE_CACHE: dict[tuple, AlphaTable] = {}


def alpha_table(spec: RealSpec, n_max: int) -> AlphaTable:
    """Cached exact table for alpha, grown geometrically on demand."""
    key = spec.key()
    tab = _TABLE_CACHE.get(key)
    if tab is None or tab.n_max < n_max:
        size = max(n_max, 2 * tab.n_max if tab else 0, 1024)
        tab = AlphaTable(spec, size)
        _TABLE_CACHE[key] = tab
    return tab


# ---------------------------------------------------------------------------
# coefficient streams
# ---------------------------------------------------------------------------


class CoefficientStream:
    """Bounded Dirichlet coefficients with summatory and tail-envelope access.

    Concrete streams provide:
      coefficient(n)        exact (or certified-float) a_n
      coeff_block(N)        float64 array of a_1..a_N
      delta                 mean value (density); delta_exact when available
      norm_inf              declared bound on |a_n|
      fluct_block(N)        E(n) = A(n) - delta*n for n = 1..N
      fluct_mean()          (mean of E, analytic_flag)
      envelope_model(N)     ("const"|"log", coefficient, exact_flag) bounding
                            |E(x) - mean| for x >= N
    """

    label = "stream"
    delta: float = 0.0
    delta_exact = None
    norm_inf: float = 1.0

    def coefficient(self, n: int):
        raise NotImplementedError

    def _compute_block(self, n_max: int) -> np.ndarray:
        raise NotImplementedError

    def coeff_block(self, n_max: int) -> np.ndarray:
        """float64 array of a_1..a_N; cached, grown geometrically, prefix-stable."""
        cached = getattr(self, "_block", None)
        if cached is None or len(cached) < n_max:
            cached = self._compute_block(max(n_max, 2 * len(cached) if cached is not None else 0))
            self._block = cached
            self._fluct = None
        return cached[:n_max]

    def fluct_block(self, n_max: int) -> np.ndarray:
        """E(n) = A(n) - delta*n for n = 1..N (float64, prefix-stable)."""
        block = self.coeff_block(n_max)
        cached = getattr(self, "_fluct", None)
        if cached is None or len(cached) < n_max:
            cached = np.cumsum(self._block - self.delta)
            self._fluct = cached
        return cached[:n_max]

    def fluct_mean(self) -> tuple[float, bool]:
        e = self.fluct_block(4096)
        return float(np.mean(e[len(e) // 2:])), False

    def envelope_model(self, n_from: int) -> tuple[str, float, bool]:
        """("const"|"log", coefficient, exact flag) bounding |E(x) - mean|, x >= n_from."""
        mean, _ = self.fluct_mean()
        e = self.fluct_block(max(4096, min(n_from, 1 << 17)))
        resid = np.abs(e - mean)
        n = np.arange(1, len(e) + 1)
        c = float(np.max(resid / (1.0 + np.log(n))))
        return ("log", 2.0 * max(c, 1e-12), False)

    def summatory_exact(self, n: int):
        """Exact A(n); default: sum of exact coefficients (slow reference)."""
        return sum(self.coefficient(k) for k in range(1, n + 1))


class ConstantStream(CoefficientStream):
    """a_n = value for every n (value 1 gives the plain zeta stream)."""

    def __init__(self, value: float = 1.0):
        self.value = value
        self.delta = float(value)
        self.delta_exact = Fraction(value) if isinstance(value, int) else None
        self.norm_inf = abs(float(value))
        self.label = f"const({value})"

    def coefficient(self, n: int):
        return self.value

    def _compute_block(self, n_max: int) -> np.ndarray:
        return np.full(n_max, float(self.value))

    def fluct_mean(self):
        return 0.0, True

    def envelope_model(self, n_from: int):
        return ("const", 0.0, True)

    def summatory_exact(self, n: int):
        return self.value * n


def _beta_of(alpha: RealSpec) -> RealSpec:
    return alpha.reciprocal()


class BeattyIndicatorStream(CoefficientStream):
    """a_n = 1 if n is a Beatty term floor(alpha*m), else 0 (alpha >= 1).

    Density beta = 1/alpha; E(n) = floor(beta*(n+1)) - beta*n lies within
    1/2 of its mean beta - 1/2 for irrational alpha (exact bound), and is
    exactly periodic for rational alpha.
    """

    def __init__(self, alpha: RealSpec):
        if not _ge_one(alpha):
            raise InvalidSpec("Beatty indicator stream needs alpha >= 1")
        self.alpha = alpha
        self.beta = _beta_of(alpha)
        self.delta_exact = self.beta.fraction() if self.beta.is_rational() else None
        self.delta = float(self.beta)
        self.norm_inf = 1.0
        self.label = f"beatty({alpha.describe()})"

    def coefficient(self, n: int) -> int:
        # section-7 ceiling-difference identity: one exact ceiling per query
        return self.beta.ceil_mul(n + 1) - self.beta.ceil_mul(n)

    def _compute_block(self, n_max: int) -> np.ndarray:
        # scatter the exact Beatty terms themselves (independent of the
        # ceiling-difference identity used by coefficient())
        out = np.zeros(n_max, dtype=np.float64)
        m_count = self.beta.ceil_mul(n_max + 1) - 1  # # of m with floor(alpha m) <= n_max
        tab = alpha_table(self.alpha, max(m_count, 1))
        vals = tab.floors[:m_count]
        out[vals[vals >= 1] - 1] = 1.0
        return out

    def fluct_mean(self):
        if self.alpha.is_rational():
            per = self.alpha.p  # E has period p for alpha = p/q
            e = self.fluct_block(2 * per)[per:2 * per]
            return float(np.mean(e)), True
        return self.delta - 0.5, True

    def envelope_model(self, n_from: int):
        if self.alpha.is_rational():
            per = self.alpha.p
            mean, _ = self.fluct_mean()
            e = self.fluct_block(2 * per)[per:2 * per]
            return ("const", float(np.max(np.abs(e - mean))) + 1e-15, True)
        return ("const", 0.5, True)

    def summatory_exact(self, n: int) -> int:
        return summatory("beatty_count", self.alpha, n)


class SturmianStream(CoefficientStream):
    """a_n = ceil(beta*n) - ceil(beta*(n-1)) for the slope beta in (0, 1].

    A(n) = ceil(beta*n) telescopes; E(n) = ceil(beta*n) - beta*n has mean
    1/2 and exact envelope 1/2 for irrational beta.
    """

    def __init__(self, beta: RealSpec):
        f = beta.interval()
        if f[0] <= 0 or f[1] > 1:
            raise InvalidSpec("Sturmian stream needs slope beta in (0, 1]")
        self.beta = beta
        self.delta_exact = beta.fraction() if beta.is_rational() else None
        self.delta = float(beta)
        self.norm_inf = 1.0
        self.label = f"sturmian({beta.describe()})"

    def coefficient(self, n: int) -> int:
        return sturmian_coefficient(self.beta, n)

    def _compute_block(self, n_max: int) -> np.ndarray:
        if self.beta.is_rational():
            p, q = self.beta.p, self.beta.q
            n = np.arange(0, n_max + 1, dtype=np.int64)
            if p * (n_max + 1) >= 2 ** 62:
                ceils = np.array([self.beta.ceil_mul(int(k)) for k in n], dtype=np.int64)
            else:
                ceils = -((-p * n) // q)
            return np.diff(ceils).astype(np.float64)
        tab = alpha_table(self.beta, n_max)
        ceils = tab.floors + 1  # beta*n never integral for irrational beta
        out = np.empty(n_max, dtype=np.float64)
        out[0] = 1.0  # ceil(beta) - ceil(0)
        out[1:] = np.diff(ceils.astype(np.float64))
        return out

    def fluct_mean(self):
        if self.beta.is_rational():
            per = self.beta.q
            e = self.fluct_block(2 * per)[per:2 * per]
            return float(np.mean(e)), True
        return 0.5, True

    def envelope_model(self, n_from: int):
        if self.beta.is_rational():
            per = self.beta.q
            mean, _ = self.fluct_mean()
            e = self.fluct_block(2 * per)[per:2 * per]
            return ("const", float(np.max(np.abs(e - mean))) + 1e-15, True)
        return ("const", 0.5, True)

    def summatory_exact(self, n: int) -> int:
        return summatory("sturmian_sum", self.beta, n)


class HeckeIndicatorStream(CoefficientStream):
    """a_n = 1 if {alpha*n} < {alpha*q}, else 0, for irrational alpha, q != 0."""

    def __init__(self, alpha: RealSpec, q: int):
        if alpha.is_rational():
            raise RationalAlpha("Hecke stream requires irrational alpha")
        if q == 0:
            raise InvalidSpec("Hecke shift q must be non-zero")
        self.alpha = alpha
        self.q = q
        if alpha.kind == "quadratic":
            thr = _hecke_threshold_exact(alpha, q)
            self.threshold = float(thr.approx_fraction(30)) if isinstance(thr, Surd) else float(thr)
        else:
            mq = alpha.floor_mul(abs(q))
            lo, hi = alpha.interval()
            mid = float((abs(q) * (lo + hi)) / 2 - mq)
            self.threshold = mid if q > 0 else 1.0 - mid
        self.delta = self.threshold
        self.norm_inf = 1.0
        self.label = f"hecke({alpha.describe()},q={q})"

    def coefficient(self, n: int) -> int:
        if self.q > 0:
            return hecke_indicator(self.alpha, self.q, n)
        # negative shift: threshold 1 - {alpha|q|}
        return hecke_indicator(self.alpha, self.q, n)

    def _compute_block(self, n_max: int) -> np.ndarray:
        tab = alpha_table(self.alpha, n_max)
        out = (tab.fracs < self.threshold).astype(np.float64)
        # entries too close to the threshold for float certainty: decide exactly
        near = np.nonzero(np.abs(tab.fracs - self.threshold) < 1e-12)[0]
        for i in near:
            out[i] = hecke_indicator(self.alpha, self.q, int(i) + 1)
        return out

    def summatory_exact(self, n: int) -> int:
        return summatory("hecke_count", self.alpha, n, q=self.q)


class SawtoothStream(CoefficientStream):
    """a_n = R(alpha*n) = {alpha*n} - 1/2 for irrational alpha; delta = 0."""

    def __init__(self, alpha: RealSpec):
        if alpha.is_rational():
            raise RationalAlpha("sawtooth stream requires irrational alpha")
        self.alpha = alpha
        self.delta = 0.0
        self.delta_exact = Fraction(0)
        self.norm_inf = 0.5
        self.label = f"sawtooth_j({alpha.describe()})"

    def coefficient(self, n: int) -> float:
        if self.alpha.kind == "quadratic":
            return float(self.alpha.frac_mul_exact(n).approx_fraction(24)) - 0.5
        tab = alpha_table(self.alpha, n)
        return float(tab.fracs[n - 1]) - 0.5

    def _compute_block(self, n_max: int) -> np.ndarray:
        tab = alpha_table(self.alpha, n_max)
        return tab.fracs[:n_max] - 0.5

    def summatory_exact(self, n: int):
        return summatory("sawtooth_sum", self.alpha, n)


class ShiftedStream(CoefficientStream):
    """Forward (offset < 0) or backward (offset > 0) coefficient shift.

    offset = +q gives a_n -> a_{n+q} (backward); offset = -p prepends p
    zeros (forward).  Used by route-agreement tests as the directly
    constructed shifted series.
    """

    def __init__(self, parent: CoefficientStream, offset: int):
        self.parent = parent
        self.offset = offset
        self.delta = parent.delta
        self.delta_exact = parent.delta_exact
        self.norm_inf = parent.norm_inf
        self.label = f"shift({parent.label},{offset:+d})"

    def coefficient(self, n: int):
        k = n + self.offset
        return self.parent.coefficient(k) if k >= 1 else 0

    def _compute_block(self, n_max: int) -> np.ndarray:
        off = self.offset
        if off >= 0:
            return self.parent.coeff_block(n_max + off)[off:]
        pad = np.zeros(-off, dtype=np.float64)
        return np.concatenate([pad, self.parent.coeff_block(n_max + off)])


def _ge_one(spec: RealSpec) -> bool:
    lo, _ = spec.interval()
    return lo >= 1 or (spec.kind != "decimal" and spec.floor_mul(1) >= 1)
