"""Exact representations of the real parameter and its continued fraction.

A parameter alpha enters the library as a :class:`RealSpec`: an exact
rational p/q, an exact quadratic surd (a + b*sqrt(d))/c, or a decimal digit
string carrying a precision budget.  Everything downstream (Beatty terms,
fractional parts, period detection) is driven by exact integer arithmetic
on these forms; floats only appear as final, certified conversions.

The continued-fraction machinery covers three regimes:

* rational input  -> finite Euclidean expansion;
* quadratic input -> exact eventually-periodic expansion, period detected
  by repetition of complete quotients in (P + sqrt(D))/Q normal form;
* decimal input   -> interval arithmetic on the digit string, each partial
  quotient certified or the expansion stops (``reliable_terms``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Union

from .errors import (
    InvalidSpec,
    NotEnoughTerms,
    NotPeriodic,
    PrecisionExhausted,
)

__all__ = [
    "Surd",
    "RealSpec",
    "ContinuedFractionExpansion",
    "EtaData",
    "TypeEstimate",
    "parse_alpha",
    "cf_expand",
    "convergents",
    "complete_quotient",
    "type_estimate",
    "eta",
]


# ---------------------------------------------------------------------------
# quadratic surd arithmetic
# ---------------------------------------------------------------------------


def _squarefree_split(d: int) -> tuple[int, int]:
    """Split d > 0 as f**2 * d0 with d0 squarefree; returns (f, d0)."""
    f = 1
    i = 2
    while i * i <= d:
        while d % (i * i) == 0:
            d //= i * i
            f *= i
        i += 1
    return f, d


def _cmp_int_sqrt(lhs: int, b: int, d: int) -> int:
    """Sign of lhs - b*sqrt(d) for integers lhs, b and non-square d > 0.

    Equality is impossible unless lhs == b == 0 (sqrt(d) is irrational).
    """
    if b == 0:
        return (lhs > 0) - (lhs < 0)
    if lhs <= 0 and b > 0:
        return -1
    if lhs >= 0 and b < 0:
        return 1
    rhs_sq = b * b * d
    lhs_sq = lhs * lhs
    s = (lhs_sq > rhs_sq) - (lhs_sq < rhs_sq)
    return s if lhs > 0 else -s


class Surd:
    """Exact element (a + b*sqrt(d))/c of a real quadratic field.

    d must be a positive non-square (callers normalize it squarefree);
    c > 0 and gcd(a, b, c) = 1 after construction, so equal values have
    equal representations.  Comparisons, floor and ceiling are exact
    integer decisions; nothing here rounds.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int, _normalized: bool = False):
        if c == 0:
            raise InvalidSpec("surd denominator must be non-zero")
        if d <= 0:
            raise InvalidSpec("surd radicand must be positive")
        if not _normalized:
            if c < 0:
                a, b, c = -a, -b, -c
            g = gcd(gcd(abs(a), abs(b)), c)
            if g > 1:
                a //= g
                b //= g
                c //= g
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def from_rational(cls, value: Union[int, Fraction], d: int) -> "Surd":
        f = Fraction(value)
        return cls(f.numerator, 0, f.denominator, d)

    # -- basic queries -----------------------------------------------------

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise InvalidSpec("surd with non-zero radical part is irrational")
        return Fraction(self.a, self.c)

    def sign(self) -> int:
        # sign of a + b*sqrt(d)  (c > 0 by construction)
        return _cmp_int_sqrt(self.a, -self.b, self.d)

    def __bool__(self) -> bool:
        return not (self.a == 0 and self.b == 0)

    # -- field alignment for binary ops -------------------------------------

    def _pair(self, other) -> Optional[tuple["Surd", "Surd"]]:
        if isinstance(other, Surd):
            if other.d == self.d:
                return self, other
            if other.b == 0:
                return self, Surd(other.a, 0, other.c, self.d, _normalized=True)
            if self.b == 0:
                return Surd(self.a, 0, self.c, other.d, _normalized=True), other
            raise InvalidSpec("cannot combine surds from different quadratic fields")
        if isinstance(other, int) or isinstance(other, Fraction):
            f = Fraction(other)
            return self, Surd(f.numerator, 0, f.denominator, self.d, _normalized=True)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return Surd(x.a * y.c + y.a * x.c, x.b * y.c + y.b * x.c, x.c * y.c, x.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.c, self.d, _normalized=True)

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x + (-y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return Surd(x.a * y.a + x.b * y.b * x.d, x.a * y.b + x.b * y.a, x.c * y.c, x.d)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        # 1 / ((a + b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("surd is zero")
        return Surd(self.c * self.a, -self.c * self.b, norm, self.d)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x * y.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return y * x.inverse()

    # -- order and equality --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Surd) and other.d != self.d and other.b != 0 and self.b != 0:
            return False
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return (x - y).sign() == 0

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def _cmp(self, other) -> int:
        pair = self._pair(other)
        if pair is None:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        x, y = pair
        return (x - y).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- floor / fractional part ----------------------------------------------

    def floor(self) -> int:
        a, b, c, d = self.a, self.b, self.c, self.d
        if b == 0:
            return a // c
        t2 = b * b * d
        t = isqrt(t2) if b > 0 else -isqrt(t2) - 1  # t <= b sqrt d < t + 1
        k = (a + t) // c
        # candidate may be one too low; exact check of (k+1)c <= a + b sqrt d
        if _cmp_int_sqrt((k + 1) * c - a, b, d) <= 0:
            k += 1
        return k

    def ceil(self) -> int:
        return -(-self).floor()

    def frac(self) -> "Surd":
        return self - self.floor()

    # -- numeric conversion -----------------------------------------------------

    def approx_fraction(self, digits: int = 40) -> Fraction:
        """Rational approximation accurate to |b|*10**-digits absolute."""
        scale = 10 ** digits
        root = isqrt(self.d * scale * scale)  # floor(sqrt(d) * scale)
        return Fraction(self.a * scale + self.b * root, self.c * scale)

    def __float__(self) -> float:
        return float(self.approx_fraction(38))

    def __repr__(self):
        return f"Surd(({self.a} + {self.b}*sqrt({self.d}))/{self.c})"


# ---------------------------------------------------------------------------
# RealSpec
# ---------------------------------------------------------------------------

_MIN_DECIMAL_PRECISION = 16


@dataclass(frozen=True)
class RealSpec:
    """Exact or budgeted description of a positive real parameter.

    ``kind`` is one of ``rational``, ``quadratic``, ``decimal``.  Named
    constants (``phi``, ``sqrt:d``) expand to quadratic form on construction.

    Rational: value p/q, reduced, q >= 1.  Quadratic: (a + b*sqrt(d))/c with
    d squarefree and non-square.  Decimal: exact midpoint val_num/scale with
    certified half-width rad_num/scale (half a unit in the last significant
    digit of the precision budget).
    """

    kind: str
    p: int = 0
    q: int = 1
    a: int = 0
    b: int = 0
    c: int = 1
    d: int = 0
    val_num: int = 0
    rad_num: int = 0
    scale: int = 1
    precision: int = 0
    label: str = ""

    # -- constructors --------------------------------------------------------

    @staticmethod
    def rational(p: int, q: int, label: str = "") -> "RealSpec":
        if q == 0:
            raise InvalidSpec("rational spec needs q != 0")
        if q < 0:
            p, q = -p, -q
        g = gcd(abs(p), q)
        p, q = p // g, q // g
        if p <= 0:
            raise InvalidSpec("spec value must be positive")
        return RealSpec(kind="rational", p=p, q=q, label=label)

    @staticmethod
    def quadratic(a: int, b: int, c: int, d: int, label: str = "") -> "RealSpec":
        if c == 0:
            raise InvalidSpec("quadratic spec needs c != 0")
        if d <= 0:
            raise InvalidSpec("quadratic spec needs d > 0")
        f, d0 = _squarefree_split(d)
        b *= f
        if d0 == 1 or b == 0:
            return RealSpec.rational(a + (b if d0 == 1 else 0), c, label=label)
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        a, b, c = a // g, b // g, c // g
        if _cmp_int_sqrt(a, -b, d0) <= 0:  # a + b*sqrt(d0) <= 0
            raise InvalidSpec("spec value must be positive")
        return RealSpec(kind="quadratic", a=a, b=b, c=c, d=d0, label=label)

    @staticmethod
    def decimal(digits: str, exp: int = 0, precision: int = 34, label: str = "") -> "RealSpec":
        if precision < _MIN_DECIMAL_PRECISION:
            raise InvalidSpec(f"decimal precision budget must be >= {_MIN_DECIMAL_PRECISION} digits")
        digits = digits.strip()
        if not re.fullmatch(r"\d+(\.\d+)?", digits):
            raise InvalidSpec(f"malformed decimal digits {digits!r}")
        intpart, _, fracpart = digits.partition(".")
        num = int(intpart + fracpart)
        exp10 = exp - len(fracpart)
        if num <= 0:
            raise InvalidSpec("spec value must be positive")
        lead = len(str(num)) - 1 + exp10          # exponent of leading digit
        rad_exp = lead - precision + 1            # half-unit position of budget
        lo_exp = min(exp10, rad_exp - 1)
        scale = 10 ** (-lo_exp)
        val_num = num * 10 ** (exp10 - lo_exp)
        rad_num = 5 * 10 ** (rad_exp - 1 - lo_exp)
        if val_num - rad_num <= 0:
            raise InvalidSpec("decimal value not certifiably positive at this budget")
        return RealSpec(kind="decimal", val_num=val_num, rad_num=rad_num,
                        scale=scale, precision=precision, label=label)

    @staticmethod
    def named(name: str) -> "RealSpec":
        if name == "phi":
            return RealSpec.quadratic(1, 1, 2, 5, label="phi")
        m = re.fullmatch(r"sqrt:(\d+)", name)
        if m:
            d = int(m.group(1))
            if d <= 0:
                raise InvalidSpec("sqrt:<d> needs d > 0")
            return RealSpec.quadratic(0, 1, 1, d, label=name)
        raise InvalidSpec(f"unknown named constant {name!r}")

    # -- predicates ------------------------------------------------------------

    def is_rational(self) -> bool:
        return self.kind == "rational"

    def is_quadratic(self) -> bool:
        return self.kind == "quadratic"

    def is_decimal(self) -> bool:
        return self.kind == "decimal"

    # -- exact views -------------------------------------------------------------

    def fraction(self) -> Fraction:
        if self.kind != "rational":
            raise InvalidSpec("not a rational spec")
        return Fraction(self.p, self.q)

    def surd(self) -> Surd:
        if self.kind != "quadratic":
            raise InvalidSpec("spec has no exact surd form")
        return Surd(self.a, self.b, self.c, self.d, _normalized=True)

    def interval(self) -> tuple[Fraction, Fraction]:
        """Certified enclosure [lo, hi] of the value."""
        if self.kind == "rational":
            v = self.fraction()
            return v, v
        if self.kind == "decimal":
            return (Fraction(self.val_num - self.rad_num, self.scale),
                    Fraction(self.val_num + self.rad_num, self.scale))
        lo = self.surd().approx_fraction(38)
        w = Fraction(abs(self.b) + 1, 10 ** 38)
        return lo - w, lo + w

    def __float__(self) -> float:
        if self.kind == "rational":
            return self.p / self.q
        if self.kind == "decimal":
            return self.val_num / self.scale
        return float(self.surd())

    # -- exact elementwise operations ------------------------------------------

    def floor_mul(self, n: int) -> int:
        """Exact floor(alpha * n)."""
        if self.kind == "rational":
            return (self.p * n) // self.q
        if self.kind == "quadratic":
            a, b, c, d = self.a * n, self.b * n, self.c, self.d
            if n < 0:
                pass  # handled by the general comparisons below
            t2 = b * b * d
            t = isqrt(t2) if b >= 0 else -isqrt(t2) - 1
            k = (a + t) // c
            if _cmp_int_sqrt((k + 1) * c - a, b, d) <= 0:
                k += 1
            return k
        lo, hi = self.interval()
        flo = math.floor(n * lo) if n >= 0 else math.floor(n * hi)
        fhi = math.floor(n * hi) if n >= 0 else math.floor(n * lo)
        if flo != fhi:
            raise PrecisionExhausted(
                f"floor({self.describe()} * {n}) not certified by the decimal budget")
        return flo

    def ceil_mul(self, n: int) -> int:
        """Exact ceil(alpha * n)."""
        if n == 0:
            return 0
        if self.kind == "rational":
            return -((-self.p * n) // self.q)
        if self.kind == "quadratic":
            if self.surd_is_integer_multiple(n):
                return self.floor_mul(n)
            return self.floor_mul(n) + 1
        lo, hi = self.interval()
        clo = math.ceil(n * lo) if n >= 0 else math.ceil(n * hi)
        chi = math.ceil(n * hi) if n >= 0 else math.ceil(n * lo)
        if clo != chi:
            raise PrecisionExhausted(
                f"ceil({self.describe()} * {n}) not certified by the decimal budget")
        return clo

    def surd_is_integer_multiple(self, n: int) -> bool:
        # alpha*n is never an integer for quadratic alpha and n != 0
        return False

    def frac_mul_exact(self, n: int):
        """{alpha*n} as an exact Surd/Fraction (rational/quadratic kinds only)."""
        m = self.floor_mul(n)
        if self.kind == "rational":
            return Fraction(self.p * n, self.q) - m
        if self.kind == "quadratic":
            return self.surd() * n - m
        raise InvalidSpec("decimal specs have no exact fractional parts; use interval()")

    def reciprocal(self) -> "RealSpec":
        """Exact-form reciprocal 1/alpha (decimal gets a derived interval)."""
        if self.kind == "rational":
            return RealSpec.rational(self.q, self.p)
        if self.kind == "quadratic":
            s = self.surd().inverse()
            return RealSpec.quadratic(s.a, s.b, s.c, s.d)
        lo, hi = self.interval()
        inv_lo, inv_hi = 1 / hi, 1 / lo
        mid = (inv_lo + inv_hi) / 2
        rad = (inv_hi - inv_lo) / 2
        scale = 10 ** (self.precision + 6)
        return RealSpec(kind="decimal",
                        val_num=round(mid * scale),
                        rad_num=max(1, math.ceil(rad * scale)),
                        scale=scale, precision=self.precision,
                        label=f"1/({self.label})" if self.label else "")

    def rayleigh_conjugate(self) -> "RealSpec":
        """alpha' with 1/alpha + 1/alpha' = 1 (requires alpha > 1)."""
        if self.kind == "rational":
            f = self.fraction()
            if f <= 1:
                raise InvalidSpec("conjugate needs alpha > 1")
            g = f / (f - 1)
            return RealSpec.rational(g.numerator, g.denominator)
        if self.kind == "quadratic":
            s = self.surd()
            if not s > 1:
                raise InvalidSpec("conjugate needs alpha > 1")
            g = s / (s - 1)
            return RealSpec.quadratic(g.a, g.b, g.c, g.d)
        raise InvalidSpec("conjugate of a decimal spec is not supported; use exact forms")

    def key(self) -> tuple:
        """Canonical hashable identity used for caching derived tables."""
        if self.kind == "rational":
            return ("rational", self.p, self.q)
        if self.kind == "quadratic":
            return ("quadratic", self.a, self.b, self.c, self.d)
        return ("decimal", self.val_num, self.rad_num, self.scale, self.precision)

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.kind == "rational":
            return f"{self.p}/{self.q}"
        if self.kind == "quadratic":
            return f"({self.a}+{self.b}*sqrt({self.d}))/{self.c}"
        return f"decimal@{self.precision}"


_ALPHA_GRAMMAR = """\
alpha-spec grammar:
  rational:<p>/<q>
  quadratic:(<a>+<b>*sqrt(<d>))/<c>
  decimal:<digits>[e<exp>]@<precision>
  phi
  sqrt:<d>
"""


def parse_alpha(text: str) -> RealSpec:
    """Parse the alpha-spec grammar used by the CLI and config files."""
    text = text.strip()
    if text == "phi" or re.fullmatch(r"sqrt:\d+", text):
        return RealSpec.named(text)
    m = re.fullmatch(r"rational:(-?\d+)/(-?\d+)", text)
    if m:
        return RealSpec.rational(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"quadratic:\((-?\d+)\+(-?\d+)\*sqrt\((\d+)\)\)/(-?\d+)", text)
    if m:
        return RealSpec.quadratic(int(m.group(1)), int(m.group(2)),
                                  int(m.group(4)), int(m.group(3)))
    m = re.fullmatch(r"decimal:(\d+(?:\.\d+)?)(?:e(-?\d+))?@(\d+)", text)
    if m:
        return RealSpec.decimal(m.group(1), int(m.group(2) or 0), int(m.group(3)))
    raise InvalidSpec(f"cannot parse alpha-spec {text!r}\n{_ALPHA_GRAMMAR}")


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    """Partial quotients of alpha plus period/reliability metadata.

    ``a0`` is the integer part; ``partial_quotients`` holds a_1, a_2, ...
    For quadratic input ``period = (preperiod, length)`` is exact and the
    quotients repeat from index ``preperiod`` on.  For decimal input only
    the first ``reliable_terms`` quotients (counting a_0) are certified.
    """

    alpha: RealSpec
    a0: int
    partial_quotients: tuple[int, ...]
    finite: bool
    period: Optional[tuple[int, int]] = None
    period_exact: bool = False
    reliable_terms: Optional[int] = None
    # internal complete-quotient states (P_k, Q_k); quadratic only
    pqa_states: tuple[tuple[int, int], ...] = field(default=(), repr=False)
    pqa_big_d: int = field(default=0, repr=False)
    pqa_root_coeff: int = field(default=0, repr=False)  # sqrt(big_d) = coeff * sqrt(alpha.d)

    def quotient(self, k: int) -> int:
        """a_k, extending periodically for quadratic input."""
        if k < 0:
            raise InvalidSpec("quotient index must be >= 0")
        total = 1 + len(self.partial_quotients)
        if k >= total:
            if self.period is None:
                raise NotEnoughTerms(f"quotient a_{k} not available")
            pre, length = self.period
            k = pre + (k - pre) % length
        return self.a0 if k == 0 else self.partial_quotients[k - 1]

    def available_quotients(self) -> Optional[int]:
        """Number of certified quotients counting a_0, or None if unlimited."""
        if self.period is not None:
            return None
        if self.reliable_terms is not None:
            return self.reliable_terms
        return 1 + len(self.partial_quotients)


def _cf_rational(spec: RealSpec, max_terms: int) -> ContinuedFractionExpansion:
    p, q = spec.p, spec.q
    a0, r = divmod(p, q)
    quots: list[int] = []
    x, y = q, r
    while y != 0 and len(quots) < max_terms:
        a, y2 = divmod(x, y)
        quots.append(a)
        x, y = y, y2
    return ContinuedFractionExpansion(alpha=spec, a0=a0,
                                      partial_quotients=tuple(quots),
                                      finite=(y == 0))


def _floor_pq(P: int, Q: int, big_d: int) -> int:
    """Exact floor((P + sqrt(big_d))/Q) for non-square big_d, Q != 0."""
    r = isqrt(big_d)  # r <= sqrt(big_d) < r + 1
    k = (P + r) // Q if Q > 0 else (P + r + 1) // Q
    orient = 1 if Q > 0 else -1
    # k+1 <= value  <=>  (k+1)Q - P <= sqrt(big_d)   (orientation flips for Q < 0)
    while _cmp_int_sqrt((k + 1) * Q - P, 1, big_d) * orient <= 0:
        k += 1
    while _cmp_int_sqrt(k * Q - P, 1, big_d) * orient > 0:
        k -= 1
    return k


_PERIOD_SEARCH_CAP = 200_000


def _cf_quadratic(spec: RealSpec, max_terms: int) -> ContinuedFractionExpansion:
    a, b, c, d = spec.a, spec.b, spec.c, spec.d
    if b < 0:
        a, b, c = -a, -b, -c
    # (a + b sqrt d)/c == (P + sqrt(big_d))/Q with the invariant Q | big_d - P^2
    P = a * abs(c)
    Q = c * abs(c)
    big_d = b * b * d * c * c
    root_coeff = b * abs(c)

    states: list[tuple[int, int]] = []
    quots: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    period = None
    k = 0
    while True:
        st = (P, Q)
        if st in seen:
            period = (seen[st], k - seen[st])
            break
        seen[st] = k
        states.append(st)
        ak = _floor_pq(P, Q, big_d)
        quots.append(ak)
        P = ak * Q - P
        Q = (big_d - P * P) // Q
        k += 1
        if k > _PERIOD_SEARCH_CAP:
            raise InvalidSpec("period not found within the search cap; radicand too large")

    return ContinuedFractionExpansion(alpha=spec, a0=quots[0],
                                      partial_quotients=tuple(quots[1:]),
                                      finite=False, period=period, period_exact=True,
                                      pqa_states=tuple(states), pqa_big_d=big_d,
                                      pqa_root_coeff=root_coeff)


def _cf_decimal(spec: RealSpec, max_terms: int) -> ContinuedFractionExpansion:
    lo, hi = spec.interval()
    quots: list[int] = []
    while len(quots) <= max_terms:
        flo, fhi = math.floor(lo), math.floor(hi)
        if flo != fhi:
            break
        quots.append(flo)
        rlo, rhi = lo - flo, hi - flo
        if rlo <= 0:
            break  # interval touches an integer; next quotient uncertifiable
        lo, hi = 1 / rhi, 1 / rlo
    if not quots:
        raise PrecisionExhausted("decimal budget cannot certify even the integer part")
    return ContinuedFractionExpansion(alpha=spec, a0=quots[0],
                                      partial_quotients=tuple(quots[1:]),
                                      finite=False, reliable_terms=len(quots))


def cf_expand(spec: RealSpec, max_terms: int = 40) -> ContinuedFractionExpansion:
    """Continued fraction of alpha.

    Rational input terminates with the Euclidean expansion; quadratic input
    detects the exact period by complete-quotient repetition; decimal input
    certifies quotients by interval arithmetic (``reliable_terms``).
    """
    if max_terms < 1:
        raise InvalidSpec("max_terms must be >= 1")
    if spec.kind == "rational":
        return _cf_rational(spec, max_terms)
    if spec.kind == "quadratic":
        return _cf_quadratic(spec, max_terms)
    return _cf_decimal(spec, max_terms)


def convergents(cf: ContinuedFractionExpansion, n: int) -> list[tuple[int, int]]:
    """First n convergents p_k/q_k (k = 0..n-1) as exact coprime pairs."""
    if n < 1:
        raise InvalidSpec("need n >= 1")
    avail = cf.available_quotients()
    if avail is not None and n > avail:
        raise NotEnoughTerms(f"{n} convergents requested, only {avail} quotients available")
    out = [(cf.a0, 1)]
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    for k in range(1, n):
        ak = cf.quotient(k)
        p, p_prev = ak * p + p_prev, p
        q, q_prev = ak * q + q_prev, q
        out.append((p, q))
    return out


def complete_quotient(cf: ContinuedFractionExpansion, n: int):
    """theta_n = [a_n; a_{n+1}, ...]: exact Surd for quadratic input,
    Fraction for rational, certified (lo, hi) Fraction pair for decimal."""
    if n < 0:
        raise InvalidSpec("index must be >= 0")
    spec = cf.alpha
    if spec.kind == "quadratic":
        pre, length = cf.period
        idx = n if n < len(cf.pqa_states) else pre + (n - pre) % length
        P, Q = cf.pqa_states[idx]
        return Surd(P, cf.pqa_root_coeff, Q, spec.d)
    if spec.kind == "rational":
        total = 1 + len(cf.partial_quotients)
        if n >= total or not cf.finite:
            raise NotEnoughTerms(f"rational expansion has {total} quotients")
        val = Fraction(cf.quotient(total - 1))
        for k in range(total - 2, n - 1, -1):
            val = cf.quotient(k) + 1 / val
        return val
    if cf.reliable_terms is not None and n >= cf.reliable_terms:
        raise PrecisionExhausted(
            f"complete quotient {n} is past the {cf.reliable_terms} reliable terms")
    lo, hi = spec.interval()
    for _ in range(n):
        f = math.floor(lo)
        lo, hi = 1 / (hi - f), 1 / (lo - f)
    return (lo, hi)


@dataclass(frozen=True)
class TypeEstimate:
    """Windowed estimate of the Diophantine type from denominator growth."""

    tau_hat: float
    trace: tuple[float, ...]
    window: tuple[int, int]
    heuristic: bool = True


def type_estimate(cf: ContinuedFractionExpansion, n: int) -> TypeEstimate:
    """Estimate the denominator growth type limsup log q_{k+1} / log q_k.

    Finitely many convergents cannot certify a limsup, so this is an
    estimate by construction.  The raw quotient log q_{k+1}/log q_k
    converges only like 1 + O(1/k) even for quadratic irrationals, which
    makes it useless at realistic n; the estimator therefore uses the ratio
    of successive log-increments

        r_k = log(q_{k+1}/q_k) / log(q_k/q_{k-1}),

    which has the same limit whenever the raw ratio converges (geometric
    denominator growth gives limit 1, quotients a_k ~ C**tau**k give tau)
    and settles exponentially fast in the bounded-quotient case.  tau_hat
    is the max of r_k over the trailing window [max(2, n//2), n-1]; the
    full trace is returned so callers can judge convergence themselves.
    """
    if n < 3:
        raise NotEnoughTerms("type estimate needs n >= 3")
    conv = convergents(cf, n + 1)
    logs = [math.log(qk) for (_, qk) in conv]
    incs = [logs[k + 1] - logs[k] for k in range(len(logs) - 1)]
    trace: list[float] = []
    first = None
    for k in range(1, len(incs)):
        if incs[k - 1] <= 0:
            continue
        if first is None:
            first = k
        trace.append(incs[k] / incs[k - 1])
    if not trace or first is None:
        raise NotEnoughTerms("denominators did not grow; cannot estimate type")
    k_min = max(2, n // 2)
    j_min = min(max(0, k_min - first), len(trace) - 1)
    window = trace[j_min:]
    return TypeEstimate(tau_hat=max(window), trace=tuple(trace),
                        window=(first + j_min, first + len(trace) - 1))


@dataclass(frozen=True)
class EtaData:
    """Product of complete quotients over one period and its certified log."""

    eta_inv: Surd        # theta_{p+1} * ... * theta_{p+q}, always > 1
    log_eta: float       # -log(eta_inv), accurate to ~1e-15 relative
    pole_spacing: float  # 2*pi / |log eta|


def eta(cf: ContinuedFractionExpansion, window_start: Optional[int] = None) -> EtaData:
    """Period product eta^{-1} as an exact surd (quadratic input only).

    ``window_start`` overrides the first index of the product window
    (default preperiod+1); any full-period window yields the same surd.
    """
    if cf.period is None or not cf.period_exact:
        raise NotPeriodic("eta needs an exact period (quadratic input)")
    pre, length = cf.period
    start = pre + 1 if window_start is None else window_start
    if start < pre + 1:
        raise InvalidSpec("window must start inside the periodic part")
    prod = complete_quotient(cf, start)
    for k in range(start + 1, start + length):
        prod = prod * complete_quotient(cf, k)
    if not prod > 1:
        raise InvalidSpec("period product must exceed 1")
    log_eta = -math.log(prod.approx_fraction(38))
    return EtaData(eta_inv=prod, log_eta=log_eta,
                   pole_spacing=2 * math.pi / abs(log_eta))
