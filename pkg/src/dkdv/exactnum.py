"""Truncated formal Laurent series in one indeterminate ``eps``.

A :class:`LaurentSeries` stores the coefficients of ``eps**v, eps**(v+1), ...,
eps**K`` where ``v`` is the valuation and ``K`` the *known order*: the value is
certified modulo ``O(eps**(K+1))``.  Precision bookkeeping is explicit, every
operation computes the known order of its result from those of its inputs.

Coefficients live in an exact field.  Two are provided:

* :data:`QQ`, the rationals (``fractions.Fraction``);
* :class:`PrimeField`, integers modulo a large prime.  Lattice evolution uses
  it because rational heights explode after a few dozen lattice steps.

A sum whose retained coefficients all cancel is not silently zero: it becomes
the *truncated zero* sentinel, which carries a known order but no valuation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import islice
from operator import mul as _mul
from typing import Iterable, Mapping, Union

from .errors import DivisionBySeriesZero, UndefinedValuation

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "RationalField",
    "PrimeField",
    "QQ",
    "GF_DEFAULT",
    "LaurentSeries",
    "add",
    "mul",
    "inv",
    "valuation",
    "series_to_json",
    "series_from_json",
    "ring_from_name",
]


class RationalField:
    """The field of rationals, elements are ``Fraction``."""

    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, tuple):
            return Fraction(*x)
        return Fraction(x)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return 1 / x

    def to_pair(self, x) -> tuple[int, int]:
        return x.numerator, x.denominator

    def mul_trunc(self, a, b, n):
        return _mul_trunc(a, b, n, None)

    def inv_trunc(self, a, n):
        i0 = 1 / a[0]
        out = [i0]
        la = len(a)
        while la > 1 and a[la - 1] == 0:
            la -= 1
        for k in range(1, n):
            hi = k if k < la else la - 1
            if hi == 0:
                out.append(Fraction(0))
                continue
            s = sum(map(_mul, a[1 : hi + 1], out[k - 1 : k - hi - 1 if k - hi - 1 >= 0 else None : -1]))
            out.append(-s * i0)
        return out

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo the prime ``p``; elements are ints in ``[0, p)``."""

    def __init__(self, p: int = (1 << 61) - 1):
        self.p = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def coerce(self, x) -> int:
        p = self.p
        if isinstance(x, tuple):
            x = Fraction(*x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return x * y % self.p

    def inv(self, x):
        return pow(x, -1, self.p)

    def to_pair(self, x) -> tuple[int, int]:
        return x, 1

    def mul_trunc(self, a, b, n):
        return _mul_trunc(a, b, n, self.p)

    def inv_trunc(self, a, n):
        p = self.p
        i0 = pow(a[0], -1, p)
        m = p - i0  # -1/a0
        out = [i0]
        la = len(a)
        # trailing zeros are common (exact constants); skip them
        while la > 1 and a[la - 1] == 0:
            la -= 1
        for k in range(1, n):
            hi = k if k < la else la - 1
            if hi == 0:
                out.append(0)
                continue
            s = sum(map(_mul, a[1 : hi + 1], out[k - 1 : k - hi - 1 if k - hi - 1 >= 0 else None : -1]))
            out.append(s * m % p)
        return out

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def _mul_trunc(a, b, n, p):
    la, lb = len(a), len(b)
    while la > 1 and a[la - 1] == 0:
        la -= 1
    while lb > 1 and b[lb - 1] == 0:
        lb -= 1
    if la > lb:
        a, b, la, lb = b, a, lb, la
    if la == 1:
        c = a[0]
        if p is None:
            out = [c * x for x in islice(b, min(n, lb))]
        else:
            out = [c * x % p for x in islice(b, min(n, lb))]
    else:
        out = []
        for k in range(min(n, la + lb - 1)):
            lo = k - lb + 1 if k >= lb else 0
            hi = k if k < la else la - 1
            s = sum(map(_mul, a[lo : hi + 1], b[k - lo : k - hi - 1 if k - hi - 1 >= 0 else None : -1]))
            out.append(s if p is None else s % p)
    if len(out) < n:
        out.extend([0 if p is not None else Fraction(0)] * (n - len(out)))
    return out


QQ = RationalField()
GF_DEFAULT = PrimeField()


def ring_from_name(name: str):
    if name in ("QQ", "rational", "rationals"):
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return PrimeField(int(name[3:-1]))
    if name in ("modp", "GF"):
        return GF_DEFAULT
    raise ValueError(f"unknown coefficient field {name!r}")


class LaurentSeries:
    """Immutable truncated Laurent series ``sum c_i eps**(v+i)`` + ``O(eps**(K+1))``."""

    __slots__ = ("_v", "coeffs", "known_order", "ring")

    def __init__(self, valuation: int | None, coeffs: Iterable, known_order: int, ring=QQ):
        coeffs = tuple(coeffs)
        if valuation is None:
            if coeffs:
                raise ValueError("truncated zero carries no coefficients")
        else:
            if len(coeffs) != known_order - valuation + 1:
                raise ValueError(
                    f"need {known_order - valuation + 1} coefficients for valuation "
                    f"{valuation} and known order {known_order}, got {len(coeffs)}"
                )
            if coeffs[0] == 0:
                raise ValueError("leading coefficient must be nonzero; use LaurentSeries.normalized")
        self._v = valuation
        self.coeffs = coeffs
        self.known_order = known_order
        self.ring = ring

    # -- constructors ------------------------------------------------------

    @classmethod
    def normalized(cls, valuation: int, coeffs, known_order: int, ring=QQ) -> "LaurentSeries":
        """Strip leading zeros; all-zero input yields the truncated zero."""
        i = 0
        n = len(coeffs)
        while i < n and coeffs[i] == 0:
            i += 1
        if i == n or valuation + i > known_order:
            return cls.truncated_zero(known_order, ring)
        return cls(valuation + i, coeffs[i:], known_order, ring)

    @classmethod
    def truncated_zero(cls, known_order: int, ring=QQ) -> "LaurentSeries":
        return cls(None, (), known_order, ring)

    @classmethod
    def from_terms(cls, terms: Mapping[int, Number], known_order: int, ring=QQ) -> "LaurentSeries":
        """Build from ``{exponent: coefficient}``; terms above ``known_order`` are dropped."""
        terms = {e: ring.coerce(c) for e, c in terms.items() if e <= known_order}
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return cls.truncated_zero(known_order, ring)
        v = min(terms)
        coeffs = [ring.zero] * (known_order - v + 1)
        for e, c in terms.items():
            coeffs[e - v] = c
        return cls(v, coeffs, known_order, ring)

    @classmethod
    def constant(cls, c: Number, known_order: int, ring=QQ) -> "LaurentSeries":
        return cls.from_terms({0: c}, known_order, ring)

    @classmethod
    def monomial(cls, c: Number, exponent: int, known_order: int, ring=QQ) -> "LaurentSeries":
        return cls.from_terms({exponent: c}, known_order, ring)

    # -- inspection --------------------------------------------------------

    @property
    def is_truncated_zero(self) -> bool:
        return self._v is None

    @property
    def valuation(self) -> int:
        if self._v is None:
            raise UndefinedValuation(
                f"series is zero up to O(eps^{self.known_order + 1}); valuation undefined"
            )
        return self._v

    @property
    def leading(self):
        """``(valuation, leading coefficient)``; the eps -> 0 leading term."""
        return self.valuation, self.coeffs[0]

    def coefficient(self, exponent: int):
        if exponent > self.known_order:
            raise ValueError(f"eps^{exponent} is beyond the known order {self.known_order}")
        if self._v is None or exponent < self._v:
            return self.ring.zero
        return self.coeffs[exponent - self._v]

    def terms(self) -> dict:
        """Nonzero retained terms as ``{exponent: coefficient}``."""
        if self._v is None:
            return {}
        return {self._v + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def truncate(self, known_order: int) -> "LaurentSeries":
        if known_order >= self.known_order:
            return self
        if self._v is None or self._v > known_order:
            return LaurentSeries.truncated_zero(known_order, self.ring)
        return LaurentSeries(self._v, self.coeffs[: known_order - self._v + 1], known_order, self.ring)

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of all terms up to the common known order."""
        k = min(self.known_order, other.known_order)
        return self.truncate(k) == other.truncate(k)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.known_order, self.ring)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        if self._v is None:
            return self
        r = self.ring
        return LaurentSeries(self._v, [r.neg(c) for c in self.coeffs], self.known_order, r)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(other, self.known_order, self.ring)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentSeries":
        r = self.ring
        c = r.coerce(c)
        if c == 0:
            return LaurentSeries.truncated_zero(self.known_order, r)
        if self._v is None:
            return self
        return LaurentSeries(self._v, [r.mul(c, x) for x in self.coeffs], self.known_order, r)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(self.ring.inv(self.ring.coerce(other)))
        return mul(self, inv(other))

    def __rtruediv__(self, other):
        return inv(self).scale(other)

    def inverse(self) -> "LaurentSeries":
        return inv(self)

    # -- protocol ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self._v == other._v
            and self.known_order == other.known_order
            and self.coeffs == other.coeffs
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash((self._v, self.known_order, self.coeffs))

    def __repr__(self):
        if self._v is None:
            return f"LaurentSeries(0 + O(eps^{self.known_order + 1}))"
        parts = []
        for e, c in self.terms().items():
            parts.append(f"{c}" if e == 0 else f"{c}*eps^{e}")
        return f"LaurentSeries({' + '.join(parts)} + O(eps^{self.known_order + 1}))"


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Coefficient-wise sum, certified to ``min`` of the known orders."""
    ring = a.ring
    K = min(a.known_order, b.known_order)
    va, vb = a._v, b._v
    if va is None or vb is None:
        if va is None and vb is None:
            return LaurentSeries.truncated_zero(K, ring)
        return (b if va is None else a).truncate(K)
    v = min(va, vb)
    if v > K:
        return LaurentSeries.truncated_zero(K, ring)
    n = K - v + 1
    out = [ring.zero] * n
    # an operand whose valuation exceeds K contributes nothing
    ca = a.coeffs[: max(0, K - va + 1)]
    cb = b.coeffs[: max(0, K - vb + 1)]
    out[va - v : va - v + len(ca)] = ca
    off = vb - v
    radd = ring.add
    for i, x in enumerate(cb):
        out[off + i] = radd(out[off + i], x)
    return LaurentSeries.normalized(v, out, K, ring)


def mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Truncated Cauchy product.

    ``known_order = min(a.K + b.v, b.K + a.v)``; a truncated-zero factor
    contributes its known order in place of the missing valuation.
    """
    ring = a.ring
    va, vb = a._v, b._v
    if va is None and vb is None:
        return LaurentSeries.truncated_zero(a.known_order + b.known_order + 1, ring)
    if va is None:
        return LaurentSeries.truncated_zero(a.known_order + vb, ring)
    if vb is None:
        return LaurentSeries.truncated_zero(b.known_order + va, ring)
    K = min(a.known_order + vb, b.known_order + va)
    v = va + vb
    out = ring.mul_trunc(a.coeffs, b.coeffs, K - v + 1)
    # product of nonzero leading terms is nonzero in a field
    return LaurentSeries(v, out, K, ring)


def inv(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse; ``known_order`` becomes ``a.K - 2 a.v``."""
    if a._v is None:
        raise DivisionBySeriesZero(
            f"cannot invert a series that is zero up to O(eps^{a.known_order + 1})"
        )
    v = a._v
    K = a.known_order - 2 * v
    return LaurentSeries(-v, a.ring.inv_trunc(a.coeffs, K + v + 1), K, a.ring)


def valuation(a: LaurentSeries) -> int:
    return a.valuation


def series_to_json(a: LaurentSeries) -> dict:
    """``{"terms": [[exp, num, den], ...], "known_order": K, "field": name}``."""
    ring = a.ring
    terms = [[e, *ring.to_pair(c)] for e, c in sorted(a.terms().items())]
    return {"terms": terms, "known_order": a.known_order, "field": ring.name}


def series_from_json(obj: Mapping, ring=None) -> LaurentSeries:
    if ring is None:
        ring = ring_from_name(obj.get("field", "QQ"))
    terms = {}
    for t in obj["terms"]:
        e, num, den = t
        terms[int(e)] = ring.coerce(Fraction(int(num), int(den)))
    return LaurentSeries.from_terms(terms, int(obj["known_order"]), ring)
