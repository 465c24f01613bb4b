"""Pure-Python jet scalars: first-order duals and one-direction-pair second-order jets.

This module is the reference implementation and the fallback used when the
compiled twin (moufang._jetcore) is unavailable.  The compiled module mirrors
these formulas operation for operation; keep both in sync, including the
grouping of additions.  Two properties depend on that grouping:

  * backend parity: compiled and pure results are bit-identical;
  * mixed-partial symmetry: swapping the two seed directions of a PairJet
    permutes (e1, e2) and leaves e12 bit-identical, because every e12 formula
    is of the form (A + B) + (x*y + y*x) and IEEE addition/multiplication
    commute exactly.

``Dual`` fields are duck-typed, so Dual-of-Dual nesting works; ``PairJet`` is
the flattened equivalent of one such nesting and is what the rest of the
package uses for second derivatives.
"""

import math

from moufang.errors import JetDomainError

_REAL = (int, float)


def _sqrt(x):
    if isinstance(x, _REAL):
        if x <= 0.0:
            raise JetDomainError(f"sqrt of nonpositive value {x!r}")
        return math.sqrt(x)
    return x.sqrt()


def _exp(x):
    if isinstance(x, _REAL):
        return math.exp(x)
    return x.exp()


class Dual:
    """First-order jet along a single direction: value ``re`` and derivative ``du``."""

    __slots__ = ("re", "du")

    def __init__(self, re, du):
        self.re = re
        self.du = du

    def __repr__(self):
        return f"Dual({self.re!r}, {self.du!r})"

    def __add__(self, other):
        if isinstance(other, _REAL):
            return Dual(self.re + other, self.du)
        if isinstance(other, Dual):
            return Dual(self.re + other.re, self.du + other.du)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, _REAL):
            return Dual(other + self.re, self.du)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, _REAL):
            return Dual(self.re - other, self.du)
        if isinstance(other, Dual):
            return Dual(self.re - other.re, self.du - other.du)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _REAL):
            return Dual(other - self.re, -self.du)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, _REAL):
            return Dual(self.re * other, self.du * other)
        if isinstance(other, Dual):
            return Dual(self.re * other.re, self.re * other.du + self.du * other.re)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _REAL):
            return Dual(other * self.re, other * self.du)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _REAL):
            return Dual(self.re / other, self.du / other)
        if isinstance(other, Dual):
            inv = 1.0 / other.re
            rdu = -(other.du * inv) * inv
            return Dual(self.re * inv, self.re * rdu + self.du * inv)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _REAL):
            inv = 1.0 / self.re
            rdu = -(self.du * inv) * inv
            return Dual(other * inv, other * rdu)
        return NotImplemented

    def __neg__(self):
        return Dual(-self.re, -self.du)

    def __pos__(self):
        return self

    def sqrt(self):
        s = _sqrt(self.re)
        return Dual(s, self.du * (0.5 / s))

    def exp(self):
        e = _exp(self.re)
        return Dual(e, self.du * e)


class PairJet:
    """Second-order jet for one ordered pair of directions.

    Carries value ``re``, the two directional derivatives ``e1``/``e2`` and
    the mixed second derivative ``e12``.  Algebraically this is a first-order
    dual whose coefficients are first-order duals, stored flat.
    """

    __slots__ = ("re", "e1", "e2", "e12")

    def __init__(self, re, e1, e2, e12):
        self.re = re
        self.e1 = e1
        self.e2 = e2
        self.e12 = e12

    def __repr__(self):
        return f"PairJet({self.re!r}, {self.e1!r}, {self.e2!r}, {self.e12!r})"

    def __add__(self, other):
        if isinstance(other, _REAL):
            return PairJet(self.re + other, self.e1, self.e2, self.e12)
        if isinstance(other, PairJet):
            return PairJet(
                self.re + other.re,
                self.e1 + other.e1,
                self.e2 + other.e2,
                self.e12 + other.e12,
            )
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, _REAL):
            return PairJet(other + self.re, self.e1, self.e2, self.e12)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, _REAL):
            return PairJet(self.re - other, self.e1, self.e2, self.e12)
        if isinstance(other, PairJet):
            return PairJet(
                self.re - other.re,
                self.e1 - other.e1,
                self.e2 - other.e2,
                self.e12 - other.e12,
            )
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _REAL):
            return PairJet(other - self.re, -self.e1, -self.e2, -self.e12)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, _REAL):
            return PairJet(self.re * other, self.e1 * other, self.e2 * other, self.e12 * other)
        if isinstance(other, PairJet):
            return PairJet(
                self.re * other.re,
                self.re * other.e1 + self.e1 * other.re,
                self.re * other.e2 + self.e2 * other.re,
                (self.re * other.e12 + self.e12 * other.re)
                + (self.e1 * other.e2 + self.e2 * other.e1),
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _REAL):
            return PairJet(other * self.re, other * self.e1, other * self.e2, other * self.e12)
        return NotImplemented

    def _recip(self):
        inv = 1.0 / self.re
        d1 = -(inv * inv)
        d2 = 2.0 * ((inv * inv) * inv)
        return PairJet(
            inv,
            self.e1 * d1,
            self.e2 * d1,
            self.e12 * d1 + (self.e1 * self.e2) * d2,
        )

    def __truediv__(self, other):
        if isinstance(other, _REAL):
            return PairJet(self.re / other, self.e1 / other, self.e2 / other, self.e12 / other)
        if isinstance(other, PairJet):
            return self * other._recip()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _REAL):
            r = self._recip()
            return PairJet(other * r.re, other * r.e1, other * r.e2, other * r.e12)
        return NotImplemented

    def __neg__(self):
        return PairJet(-self.re, -self.e1, -self.e2, -self.e12)

    def __pos__(self):
        return self

    def sqrt(self):
        if self.re <= 0.0:
            raise JetDomainError(f"sqrt of nonpositive value {self.re!r}")
        s = math.sqrt(self.re)
        f1 = 0.5 / s
        f2 = -0.25 / (self.re * s)
        return PairJet(s, self.e1 * f1, self.e2 * f1, self.e12 * f1 + (self.e1 * self.e2) * f2)

    def exp(self):
        e = math.exp(self.re)
        return PairJet(e, self.e1 * e, self.e2 * e, self.e12 * e + (self.e1 * self.e2) * e)
