# cython: language_level=3
# cython: boundscheck=False
# cython: cdivision=False
"""Compiled jet scalars: drop-in twin of moufang._jetcore_py.

Formulas mirror the pure module operation for operation (same grouping of
additions), so results are bit-identical as long as the extension is built
with fused multiply-adds disabled (-ffp-contract=off, see setup.py).
"""

from libc.math cimport exp as c_exp, sqrt as c_sqrt

from moufang.errors import JetDomainError


cdef inline Dual new_dual(double re, double du):
    cdef Dual d = Dual.__new__(Dual)
    d.re = re
    d.du = du
    return d


cdef inline PairJet new_pair(double re, double e1, double e2, double e12):
    cdef PairJet p = PairJet.__new__(PairJet)
    p.re = re
    p.e1 = e1
    p.e2 = e2
    p.e12 = e12
    return p


cdef class Dual:
    """First-order jet along a single direction: value ``re`` and derivative ``du``."""

    cdef readonly double re
    cdef readonly double du

    def __init__(self, double re, double du):
        self.re = re
        self.du = du

    def __repr__(self):
        return f"Dual({self.re!r}, {self.du!r})"

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return new_dual(self.re + <double> other, self.du)
        if isinstance(other, Dual):
            return new_dual(self.re + (<Dual> other).re, self.du + (<Dual> other).du)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, (int, float)):
            return new_dual(<double> other + self.re, self.du)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return new_dual(self.re - <double> other, self.du)
        if isinstance(other, Dual):
            return new_dual(self.re - (<Dual> other).re, self.du - (<Dual> other).du)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return new_dual(<double> other - self.re, -self.du)
        return NotImplemented

    def __mul__(self, other):
        cdef Dual o
        if isinstance(other, (int, float)):
            return new_dual(self.re * <double> other, self.du * <double> other)
        if isinstance(other, Dual):
            o = <Dual> other
            return new_dual(self.re * o.re, self.re * o.du + self.du * o.re)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return new_dual(<double> other * self.re, <double> other * self.du)
        return NotImplemented

    def __truediv__(self, other):
        cdef Dual o
        cdef double inv, rdu
        if isinstance(other, (int, float)):
            return new_dual(self.re / <double> other, self.du / <double> other)
        if isinstance(other, Dual):
            o = <Dual> other
            inv = 1.0 / o.re
            rdu = -(o.du * inv) * inv
            return new_dual(self.re * inv, self.re * rdu + self.du * inv)
        return NotImplemented

    def __rtruediv__(self, other):
        cdef double inv, rdu
        if isinstance(other, (int, float)):
            inv = 1.0 / self.re
            rdu = -(self.du * inv) * inv
            return new_dual(<double> other * inv, <double> other * rdu)
        return NotImplemented

    def __neg__(self):
        return new_dual(-self.re, -self.du)

    def __pos__(self):
        return self

    def sqrt(self):
        if self.re <= 0.0:
            raise JetDomainError(f"sqrt of nonpositive value {self.re!r}")
        cdef double s = c_sqrt(self.re)
        return new_dual(s, self.du * (0.5 / s))

    def exp(self):
        cdef double e = c_exp(self.re)
        return new_dual(e, self.du * e)


cdef class PairJet:
    """Second-order jet for one ordered pair of directions.

    Carries value ``re``, the two directional derivatives ``e1``/``e2`` and
    the mixed second derivative ``e12``.
    """

    cdef readonly double re
    cdef readonly double e1
    cdef readonly double e2
    cdef readonly double e12

    def __init__(self, double re, double e1, double e2, double e12):
        self.re = re
        self.e1 = e1
        self.e2 = e2
        self.e12 = e12

    def __repr__(self):
        return f"PairJet({self.re!r}, {self.e1!r}, {self.e2!r}, {self.e12!r})"

    def __add__(self, other):
        cdef PairJet o
        if isinstance(other, (int, float)):
            return new_pair(self.re + <double> other, self.e1, self.e2, self.e12)
        if isinstance(other, PairJet):
            o = <PairJet> other
            return new_pair(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, (int, float)):
            return new_pair(<double> other + self.re, self.e1, self.e2, self.e12)
        return NotImplemented

    def __sub__(self, other):
        cdef PairJet o
        if isinstance(other, (int, float)):
            return new_pair(self.re - <double> other, self.e1, self.e2, self.e12)
        if isinstance(other, PairJet):
            o = <PairJet> other
            return new_pair(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return new_pair(<double> other - self.re, -self.e1, -self.e2, -self.e12)
        return NotImplemented

    def __mul__(self, other):
        cdef PairJet o
        cdef double s
        if isinstance(other, (int, float)):
            s = <double> other
            return new_pair(self.re * s, self.e1 * s, self.e2 * s, self.e12 * s)
        if isinstance(other, PairJet):
            o = <PairJet> other
            return new_pair(
                self.re * o.re,
                self.re * o.e1 + self.e1 * o.re,
                self.re * o.e2 + self.e2 * o.re,
                (self.re * o.e12 + self.e12 * o.re) + (self.e1 * o.e2 + self.e2 * o.e1),
            )
        return NotImplemented

    def __rmul__(self, other):
        cdef double s
        if isinstance(other, (int, float)):
            s = <double> other
            return new_pair(s * self.re, s * self.e1, s * self.e2, s * self.e12)
        return NotImplemented

    cdef PairJet _recip(self):
        cdef double inv = 1.0 / self.re
        cdef double d1 = -(inv * inv)
        cdef double d2 = 2.0 * ((inv * inv) * inv)
        return new_pair(
            inv,
            self.e1 * d1,
            self.e2 * d1,
            self.e12 * d1 + (self.e1 * self.e2) * d2,
        )

    def __truediv__(self, other):
        cdef double s
        if isinstance(other, (int, float)):
            s = <double> other
            return new_pair(self.re / s, self.e1 / s, self.e2 / s, self.e12 / s)
        if isinstance(other, PairJet):
            return self * (<PairJet> other)._recip()
        return NotImplemented

    def __rtruediv__(self, other):
        cdef PairJet r
        cdef double s
        if isinstance(other, (int, float)):
            s = <double> other
            r = self._recip()
            return new_pair(s * r.re, s * r.e1, s * r.e2, s * r.e12)
        return NotImplemented

    def __neg__(self):
        return new_pair(-self.re, -self.e1, -self.e2, -self.e12)

    def __pos__(self):
        return self

    def sqrt(self):
        if self.re <= 0.0:
            raise JetDomainError(f"sqrt of nonpositive value {self.re!r}")
        cdef double s = c_sqrt(self.re)
        cdef double f1 = 0.5 / s
        cdef double f2 = -0.25 / (self.re * s)
        return new_pair(s, self.e1 * f1, self.e2 * f1, self.e12 * f1 + (self.e1 * self.e2) * f2)

    def exp(self):
        cdef double e = c_exp(self.re)
        return new_pair(e, self.e1 * e, self.e2 * e, self.e12 * e + (self.e1 * self.e2) * e)
