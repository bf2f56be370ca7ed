"""Truncated Wirtinger jets of scalar fields on C^n.

A jet stores the value of a function together with all of its partial
derivatives up to order three, taken with respect to the 2n independent
variables ``(z_1, ..., z_n, zbar_1, ..., zbar_n)``.  Index ``j < n`` refers to
``z_j`` and index ``n + j`` to ``zbar_j``.  Arithmetic on jets is exact
forward-mode differentiation (Leibniz and Faa di Bruno rules), so composite
quantities such as ``log h`` or ``-log|rho|`` inherit exact third derivatives.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 3


def _sym3(a, b):
    """Symmetrize ``a_ij b_k`` over the three index slots."""
    return (np.einsum("ij,k->ijk", a, b)
            + np.einsum("ik,j->ijk", a, b)
            + np.einsum("jk,i->ijk", a, b))


class DerivativeJet:
    """Value and Wirtinger derivatives (orders 1-3) of a scalar at a point.

    Parameters
    ----------
    value : complex
    c1 : ndarray, shape (2n,)
        First derivatives.
    c2 : ndarray, shape (2n, 2n)
        Second derivatives (symmetric).
    c3 : ndarray, shape (2n, 2n, 2n)
        Third derivatives (fully symmetric).
    """

    __slots__ = ("value", "c1", "c2", "c3", "n")

    def __init__(self, value, c1, c2, c3):
        self.value = complex(value)
        self.c1 = np.asarray(c1, dtype=complex)
        self.c2 = np.asarray(c2, dtype=complex)
        self.c3 = np.asarray(c3, dtype=complex)
        self.n = self.c1.shape[0] // 2

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, value, n):
        m = 2 * n
        return cls(value, np.zeros(m), np.zeros((m, m)), np.zeros((m, m, m)))

    @classmethod
    def coordinate(cls, z, j, conjugate=False):
        """Jet of ``z_j`` (or ``zbar_j``) at the point ``z``."""
        z = np.asarray(z, dtype=complex)
        n = z.shape[0]
        jet = cls.constant(np.conj(z[j]) if conjugate else z[j], n)
        jet.c1[n + j if conjugate else j] = 1.0
        return jet

    # -- Wirtinger views ----------------------------------------------------
    @property
    def d1(self):
        """Holomorphic first derivatives ``f_j``."""
        return self.c1[:self.n]

    @property
    def d1bar(self):
        """Antiholomorphic first derivatives ``f_{jbar}``."""
        return self.c1[self.n:]

    @property
    def d2_mixed(self):
        """Levi matrix ``f_{j kbar}`` (row j, column k)."""
        return self.c2[:self.n, self.n:]

    @property
    def d2_pure(self):
        """Pure second derivatives ``f_{jk}``."""
        return self.c2[:self.n, :self.n]

    @property
    def d3(self):
        """Third derivatives ``f_{a b jbar}`` indexed ``[a, b, j]``."""
        return self.c3[:self.n, :self.n, self.n:]

    @property
    def real_value(self):
        return self.value.real

    # -- algebra --------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DerivativeJet):
            return DerivativeJet(self.value + other, self.c1, self.c2, self.c3)
        return DerivativeJet(self.value + other.value, self.c1 + other.c1,
                             self.c2 + other.c2, self.c3 + other.c3)

    __radd__ = __add__

    def __neg__(self):
        return DerivativeJet(-self.value, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DerivativeJet):
            return DerivativeJet(self.value * other, self.c1 * other,
                                 self.c2 * other, self.c3 * other)
        f, g = self, other
        c1 = f.c1 * g.value + f.value * g.c1
        c2 = (f.c2 * g.value + np.outer(f.c1, g.c1) + np.outer(g.c1, f.c1)
              + f.value * g.c2)
        c3 = (f.c3 * g.value + _sym3(f.c2, g.c1) + _sym3(g.c2, f.c1)
              + f.value * g.c3)
        return DerivativeJet(f.value * g.value, c1, c2, c3)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, DerivativeJet):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, DerivativeJet):
            return (self.log() * p).exp()
        p = complex(p)
        if p.imag == 0 and float(p.real).is_integer() and p.real >= 0:
            k = int(p.real)
            out = DerivativeJet.constant(1.0, self.n)
            for _ in range(k):
                out = out * self
            return out
        x = self.value
        return self.compose(x ** p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2),
                            p * (p - 1) * (p - 2) * x ** (p - 3))

    def __rpow__(self, base):
        return (self * np.log(complex(base))).exp()

    def compose(self, d0, d1, d2, d3):
        """Jet of ``phi(f)`` given ``phi`` and its first three derivatives at f."""
        f = self
        c1 = d1 * f.c1
        c2 = d2 * np.outer(f.c1, f.c1) + d1 * f.c2
        c3 = (d3 * np.einsum("i,j,k->ijk", f.c1, f.c1, f.c1)
              + d2 * _sym3(f.c2, f.c1) + d1 * f.c3)
        return DerivativeJet(d0, c1, c2, c3)

    def reciprocal(self):
        x = self.value
        if x == 0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        return self.compose(1 / x, -1 / x**2, 2 / x**3, -6 / x**4)

    def exp(self):
        e = np.exp(self.value)
        return self.compose(e, e, e, e)

    def log(self):
        x = self.value
        if x == 0:
            raise ValueError("log of a jet with zero value")
        return self.compose(np.log(x), 1 / x, -1 / x**2, 2 / x**3)

    def sqrt(self):
        return self ** 0.5

    def conj(self):
        """Jet of the complex conjugate function (swaps z and zbar slots)."""
        n = self.n
        perm = np.r_[n:2 * n, 0:n]
        return DerivativeJet(np.conj(self.value), np.conj(self.c1[perm]),
                             np.conj(self.c2[np.ix_(perm, perm)]),
                             np.conj(self.c3[np.ix_(perm, perm, perm)]))

    def real(self):
        return (self + self.conj()) * 0.5

    def imag(self):
        return (self - self.conj()) * (-0.5j)

    def truncated(self, order):
        """Copy with derivatives above ``order`` zeroed."""
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"derivative order {order} not supported (max {MAX_ORDER})")
        c1, c2, c3 = self.c1.copy(), self.c2.copy(), self.c3.copy()
        if order < 3:
            c3[...] = 0
        if order < 2:
            c2[...] = 0
        if order < 1:
            c1[...] = 0
        return DerivativeJet(self.value, c1, c2, c3)

    def __repr__(self):
        return f"DerivativeJet(n={self.n}, value={self.value!r})"


def coordinate_jets(z):
    """Return ``(zs, zbars)``: jets of every coordinate and its conjugate."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    zs = [DerivativeJet.coordinate(z, j) for j in range(n)]
    zbars = [DerivativeJet.coordinate(z, j, conjugate=True) for j in range(n)]
    return zs, zbars
