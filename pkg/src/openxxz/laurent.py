"""Laurent polynomials in z, 2x2 Laurent matrices, and polynomials in
lambda = z^2 + z^{-2}.

Coefficients are complex numbers or :class:`~openxxz.jets.Jet` values; all
arithmetic is written generically so gradients flow through matrix products,
exact divisions and the lambda-basis conversion.  Degree windows are tiny at
chain sizes N <= 3 (|degree| <= 4N+2), so storage is a dense list over the
tight window.
"""

from __future__ import annotations

import numpy as np

from .errors import DivisibilityError, DomainError, SymmetryError
from .jets import value

__all__ = ["LaurentPoly", "LaurentMatrix", "LambdaPoly",
           "sigma_plus_decompose", "divide_exact", "to_lambda",
           "SIGMA2", "SIGMA3"]


def _is_exact_zero(c) -> bool:
    if isinstance(c, complex) or isinstance(c, float) or isinstance(c, int):
        return c == 0
    return False  # never trim jets


class LaurentPoly:
    """f(z) = sum_{n=lo}^{hi} c[n-lo] z^n over a tight degree window."""

    __slots__ = ("lo", "c")

    def __init__(self, lo: int, coeffs):
        self.lo = int(lo)
        self.c = list(coeffs)
        self._trim()

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zero():
        return LaurentPoly(0, [])

    @staticmethod
    def const(v):
        return LaurentPoly(0, [v])

    @staticmethod
    def monomial(n: int, v=1.0):
        return LaurentPoly(n, [v])

    @staticmethod
    def from_dict(d: dict):
        if not d:
            return LaurentPoly.zero()
        lo, hi = min(d), max(d)
        return LaurentPoly(lo, [d.get(n, 0.0) for n in range(lo, hi + 1)])

    def to_dict(self) -> dict:
        return {self.lo + i: ci for i, ci in enumerate(self.c)
                if not _is_exact_zero(ci)}

    # -- bookkeeping ------------------------------------------------------
    def _trim(self):
        while self.c and _is_exact_zero(self.c[-1]):
            self.c.pop()
        k = 0
        while k < len(self.c) and _is_exact_zero(self.c[k]):
            k += 1
        if k:
            self.c = self.c[k:]
            self.lo += k
        if not self.c:
            self.lo = 0

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1 if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, n: int):
        i = n - self.lo
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0.0

    def norm(self) -> float:
        return max((abs(value(ci)) for ci in self.c), default=0.0)

    def prune(self, tol: float = 1e-14) -> "LaurentPoly":
        """Drop coefficients below tol * max|coeff| (by value; keeps jets' grads)."""
        s = self.norm()
        if s == 0.0:
            return LaurentPoly.zero()
        d = {n: c for n, c in self.to_dict().items() if abs(value(c)) > tol * s}
        return LaurentPoly.from_dict(d)

    def map_values(self):
        """Copy with jet coefficients collapsed to their values."""
        return LaurentPoly(self.lo, [value(ci) for ci in self.c])

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        if self.is_zero():
            return LaurentPoly(other.lo, other.c)
        if other.is_zero():
            return LaurentPoly(self.lo, self.c)
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0.0] * (hi - lo + 1)
        for i, ci in enumerate(self.c):
            out[self.lo + i - lo] = out[self.lo + i - lo] + ci
        for i, ci in enumerate(other.c):
            out[other.lo + i - lo] = out[other.lo + i - lo] + ci
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lo, [-ci for ci in self.c])

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(self.lo, [ci * other for ci in self.c])
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero()
        lo = self.lo + other.lo
        out = [0.0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if _is_exact_zero(a):
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return LaurentPoly(lo, out)

    __rmul__ = __mul__

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by z^n."""
        return LaurentPoly(self.lo + n, self.c)

    # -- evaluation & substitution -----------------------------------------
    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Horner evaluation over the positive and negative degree parts."""
        if self.is_zero():
            return 0.0 * z
        if abs(value(z)) == 0.0:
            raise DomainError("Laurent polynomial evaluated at z = 0")
        acc = 0.0
        if self.hi >= 0:
            pos = 0.0
            for n in range(self.hi, max(self.lo, 0) - 1, -1):
                pos = pos * z + self.coeff(n)
            if self.lo > 0:
                pos = pos * z ** self.lo
            acc = acc + pos
        if self.lo < 0:
            zi = 1.0 / z
            hi_neg = min(self.hi, -1)
            neg = 0.0
            for n in range(self.lo, hi_neg + 1):
                neg = neg * zi + self.coeff(n)
            acc = acc + neg * zi ** (-hi_neg)
        return acc

    def substitute(self, mode: str, c=None) -> "LaurentPoly":
        """Return p(cz) (mode 'scale'), p(1/z) ('invert') or p(-z) ('negate')."""
        if mode == "scale":
            if c is None or value(c) == 0:
                raise DomainError("scale substitution needs nonzero c")
            return LaurentPoly.from_dict(
                {n: ci * c ** n for n, ci in self.to_dict().items()})
        if mode == "invert":
            return LaurentPoly.from_dict(
                {-n: ci for n, ci in self.to_dict().items()})
        if mode == "negate":
            return LaurentPoly.from_dict(
                {n: ci * (-1) ** (n & 1) for n, ci in self.to_dict().items()})
        raise DomainError(f"unknown substitution mode {mode!r}")

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = ", ".join(f"z^{n}:{value(c):.4g}" for n, c in
                          sorted(self.to_dict().items()))
        return f"LaurentPoly({terms})"


def sigma_plus_decompose(f: LaurentPoly):
    """Split f = f_sigma + f_plus with f_sigma(z) = f_sigma(1/z), f_plus in zC[z].

    f_sigma = a_0 + sum_{n>=1} a_{-n} (z^n + z^{-n});
    f_plus  = sum_{n>=1} (a_n - a_{-n}) z^n.
    """
    d = f.to_dict()
    fs = {}
    fp = {}
    if 0 in d:
        fs[0] = d[0]
    for n in sorted({abs(n) for n in d if n != 0}):
        am = d.get(-n, 0.0)
        ap = d.get(n, 0.0)
        if not _is_exact_zero(am):
            fs[n] = am
            fs[-n] = am
        diff = ap - am
        if not _is_exact_zero(diff):
            fp[n] = diff
    return LaurentPoly.from_dict(fs), LaurentPoly.from_dict(fp)


def divide_exact(num: LaurentPoly, den: LaurentPoly, tol: float = 1e-10) -> LaurentPoly:
    """Exact Laurent division: q with num = q * den, remainder below tol * |num|."""
    if den.is_zero():
        raise DomainError("division by zero Laurent polynomial")
    if num.is_zero():
        return LaurentPoly.zero()
    r = num.to_dict()
    q = {}
    dhi = den.hi
    lead = den.c[-1]
    for n in range(num.hi - dhi, num.lo - den.lo - 1, -1):
        c = r.get(n + dhi, 0.0)
        if _is_exact_zero(c):
            continue
        qc = c / lead
        q[n] = qc
        for m, dm in den.to_dict().items():
            r[n + m] = r.get(n + m, 0.0) - qc * dm
    rem = max((abs(value(c)) for c in r.values()), default=0.0)
    scale = num.norm()
    if rem > tol * max(scale, 1e-300):
        raise DivisibilityError(
            f"Laurent division remainder {rem:.3e} exceeds {tol:.1e} * {scale:.3e}")
    return LaurentPoly.from_dict(q)


class LambdaPoly:
    """Polynomial in lambda = z^2 + z^{-2}, ascending coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)
        while self.c and _is_exact_zero(self.c[-1]):
            self.c.pop()

    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, n: int):
        return self.c[n] if 0 <= n < len(self.c) else 0.0

    def norm(self) -> float:
        return max((abs(value(ci)) for ci in self.c), default=0.0)

    def __call__(self, lam):
        acc = 0.0
        for ci in reversed(self.c):
            acc = acc * lam + ci
        return acc

    def deriv(self) -> "LambdaPoly":
        return LambdaPoly([i * self.c[i] for i in range(1, len(self.c))])

    def __add__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly([other])
        n = max(len(self.c), len(other.c))
        return LambdaPoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return LambdaPoly([-ci for ci in self.c])

    def __sub__(self, other):
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LambdaPoly):
            return LambdaPoly([ci * other for ci in self.c])
        if self.is_zero() or other.is_zero():
            return LambdaPoly([])
        out = [0.0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return LambdaPoly(out)

    __rmul__ = __mul__

    def divide_linear(self, root, tol: float = 1e-9) -> "LambdaPoly":
        """Exact division by (lambda - root); synthetic division."""
        if self.is_zero():
            return LambdaPoly([])
        out = [0.0] * (len(self.c) - 1)
        acc = self.c[-1]
        for i in range(len(self.c) - 2, -1, -1):
            out[i] = acc
            acc = self.c[i] + acc * root
        if abs(value(acc)) > tol * max(self.norm(), 1e-300):
            raise DivisibilityError(
                f"(lambda - {value(root):.4g}) does not divide: remainder {abs(value(acc)):.3e}")
        return LambdaPoly(out)

    def roots(self) -> np.ndarray:
        """Companion-matrix roots (values only), polished by two Newton steps."""
        cs = np.array([value(ci) for ci in self.c], dtype=complex)
        if len(cs) <= 1:
            return np.array([], dtype=complex)
        rts = np.roots(cs[::-1])
        dp = self.deriv()
        for _ in range(2):
            pv = np.array([self.map_values()(r) for r in rts])
            dv = np.array([dp.map_values()(r) for r in rts])
            step = np.where(np.abs(dv) > 1e-300, pv / dv, 0.0)
            rts = rts - step
        return rts

    def map_values(self) -> "LambdaPoly":
        return LambdaPoly([value(ci) for ci in self.c])

    def subs_z(self) -> LaurentPoly:
        """Return the Laurent polynomial q(z^2 + z^{-2})."""
        lam = LaurentPoly.from_dict({2: 1.0, -2: 1.0})
        acc = LaurentPoly.zero()
        for ci in reversed(self.c):
            acc = acc * lam + LaurentPoly.const(ci)
        return acc

    def __repr__(self):
        return f"LambdaPoly({[value(ci) for ci in self.c]})"


def _chebyshev_like(m: int) -> LambdaPoly:
    """q_m with q_m(z^2+z^{-2}) = z^{2m} + z^{-2m}: q_0=2, q_1=lambda,
    q_{m+1} = lambda q_m - q_{m-1}."""
    if m == 0:
        return LambdaPoly([2.0])
    qm1 = LambdaPoly([2.0])
    qm = LambdaPoly([0.0, 1.0])
    for _ in range(m - 1):
        qm1, qm = qm, LambdaPoly([0.0, 1.0]) * qm - qm1
    return qm


def to_lambda(p: LaurentPoly, tol: float = 1e-10) -> LambdaPoly:
    """Convert an even, inversion-symmetric Laurent polynomial to a polynomial
    in lambda = z^2 + z^{-2}."""
    d = p.to_dict()
    scale = max(p.norm(), 1e-300)
    for n, c in d.items():
        if n % 2 != 0 and abs(value(c)) > tol * scale:
            raise SymmetryError(f"odd-degree coefficient z^{n} breaks evenness")
        if abs(value(c) - value(d.get(-n, 0.0))) > tol * scale:
            raise SymmetryError(f"inversion asymmetry at degree {n}")
    out = LambdaPoly([])
    if 0 in d:
        out = out + LambdaPoly([d[0]])
    for m in sorted({n // 2 for n in d if n > 0}):
        a = (d.get(2 * m, 0.0) + d.get(-2 * m, 0.0)) * 0.5
        out = out + _chebyshev_like(m) * a
    return out


class LaurentMatrix:
    """2x2 matrix of Laurent polynomials."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @staticmethod
    def identity():
        one = LaurentPoly.const(1.0)
        zero = LaurentPoly.zero()
        return LaurentMatrix(one, zero, zero, one)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d)

    def __add__(self, other):
        return LaurentMatrix(self.a + other.a, self.b + other.b,
                             self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return LaurentMatrix(self.a - other.a, self.b - other.b,
                             self.c - other.c, self.d - other.d)

    def scale(self, s) -> "LaurentMatrix":
        return LaurentMatrix(self.a * s, self.b * s, self.c * s, self.d * s)

    def det(self) -> LaurentPoly:
        return self.a * self.d - self.b * self.c

    def trace(self) -> LaurentPoly:
        return self.a + self.d

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.a, self.c, self.b, self.d)

    def substitute(self, mode: str, c=None) -> "LaurentMatrix":
        return LaurentMatrix(*(p.substitute(mode, c)
                               for p in (self.a, self.b, self.c, self.d)))

    def eval(self, z) -> np.ndarray:
        return np.array([[self.a(z), self.b(z)], [self.c(z), self.d(z)]])

    def map_values(self) -> "LaurentMatrix":
        return LaurentMatrix(*(p.map_values() for p in (self.a, self.b, self.c, self.d)))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return (f"LaurentMatrix(a={self.a!r}, b={self.b!r}, "
                f"c={self.c!r}, d={self.d!r})")


SIGMA2 = LaurentMatrix(LaurentPoly.zero(), LaurentPoly.const(-1.0),
                       LaurentPoly.const(1.0), LaurentPoly.zero())
SIGMA3 = LaurentMatrix(LaurentPoly.const(1.0), LaurentPoly.zero(),
                       LaurentPoly.zero(), LaurentPoly.const(-1.0))
