"""First-order forward-mode automatic differentiation over complex scalars.

A :class:`Jet` carries a complex value together with a row of partial
derivatives with respect to a fixed list of seed variables.  Everything in
this package that needs gradients (Poisson brackets, Hamiltonian vector
fields, implicit differentiation of separation roots) is written generically
in the scalar type, so running it on jets produces exact derivatives in a
single pass.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "seed", "value", "gradient", "jet_sqrt", "jet_log"]


class Jet:
    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = complex(val)
        self.grad = np.asarray(grad, dtype=complex)

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad)
        return Jet(self.val + other, self.grad)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val - other.val, self.grad - other.grad)
        return Jet(self.val - other, self.grad)

    def __rsub__(self, other):
        return Jet(other - self.val, -self.grad)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val * other.val,
                       self.val * other.grad + other.val * self.grad)
        return Jet(self.val * other, self.grad * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            iv = 1.0 / other.val
            return Jet(self.val * iv,
                       iv * self.grad - (self.val * iv * iv) * other.grad)
        return Jet(self.val / other, self.grad / other)

    def __rtruediv__(self, other):
        iv = 1.0 / self.val
        return Jet(other * iv, (-other * iv * iv) * self.grad)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("jets support integer powers only")
        if n == 0:
            return Jet(1.0, np.zeros_like(self.grad))
        if n < 0:
            return (1.0 / self) ** (-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __repr__(self):
        return f"Jet({self.val!r}, grad~{np.abs(self.grad).max():.3g})"

    # equality on values only would be a trap; jets are not hashable/comparable


def seed(values) -> list[Jet]:
    """Lift a list of complex numbers to jets with unit partials (identity seeding)."""
    vals = [complex(v) for v in values]
    m = len(vals)
    out = []
    for i, v in enumerate(vals):
        g = np.zeros(m, dtype=complex)
        g[i] = 1.0
        out.append(Jet(v, g))
    return out


def value(x) -> complex:
    return x.val if isinstance(x, Jet) else complex(x)


def gradient(x, m: int) -> np.ndarray:
    if isinstance(x, Jet):
        return x.grad
    return np.zeros(m, dtype=complex)


def jet_sqrt(x, branch_hint=None):
    """Principal square root; with ``branch_hint`` pick the root closest to it."""
    if isinstance(x, Jet):
        r = np.sqrt(x.val)
        if branch_hint is not None and abs(r - branch_hint) > abs(-r - branch_hint):
            r = -r
        return Jet(r, x.grad / (2.0 * r))
    r = np.sqrt(complex(x))
    if branch_hint is not None and abs(r - branch_hint) > abs(-r - branch_hint):
        r = -r
    return r


def jet_log(x):
    """Principal logarithm."""
    if isinstance(x, Jet):
        return Jet(np.log(x.val), x.grad / x.val)
    return np.log(complex(x))
