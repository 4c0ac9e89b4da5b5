"""Phase space of the open chain: per-site variables (e, f, k), the Poisson
structure, and a generic bracket engine for derived observables.

The per-site brackets are

    {k, e} = k e,   {k, f} = -k f,   {e, f} = 2 (k^2 - k^{-2})

with Casimir omega = k^2 + k^{-2} + e f.  Observables are arbitrary
differentiable maps PhasePoint -> scalar written generically in the scalar
type; their gradients are obtained in one forward pass with jets and
contracted against the block-diagonal structure tensor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InvalidStateError
from .jets import Jet, gradient, seed, value

__all__ = ["SiteState", "PhasePoint", "ModelParams", "casimir",
           "structure_matrix", "poisson_bracket", "sample_leaf",
           "BracketFrame", "fd_gradient"]


@dataclass(frozen=True)
class SiteState:
    """One lattice site; k must be invertible."""
    e: object
    f: object
    k: object

    def __post_init__(self):
        if abs(value(self.k)) == 0.0:
            raise InvalidStateError("site has k = 0")

    def as_tuple(self):
        return (self.e, self.f, self.k)


@dataclass(frozen=True)
class PhasePoint:
    sites: tuple

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def flatten(self) -> list:
        out = []
        for s in self.sites:
            out.extend(s.as_tuple())
        return out

    @staticmethod
    def unflatten(vals: Sequence) -> "PhasePoint":
        if len(vals) % 3:
            raise DomainError("flat phase vector length must be a multiple of 3")
        return PhasePoint(tuple(SiteState(*vals[3 * j:3 * j + 3])
                                for j in range(len(vals) // 3)))

    def values(self) -> "PhasePoint":
        return PhasePoint.unflatten([value(v) for v in self.flatten()])


@dataclass(frozen=True)
class ModelParams:
    """Chain size, boundary parameter xi (xi_- is treated as an alias of xi),
    inhomogeneities a_j, and the ordering of the second monodromy factor."""
    N: int
    xi: complex = 1.0
    a: tuple = ()
    ordering_mode: str = "reversed"

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be a positive integer")
        a = tuple(complex(x) for x in (self.a if self.a else (1.0,) * self.N))
        if len(a) != self.N:
            raise DomainError(f"need {self.N} inhomogeneities, got {len(a)}")
        if any(x == 0 for x in a):
            raise DomainError("inhomogeneities must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "xi", complex(self.xi))
        if self.xi == 0:
            raise DomainError("xi must be nonzero")
        if self.ordering_mode not in ("as_printed", "reversed"):
            raise DomainError(f"unknown ordering_mode {self.ordering_mode!r}")
        if abs(self.xi - 1) < 1e-12 or abs(self.xi + 1) < 1e-12:
            warnings.warn("xi = +-1 is non-generic (K degenerates to (z-1/z)*sigma3)",
                          stacklevel=2)

    def warn_nongeneric_leaf(self, omegas):
        for j, om in enumerate(omegas):
            if abs(value(om) - (self.a[j] ** 2 + self.a[j] ** -2)) < 1e-10:
                warnings.warn(f"omega_{j + 1} = a^2 + a^-2 is non-generic",
                              stacklevel=2)


def casimir(site: SiteState):
    """omega = k^2 + k^{-2} + e f."""
    k = site.k
    return k * k + 1.0 / (k * k) + site.e * site.f


def structure_matrix(site: SiteState) -> np.ndarray:
    """3x3 antisymmetric block Pi in the (e, f, k) ordering."""
    e, f, k = (value(v) for v in site.as_tuple())
    if k == 0:
        raise InvalidStateError("site has k = 0")
    ef = 2.0 * (k ** 2 - k ** -2)
    P = np.array([[0.0, ef, -k * e],
                  [-ef, 0.0, k * f],
                  [k * e, -k * f, 0.0]], dtype=complex)
    return P


class BracketFrame:
    """Jet seeding of a phase point plus its Poisson tensor.

    Evaluating several observables on ``frame.point`` and pairing them with
    :meth:`bracket` computes all their mutual brackets from a single forward
    pass each.
    """

    def __init__(self, x: PhasePoint):
        self.base = x.values()
        flat = self.base.flatten()
        self.m = len(flat)
        self.point = PhasePoint.unflatten(seed(flat))
        blocks = [structure_matrix(s) for s in self.base.sites]
        self.tensor = np.zeros((self.m, self.m), dtype=complex)
        for j, B in enumerate(blocks):
            self.tensor[3 * j:3 * j + 3, 3 * j:3 * j + 3] = B

    def bracket(self, F, G) -> complex:
        gF = gradient(F, self.m)
        gG = gradient(G, self.m)
        return complex(gF @ self.tensor @ gG)

    def gradient(self, F) -> np.ndarray:
        return np.array(gradient(F, self.m))

    def hamiltonian_field(self, H) -> np.ndarray:
        """Components {x_c, H} for every coordinate c (= Pi grad H)."""
        return self.tensor @ gradient(H, self.m)


def poisson_bracket(F: Callable, G: Callable, x: PhasePoint) -> complex:
    """{F, G}(x) = grad F . Pi . grad G via one jet pass per observable."""
    frame = BracketFrame(x)
    return frame.bracket(F(frame.point), G(frame.point))


def fd_gradient(F: Callable, x: PhasePoint, step: float | None = None) -> np.ndarray:
    """Central finite-difference gradient, cross-check for the jet path."""
    flat = [value(v) for v in x.flatten()]
    out = np.zeros(len(flat), dtype=complex)
    for i, xi in enumerate(flat):
        h = (1e-6 * (1.0 + abs(xi))) if step is None else step
        up = list(flat)
        dn = list(flat)
        up[i] = xi + h
        dn[i] = xi - h
        out[i] = (value(F(PhasePoint.unflatten(up)))
                  - value(F(PhasePoint.unflatten(dn)))) / (2 * h)
    return out


def sample_leaf(leaf: Sequence[complex], rng_seed: int) -> PhasePoint:
    """Deterministic random point with casimir(site_j) = leaf[j] exactly.

    k_j and e_j are drawn from the annulus 0.5 <= |.| <= 2 and f_j solves the
    Casimir constraint; e_j is redrawn if |e_j| falls under 1e-3 (cannot
    happen with this annulus, but the guard keeps the contract explicit).
    """
    rng = np.random.default_rng(rng_seed)
    sites = []
    for om in leaf:
        om = complex(om)
        while True:
            k = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
            e = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
            if abs(e) > 1e-3:
                break
        f = (om - k ** 2 - k ** -2) / e
        sites.append(SiteState(complex(e), complex(f), complex(k)))
    return PhasePoint(tuple(sites))
