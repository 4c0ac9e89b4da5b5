"""Reflection monodromy machinery: local Lax matrices, the boundary matrix,
the double-row monodromy T(z) = N(z)/(z - 1/z), the transfer matrix and its
commuting coefficients, the trigonometric r-matrix, and the Lax pair of each
flow.

Conventions fixed by numerical adjudication (see the test suite):

* the second monodromy factor pairs site j with inhomogeneity a_j, i.e.
  L_N(z/a_N) ... L_1(z/a_1) ("reversed"); the other reading fails
  {t(z1), t(z2)} = 0 as soon as the a_j differ;
* the flow of P_k is {T(z), P_k} = [T(z), M_k(z)] with
  M_k = -2^{2-delta_{k,0}} * sigma-projection of ((z-1/z)/(z+1/z)) z^{-2k} T(z),
  the projection taken of the Laurent series around z = 0 (the diagonal
  entries have poles at z = +-i, but the sigma-part a_0 + sum a_{-n}(z^n+z^{-n})
  only involves the finitely many nonpositive-degree coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (ConstructionError, DomainError, ExtractionError,
                     InvalidStateError)
from .jets import value
from .laurent import (LambdaPoly, LaurentMatrix, LaurentPoly, divide_exact,
                      sigma_plus_decompose, to_lambda)
from .phasespace import (BracketFrame, ModelParams, PhasePoint, SiteState,
                         casimir)

__all__ = ["lax_matrix", "k_matrix", "reflection_monodromy", "ReflectionData",
           "transfer_coefficients", "r_matrix", "lax_pair", "lax_flow_bracket",
           "hamiltonian_jacobian_smin", "Z_MINUS_ZINV", "Z_PLUS_ZINV"]

Z_MINUS_ZINV = LaurentPoly.from_dict({1: 1.0, -1: -1.0})
Z_PLUS_ZINV = LaurentPoly.from_dict({1: 1.0, -1: 1.0})


def lax_matrix(site: SiteState) -> LaurentMatrix:
    """L(z) = [[z k - k^{-1}/z, e], [f, z/k - k/z]]."""
    e, f, k = site.as_tuple()
    if abs(value(k)) == 0.0:
        raise InvalidStateError("site has k = 0")
    ki = 1.0 / k
    return LaurentMatrix(
        LaurentPoly.from_dict({1: k, -1: -ki}),
        LaurentPoly.const(e),
        LaurentPoly.const(f),
        LaurentPoly.from_dict({1: ki, -1: -k}))


def k_matrix(xi) -> LaurentMatrix:
    """Diagonal reflection matrix K(z) = diag(xi z - 1/(xi z), xi/z - z/xi)."""
    if abs(value(xi)) == 0.0:
        raise DomainError("xi must be nonzero")
    xii = 1.0 / xi
    return LaurentMatrix(
        LaurentPoly.from_dict({1: xi, -1: -xii}),
        LaurentPoly.zero(),
        LaurentPoly.zero(),
        LaurentPoly.from_dict({1: -xii, -1: xi}))


@dataclass
class ReflectionData:
    """Double-row monodromy of a phase point: numerator matrix N(z) with
    T(z) = N(z)/(z - 1/z), transfer coefficients, and the scalar observables
    P (deformed total spin) and Q (leading coefficient of C-tilde)."""

    params: ModelParams
    point: PhasePoint
    numerator: LaurentMatrix

    # -- numerator entries -------------------------------------------------
    @cached_property
    def t_num(self) -> LaurentPoly:
        """(N_A + N_D)/2 = t(z) (z - 1/z)."""
        return (self.numerator.a + self.numerator.d) * 0.5

    @cached_property
    def h_num(self) -> LaurentPoly:
        """(N_A - N_D)/2 = h(z) (z - 1/z)."""
        return (self.numerator.a - self.numerator.d) * 0.5

    @cached_property
    def s_laurent(self) -> LaurentPoly:
        """s(z) = ((z-1/z)/(z+1/z)) t(z); Laurent because t(+-i) = 0."""
        return divide_exact(self.t_num, Z_PLUS_ZINV)

    @cached_property
    def det_num(self) -> LaurentPoly:
        """det N(z) = (z-1/z)^2 det T(z)."""
        return self.numerator.det()

    # -- pointwise evaluators ------------------------------------------------
    def entry(self, name: str, z):
        p = {"A": self.numerator.a, "B": self.numerator.b,
             "C": self.numerator.c, "D": self.numerator.d}[name]
        return p(z) / (z - 1.0 / z)

    def matrix(self, z) -> np.ndarray:
        return self.numerator.eval(z) / (z - 1.0 / z)

    def transfer(self, z):
        """t(z) = (A(z) + D(z))/2."""
        return self.t_num(z) / (z - 1.0 / z)

    def transfer_w(self, w):
        """t as a function of w = z^2 (t is even in z)."""
        acc = 0.0
        for n, c in self.t_num.to_dict().items():
            # N_t has odd degrees only: z^n = z * w^{(n-1)/2}
            acc = acc + c * w ** ((n + 1) // 2)
        return acc / (w - 1.0)

    def h_w(self, w):
        """h = (A - D)/2 as a function of w = z^2."""
        acc = 0.0
        for n, c in self.h_num.to_dict().items():
            acc = acc + c * w ** ((n + 1) // 2)
        return acc / (w - 1.0)

    def det_transfer(self, z):
        return self.det_num(z) / (z - 1.0 / z) ** 2

    def det_transfer_closed_form(self, z):
        """prod det L_j(a_j z) * det K(z) * prod det L_j(z/a_j) / (z-1/z)^2."""
        a = self.params.a
        xi = self.params.xi
        acc = (xi ** 2 + xi ** -2) - (z ** 2 + z ** -2)
        for j, s in enumerate(self.point.sites):
            om = casimir(s)
            acc = acc * ((a[j] * z) ** 2 + (a[j] * z) ** -2 - om)
            acc = acc * ((z / a[j]) ** 2 + (z / a[j]) ** -2 - om)
        return acc / (z - 1.0 / z) ** 2

    # -- conserved coefficients ----------------------------------------------
    @cached_property
    def hamiltonians(self) -> list:
        """P_0 .. P_N via P_k = 2^{2-delta_{k,0}} [z^{2k}] s(z)."""
        N = self.params.N
        return [self.s_laurent.coeff(2 * k) * (2.0 ** (2 - (k == 0)))
                for k in range(N + 1)]

    @cached_property
    def bigP(self):
        """P = xi * prod_j k_j^2."""
        acc = self.params.xi
        for s in self.point.sites:
            acc = acc * s.k * s.k
        return acc

    @cached_property
    def c_tilde_lambda(self) -> LambdaPoly:
        """C(z)/(z + 1/z) as a polynomial in lambda = z^2 + z^{-2}."""
        ct = divide_exact(self.numerator.c, Z_PLUS_ZINV * Z_MINUS_ZINV)
        return to_lambda(ct)

    @cached_property
    def b_tilde_lambda(self) -> LambdaPoly:
        bt = divide_exact(self.numerator.b, Z_PLUS_ZINV * Z_MINUS_ZINV)
        return to_lambda(bt)

    @cached_property
    def h_lambda(self) -> LambdaPoly:
        """h = (A-D)/2 as a polynomial in lambda (degree N, leading (P+1/P)/2)."""
        return to_lambda(divide_exact(self.h_num, Z_MINUS_ZINV))

    @cached_property
    def bigQ(self):
        c = self.c_tilde_lambda.c
        return c[-1] if c else 0.0

    def q_closed_form(self):
        """Q = sum_j f_j ((k_j/a_j) prod_{i>j} k_i^2 xi - inverse)."""
        sites = self.point.sites
        a = self.params.a
        xi = self.params.xi
        N = len(sites)
        acc = 0.0
        for j in range(N):
            tail = xi
            for i in range(j + 1, N):
                tail = tail * sites[i].k * sites[i].k
            fwd = (sites[j].k / a[j]) * tail
            acc = acc + sites[j].f * (fwd - 1.0 / fwd)
        return acc


def _check_numerator_symmetries(data: ReflectionData, tol: float = 1e-10):
    """Coefficient-level checks of the T-symmetries (exact identities)."""
    num = data.numerator
    scale = max(p.norm() for p in num.entries()) or 1.0

    def close(p: LaurentPoly, q: LaurentPoly, label: str):
        diff = (p - q).map_values().norm()
        if diff > tol * scale:
            raise ConstructionError(f"monodromy identity failed: {label} "
                                    f"(residual {diff:.3e})")

    # T(-z) = sigma3 T(z) sigma3^-1  <=>  N_A, N_D odd; N_B, N_C even
    close(num.a.substitute("negate"), -1.0 * num.a, "A(-z) = A(z)")
    close(num.d.substitute("negate"), -1.0 * num.d, "D(-z) = D(z)")
    close(num.b.substitute("negate"), num.b, "B(-z) = -B(z)")
    close(num.c.substitute("negate"), num.c, "C(-z) = -C(z)")
    # T(1/z)^t = -sigma2 T(z) sigma2^-1  <=>  N_A(1/z) = N_D(z), N_B(1/z) = -N_B(z)
    close(num.a.substitute("invert"), num.d, "A(1/z) = -D(z)")
    close(num.b.substitute("invert"), -1.0 * num.b, "B(1/z) = B(z)")
    close(num.c.substitute("invert"), -1.0 * num.c, "C(1/z) = C(z)")
    # P_N/2 = P - 1/P
    PN = value(data.hamiltonians[-1])
    bp = value(data.bigP)
    if abs(PN / 2 - (bp - 1 / bp)) > tol * max(1.0, abs(PN)):
        raise ConstructionError("monodromy identity failed: P_N/2 = P - 1/P")


def reflection_monodromy(x: PhasePoint, params: ModelParams,
                         check: bool = True) -> ReflectionData:
    """Build N(z) = L_1(a_1 z)...L_N(a_N z) K(z) L_N(z/a_.)...L_1(z/a_.)."""
    if x.n_sites != params.N:
        raise DomainError(f"point has {x.n_sites} sites, params.N = {params.N}")
    if check:
        params.warn_nongeneric_leaf([casimir(s) for s in x.sites])
    a = params.a
    N = params.N
    M = None
    for j in range(N):
        Lj = lax_matrix(SiteState(*x.sites[j].as_tuple()))
        Lj = Lj.substitute("scale", a[j])
        M = Lj if M is None else M @ Lj
    M = M @ k_matrix(params.xi)
    if params.ordering_mode == "as_printed":
        second = [(N - 1 - i, a[i]) for i in range(N)]      # L_N(z/a_1)...L_1(z/a_N)
    else:
        second = [(N - 1 - i, a[N - 1 - i]) for i in range(N)]
    for site_idx, aj in second:
        M = M @ lax_matrix(x.sites[site_idx]).substitute("scale", 1.0 / aj)
    data = ReflectionData(params=params, point=x, numerator=M)
    if check:
        _check_numerator_symmetries(data)
    return data


def transfer_coefficients(data: ReflectionData, tol: float = 1e-10):
    """P_0..P_N by the residue/coefficient route, cross-checked against a
    linear solve in the basis (w^j + w^{-j})/2 of the printed expansion."""
    N = data.params.N
    P_res = [value(p) for p in data.hamiltonians]
    # basis route: t(z_i) = 1/2 (w+1)/(w-1) [P_0 + sum_j P_j (w^j+w^-j)/2]
    zs = 1.15 * np.exp(2j * np.pi * (np.arange(2 * N + 3) + 0.37) / (2 * N + 3))
    A = np.zeros((len(zs), N + 1), dtype=complex)
    rhs = np.zeros(len(zs), dtype=complex)
    for i, z in enumerate(zs):
        w = z * z
        pref = 0.5 * (w + 1) / (w - 1)
        A[i, 0] = pref
        for j in range(1, N + 1):
            A[i, j] = pref * (w ** j + w ** -j) / 2
        rhs[i] = value(data.transfer(z))
    P_fit, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    scale = max(max(abs(p) for p in P_res), 1e-30)
    err = max(abs(P_fit[k] - P_res[k]) for k in range(N + 1))
    if err > tol * scale:
        raise ExtractionError(
            f"transfer-coefficient extractions disagree by {err:.3e} (scale {scale:.3e})")
    return list(P_res)


def r_matrix(ratio) -> np.ndarray:
    """Classical trigonometric r-matrix of the ratio z1/z2 (4x4, basis
    |11>, |12>, |21>, |22>)."""
    u = complex(ratio)
    if abs(u ** 2 - 1.0) < 1e-13:
        raise DomainError("r-matrix pole at ratio^2 = 1")
    a = (u ** 2 + 1) / (2 * (u ** 2 - 1))
    c = 2 * u / (u ** 2 - 1)
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = r[3, 3] = a
    r[1, 1] = r[2, 2] = -a
    r[1, 2] = r[2, 1] = c
    return r


# ---------------------------------------------------------------- Lax pair
def _series_sigma_projection(F: LaurentPoly, k: int) -> LaurentPoly:
    """sigma-part of z^{1-2k} F(z)/(z^2+1) expanded as a Laurent series at 0.

    Around z = 0, 1/(z^2+1) = sum (-1)^m z^{2m}, so the series coefficient of
    z^{-n} is a_{-n} = sum_m (-1)^m F_{2k-1-n-2m}; only finitely many terms
    hit the support of F.  The sigma-part a_0 + sum_{n>=1} a_{-n}(z^n+z^{-n})
    is then a finite Laurent polynomial.  When (z+1/z) divides F this equals
    the ordinary sigma-part of the Laurent quotient z^{-2k} F/(z+1/z).
    """
    d = F.to_dict()
    if not d:
        return LaurentPoly.zero()
    lo = min(d)
    out = {}
    nmax = max(2 * k - 1 - lo, 0)
    for n in range(0, nmax + 1):
        coeff = 0.0
        mm = 0
        while True:
            deg = 2 * k - 1 - n - 2 * mm
            if deg < lo:
                break
            coeff = coeff + ((-1) ** (mm & 1)) * d.get(deg, 0.0)
            mm += 1
        if isinstance(coeff, float) and coeff == 0.0:
            continue
        out[n] = out.get(n, 0.0) + coeff
        if n:
            out[-n] = out.get(-n, 0.0) + coeff
    return LaurentPoly.from_dict(out)


def lax_pair(data: ReflectionData, k: int, z):
    """(M^sigma_k(z), M^+_k(z)) with {T(z), P_k} = [T, M^sigma] = [M^+, T].

    M^sigma is the finite Laurent matrix -2^{2-delta_{k,0}} X^sigma with
    X = ((z-1/z)/(z+1/z)) z^{-2k} T(z) and the series sigma-projection above;
    M^+ = -2^{2-delta} X - M^sigma evaluated pointwise (its series around 0
    has strictly positive degrees).  Excluded points: z in {0, +-1, +-i}.
    """
    zv = value(z)
    if min(abs(zv), abs(zv - 1), abs(zv + 1), abs(zv - 1j), abs(zv + 1j)) < 1e-8:
        raise DomainError("lax_pair excluded at z in {0, +-1, +-i}")
    pref = 2.0 ** (2 - (k == 0))
    num = data.numerator
    comps = {}
    for name, F in (("t", data.t_num), ("h", data.h_num),
                    ("B", num.b), ("C", num.c)):
        comps[name] = _series_sigma_projection(F, k)(z)
    msig = -pref * np.array([[comps["t"] + comps["h"], comps["B"]],
                             [comps["C"], comps["t"] - comps["h"]]])
    X = ((z - 1.0 / z) / (z + 1.0 / z)) * z ** (-2 * k) * data.matrix(z)
    mplus = -pref * X - msig
    return msig, mplus


def lax_flow_bracket(x: PhasePoint, params: ModelParams, k: int, z) -> np.ndarray:
    """Ground truth {T(z), P_k} entrywise via jets."""
    frame = BracketFrame(x)
    data = reflection_monodromy(frame.point, params, check=False)
    Pk = data.hamiltonians[k]
    T = data.matrix(z)
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[i, j] = frame.bracket(T[i][j], Pk)
    return out


def hamiltonian_jacobian_smin(x: PhasePoint, params: ModelParams) -> float:
    """Smallest singular value of d(P_1..P_N)/d(k_1..k_N): functional
    independence certificate."""
    frame = BracketFrame(x)
    data = reflection_monodromy(frame.point, params, check=False)
    N = params.N
    J = np.zeros((N, N), dtype=complex)
    for i in range(1, N + 1):
        g = frame.gradient(data.hamiltonians[i])
        for j in range(N):
            J[i - 1, j] = g[3 * j + 2]          # d/d k_j
    return float(np.linalg.svd(J, compute_uv=False).min())
