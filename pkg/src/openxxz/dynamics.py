"""Hamiltonian flows of the reflection Hamiltonians P_k.

The complex phase space is integrated as a real system of dimension 6N
(real and imaginary parts interleaved) with scipy's adaptive embedded
Dormand-Prince 5(4) pair and dense output.  Conserved quantities (site
Casimirs, all P_j, spectral-curve coefficients) are monitored rather than
enforced.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError
from .jets import value
from .monodromy import ReflectionData, reflection_monodromy
from .phasespace import BracketFrame, ModelParams, PhasePoint

__all__ = ["Trajectory", "vector_field", "integrate_flow", "flow_observable"]


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    hamiltonian_index: int
    params: ModelParams
    n_steps: int = 0
    n_rhs_evals: int = 0
    max_casimir_drift: float = field(default=0.0)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if len(t) != len(self.states):
            raise IntegrationError("times/states length mismatch")
        if len(t) > 1 and not np.all(np.diff(t) > 0):
            raise IntegrationError("times must be strictly increasing")

    def export_csv(self, path):
        N = self.params.N
        names = []
        for j in range(1, N + 1):
            for var in ("e", "f", "k"):
                names += [f"re_{var}{j}", f"im_{var}{j}"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + names)
            for t, x in zip(self.times, self.states):
                row = [f"{t:.16g}"]
                for v in x.flatten():
                    row += [f"{v.real:.16g}", f"{v.imag:.16g}"]
                w.writerow(row)

    def export_json(self, path):
        out = {
            "hamiltonian_index": self.hamiltonian_index,
            "times": list(map(float, self.times)),
            "states": [[[v.real, v.imag] for v in x.flatten()] for x in self.states],
            "diagnostics": {"n_steps": self.n_steps,
                            "n_rhs_evals": self.n_rhs_evals,
                            "max_casimir_drift": self.max_casimir_drift},
        }
        with open(path, "w") as fh:
            json.dump(out, fh, sort_keys=True, indent=1)


def _complex_to_real(vals: Sequence[complex]) -> np.ndarray:
    v = np.asarray(vals, dtype=complex)
    return np.concatenate([v.real, v.imag])


def _real_to_complex(y: np.ndarray) -> np.ndarray:
    n = len(y) // 2
    return y[:n] + 1j * y[n:]


def vector_field(x: PhasePoint, k: int, params: ModelParams) -> np.ndarray:
    """Tangent components {c, P_k}(x) for every coordinate c (3N complex)."""
    frame = BracketFrame(x)
    data = reflection_monodromy(frame.point, params, check=False)
    return frame.hamiltonian_field(data.hamiltonians[k])


def integrate_flow(x0: PhasePoint, k: int, t_end: float, params: ModelParams,
                   tol: float = 1e-10, samples: Sequence[float] | None = None) -> Trajectory:
    """Integrate the flow of P_k from x0 over [0, t_end] (t_end may be negative)."""
    if tol <= 0:
        raise IntegrationError("tol must be positive")
    reflection_monodromy(x0, params)          # validate once, with checks
    y0 = _complex_to_real([value(v) for v in x0.flatten()])
    evals = [0]

    def rhs(t, y):
        evals[0] += 1
        x = PhasePoint.unflatten(_real_to_complex(y))
        return _complex_to_real(vector_field(x, k, params))

    if samples is None:
        samples = np.linspace(0.0, t_end, 9)
    samples = np.asarray(sorted(set(float(s) for s in samples)
                                | {0.0, float(t_end)}))
    if t_end < 0:
        samples = samples[::-1]
    sol = solve_ivp(rhs, (0.0, t_end), y0, method="RK45",
                    rtol=tol, atol=tol, dense_output=True)
    if not sol.success:
        raise IntegrationError(f"flow of P_{k} failed at t = {sol.t[-1]:.6g}: "
                               f"{sol.message}")
    states = [PhasePoint.unflatten(_real_to_complex(sol.sol(t))) for t in samples]
    ts = samples if t_end >= 0 else samples[::-1]
    states = states if t_end >= 0 else states[::-1]
    from .phasespace import casimir
    om0 = np.array([casimir(s) for s in x0.sites])
    drift = max(float(np.abs(np.array([casimir(s) for s in st.sites]) - om0).max())
                for st in states)
    return Trajectory(times=np.asarray(ts), states=states, hamiltonian_index=k,
                      params=params, n_steps=len(sol.t) - 1,
                      n_rhs_evals=evals[0], max_casimir_drift=drift)


def flow_observable(traj: Trajectory, obs: Callable[[PhasePoint, ReflectionData], complex]) -> np.ndarray:
    """Evaluate obs(state, monodromy-data) along the trajectory."""
    out = []
    for x in traj.states:
        data = reflection_monodromy(x, traj.params, check=False)
        out.append(complex(value(obs(x, data))))
    return np.array(out)
