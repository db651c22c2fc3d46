"""Port scattering and coherent reflection spectra.

The reflection coefficient seen from port a is the closed-form ratio

    S11(omega) = zeta(omega; -gamma_a, +gamma_b) / zeta(omega; +gamma_a, +gamma_b),

valid for arbitrary damping laws and in both phases (the superradiant phase
carries the saturated matter damping in numerator and denominator alike).
The full 2x2 scattering matrix is assembled independently from the
input-output block algebra M(A, -Gamma) M(A, Gamma)^(-1) and port weight
factors; its (1, 1) element must reproduce S11, which the test suite uses as
a two-route consistency check.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelParams, Phase, PhaseData, derive_phase, gamma_of
from .matrices import FLIP_A, INPUT, OUTPUT, build_system, m_matrix, zeta_from_system
from .eigen import closed_eigenfrequencies

__all__ = [
    "SpectrumGrid",
    "s11",
    "s_matrix",
    "sweep_spectrum",
    "find_minima",
    "lamb_shift",
]


def _validate_probe(omega) -> None:
    arr = np.asarray(omega)
    if not np.all(arr > 0):
        raise ValueError("probe frequencies must be positive")


def s11(params: ModelParams, omega):
    """Reflection coefficient at port a for real probe frequencies.

    Accepts a scalar or an array of frequencies (> 0). Total for omega > 0:
    the denominator zeros all sit strictly below the real axis except for
    the zero-frequency root at the exact critical point, which the omega > 0
    domain never touches.
    """
    _validate_probe(omega)
    pd = derive_phase(params)
    system = build_system(pd, params)
    return _s11_rows(system, omega)


def _s11_rows(system, omega):
    num = zeta_from_system(system, omega, FLIP_A)
    den = zeta_from_system(system, omega, INPUT)
    # A real-axis denominator zero only happens at measure-zero parameter
    # coincidences (an undamped decoupled mode hit exactly on resonance);
    # there the numerator shares the vanishing factor, so the ratio is
    # recovered from an ulp-scale probe offset.
    if isinstance(den, np.ndarray):
        if np.any(den == 0):
            shifted = np.where(den == 0, omega * (1.0 + 1e-9), omega)
            num = zeta_from_system(system, shifted, FLIP_A)
            den = zeta_from_system(system, shifted, INPUT)
    elif den == 0:
        shifted = omega * (1.0 + 1e-9)
        num = zeta_from_system(system, shifted, FLIP_A)
        den = zeta_from_system(system, shifted, INPUT)
    return num / den


def _port_weights(pd: PhaseData, params: ModelParams, omega: float) -> tuple:
    bath_a, bath_b = params.bath_a, params.bath_b
    if pd.phase is Phase.SUPERRADIANT:
        bath_b = replace(bath_b, gamma0=pd.gamma_b_tilde_amp)
    freqs = (params.omega_a, pd.omega_b_tilde)
    gammas = (gamma_of(bath_a, omega), gamma_of(bath_b, omega))
    return freqs, gammas


def s_matrix(params: ModelParams, omega: float) -> np.ndarray:
    """Full 2x2 scattering matrix at one real probe frequency.

    Each 2x2 block of M(A, -Gamma) M(A, Gamma)^(-1) is projected onto the
    (1, -1)/sqrt(2) port vector from both sides, then weighted by
    sqrt(omega_j / omega_k * gamma_k(omega) / gamma_j(omega)) built from the
    effective port quantities (the superradiant matter port carries the
    renormalized frequency and the saturated damping, which is the same as
    attaching the 2 / (lam + 1) condensate factor to the bare law). Both
    port couplings must be positive, otherwise the weights are singular.
    """
    _validate_probe(omega)
    if params.bath_a.gamma0 <= 0 or params.bath_b.gamma0 <= 0:
        raise ValueError("the scattering matrix requires both port couplings positive")
    pd = derive_phase(params)
    m_in = m_matrix(pd, params, omega, INPUT)
    m_out = m_matrix(pd, params, omega, OUTPUT)
    t_full = m_out @ np.linalg.inv(m_in)
    freqs, gammas = _port_weights(pd, params, omega)
    out = np.empty((2, 2), dtype=complex)
    for j in range(2):
        for k in range(2):
            blk = t_full[2 * j : 2 * j + 2, 2 * k : 2 * k + 2]
            scalar = 0.5 * (blk[0, 0] - blk[0, 1] - blk[1, 0] + blk[1, 1])
            weight = np.sqrt(freqs[j] / freqs[k] * gammas[k] / gammas[j])
            out[j, k] = weight * scalar
    return out


@dataclass(frozen=True)
class SpectrumGrid:
    """Complex S11 on a (sweep value x probe frequency) grid, one row per
    sweep value, with the phase of each row recorded."""

    axis: str
    sweep_values: np.ndarray
    probe_frequencies: np.ndarray
    values: np.ndarray
    phase_labels: tuple[str, ...]

    def abs_values(self) -> np.ndarray:
        return np.abs(self.values)

    def to_csv(self, stream, include_phase: bool = False) -> None:
        """Rows of (sweep_value, omega, re, im, abs) behind '#' metadata
        headers; 12 significant digits throughout."""
        sv, pf = self.sweep_values, self.probe_frequencies
        stream.write(
            f"# axis={self.axis} sweep={sv[0]:.11e}:{sv[-1]:.11e}:{sv.size}"
            f" probe={pf[0]:.11e}:{pf[-1]:.11e}:{pf.size}\n"
        )
        cols = "sweep_value,omega,re_s11,im_s11,abs_s11"
        stream.write(f"# columns: {cols},phase\n" if include_phase else f"# columns: {cols}\n")
        mag = self.abs_values()
        block = np.empty((pf.size, 4))
        block[:, 0] = pf
        for i, v in enumerate(sv):
            block[:, 1] = self.values[i].real
            block[:, 2] = self.values[i].imag
            block[:, 3] = mag[i]
            tail = f",{self.phase_labels[i]}" if include_phase else ""
            # The constant sweep value (and label) ride inside the row format;
            # savetxt then formats the whole block in one pass.
            np.savetxt(stream, block, fmt=f"{v:.11e},%.11e,%.11e,%.11e,%.11e{tail}")

    def to_json(self) -> str:
        """Single document with the magnitude grid flattened row-major."""
        doc = {
            "axis": self.axis,
            "sweep_values": [float(v) for v in self.sweep_values],
            "probe_frequencies": [float(w) for w in self.probe_frequencies],
            "abs_s11": [float(x) for x in self.abs_values().ravel()],
            "phase_labels": list(self.phase_labels),
        }
        return json.dumps(doc, separators=(",", ":"))


def _resolve_point(
    params: ModelParams, axis: str, value: float, linear_gamma_b: bool
) -> ModelParams:
    if axis == "g":
        return replace(params, g=value)
    omega_b = value * params.omega_a
    bath_b = params.bath_b
    if linear_gamma_b:
        bath_b = replace(bath_b, gamma0=bath_b.gamma0 * omega_b / params.omega_b)
    return replace(params, omega_b=omega_b, bath_b=bath_b)


def _spectrum_row(args) -> tuple[np.ndarray, str]:
    params, axis, value, probe, linear_gamma_b = args
    p = _resolve_point(params, axis, value, linear_gamma_b)
    pd = derive_phase(p)
    return _s11_rows(build_system(pd, p), probe), pd.phase.value


def sweep_spectrum(
    params: ModelParams,
    axis: str,
    sweep_values,
    probe_frequencies,
    *,
    linear_gamma_b: bool = False,
    workers: int = 1,
) -> SpectrumGrid:
    """Fill an S11 grid row by row, the phase auto-selected per sweep value.

    axis is either 'g' (coupling sweep) or 'ratio' (omega_b / omega_a sweep,
    the experimentally natural knob). With linear_gamma_b the matter damping
    amplitude scales proportionally to omega_b along a ratio sweep. Rows are
    independent, so workers > 1 fans them out to a process pool; assembly is
    order preserving either way.
    """
    if axis not in ("g", "ratio"):
        raise ValueError(f"spectrum axis must be 'g' or 'ratio', got {axis!r}")
    sweep = np.asarray(sweep_values, dtype=float)
    probe = np.asarray(probe_frequencies, dtype=float)
    if sweep.size == 0 or probe.size == 0:
        raise ValueError("sweep and probe grids must be nonempty")
    _validate_probe(probe)
    tasks = [(params, axis, float(v), probe, linear_gamma_b) for v in sweep]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_spectrum_row, tasks, chunksize=8))
    else:
        rows = [_spectrum_row(t) for t in tasks]
    values = np.vstack([r[0] for r in rows])
    labels = tuple(r[1] for r in rows)
    return SpectrumGrid(
        axis=axis,
        sweep_values=sweep,
        probe_frequencies=probe,
        values=values,
        phase_labels=labels,
    )


def _parabolic_vertex(x, y) -> float:
    (x0, x1, x2), (y0, y1, y2) = x, y
    c0 = y0 / ((x0 - x1) * (x0 - x2))
    c1 = y1 / ((x1 - x0) * (x1 - x2))
    c2 = y2 / ((x2 - x0) * (x2 - x1))
    curv = c0 + c1 + c2
    if curv == 0.0:
        return x1
    vertex = 0.5 * (c0 * (x1 + x2) + c1 * (x0 + x2) + c2 * (x0 + x1)) / curv
    return min(max(vertex, x0), x2)


def find_minima(probe_frequencies, row) -> np.ndarray:
    """Locations of the interior local minima of |S11| along one row.

    Strict three-point comparison on |S11|^2 picks the dips, with a small
    relative floor so the ulp-level ripple of a flat unit-modulus row never
    counts; each dip is then refined by the vertex of the parabola through
    its bracketing triple, so the result does not inherit the grid pitch.
    A monotone (or flat) row yields an empty array.
    """
    x = np.asarray(probe_frequencies, dtype=float)
    y = np.abs(np.asarray(row)) ** 2
    if x.size < 3:
        raise ValueError("a row needs at least 3 points to hold an interior minimum")
    noise = 1e-12 * max(float(np.max(y)), 1.0)
    inner = (y[1:-1] < y[:-2] - noise) & (y[1:-1] < y[2:] - noise)
    idx = np.flatnonzero(inner) + 1
    return np.array([_parabolic_vertex(x[i - 1 : i + 2], y[i - 1 : i + 2]) for i in idx])


def lamb_shift(params: ModelParams, branch: str, probe_frequencies) -> float:
    """Displacement of the reflection dip from the closed excitation energy.

    Positive means the open-system dip sits above the closed eigenfrequency
    of the requested branch ('lower' or 'upper'); the dip nearest to that
    eigenfrequency is the one measured.
    """
    if branch not in ("lower", "upper"):
        raise ValueError(f"branch must be 'lower' or 'upper', got {branch!r}")
    lo, hi = closed_eigenfrequencies(params)
    target = lo if branch == "lower" else hi
    minima = find_minima(probe_frequencies, s11(params, np.asarray(probe_frequencies, dtype=float)))
    if minima.size == 0:
        raise ValueError(f"no reflection minimum on the probe grid for branch {branch!r}")
    nearest = minima[np.argmin(np.abs(minima - target))]
    return float(nearest - target)
