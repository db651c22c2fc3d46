"""Dynamical 4x4 matrices of the two-subsystem, two-port model.

Basis ordering is fixed as (a, a_dag, b, b_dag). The dynamical matrix A is
pseudo-Hermitian, A = -Sigma A_dag Sigma with Sigma = diag(1, -1, 1, -1), the
decay matrix Gamma(omega) is block diagonal over the two ports with rank-one
2x2 blocks, and the characteristic function

    zeta(omega) = det(A - i Gamma(omega) / 2 - omega I)

is normalized with a +1 coefficient on omega^4 (the determinant already is).
Its zeros are the complex eigenfrequencies of the open system.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import (
    BathSpec,
    ModelParams,
    Phase,
    PhaseData,
    gamma_of,
)

__all__ = [
    "ZetaSignature",
    "INPUT",
    "OUTPUT",
    "FLIP_A",
    "BogoliubovSystem",
    "build_system",
    "build_a_matrix",
    "build_gamma",
    "m_matrix",
    "zeta",
    "zeta_from_system",
    "zeta_np_quartic_coeffs",
    "zeta_quartic_coeffs",
    "zeta_constant_term",
]


@dataclass(frozen=True)
class ZetaSignature:
    """Signs applied to the two port dampings inside zeta.

    (+1, +1) is the physical configuration (the input relation and the S11
    denominator); (-1, +1) is exactly the S11 numerator; (-1, -1) is the
    output relation matrix M(A, -Gamma).
    """

    sign_a: int = 1
    sign_b: int = 1

    def __post_init__(self) -> None:
        if self.sign_a not in (-1, 1) or self.sign_b not in (-1, 1):
            raise ValueError("signature signs must be +1 or -1")


INPUT = ZetaSignature(1, 1)
OUTPUT = ZetaSignature(-1, -1)
FLIP_A = ZetaSignature(-1, 1)


@dataclass(frozen=True)
class BogoliubovSystem:
    """Phase-resolved system: the 4x4 dynamical matrix plus the effective
    per-port bath laws. The matter-port bath already carries the saturation
    replacement gamma0_b -> 4 gamma0_b / (lam + 1)^2 in the superradiant
    phase, so consumers never special-case the phase again."""

    phase: Phase
    a_matrix: np.ndarray
    bath_a: BathSpec
    bath_b: BathSpec


def build_a_matrix(phase_data: PhaseData, params: ModelParams) -> np.ndarray:
    """Dynamical matrix whose eigenvalues are the closed excitation energies.

    In the normal (and critical) phase the bare (omega_b, g) enter with no
    quadratic matter shift; in the superradiant phase omega_b_tilde, g_tilde
    and the 2 d_term shift take their places.
    """
    wa = params.omega_a
    if phase_data.phase is Phase.SUPERRADIANT:
        wb, g, d = phase_data.omega_b_tilde, phase_data.g_tilde, phase_data.d_term
    else:
        wb, g, d = params.omega_b, params.g, 0.0
    return np.array(
        [
            [wa, 0.0, g, g],
            [0.0, -wa, -g, -g],
            [g, g, wb + 2.0 * d, 2.0 * d],
            [-g, -g, -2.0 * d, -wb - 2.0 * d],
        ],
        dtype=complex,
    )


def _effective_baths(phase_data: PhaseData, params: ModelParams) -> tuple[BathSpec, BathSpec]:
    bath_b = params.bath_b
    if phase_data.phase is Phase.SUPERRADIANT:
        bath_b = replace(bath_b, gamma0=phase_data.gamma_b_tilde_amp)
    return params.bath_a, bath_b


def build_system(phase_data: PhaseData, params: ModelParams) -> BogoliubovSystem:
    bath_a, bath_b = _effective_baths(phase_data, params)
    return BogoliubovSystem(
        phase=phase_data.phase,
        a_matrix=build_a_matrix(phase_data, params),
        bath_a=bath_a,
        bath_b=bath_b,
    )


def build_gamma(
    phase_data: PhaseData,
    params: ModelParams,
    omega,
    signature: ZetaSignature = INPUT,
) -> np.ndarray:
    """Decay matrix Gamma(omega): block diagonal over the ports, each block
    gamma * [[1, -1], [-1, 1]] (rank one; the off-diagonal sign flip comes
    from the counter-rotating part of the system-bath interaction)."""
    bath_a, bath_b = _effective_baths(phase_data, params)
    ga = signature.sign_a * gamma_of(bath_a, omega)
    gb = signature.sign_b * gamma_of(bath_b, omega)
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = out[1, 1] = ga
    out[0, 1] = out[1, 0] = -ga
    out[2, 2] = out[3, 3] = gb
    out[2, 3] = out[3, 2] = -gb
    return out


def m_matrix(
    phase_data: PhaseData,
    params: ModelParams,
    omega,
    signature: ZetaSignature = INPUT,
) -> np.ndarray:
    """M(omega) = A - i Gamma(omega)/2 - omega I for one complex frequency."""
    a = build_a_matrix(phase_data, params)
    gam = build_gamma(phase_data, params, omega, signature)
    return a - 0.5j * gam - omega * np.eye(4)


def _det4(m) -> complex:
    # Laplace expansion over the first two rows: branch free, fixed operation
    # count, no pivoting noise near zeta ~ 0 where the root finders operate.
    # Entries may be scalars or broadcastable arrays.
    c01 = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    c02 = m[0][0] * m[1][2] - m[0][2] * m[1][0]
    c03 = m[0][0] * m[1][3] - m[0][3] * m[1][0]
    c12 = m[0][1] * m[1][2] - m[0][2] * m[1][1]
    c13 = m[0][1] * m[1][3] - m[0][3] * m[1][1]
    c23 = m[0][2] * m[1][3] - m[0][3] * m[1][2]
    d01 = m[2][0] * m[3][1] - m[2][1] * m[3][0]
    d02 = m[2][0] * m[3][2] - m[2][2] * m[3][0]
    d03 = m[2][0] * m[3][3] - m[2][3] * m[3][0]
    d12 = m[2][1] * m[3][2] - m[2][2] * m[3][1]
    d13 = m[2][1] * m[3][3] - m[2][3] * m[3][1]
    d23 = m[2][2] * m[3][3] - m[2][3] * m[3][2]
    return c01 * d23 - c02 * d13 + c03 * d12 + c12 * d03 - c13 * d02 + c23 * d01


def zeta_from_system(system: BogoliubovSystem, omega, signature: ZetaSignature = INPUT):
    """zeta(omega) = det(A - i Gamma(omega)/2 - omega I).

    Scalar in, scalar out; ndarray in, elementwise ndarray out (the grid
    engines evaluate whole probe rows in one call). At omega = 0 exactly the
    damping drops out of the determinant for every admissible exponent
    (omega gamma(omega) -> 0), so the scalar call evaluates that limit
    directly; this keeps the constant term meaningful for subohmic baths
    whose gamma diverges at the origin.
    """
    a = system.a_matrix
    if not isinstance(omega, np.ndarray) and omega == 0:
        ga = gb = 0.0
    else:
        ga = signature.sign_a * gamma_of(system.bath_a, omega)
        gb = signature.sign_b * gamma_of(system.bath_b, omega)
    ha = -0.5j * ga
    hb = -0.5j * gb
    a00, a02 = float(a[0, 0].real), float(a[0, 2].real)
    a22, a23 = float(a[2, 2].real), float(a[2, 3].real)
    # Row pattern of M: diagonal picks up (h - omega), the partner column in
    # the same port block picks up -h, cross-port entries are bare A entries.
    m = (
        (a00 + ha - omega, -ha, a02, a02),
        (-ha, -a00 + ha - omega, -a02, -a02),
        (a02, a02, a22 + hb - omega, a23 - hb),
        (-a02, -a02, -a23 - hb, -a22 + hb - omega),
    )
    return _det4(m)


def zeta(
    phase_data: PhaseData,
    params: ModelParams,
    omega,
    signature: ZetaSignature = INPUT,
):
    """zeta at a point or over an array of frequencies (see zeta_from_system)."""
    return zeta_from_system(build_system(phase_data, params), omega, signature)


def zeta_np_quartic_coeffs(params: ModelParams, signature: ZetaSignature = INPUT) -> np.ndarray:
    """Quartic coefficients of zeta in the normal phase with constant rates.

    Ordered from omega^4 down to the constant term:

        (1,
         i (ga + gb),
         -(omega_a^2 + omega_b^2 + ga gb),
         -i (omega_a^2 gb + omega_b^2 ga),
         omega_a^2 omega_b^2 - 4 g^2 omega_a omega_b)

    with the signature signs already applied to ga, gb. Only defined for
    ohmic baths (s = 0 on both ports).
    """
    if params.bath_a.exponent_s != 0.0 or params.bath_b.exponent_s != 0.0:
        raise ValueError("closed-form quartic coefficients require ohmic baths (s = 0)")
    wa, wb = params.omega_a, params.omega_b
    ga = signature.sign_a * params.bath_a.gamma0
    gb = signature.sign_b * params.bath_b.gamma0
    return np.array(
        [
            1.0,
            1j * (ga + gb),
            -(wa**2 + wb**2 + ga * gb),
            -1j * (wa**2 * gb + wb**2 * ga),
            wa**2 * wb**2 - 4.0 * params.g**2 * wa * wb,
        ],
        dtype=complex,
    )


def zeta_quartic_coeffs(
    phase_data: PhaseData,
    params: ModelParams,
    signature: ZetaSignature = INPUT,
) -> np.ndarray:
    """Quartic coefficients of zeta for constant rates in either phase.

    The normal phase has a closed form. The superradiant polynomial is not
    written out anywhere; its coefficients are recovered by sampling zeta at
    five Chebyshev nodes and solving the Vandermonde system.
    """
    if phase_data.phase is not Phase.SUPERRADIANT:
        return zeta_np_quartic_coeffs(params, signature)
    if params.bath_a.exponent_s != 0.0 or params.bath_b.exponent_s != 0.0:
        raise ValueError("quartic coefficients require ohmic baths (s = 0)")
    system = build_system(phase_data, params)
    radius = 2.0 * max(params.omega_a, phase_data.omega_b_tilde) + 1.0
    nodes = radius * np.cos(np.pi * (2.0 * np.arange(5) + 1.0) / 10.0)
    values = np.array([zeta_from_system(system, x, signature) for x in nodes])
    return np.linalg.solve(np.vander(nodes, 5).astype(complex), values)


def zeta_constant_term(phase_data: PhaseData, params: ModelParams) -> float:
    """zeta(0), which carries no damping for any well-behaved bath.

    Normal phase: omega_a^2 omega_b^2 - 4 g^2 omega_a omega_b, whose zero is
    the critical coupling. Superradiant phase: det(A) with the renormalized
    matter entries; positive above the transition.
    """
    wa = params.omega_a
    if phase_data.phase is Phase.SUPERRADIANT:
        wbt, gt, d = phase_data.omega_b_tilde, phase_data.g_tilde, phase_data.d_term
        return wa**2 * (wbt**2 + 4.0 * d * wbt) - 4.0 * gt**2 * wa * wbt
    wb = params.omega_b
    return wa**2 * wb**2 - 4.0 * params.g**2 * wa * wb
