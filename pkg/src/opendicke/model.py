"""Physical parameters, phase classification, condensates, and bath spectral laws.

Conventions: hbar = 1 and every frequency, coupling, and damping rate carries
the same (arbitrary) frequency unit. The thermodynamic limit is taken
throughout, so only the intensive condensate ratios alpha/N, beta/N and the
bath density sigma/N ever appear; N itself is never a parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "CRITICAL_TOL",
    "Phase",
    "BathSpec",
    "ModelParams",
    "PhaseData",
    "AltCouplingParams",
    "AltCouplingResult",
    "gamma_of",
    "condensates",
    "derive_phase",
    "bath_condensate_density",
    "alt_coupling_renorm",
]

# |lambda - 1| below this is classified as sitting on the transition itself.
# The critical point is a measure-zero set, so the tolerance only has to
# absorb double-precision noise.
CRITICAL_TOL = 1e-12


class Phase(str, Enum):
    NORMAL = "normal"
    CRITICAL = "critical"
    SUPERRADIANT = "superradiant"


@dataclass(frozen=True)
class BathSpec:
    """Power-law damping of one loss port, gamma(w) = gamma0 * |w|**s.

    s = 0 is the ohmic case (constant rate), -1 < s < 0 subohmic, s > 0
    superohmic. Exponents s <= -1 are pathological (w * gamma(w) would not
    vanish at w = 0) and gain (gamma0 < 0) is not supported.
    """

    gamma0: float
    exponent_s: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma0 < 0:
            raise ValueError(f"gain baths (gamma0 < 0) are not supported, got {self.gamma0}")
        if not self.exponent_s > -1:
            raise ValueError(f"bath exponent must satisfy s > -1, got {self.exponent_s}")


def gamma_of(bath: BathSpec, omega):
    """Damping law of a bath at a real or complex frequency.

    On the real axis this is exactly gamma0 * |omega|**s, which is even and
    real. Off the axis the even continuation gamma0 * (omega**2)**(s/2) with
    the principal branch is used; it reproduces the real-axis law, stays even
    everywhere, and is analytic except on the imaginary axis, which is the
    branch cut. On the cut itself the two one-sided values are conjugates,
    and the symmetry gamma(-conj(w)) = conj(gamma(w)) (each axis point is its
    own mirror) forces the real principal value
    gamma0 * |Im w|**s * cos(pi s / 2) there. Accepts scalars or ndarrays.
    Raises at omega = 0 when s < 0.
    """
    s = bath.exponent_s
    g0 = bath.gamma0
    if isinstance(omega, np.ndarray):
        if s == 0.0:
            return np.full(omega.shape, g0)
        if s < 0 and np.any(omega == 0):
            raise ValueError("gamma(omega) is singular at omega = 0 for s < 0")
        if np.iscomplexobj(omega):
            vals = g0 * (omega * omega) ** (0.5 * s)
            on_axis = (omega.real == 0.0) & (omega.imag != 0.0)
            if np.any(on_axis):
                axis_vals = g0 * np.abs(omega.imag) ** s * math.cos(0.5 * math.pi * s)
                vals = np.where(on_axis, axis_vals, vals)
            return vals
        return g0 * np.abs(omega) ** s
    if s == 0.0:
        return g0
    if omega == 0:
        if s < 0:
            raise ValueError("gamma(omega) is singular at omega = 0 for s < 0")
        return 0.0
    if isinstance(omega, complex) and omega.imag != 0.0:
        if omega.real == 0.0:
            return g0 * abs(omega.imag) ** s * math.cos(0.5 * math.pi * s)
        return g0 * (omega * omega) ** (0.5 * s)
    return g0 * abs(omega) ** s


@dataclass(frozen=True)
class ModelParams:
    """The five dials of the model: two bare frequencies, the collective
    coupling, and one bath law per port."""

    omega_a: float
    omega_b: float
    g: float
    bath_a: BathSpec = BathSpec(0.0)
    bath_b: BathSpec = BathSpec(0.0)

    def __post_init__(self) -> None:
        if not self.omega_a > 0:
            raise ValueError(f"omega_a must be positive, got {self.omega_a}")
        if not self.omega_b > 0:
            raise ValueError(f"omega_b must be positive, got {self.omega_b}")
        if self.g < 0:
            raise ValueError(f"coupling g must be nonnegative, got {self.g}")


@dataclass(frozen=True)
class PhaseData:
    """Derived scalar quantities at one parameter point.

    lam = 4 g^2 / (omega_a omega_b) and g_c = sqrt(omega_a omega_b) / 2. In
    the superradiant phase (lam > 1) the matter branch is renormalized by the
    condensates:

        omega_b_tilde     = omega_b (lam + 1) / 2
        g_tilde           = g_c sqrt(2 / (lam + 1))
        d_term            = omega_b (lam - 1)(3 lam + 1) / (8 (lam + 1))
        gamma_b_tilde_amp = 4 gamma0_b / (lam + 1)^2

    In the normal phase these fields hold the bare values (d_term = 0), so
    every field is continuous across lam = 1.
    """

    lam: float
    g_c: float
    phase: Phase
    omega_b_tilde: float
    g_tilde: float
    d_term: float
    gamma_b_tilde_amp: float
    alpha_per_n: float
    beta_per_n: float


def _classify(lam: float) -> Phase:
    if abs(lam - 1.0) < CRITICAL_TOL:
        return Phase.CRITICAL
    return Phase.NORMAL if lam < 1.0 else Phase.SUPERRADIANT


def _superradiant_fields(lam: float, omega_b: float, g_c: float, gamma0_b: float):
    omega_b_tilde = omega_b * (lam + 1.0) / 2.0
    g_tilde = g_c * math.sqrt(2.0 / (lam + 1.0))
    d_term = omega_b * (lam - 1.0) * (3.0 * lam + 1.0) / (8.0 * (lam + 1.0))
    gamma_b_tilde = 4.0 * gamma0_b / (lam + 1.0) ** 2
    return omega_b_tilde, g_tilde, d_term, gamma_b_tilde


def condensates(params: ModelParams) -> tuple[float, float]:
    """Ground-state occupations per emitter, (alpha/N, beta/N).

    alpha/N = (g/omega_a)^2 (1 - 1/lam^2) and beta/N = (1 - 1/lam)/2 above
    the transition, zero at and below it. Only (omega_a, omega_b, g) enter;
    the bath laws cannot shift the condensates.
    """
    lam = 4.0 * params.g**2 / (params.omega_a * params.omega_b)
    if _classify(lam) is not Phase.SUPERRADIANT:
        return 0.0, 0.0
    alpha = (params.g / params.omega_a) ** 2 * (1.0 - 1.0 / lam**2)
    beta = 0.5 * (1.0 - 1.0 / lam)
    return alpha, beta


def derive_phase(params: ModelParams) -> PhaseData:
    """Classify the phase and populate every derived scalar."""
    wa, wb, g = params.omega_a, params.omega_b, params.g
    lam = 4.0 * g**2 / (wa * wb)
    g_c = 0.5 * math.sqrt(wa * wb)
    phase = _classify(lam)
    alpha, beta = condensates(params)
    if phase is Phase.SUPERRADIANT:
        omega_b_tilde, g_tilde, d_term, gamma_b_tilde = _superradiant_fields(
            lam, wb, g_c, params.bath_b.gamma0
        )
    else:
        omega_b_tilde, g_tilde, d_term, gamma_b_tilde = wb, g, 0.0, params.bath_b.gamma0
    return PhaseData(
        lam=lam,
        g_c=g_c,
        phase=phase,
        omega_b_tilde=omega_b_tilde,
        g_tilde=g_tilde,
        d_term=d_term,
        gamma_b_tilde_amp=gamma_b_tilde,
        alpha_per_n=alpha,
        beta_per_n=beta,
    )


def bath_condensate_density(params: ModelParams, port: str, omega: float) -> float:
    """Macroscopic bath occupation density sigma_j(omega)/N.

    The condensate leaks into the bath continuum as
    sigma_j(omega)/N = (2 gamma_j(omega) / pi) (condensate_j/N) / (omega omega_j)
    with condensate_a = alpha and condensate_b = beta; it vanishes in the
    normal phase. Requires omega > 0 (for s < 0 the pointwise density
    diverges toward omega = 0 but is finite at any positive frequency).
    """
    if not omega > 0:
        raise ValueError(f"bath density requires omega > 0, got {omega}")
    alpha, beta = condensates(params)
    if port == "a":
        bath, cond, w_port = params.bath_a, alpha, params.omega_a
    elif port == "b":
        bath, cond, w_port = params.bath_b, beta, params.omega_b
    else:
        raise ValueError(f"port must be 'a' or 'b', got {port!r}")
    if cond == 0.0:
        return 0.0
    return 2.0 * gamma_of(bath, omega) / math.pi * cond / (omega * w_port)


@dataclass(frozen=True)
class AltCouplingParams:
    """Static coupling weights f_j(0) = sum_n k_jn of the bilinear
    (coordinate-product) system-bath interaction, one per port."""

    f_a0: float
    f_b0: float

    def __post_init__(self) -> None:
        if self.f_a0 < 0 or self.f_b0 < 0:
            raise ValueError("coupling weights f_j(0) must be nonnegative")


@dataclass(frozen=True)
class AltCouplingResult:
    """Renormalized frequencies and couplings; primes are None on any port
    whose abnormal flag is set (the renormalized frequency is undefined)."""

    omega_a_prime: float | None
    omega_b_prime: float | None
    g_prime: float | None
    g_c_prime: float | None
    abnormal_a: bool
    abnormal_b: bool


def alt_coupling_renorm(params: ModelParams, alt: AltCouplingParams) -> AltCouplingResult:
    """Renormalization induced by a bilinear q.X system-bath interaction.

    Without a metastable minimum in the interaction potential the bath pulls
    the bare frequencies down, omega_j'^2 = omega_j^2 - f_j(0), the coupling
    rescales as g' = g sqrt(omega_a omega_b / (omega_a' omega_b')), and the
    transition moves to

        g_c' = g_c ((1 - f_a0/omega_a^2)(1 - f_b0/omega_b^2))^(1/4).

    When f_j(0) >= omega_j^2 the port is flagged abnormal instead of raising:
    the instability is a physical outcome, not an input error.
    """
    wa, wb = params.omega_a, params.omega_b
    abnormal_a = not alt.f_a0 < wa**2
    abnormal_b = not alt.f_b0 < wb**2
    wa_p = math.sqrt(wa**2 - alt.f_a0) if not abnormal_a else None
    wb_p = math.sqrt(wb**2 - alt.f_b0) if not abnormal_b else None
    if abnormal_a or abnormal_b:
        return AltCouplingResult(wa_p, wb_p, None, None, abnormal_a, abnormal_b)
    g_prime = params.g * math.sqrt(wa * wb / (wa_p * wb_p))
    g_c = 0.5 * math.sqrt(wa * wb)
    g_c_prime = g_c * ((1.0 - alt.f_a0 / wa**2) * (1.0 - alt.f_b0 / wb**2)) ** 0.25
    return AltCouplingResult(wa_p, wb_p, g_prime, g_c_prime, abnormal_a, abnormal_b)
