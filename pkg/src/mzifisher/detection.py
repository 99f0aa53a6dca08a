"""Difference-intensity and balanced homodyne detection behind the second beam splitter.

Output modes of the full interferometer are written as
``a4 = u0 a0 + u1 a1`` and ``a5 = v0 a0 + v1 a1`` with

    u0 = T T' e^{-i phi2} + R R' e^{-i phi1}     u1 = R T' e^{-i phi2} + T R' e^{-i phi1}
    v0 = T R' e^{-i phi2} + R T' e^{-i phi1}     v1 = R R' e^{-i phi2} + T T' e^{-i phi1}

where ``phi1`` sits in arm 3 and ``phi2`` in arm 2.  All signals, slopes and
variances below follow from these four coefficients and the port moments.
"""
from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .closed_forms import (
    CohPlusSqzVac,
    DualCoherent,
    SingleCoherent,
    SqzCohPlusSqzVac,
    StateFamily,
    family_moments,
    angle_gap,
    PMC_TOL,
)
from .errors import DomainError
from .fisher import BeamSplitter
from .moments import ModeMoments

TWO_PI = 2.0 * math.pi
GRID_POINTS = 721


# -- configuration ----------------------------------------------------------------

@dataclass(frozen=True)
class Asym:
    """Phase ``phi`` in arm 3 only."""

    def phases(self, phi: float) -> Tuple[float, float]:
        return phi, 0.0

    slopes = (1.0, 0.0)


@dataclass(frozen=True)
class Sym:
    """``+phi/2`` in arm 3 and ``-phi/2`` in arm 2."""

    def phases(self, phi: float) -> Tuple[float, float]:
        return phi / 2.0, -phi / 2.0

    slopes = (0.5, -0.5)


@dataclass(frozen=True)
class TwoPhase:
    """Fixed offsets ``phi1``, ``phi2``; the estimated phase adds to arm 3."""

    phi1: float
    phi2: float

    def phases(self, phi: float) -> Tuple[float, float]:
        return self.phi1 + phi, self.phi2

    slopes = (1.0, 0.0)


Scenario = Union[Asym, Sym, TwoPhase]


@dataclass(frozen=True)
class InterferometerConfig:
    bs1: BeamSplitter = field(default_factory=BeamSplitter.balanced)
    bs2: BeamSplitter = field(default_factory=BeamSplitter.balanced)
    scenario: Scenario = field(default_factory=Asym)


class DetectorKind(enum.Enum):
    DIFFERENCE_INTENSITY = "df"
    HOMODYNE = "hom"


@dataclass(frozen=True)
class DetectorConfig:
    """Detector choice; ``phi_l`` is the local-oscillator phase and only matters for homodyne."""

    kind: DetectorKind
    phi_l: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DetectorKind(self.kind))


def difference_intensity() -> DetectorConfig:
    return DetectorConfig(DetectorKind.DIFFERENCE_INTENSITY)


def homodyne(phi_l: float = 0.0) -> DetectorConfig:
    return DetectorConfig(DetectorKind.HOMODYNE, phi_l)


@dataclass(frozen=True)
class SensitivityPoint:
    phi: float
    signal_derivative: float
    variance: float
    delta_phi: float


def _point(phi: float, derivative: float, variance: float) -> SensitivityPoint:
    variance = max(variance, 0.0)
    if derivative == 0.0 or not math.isfinite(derivative):
        delta = math.inf
    else:
        delta = math.sqrt(variance) / abs(derivative)
    return SensitivityPoint(phi, derivative, variance, delta)


# -- output-mode coefficients ---------------------------------------------------------

@dataclass(frozen=True)
class OutputCoefficients:
    u0: complex
    u1: complex
    v0: complex
    v1: complex


def output_coefficients(cfg: InterferometerConfig, phi: float) -> Tuple[OutputCoefficients, OutputCoefficients]:
    """Coefficients of ``a4``, ``a5`` and their derivatives with respect to ``phi``."""
    T, R = cfg.bs1.T, cfg.bs1.R
    Tp, Rp = cfg.bs2.T, cfg.bs2.R
    phi1, phi2 = cfg.scenario.phases(phi)
    d1, d2 = cfg.scenario.slopes
    e1, e2 = cmath.exp(-1j * phi1), cmath.exp(-1j * phi2)

    def pair(arm2: complex, arm3: complex) -> Tuple[complex, complex]:
        value = arm2 * e2 + arm3 * e1
        slope = -1j * (d2 * arm2 * e2 + d1 * arm3 * e1)
        return value, slope

    u0, du0 = pair(T * Tp, R * Rp)
    u1, du1 = pair(R * Tp, T * Rp)
    v0, dv0 = pair(T * Rp, R * Tp)
    v1, dv1 = pair(R * Rp, T * Tp)
    return OutputCoefficients(u0, u1, v0, v1), OutputCoefficients(du0, du1, dv0, dv1)


def diff_intensity_coefficients(cfg: InterferometerConfig, phi: float) -> Tuple[float, complex]:
    """``(A_d, C_d)`` with ``N_d = A_d (n0 - n1) + C_d a0 a1† + C_d* a0† a1``."""
    c, _ = output_coefficients(cfg, phi)
    a_d = abs(c.u0) ** 2 - abs(c.v0) ** 2
    c_d = c.u0 * c.u1.conjugate() - c.v0 * c.v1.conjugate()
    return a_d, c_d


def diff_intensity_mean(m0: ModeMoments, m1: ModeMoments, a_d: float, c_d: complex) -> float:
    return a_d * (m0.mean_n - m1.mean_n) + 2.0 * (c_d * m0.mean_a * m1.mean_a.conjugate()).real


def diff_intensity_variance(m0: ModeMoments, m1: ModeMoments, a_d: float, c_d: complex) -> float:
    a0, a1c = m0.mean_a, m1.mean_a.conjugate()
    nn = m0.mean_n * m1.mean_n - abs(a0) ** 2 * abs(a1c) ** 2
    pair = m0.mean_a2 * m1.mean_a2.conjugate() - a0 * a0 * a1c * a1c
    return (
        a_d * a_d * (m0.var_n + m1.var_n)
        + abs(c_d) ** 2 * (m0.mean_n + m1.mean_n + 2.0 * nn)
        + 2.0 * (c_d * c_d * pair).real
        + 4.0 * a_d * (c_d * (m0.cov_na * a1c - a0 * m1.cov_na.conjugate())).real
    )


def diff_intensity_point(m0: ModeMoments, m1: ModeMoments, cfg: InterferometerConfig, phi: float) -> SensitivityPoint:
    """Signal slope, variance and sensitivity of ``N_d = n4 - n5``."""
    c, dc = output_coefficients(cfg, phi)
    a_d = abs(c.u0) ** 2 - abs(c.v0) ** 2
    c_d = c.u0 * c.u1.conjugate() - c.v0 * c.v1.conjugate()
    da_d = 2.0 * (c.u0.conjugate() * dc.u0).real - 2.0 * (c.v0.conjugate() * dc.v0).real
    dc_d = (
        dc.u0 * c.u1.conjugate() + c.u0 * dc.u1.conjugate()
        - dc.v0 * c.v1.conjugate() - c.v0 * dc.v1.conjugate()
    )
    derivative = diff_intensity_mean(m0, m1, da_d, dc_d)
    return _point(phi, derivative, diff_intensity_variance(m0, m1, a_d, c_d))


def homodyne_coefficients(cfg: InterferometerConfig, phi_l: float, phi: float) -> Tuple[complex, complex]:
    """``(A, B)`` with ``X = A a0 + B a1 + h.c.``."""
    c, _ = output_coefficients(cfg, phi)
    lo = 0.5 * cmath.exp(-1j * phi_l)
    return lo * c.u0, lo * c.u1


def homodyne_point(
    m0: ModeMoments, m1: ModeMoments, cfg: InterferometerConfig, det: DetectorConfig, phi: float
) -> SensitivityPoint:
    """Quadrature ``X = (e^{-i phi_L} a4 + h.c.)/2`` at output 4; ``phi_L`` is absolute here."""
    if det.kind is not DetectorKind.HOMODYNE:
        raise DomainError("homodyne_point needs a homodyne detector")
    c, dc = output_coefficients(cfg, phi)
    lo = 0.5 * cmath.exp(-1j * det.phi_l)
    a, b = lo * c.u0, lo * c.u1
    da, db = lo * dc.u0, lo * dc.u1
    derivative = 2.0 * (da * m0.mean_a + db * m1.mean_a).real
    variance = (
        0.25
        + 2.0 * (a * a * m0.var_a + b * b * m1.var_a).real
        + 2.0 * abs(a) ** 2 * m0.thermal_excess
        + 2.0 * abs(b) ** 2 * m1.thermal_excess
    )
    return _point(phi, derivative, variance)


def homodyne_mean(m0: ModeMoments, m1: ModeMoments, cfg: InterferometerConfig, phi_l: float, phi: float) -> float:
    a, b = homodyne_coefficients(cfg, phi_l, phi)
    return 2.0 * (a * m0.mean_a + b * m1.mean_a).real


def sensitivity_point(
    m0: ModeMoments, m1: ModeMoments, cfg: InterferometerConfig, det: DetectorConfig, phi: float
) -> SensitivityPoint:
    if det.kind is DetectorKind.DIFFERENCE_INTENSITY:
        return diff_intensity_point(m0, m1, cfg, phi)
    return homodyne_point(m0, m1, cfg, det, phi)


# -- family level ------------------------------------------------------------------------

def absolute_detector(fam: StateFamily, det: DetectorConfig) -> DetectorConfig:
    """Family-level ``phi_l`` is an offset from ``theta_alpha``; make it absolute."""
    if det.kind is DetectorKind.HOMODYNE:
        return DetectorConfig(det.kind, det.phi_l + fam.alpha.phase)
    return det


def family_point(fam: StateFamily, cfg: InterferometerConfig, det: DetectorConfig, phi: float) -> SensitivityPoint:
    m0, m1 = family_moments(fam)
    return sensitivity_point(m0, m1, cfg, absolute_detector(fam, det), phi)


def _minimize_on_circle(f: Callable[[float], float]) -> float:
    """Grid search on ``[0, 2 pi)`` refined by golden-section search."""
    grid = np.linspace(0.0, TWO_PI, GRID_POINTS)
    values = np.array([f(x) for x in grid])
    k = int(np.argmin(values))
    h = grid[1] - grid[0]
    x0 = grid[k]
    if not math.isfinite(values[k]):
        return float(x0)
    try:
        res = minimize_scalar(f, bracket=(x0 - h, x0, x0 + h), method="golden", tol=1e-10)
        best = res.x if res.fun <= values[k] else x0
    except ValueError:
        best = x0
    return normalize_angle(best)


def normalize_angle(phi: float) -> float:
    wrapped = math.fmod(phi, TWO_PI)
    return wrapped + TWO_PI if wrapped < 0 else wrapped


def _is_balanced_phase(det: DetectorConfig) -> bool:
    return abs(det.phi_l) < PMC_TOL


def optimal_working_point(fam: StateFamily, det: DetectorConfig, cfg: InterferometerConfig) -> float:
    """Internal phase minimizing the sensitivity; closed form where one is known."""
    scen = cfg.scenario
    df = det.kind is DetectorKind.DIFFERENCE_INTENSITY
    if isinstance(fam, SingleCoherent) and not isinstance(scen, TwoPhase):
        if df:
            return math.pi / 2.0
        if _is_balanced_phase(det):
            return 0.0
    if isinstance(fam, DualCoherent):
        a, b = fam.alpha.magnitude, fam.beta.magnitude
        tr = cfg.bs1.tr
        if df and angle_gap(fam.delta_theta, 0.0) < PMC_TOL and not isinstance(scen, TwoPhase):
            # slope ~ |TR|(b^2 - a^2) sin(phi) + ab cos(phi)
            return math.atan2(tr * (b * b - a * a), a * b) % math.pi
        if not df and isinstance(scen, Asym) and _is_balanced_phase(det):
            t, r = cfg.bs1.t, cfg.bs1.r
            s, c = math.sin(fam.delta_theta), math.cos(fam.delta_theta)
            return math.atan2(r * b * c, t * a + r * b * s) % math.pi
    if (
        isinstance(fam, (CohPlusSqzVac, SqzCohPlusSqzVac))
        and not df
        and isinstance(scen, Asym)
        and _is_balanced_phase(det)
        and fam.pmc_satisfied()
    ):
        return _squeezed_working_point(fam)
    return _minimize_on_circle(lambda x: family_point(fam, cfg, det, x).delta_phi)


def _squeezed_working_point(fam) -> float:
    """``pi`` unless port 1 is squeezed more strongly than port 0, in which case ``0``."""
    z = fam.zeta.factor if isinstance(fam, SqzCohPlusSqzVac) else 0.0
    return math.pi if z <= fam.xi.factor else 0.0


# -- second beam splitter and best sensitivities ------------------------------------------

def bs2_t_opt(fam: StateFamily, t1: float) -> float:
    """``t'`` minimizing the optimal-angle homodyne sensitivity at fixed first-splitter ``t1``."""
    if not isinstance(fam, (CohPlusSqzVac, SqzCohPlusSqzVac)):
        raise DomainError("second beam-splitter optimum is defined for the squeezed families")
    if not fam.pmc_satisfied():
        raise DomainError("second beam-splitter optimum assumes the optimal phase matching")
    if not 0.0 < t1 < 1.0:
        raise DomainError(f"t1 must lie strictly between 0 and 1, got {t1}")
    r = fam.xi.factor
    z = fam.zeta.factor if isinstance(fam, SqzCohPlusSqzVac) else 0.0
    er, ez = math.exp(-2 * r), math.exp(-2 * z)
    numerator = t1 * math.sqrt(1.0 - t1 * t1) * abs(er - ez)
    if numerator == 0.0:
        warnings.warn(
            "equal squeeze factors in both ports: the optimal t' degenerates to 0",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    denominator = math.sqrt(ez * ez - t1 * t1 * (ez * ez - er * er))
    return min(1.0, numerator / denominator)


SUPPORTED_BEST = (
    "SingleCoherent/df",
    "SingleCoherent/hom (asym, sym)",
    "DualCoherent/df (delta theta = 0)",
    "DualCoherent/hom (asym)",
    "CohPlusSqzVac/hom (asym)",
    "SqzCohPlusSqzVac/hom (asym)",
)


def _unsupported(fam: StateFamily, det: DetectorConfig) -> NotImplementedError:
    return NotImplementedError(
        f"no closed-form best sensitivity for {type(fam).__name__}/{det.kind.value}; "
        f"supported: {', '.join(SUPPORTED_BEST)}"
    )


def best_sensitivity(fam: StateFamily, det: DetectorConfig, cfg: InterferometerConfig | None = None) -> float:
    """Closed-form sensitivity at the optimal working point for the given beam splitters.

    ``cfg`` defaults to both splitters balanced with the asymmetric scenario.
    Homodyne forms assume ``phi_L = theta_alpha``.
    """
    cfg = cfg or InterferometerConfig()
    t, r = cfg.bs1.t, cfg.bs1.r
    tp, rp = cfg.bs2.t, cfg.bs2.r
    scen = cfg.scenario
    df = det.kind is DetectorKind.DIFFERENCE_INTENSITY
    if not df and not _is_balanced_phase(det):
        raise DomainError("closed-form homodyne sensitivities assume phi_L = theta_alpha")
    a = fam.alpha.magnitude

    def inv(x: float) -> float:
        return math.inf if x <= 0.0 else 1.0 / x

    if isinstance(fam, SingleCoherent):
        if df and not isinstance(scen, TwoPhase):
            return inv(4.0 * t * r * tp * rp * a)
        if isinstance(scen, Asym):
            return inv(2.0 * t * rp * a)
        if isinstance(scen, Sym):
            return inv(abs(t * rp - r * tp) * a)
        raise _unsupported(fam, det)

    if isinstance(fam, DualCoherent):
        b = fam.beta.magnitude
        if df and not isinstance(scen, TwoPhase):
            if angle_gap(fam.delta_theta, 0.0) > PMC_TOL:
                raise DomainError("difference-intensity closed form assumes delta theta = 0")
            x = (t * r) ** 2
            total = a * a + b * b
            return math.sqrt(total) / (4.0 * math.sqrt(a * a * b * b * (1.0 - 4.0 * x) + x * total ** 2) * tp * rp) \
                if tp * rp > 0.0 else math.inf
        if not df and isinstance(scen, Asym):
            s, c = math.sin(fam.delta_theta), math.cos(fam.delta_theta)
            return inv(2.0 * rp * math.hypot(t * a + r * b * s, r * b * c))
        raise _unsupported(fam, det)

    if isinstance(fam, (CohPlusSqzVac, SqzCohPlusSqzVac)) and not df and isinstance(scen, Asym):
        if not fam.pmc_satisfied():
            raise DomainError("closed-form squeezed sensitivities assume the optimal phase matching")
        rr = fam.xi.factor
        z = fam.zeta.factor if isinstance(fam, SqzCohPlusSqzVac) else 0.0
        # the slope is the same at phi = 0 and pi; the sign only moves which port's noise is suppressed
        sign = -1.0 if _squeezed_working_point(fam) == math.pi else 1.0
        noise = (
            1.0
            - (t * tp - sign * r * rp) ** 2 * (1.0 - math.exp(-2 * rr))
            - (r * tp + sign * t * rp) ** 2 * (1.0 - math.exp(-2 * z))
        )
        denom = 2.0 * t * rp * a
        return math.inf if denom == 0.0 else math.sqrt(max(noise, 0.0)) / denom

    raise _unsupported(fam, det)


def grid_best_sensitivity(fam: StateFamily, det: DetectorConfig, cfg: InterferometerConfig) -> float:
    """Numerical minimum of the sensitivity over the internal phase."""
    phi = _minimize_on_circle(lambda x: family_point(fam, cfg, det, x).delta_phi)
    return family_point(fam, cfg, det, phi).delta_phi
