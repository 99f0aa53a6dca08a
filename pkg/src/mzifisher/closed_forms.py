"""Per-state closed forms: QFIs, optimal first beam splitter and existence limits.

Four input families are covered.  Port 1 always carries the coherent
amplitude ``alpha``; port 0 is vacuum, a second coherent state ``beta`` or a
squeezed vacuum ``xi = r e^{i theta}``.  The squeezed-coherent family also
squeezes port 1 with ``zeta = z e^{i phi}`` before displacing it.

Every closed form here is an independent algebraic expression; the test
suite checks each one against :func:`mzifisher.fisher.qfi` applied to the
port moments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import DomainError, SingularFormulaError, VanishingInformationError
from .fisher import BeamSplitter, QfiMode, qfi as generic_qfi
from .moments import (
    ComplexAmplitude,
    ModeMoments,
    PortState,
    SqueezeParam,
    coherent,
    moments_of,
    normalize_phase,
    squeezed_coherent,
    squeezed_vacuum,
    upsilon_minus,
    upsilon_plus,
    vacuum,
)

PMC_TOL = 1e-9


def angle_gap(angle: float, target: float) -> float:
    """Distance between two angles on the circle."""
    d = normalize_phase(angle - target)
    return min(d, 2.0 * math.pi - d)


# -- state families ------------------------------------------------------------

@dataclass(frozen=True)
class SingleCoherent:
    """``|alpha>`` in port 1, vacuum in port 0."""

    alpha: ComplexAmplitude

    def ports(self) -> Tuple[PortState, PortState]:
        return vacuum(), coherent(self.alpha.magnitude, self.alpha.phase)


@dataclass(frozen=True)
class DualCoherent:
    """``|alpha>`` in port 1 and ``|beta>`` in port 0."""

    alpha: ComplexAmplitude
    beta: ComplexAmplitude

    @property
    def delta_theta(self) -> float:
        return self.alpha.phase - self.beta.phase

    def ports(self) -> Tuple[PortState, PortState]:
        return (
            coherent(self.beta.magnitude, self.beta.phase),
            coherent(self.alpha.magnitude, self.alpha.phase),
        )


@dataclass(frozen=True)
class CohPlusSqzVac:
    """``|alpha>`` in port 1, squeezed vacuum ``S(xi)|0>`` in port 0."""

    alpha: ComplexAmplitude
    xi: SqueezeParam

    @property
    def pmc(self) -> float:
        """``2 theta_alpha - theta``; zero is the optimal phase matching."""
        return 2.0 * self.alpha.phase - self.xi.phase

    def pmc_satisfied(self) -> bool:
        return angle_gap(self.pmc, 0.0) < PMC_TOL

    def ports(self) -> Tuple[PortState, PortState]:
        return (
            squeezed_vacuum(self.xi.factor, self.xi.phase),
            coherent(self.alpha.magnitude, self.alpha.phase),
        )


@dataclass(frozen=True)
class SqzCohPlusSqzVac:
    """``D(alpha) S(zeta)|0>`` in port 1, ``S(xi)|0>`` in port 0."""

    alpha: ComplexAmplitude
    zeta: SqueezeParam
    xi: SqueezeParam

    @property
    def pmc(self) -> Tuple[float, float]:
        """``(2 theta_alpha - theta, theta - phi)``; optimal at ``(0, pi)``."""
        return 2.0 * self.alpha.phase - self.xi.phase, self.xi.phase - self.zeta.phase

    def pmc_satisfied(self) -> bool:
        first, second = self.pmc
        return angle_gap(first, 0.0) < PMC_TOL and angle_gap(second, math.pi) < PMC_TOL

    def ports(self) -> Tuple[PortState, PortState]:
        a, zt = self.alpha, self.zeta
        return (
            squeezed_vacuum(self.xi.factor, self.xi.phase),
            squeezed_coherent(a.magnitude, a.phase, zt.factor, zt.phase),
        )


StateFamily = Union[SingleCoherent, DualCoherent, CohPlusSqzVac, SqzCohPlusSqzVac]
SQUEEZED_FAMILIES = (CohPlusSqzVac, SqzCohPlusSqzVac)


def family_moments(fam: StateFamily) -> Tuple[ModeMoments, ModeMoments]:
    p0, p1 = fam.ports()
    return moments_of(p0), moments_of(p1)


def coh_sqz_pmc(alpha: float, r: float, theta_alpha: float = 0.0) -> CohPlusSqzVac:
    """Coherent plus squeezed vacuum with the optimal phase matching imposed."""
    return CohPlusSqzVac(ComplexAmplitude(alpha, theta_alpha), SqueezeParam(r, 2.0 * theta_alpha))


def sqzcoh_pmc(alpha: float, r: float, z: float, theta_alpha: float = 0.0) -> SqzCohPlusSqzVac:
    """Squeezed-coherent plus squeezed vacuum with both optimal phase matchings."""
    theta = 2.0 * theta_alpha
    return SqzCohPlusSqzVac(
        ComplexAmplitude(alpha, theta_alpha), SqueezeParam(z, theta - math.pi), SqueezeParam(r, theta)
    )


# -- shared building blocks ------------------------------------------------------

def _squeezed_parts(fam) -> Tuple[float, float, float]:
    """``(V0, V1, C)`` with ``F_ss = V0 + V1`` and ``C`` the ``|TR|^2`` coefficient of ``F^(i)/4``."""
    r = fam.xi.factor
    a = fam.alpha
    v0 = math.sinh(2 * r) ** 2 / 2.0
    ups = upsilon_plus(a, fam.xi)
    if isinstance(fam, CohPlusSqzVac):
        return v0, a.magnitude ** 2, math.sinh(r) ** 2 + ups
    z = fam.zeta.factor
    v1 = math.sinh(2 * z) ** 2 / 2.0 + upsilon_minus(a, fam.zeta)
    shr, shz, chr_, chz = math.sinh(r), math.sinh(z), math.cosh(r), math.cosh(z)
    cross = 2.0 * shr * shz * (shr * shz - chr_ * chz * math.cos(fam.zeta.phase - fam.xi.phase))
    return v0, v1, ups + shr ** 2 + shz ** 2 + cross


def _require_sum_info(f_ss: float, f_dd: float) -> None:
    if f_ss <= 1e-12 * max(1.0, abs(f_dd)):
        raise VanishingInformationError(
            f"sum-mode information vanishes (f_ss={f_ss:.3e}); two-parameter QFI undefined"
        )


def family_qfi(fam: StateFamily, bs: BeamSplitter, mode: QfiMode) -> float:
    """Closed-form QFI of a state family for the given scenario."""
    mode = QfiMode(mode)
    t2, r2, tr = bs.t_squared, 1.0 - bs.t_squared, bs.tr
    x = tr * tr
    bal = t2 - r2

    if isinstance(fam, SingleCoherent):
        n = fam.alpha.magnitude ** 2
        if mode is QfiMode.TWO_PARAM:
            _require_sum_info(n, n)
            return 4.0 * x * n
        if mode is QfiMode.ASYM_SINGLE:
            return 4.0 * t2 * n
        return n

    if isinstance(fam, DualCoherent):
        a2, b2 = fam.alpha.magnitude ** 2, fam.beta.magnitude ** 2
        ab = fam.alpha.magnitude * fam.beta.magnitude
        s = math.sin(fam.delta_theta)
        total = a2 + b2
        if mode is QfiMode.TWO_PARAM:
            _require_sum_info(total, total)
            return (
                4.0 * x * total
                - 16.0 * x * ab * ab * s * s / total
                + 4.0 * bal ** 2 * ab * ab / total
                - 8.0 * tr * bal * ab * (a2 - b2) / total * s
            )
        if mode is QfiMode.ASYM_SINGLE:
            return 4.0 * t2 * a2 + 4.0 * r2 * b2 + 8.0 * tr * ab * s
        return total

    if isinstance(fam, SQUEEZED_FAMILIES):
        v0, v1, c = _squeezed_parts(fam)
        f_ss = v0 + v1
        if mode is QfiMode.TWO_PARAM:
            _require_sum_info(f_ss, f_ss)
            return 4.0 * x * c + bal ** 2 * 4.0 * v0 * v1 / f_ss
        if mode is QfiMode.ASYM_SINGLE:
            return 4.0 * (t2 * t2 * v1 + r2 * r2 * v0 + x * c)
        return f_ss + 2.0 * x * (c - f_ss)

    raise TypeError(f"unknown state family {type(fam).__name__}")


def family_qfi_generic(fam: StateFamily, bs: BeamSplitter, mode: QfiMode) -> float:
    """The same quantity routed through the general moment-based expressions."""
    m0, m1 = family_moments(fam)
    return generic_qfi(m0, m1, bs, mode)


# -- optimal transmission --------------------------------------------------------

@dataclass(frozen=True)
class TOptCoefficients:
    """Coefficients of ``F^(i) = 4 (a_f |T|^4 + b_f |R|^4 + c_f |TR|^2)``."""

    a_f: float
    b_f: float
    c_f: float


def t_opt_coefficients(fam: StateFamily) -> TOptCoefficients:
    if isinstance(fam, SingleCoherent):
        n = fam.alpha.magnitude ** 2
        return TOptCoefficients(n, 0.0, n)
    if isinstance(fam, SQUEEZED_FAMILIES):
        v0, v1, c = _squeezed_parts(fam)
        return TOptCoefficients(v1, v0, c)
    raise DomainError(
        f"{type(fam).__name__} has a |TR| cross term; use dual_coherent_t_opt instead"
    )


def generic_t_opt(c: TOptCoefficients) -> Optional[float]:
    """Interior maximizer ``t`` of ``a|T|^4 + b|R|^4 + c|TR|^2``, or ``None``.

    ``None`` means there is no interior maximum: the quadratic in ``|T|^2`` is
    linear, convex (the stationary point is a minimum) or peaks outside
    ``[0, 1]``.  The caller then picks the better endpoint.
    """
    curvature = c.c_f - c.a_f - c.b_f
    if curvature <= 0.0:
        return None
    u = (c.c_f - 2.0 * c.b_f) / (2.0 * curvature)
    if not 0.0 <= u <= 1.0:
        return None
    return math.sqrt(u)


def max_asym_qfi(c: TOptCoefficients) -> float:
    """``F^(i)`` at the interior optimum returned by :func:`generic_t_opt`."""
    curvature = c.c_f - c.a_f - c.b_f
    if curvature <= 0.0:
        raise SingularFormulaError("no interior maximum: F^(i) is not concave in |T|^2")
    return (c.c_f ** 2 - 4.0 * c.a_f * c.b_f) / curvature


def best_asym_t(fam: StateFamily) -> float:
    """``t`` maximizing ``F^(i)`` including the endpoints ``t = 0`` and ``t = 1``."""
    if isinstance(fam, DualCoherent):
        return dual_coherent_t_opt(fam.alpha, fam.beta, QfiMode.ASYM_SINGLE)
    c = t_opt_coefficients(fam)
    interior = generic_t_opt(c)
    if interior is not None:
        return interior
    # F^(i)/4 equals a_f at t = 1 and b_f at t = 0
    return 1.0 if c.a_f >= c.b_f else 0.0


def dual_coherent_t_opt(alpha: ComplexAmplitude, beta: ComplexAmplitude, mode: QfiMode) -> float:
    """Optimal ``t`` of the first beam splitter for two coherent inputs."""
    mode = QfiMode(mode)
    a, b = alpha.magnitude, beta.magnitude
    if a <= 0.0 or b <= 0.0:
        raise DomainError("both coherent amplitudes must be nonzero")
    s = math.sin(alpha.phase - beta.phase)
    if abs(s) < 1e-15:
        s = 0.0

    if mode is QfiMode.TWO_PARAM:
        w = b / a
        gap = w * w - 1.0
        if abs(gap) < 1e-15:
            if s == 0.0:
                raise SingularFormulaError(
                    "equal amplitudes with sin(delta theta) = 0: F^(2p) is flat in t"
                )
            # F^(2p) = 2|a|^2 (1 - s^2 (1 - (t^2-r^2)^2)) peaks at the boundary
            return 1.0
        sign = math.copysign(1.0, gap)
        u = 0.5 + sign * w * s / math.sqrt(gap * gap + 4.0 * w * w * s * s)
        return math.sqrt(min(1.0, max(0.0, u)))

    if mode is QfiMode.ASYM_SINGLE:
        if s <= 0.0:
            return 1.0 if a > b else 0.0
        d = a * a - b * b
        p = a * b
        u = 0.5 + d / (2.0 * math.sqrt(d * d + 4.0 * p * p * s * s))
        return math.sqrt(u)

    raise DomainError("F^(ii) of two coherent inputs is independent of t")


# -- existence of a stationary T for coherent + squeezed vacuum ---------------------

@dataclass(frozen=True)
class StationaryInterval:
    """Range of ``|alpha|^2`` with an interior stationary ``t``; ``upper`` may be ``inf``.

    ``kind`` is ``"maximum"`` or ``"minimum"`` and tells which extremum of
    ``F^(i)`` the stationary point is.
    """

    lower: float
    upper: float
    kind: str

    def __contains__(self, alpha_sq: float) -> bool:
        return self.lower <= alpha_sq <= self.upper


def existence_limits(r: float) -> Tuple[float, float]:
    """``(alpha_lim1^2, alpha_lim2^2)`` bounding where a stationary ``t`` exists."""
    if r <= 0.0:
        raise DomainError("existence limits are meaningless without squeezing (r = 0)")
    e2r = math.exp(2 * r)
    lim1 = (math.cosh(2 * r) - 1.0) * (math.cosh(2 * r) + 0.5) / e2r
    denom = abs(2.0 - e2r)
    lim2 = math.inf if denom == 0.0 else math.sinh(r) ** 2 / denom
    return lim1, lim2


def coh_sqz_existence(alpha: ComplexAmplitude, xi: SqueezeParam) -> Tuple[StationaryInterval, ...]:
    """Intervals of ``|alpha|^2`` where ``F^(i)`` has a stationary point in ``0 < t < 1``.

    Only the squeeze factor enters; the amplitude fixes the phase matching,
    which must hold.  For ``r > ln2/2`` a maximum exists for
    ``|alpha|^2 >= lim1``.  Below that the two limits bracket either a
    maximum (``lim1 < lim2``) or a minimum (``lim2 < lim1``).
    """
    if angle_gap(2.0 * alpha.phase - xi.phase, 0.0) > PMC_TOL:
        raise DomainError("existence limits assume the phase matching 2 theta_alpha - theta = 0")
    r = xi.factor
    lim1, lim2 = existence_limits(r)
    if math.exp(2 * r) >= 2.0:
        return (StationaryInterval(lim1, math.inf, "maximum"),)
    if lim1 <= lim2:
        return (StationaryInterval(lim1, lim2, "maximum"),)
    return (StationaryInterval(lim2, lim1, "minimum"),)


# -- high-amplitude approximations and balanced-case predicates ------------------------

def high_alpha_t_opt(fam: StateFamily) -> float:
    """Large-``|alpha|`` approximation of the ``F^(i)`` optimal ``t``, capped at 1."""
    if not isinstance(fam, SQUEEZED_FAMILIES):
        raise DomainError("high-amplitude approximation exists only for the squeezed families")
    if not fam.pmc_satisfied():
        raise DomainError("high-amplitude approximation assumes the optimal phase matching")
    r = fam.xi.factor
    if isinstance(fam, CohPlusSqzVac):
        if r == 0.0:
            raise SingularFormulaError("high-amplitude t_opt diverges without squeezing")
        value = math.exp(r) / math.sqrt(2.0 * (math.exp(2 * r) - 1.0))
    else:
        z = fam.zeta.factor
        gap = abs(1.0 - math.exp(2 * (z - r)))
        if gap == 0.0:
            raise SingularFormulaError("high-amplitude t_opt is singular for z = r")
        value = math.sqrt(1.0 / (2.0 * gap))
    return min(value, 1.0)


@dataclass(frozen=True)
class BalancedPredicates:
    two_param_balanced: bool
    sym_balanced: bool


def balanced_optimality_predicates(fam: StateFamily) -> BalancedPredicates:
    """Whether ``F^(2p)`` and ``F^(ii)`` peak at the balanced beam splitter.

    Both QFIs are linear in ``|TR|^2`` for the squeezed families, so each
    predicate is the sign of that slope.
    """
    if not isinstance(fam, SQUEEZED_FAMILIES):
        raise DomainError("balanced-case predicates are defined for the squeezed families")
    v0, v1, c = _squeezed_parts(fam)
    f_ss = v0 + v1
    two_param = f_ss > 0.0 and c - 4.0 * v0 * v1 / f_ss > 0.0
    return BalancedPredicates(two_param_balanced=two_param, sym_balanced=c - f_ss > 0.0)


def balanced_sym_qfi(fam: StateFamily) -> float:
    """``F^(ii)`` at the balanced beam splitter, ``(F_ss + C)/2``."""
    v0, v1, c = _squeezed_parts(fam)
    return (v0 + v1 + c) / 2.0
