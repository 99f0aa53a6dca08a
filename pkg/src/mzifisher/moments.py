"""Single-mode moments of displaced squeezed vacua ``D(alpha) S(chi) |0>``.

Every Fisher and detection formula in this package consumes a port only
through five expectation values (see :class:`ModeMoments`).  This module
computes them in closed form for vacuum, coherent, squeezed-vacuum and
squeezed-coherent ports.

Conventions: the squeeze operator is ``S(chi) = exp[(chi* a^2 - chi a†^2)/2]``
with ``chi = s e^{i vartheta}``, and displacement acts after squeezing, so
``<a> = alpha`` exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def normalize_phase(phase: float) -> float:
    """Map an angle in radians into ``[0, 2*pi)``."""
    wrapped = math.fmod(float(phase), TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod can return exactly 2*pi after the shift for tiny negative inputs
    return 0.0 if wrapped >= TWO_PI else wrapped


@dataclass(frozen=True)
class ComplexAmplitude:
    """A coherent amplitude ``magnitude * exp(i*phase)``."""

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.magnitude) or self.magnitude < 0.0:
            raise DomainError(f"amplitude magnitude must be finite and >= 0, got {self.magnitude}")
        if not math.isfinite(self.phase):
            raise DomainError(f"amplitude phase must be finite, got {self.phase}")
        object.__setattr__(self, "magnitude", float(self.magnitude))
        object.__setattr__(self, "phase", normalize_phase(self.phase))

    @property
    def value(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexAmplitude":
        z = complex(z)
        return cls(abs(z), math.atan2(z.imag, z.real) if z != 0 else 0.0)


@dataclass(frozen=True)
class SqueezeParam:
    """A squeezing parameter ``factor * exp(i*phase)``; ``factor`` is the squeezing factor."""

    factor: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.factor) or self.factor < 0.0:
            raise DomainError(f"squeezing factor must be finite and >= 0, got {self.factor}")
        if not math.isfinite(self.phase):
            raise DomainError(f"squeeze phase must be finite, got {self.phase}")
        object.__setattr__(self, "factor", float(self.factor))
        object.__setattr__(self, "phase", normalize_phase(self.phase))

    @property
    def value(self) -> complex:
        return self.factor * complex(math.cos(self.phase), math.sin(self.phase))


# -- port states ------------------------------------------------------------

@dataclass(frozen=True)
class Vacuum:
    @property
    def amplitude(self) -> ComplexAmplitude:
        return ComplexAmplitude(0.0)

    @property
    def squeeze(self) -> SqueezeParam:
        return SqueezeParam(0.0)


@dataclass(frozen=True)
class Coherent:
    amplitude: ComplexAmplitude

    @property
    def squeeze(self) -> SqueezeParam:
        return SqueezeParam(0.0)


@dataclass(frozen=True)
class SqueezedVacuum:
    squeeze: SqueezeParam

    @property
    def amplitude(self) -> ComplexAmplitude:
        return ComplexAmplitude(0.0)


@dataclass(frozen=True)
class SqueezedCoherent:
    amplitude: ComplexAmplitude
    squeeze: SqueezeParam


PortState = Union[Vacuum, Coherent, SqueezedVacuum, SqueezedCoherent]


def vacuum() -> Vacuum:
    return Vacuum()


def coherent(magnitude: float, phase: float = 0.0) -> PortState:
    """Coherent port; a zero amplitude is returned as :class:`Vacuum`."""
    amp = ComplexAmplitude(magnitude, phase)
    return Vacuum() if amp.magnitude == 0.0 else Coherent(amp)


def squeezed_vacuum(factor: float, phase: float = 0.0) -> PortState:
    sq = SqueezeParam(factor, phase)
    return Vacuum() if sq.factor == 0.0 else SqueezedVacuum(sq)


def squeezed_coherent(magnitude: float, phase: float, factor: float, squeeze_phase: float) -> PortState:
    """Displaced squeezed vacuum, normalized to the simplest matching variant."""
    amp = ComplexAmplitude(magnitude, phase)
    sq = SqueezeParam(factor, squeeze_phase)
    if sq.factor == 0.0:
        return coherent(amp.magnitude, amp.phase)
    if amp.magnitude == 0.0:
        return SqueezedVacuum(sq)
    return SqueezedCoherent(amp, sq)


def port_state(amplitude: ComplexAmplitude | None = None, squeeze: SqueezeParam | None = None) -> PortState:
    amplitude = amplitude or ComplexAmplitude(0.0)
    squeeze = squeeze or SqueezeParam(0.0)
    return squeezed_coherent(amplitude.magnitude, amplitude.phase, squeeze.factor, squeeze.phase)


# -- moments ----------------------------------------------------------------

@dataclass(frozen=True)
class ModeMoments:
    """The five single-mode expectation values the Fisher formulas consume.

    ``cov_na`` is ``<n a> - <n><a>``; its adjoint counterpart
    ``<a† n> - <a†><n>`` is :attr:`cov_adag_n` (the complex conjugate).
    """

    mean_a: complex
    mean_a2: complex
    mean_n: float
    var_n: float
    cov_na: complex

    @property
    def var_a(self) -> complex:
        """``<a^2> - <a>^2``."""
        return self.mean_a2 - self.mean_a ** 2

    @property
    def thermal_excess(self) -> float:
        """``<n> - |<a>|^2``, the photon number not carried by the mean field."""
        return self.mean_n - abs(self.mean_a) ** 2

    @property
    def cov_adag_n(self) -> complex:
        return self.cov_na.conjugate()


def upsilon(gamma: ComplexAmplitude, chi: SqueezeParam, sign: int) -> float:
    """``|g|^2 (cosh 2s +/- sinh 2s cos(2 theta_g - vartheta))`` for ``sign`` = +1 / -1."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    s = chi.factor
    return gamma.magnitude ** 2 * (
        math.cosh(2 * s) + sign * math.sinh(2 * s) * math.cos(2 * gamma.phase - chi.phase)
    )


def upsilon_plus(gamma: ComplexAmplitude, chi: SqueezeParam) -> float:
    return upsilon(gamma, chi, +1)


def upsilon_minus(gamma: ComplexAmplitude, chi: SqueezeParam) -> float:
    return upsilon(gamma, chi, -1)


def moments_of(port: PortState) -> ModeMoments:
    """Closed-form moments of ``D(alpha) S(chi) |0>``.

    The third central moments of a Gaussian state vanish, which fixes
    ``cov_na = alpha sinh^2 s - alpha* e^{i vartheta} sinh s cosh s``.
    """
    amp = port.amplitude
    sq = port.squeeze
    alpha = amp.value
    s = sq.factor
    e_sq = complex(math.cos(sq.phase), math.sin(sq.phase))
    sh, ch = math.sinh(s), math.cosh(s)
    return ModeMoments(
        mean_a=alpha,
        mean_a2=alpha * alpha - e_sq * sh * ch,
        mean_n=amp.magnitude ** 2 + sh * sh,
        var_n=upsilon_minus(amp, sq) + math.sinh(2 * s) ** 2 / 2.0,
        cov_na=alpha * sh * sh - alpha.conjugate() * e_sq * sh * ch,
    )
