"""Fisher matrix, the three QFI scenarios and Cramer-Rao bounds.

Beam splitter convention: output modes are ``a3 = R a0 + T a1`` and
``a2 = T a0 + R a1`` with ``T = t`` real and ``R = i sqrt(1 - t^2)``, so that
``i T* R = -|T R|`` holds by construction.

Phase generators: the sum and difference phases couple to
``(n2 + n3)/2`` and ``(n2 - n3)/2``.  Hence ``f_ss = Var(n2 + n3)``,
``f_dd = Var(n2 - n3)`` and ``f_sd = Var(n2) - Var(n3)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, VanishingInformationError
from .moments import ModeMoments


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter parametrized by the amplitude transmission ``t``."""

    t: float

    def __post_init__(self):
        if not (0.0 <= self.t <= 1.0) or math.isnan(self.t):
            raise DomainError(f"transmission amplitude must lie in [0, 1], got {self.t}")
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def balanced(cls) -> "BeamSplitter":
        return cls(1.0 / math.sqrt(2.0))

    @classmethod
    def from_t_squared(cls, t_squared: float) -> "BeamSplitter":
        if not (0.0 <= t_squared <= 1.0):
            raise DomainError(f"|T|^2 must lie in [0, 1], got {t_squared}")
        return cls(math.sqrt(t_squared))

    @property
    def r(self) -> float:
        """``|R|``."""
        return math.sqrt(max(0.0, 1.0 - self.t * self.t))

    @property
    def T(self) -> float:
        return self.t

    @property
    def R(self) -> complex:
        return 1j * self.r

    @property
    def t_squared(self) -> float:
        return self.t * self.t

    @property
    def tr(self) -> float:
        """``|T R|``."""
        return self.t * self.r


def make_beam_splitter(t: float) -> BeamSplitter:
    return BeamSplitter(t)


@dataclass(frozen=True)
class FisherMatrix:
    f_ss: float
    f_dd: float
    f_sd: float

    @property
    def f_ds(self) -> float:
        return self.f_sd


class QfiMode(enum.Enum):
    TWO_PARAM = "2p"
    ASYM_SINGLE = "i"
    SYM_SINGLE = "ii"


def _cross_terms(m0: ModeMoments, m1: ModeMoments):
    """Products of port moments shared by every general-T expression."""
    a0, a1 = m0.mean_a, m1.mean_a
    a1c = a1.conjugate()
    c0, c1 = m0.cov_na, m1.cov_na
    # <n0><n1> - |<a0>|^2 |<a1>|^2
    nn = m0.mean_n * m1.mean_n - abs(a0) ** 2 * abs(a1) ** 2
    # <a0^2><a1†^2> - <a0>^2 <a1†>^2
    pair = m0.mean_a2 * m1.mean_a2.conjugate() - a0 * a0 * a1c * a1c
    # Var of i(a0 a1† - a0† a1)
    var_k = m0.mean_n + m1.mean_n + 2.0 * nn - 2.0 * pair.real
    return a0, a1c, c0, c1, var_k


def fisher_matrix(m0: ModeMoments, m1: ModeMoments, bs: BeamSplitter) -> FisherMatrix:
    """Fisher matrix elements for separable pure inputs at arbitrary ``|T|``."""
    t2, r2, tr = bs.t_squared, 1.0 - bs.t_squared, bs.tr
    bal = t2 - r2
    a0, a1c, c0, c1, var_k = _cross_terms(m0, m1)

    f_ss = m0.var_n + m1.var_n
    f_dd = (
        bal ** 2 * f_ss
        + 4.0 * t2 * r2 * var_k
        - 8.0 * tr * bal * (c0.conjugate() * a1c.conjugate() + a0 * c1.conjugate()).imag
    )
    f_sd = bal * (m0.var_n - m1.var_n) + 4.0 * tr * (
        a0 * a1c + c0 * a1c + a0 * c1.conjugate()
    ).imag
    return FisherMatrix(f_ss=f_ss, f_dd=f_dd, f_sd=f_sd)


def two_param_qfi(fm: FisherMatrix) -> float:
    """``1 / (F^-1)_dd``; the sum phase is treated as a nuisance parameter."""
    eps = 1e-12 * max(1.0, abs(fm.f_dd))
    if fm.f_ss <= eps:
        raise VanishingInformationError(
            f"sum-mode information vanishes (f_ss={fm.f_ss:.3e}); two-parameter QFI undefined"
        )
    return fm.f_dd - fm.f_sd * fm.f_sd / fm.f_ss


def _asym_single(m0: ModeMoments, m1: ModeMoments, bs: BeamSplitter) -> float:
    t2, r2, tr = bs.t_squared, 1.0 - bs.t_squared, bs.tr
    a0, a1c, c0, c1, var_k = _cross_terms(m0, m1)
    return (
        4.0 * r2 * r2 * m0.var_n
        + 4.0 * t2 * t2 * m1.var_n
        + 4.0 * t2 * r2 * var_k
        - 8.0 * tr * (a0 * a1c).imag
        - 16.0 * tr * r2 * (c0 * a1c).imag
        - 16.0 * tr * t2 * (a0 * c1.conjugate()).imag
    )


def _sym_single(m0: ModeMoments, m1: ModeMoments, bs: BeamSplitter) -> float:
    t2, r2 = bs.t_squared, 1.0 - bs.t_squared
    tr2 = t2 * r2
    a0, a1 = m0.mean_a, m1.mean_a
    a0c, a1c = a0.conjugate(), a1.conjugate()
    c0, c1 = m0.cov_na, m1.cov_na
    ts_r = bs.T * bs.R  # T* R, purely imaginary
    nn = m0.mean_n * m1.mean_n - abs(a0) ** 2 * abs(a1) ** 2
    pairs = (
        m0.mean_a2 * m1.mean_a2.conjugate()
        + m0.mean_a2.conjugate() * m1.mean_a2
        - a0 * a0 * a1c * a1c
        - a0c * a0c * a1 * a1
    )
    k = 2.0 * ts_r * (t2 - r2)
    value = (
        (t2 * t2 + r2 * r2) * (m0.var_n + m1.var_n)
        + 2.0 * tr2 * (m0.mean_n + m1.mean_n + 2.0 * nn)
        - 2.0 * tr2 * pairs
        + k * c0.conjugate() * a1
        - k * c0 * a1c
        + k * a0 * c1.conjugate()
        - k * a0c * c1
    )
    return value.real


def qfi(m0: ModeMoments, m1: ModeMoments, bs: BeamSplitter, mode: QfiMode) -> float:
    """Quantum Fisher information for the requested phase-estimation scenario.

    ``TWO_PARAM``: difference phase with unknown sum phase.
    ``ASYM_SINGLE``: a single phase ``exp(-i phi n3)`` in arm 3, i.e. ``4 Var(n3)``.
    ``SYM_SINGLE``: ``+/- phi/2`` in arms 3 and 2, defined as ``Var(n2) + Var(n3)``.
    """
    mode = QfiMode(mode)
    if mode is QfiMode.TWO_PARAM:
        return two_param_qfi(fisher_matrix(m0, m1, bs))
    if mode is QfiMode.ASYM_SINGLE:
        return _asym_single(m0, m1, bs)
    return _sym_single(m0, m1, bs)


def qcrb(f: float) -> float:
    """Cramer-Rao bound ``1/sqrt(f)`` for a single shot."""
    if not f > 0.0:
        raise VanishingInformationError(f"no information: Fisher information {f} is not positive")
    return 1.0 / math.sqrt(f)
