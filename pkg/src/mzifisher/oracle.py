"""Brute-force truncated Fock-space simulator used as independent ground truth.

Single-mode states are prepared by dense matrix exponentials of the
truncated squeeze and displacement generators.  Two-mode beam splitters act
block by block on subspaces of fixed total photon number, so they are exact
unitaries on the truncated space.  Two-mode amplitudes live on a square grid
with a per-mode cutoff of ``2*nmax`` so that no photons are lost when a beam
splitter moves them all into one mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from .detection import DetectorConfig, DetectorKind, InterferometerConfig
from .errors import DomainError, UnderTruncationError
from .fisher import BeamSplitter, QfiMode
from .moments import ModeMoments, PortState

TAIL_LIMIT = 1e-10
FD_STEP = 1e-5


@dataclass(frozen=True)
class FockVector:
    """Amplitudes in the number basis; 1-D for one mode, 2-D ``[n0, n1]`` for two."""

    amplitudes: np.ndarray
    nmax: int

    @property
    def modes(self) -> int:
        return self.amplitudes.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def tail_mass(amplitudes: np.ndarray) -> float:
    """Probability in the top 10% of number states (at least one state)."""
    n = amplitudes.shape[0]
    k = max(1, int(math.ceil(0.1 * n)))
    return float(np.sum(np.abs(amplitudes[n - k:]) ** 2))


def build_state(port: PortState, nmax: int) -> FockVector:
    """Truncated ``D(alpha) S(chi)|0>`` with squeezing applied first.

    The exponentials are taken on a padded space so that the truncation
    edge of the generator does not reach the retained amplitudes.
    """
    if nmax < 1:
        raise DomainError(f"nmax must be >= 1, got {nmax}")
    dim = nmax + 1 + max(40, nmax)
    a = annihilation(dim)
    ad = a.conj().T
    psi = np.zeros(dim, dtype=complex)
    psi[0] = 1.0
    chi = port.squeeze.value
    if chi != 0:
        psi = expm(0.5 * (np.conj(chi) * (a @ a) - chi * (ad @ ad))) @ psi
    alpha = port.amplitude.value
    if alpha != 0:
        psi = expm(alpha * ad - np.conj(alpha) * a) @ psi
    kept = psi[: nmax + 1]
    lost = float(np.sum(np.abs(psi[nmax + 1:]) ** 2))
    tail = tail_mass(kept) + lost
    if tail >= TAIL_LIMIT:
        raise UnderTruncationError(tail, nmax)
    return FockVector(kept / np.linalg.norm(kept), nmax)


def adequate_nmax(*ports: PortState, start: int = 60, step: int = 20, limit: int = 400) -> int:
    """Smallest cutoff ``start + k*step`` at which every port passes the tail check."""
    nmax = start
    while True:
        try:
            for port in ports:
                build_state(port, nmax)
            return nmax
        except UnderTruncationError:
            if nmax + step > limit:
                raise
            nmax += step


def numeric_moments(v: FockVector) -> ModeMoments:
    """The five moments by direct contraction with ladder-operator matrix elements."""
    if v.modes != 1:
        raise DomainError("numeric_moments expects a single-mode vector")
    c = v.amplitudes
    n = np.arange(c.size, dtype=float)
    p = np.abs(c) ** 2
    sq = np.sqrt(n[1:])
    a_c = sq * c[1:]  # (a psi)_k for k = 0..nmax-1
    mean_a = complex(np.vdot(c[:-1], a_c))
    a2_c = sq[:-1] * a_c[1:]
    mean_a2 = complex(np.vdot(c[:-2], a2_c))
    mean_n = float(p @ n)
    var_n = float(p @ n ** 2) - mean_n ** 2
    # <n a> = sum_k k * conj(c_k) (a psi)_k
    mean_na = complex(np.vdot(c[:-1], n[:-1] * a_c))
    return ModeMoments(
        mean_a=mean_a,
        mean_a2=mean_a2,
        mean_n=mean_n,
        var_n=var_n,
        cov_na=mean_na - mean_n * mean_a,
    )


# -- two-mode machinery --------------------------------------------------------------

@lru_cache(maxsize=None)
def _hopping_eigensystem(total: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of ``a0† a1 + a1† a0`` restricted to ``n0 + n1 = total``."""
    k = np.arange(total)
    off = np.sqrt((k + 1.0) * (total - k))
    h = np.diag(off, -1) + np.diag(off, 1)
    return np.linalg.eigh(h)


def beam_splitter_block(t: float, total: int) -> np.ndarray:
    """``exp(theta (i a0† a1 + i a1† a0))`` on the block ``n0 + n1 = total``; basis index ``n0``.

    With ``theta = arccos t`` the Heisenberg action is ``a0 -> T a0 + R a1``
    and ``a1 -> R a0 + T a1`` with ``R = i sqrt(1 - t^2)``.
    """
    theta = math.acos(min(1.0, max(0.0, t)))
    w, v = _hopping_eigensystem(total)
    return (v * np.exp(1j * theta * w)) @ v.T


def beam_splitter_unitary(t: float, nmax: int) -> Tuple[np.ndarray, list]:
    """Dense unitary on all two-mode states with ``n0 + n1 <= nmax``.

    Returns the matrix and the basis as a list of ``(n0, n1)`` pairs.
    """
    basis = [(n0, total - n0) for total in range(nmax + 1) for n0 in range(total + 1)]
    u = np.zeros((len(basis), len(basis)), dtype=complex)
    start = 0
    for total in range(nmax + 1):
        size = total + 1
        u[start:start + size, start:start + size] = beam_splitter_block(t, total)
        start += size
    return u, basis


def _apply_beam_splitter(grid: np.ndarray, t: float) -> np.ndarray:
    """Apply the beam splitter to a square two-mode grid, block by total photon number."""
    size = grid.shape[0]
    out = np.zeros_like(grid)
    n0 = np.arange(size)
    theta = math.acos(min(1.0, max(0.0, t)))
    for total in range(size):
        k = n0[: total + 1]
        w, v = _hopping_eigensystem(total)
        out[k, total - k] = v @ (np.exp(1j * theta * w) * (v.T @ grid[k, total - k]))
    return out


def product_state(p0: PortState, p1: PortState, nmax: int) -> np.ndarray:
    """Product amplitudes on a ``(2 nmax + 1)^2`` grid; index order ``[n0, n1]``."""
    c0 = build_state(p0, nmax).amplitudes
    c1 = build_state(p1, nmax).amplitudes
    grid = np.zeros((2 * nmax + 1, 2 * nmax + 1), dtype=complex)
    grid[: nmax + 1, : nmax + 1] = np.outer(c0, c1)
    return grid


def _apply_phases(grid: np.ndarray, phi_slot0: float, phi_slot1: float) -> np.ndarray:
    n = np.arange(grid.shape[0])
    return grid * np.exp(-1j * phi_slot0 * n)[:, None] * np.exp(-1j * phi_slot1 * n)[None, :]


@dataclass(frozen=True)
class NumericFisher:
    """Generator variances after the first beam splitter (slot 0 is arm 2, slot 1 is arm 3)."""

    var_n2: float
    var_n3: float
    var_sum: float
    var_diff: float

    @property
    def f_ss(self) -> float:
        return self.var_sum

    @property
    def f_dd(self) -> float:
        return self.var_diff

    @property
    def f_sd(self) -> float:
        return self.var_n2 - self.var_n3

    @property
    def asym_single(self) -> float:
        return 4.0 * self.var_n3

    @property
    def two_param(self) -> float:
        return self.var_diff - self.f_sd ** 2 / self.var_sum

    @property
    def sym_single(self) -> float:
        """``Var n2 + Var n3``, the definition used throughout this package."""
        return self.var_n2 + self.var_n3

    @property
    def sym_generator(self) -> float:
        """``Var(n3 - n2)``, the variance of the actual ``+/- phi/2`` generator."""
        return self.var_diff


def _variance(p: np.ndarray, values: np.ndarray) -> float:
    mean = float(np.sum(p * values))
    return float(np.sum(p * values ** 2)) - mean ** 2


def numeric_fisher(p0: PortState, p1: PortState, bs: BeamSplitter, nmax: int) -> NumericFisher:
    grid = _apply_beam_splitter(product_state(p0, p1, nmax), bs.t)
    p = np.abs(grid) ** 2
    n = np.arange(grid.shape[0], dtype=float)
    n2, n3 = n[:, None], n[None, :]
    return NumericFisher(
        var_n2=_variance(p, n2 + 0 * n3),
        var_n3=_variance(p, n3 + 0 * n2),
        var_sum=_variance(p, n2 + n3),
        var_diff=_variance(p, n2 - n3),
    )


def numeric_qfi(p0: PortState, p1: PortState, bs: BeamSplitter, mode: QfiMode, nmax: int) -> float:
    nf = numeric_fisher(p0, p1, bs, nmax)
    mode = QfiMode(mode)
    if mode is QfiMode.TWO_PARAM:
        return nf.two_param
    if mode is QfiMode.ASYM_SINGLE:
        return nf.asym_single
    return nf.sym_single


# -- detection -------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionStats:
    mean: float
    variance: float
    derivative: float

    @property
    def delta_phi(self) -> float:
        return math.inf if self.derivative == 0.0 else math.sqrt(max(self.variance, 0.0)) / abs(self.derivative)


def _output_grid(grid: np.ndarray, cfg: InterferometerConfig, phi: float) -> np.ndarray:
    """State at outputs 4 (slot 0) and 5 (slot 1) for internal phase ``phi``."""
    phi1, phi2 = cfg.scenario.phases(phi)
    inner = _apply_phases(_apply_beam_splitter(grid, cfg.bs1.t), phi2, phi1)
    return _apply_beam_splitter(inner, cfg.bs2.t)


def _measure(out: np.ndarray, det: DetectorConfig) -> Tuple[float, float]:
    n = np.arange(out.shape[0], dtype=float)
    p = np.abs(out) ** 2
    if det.kind is DetectorKind.DIFFERENCE_INTENSITY:
        nd = n[:, None] - n[None, :]
        mean = float(np.sum(p * nd))
        return mean, float(np.sum(p * nd ** 2)) - mean ** 2
    sq = np.sqrt(n[1:])[:, None]
    a_out = sq * out[1:, :]
    mean_a = complex(np.vdot(out[:-1, :], a_out))
    mean_a2 = complex(np.vdot(out[:-2, :], np.sqrt(n[1:-1])[:, None] * a_out[1:, :]))
    mean_n = float(np.sum(p * n[:, None]))
    lo = complex(math.cos(det.phi_l), -math.sin(det.phi_l))
    mean_x = (lo * mean_a).real
    second = (2.0 * (lo * lo * mean_a2).real + 2.0 * mean_n + 1.0) / 4.0
    return mean_x, second - mean_x ** 2


def numeric_detection(
    p0: PortState,
    p1: PortState,
    cfg: InterferometerConfig,
    det: DetectorConfig,
    phi: float,
    nmax: int,
    step: float = FD_STEP,
) -> DetectionStats:
    """Mean, variance and central-difference slope of the detector signal."""
    grid = product_state(p0, p1, nmax)
    mean, variance = _measure(_output_grid(grid, cfg, phi), det)
    plus, _ = _measure(_output_grid(grid, cfg, phi + step), det)
    minus, _ = _measure(_output_grid(grid, cfg, phi - step), det)
    return DetectionStats(mean, variance, (plus - minus) / (2.0 * step))
