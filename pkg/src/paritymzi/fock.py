"""Brute-force photon-number-basis oracle for one and two modes.

Independent of the Gaussian machinery: states are explicit amplitude arrays,
beam splitters act block by block on fixed total photon number, and
observables are direct weighted sums. Two-mode states only keep components
with ``n_a + n_b < cutoff`` so that beam splitters never push amplitude out of
the basis; whatever the cutoff discards is tracked as ``leak``.
"""
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import DomainError, TruncationError, TruncationWarning, UsageError

LEAK_TOLERANCE = 1e-4
ORACLE_LEAK = 1e-8
BS_ANGLE = math.pi / 4


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockVector:
    """Single-mode state truncated to ``|0>, ..., |cutoff - 1>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.ndim != 1 or amps.size < 1:
            raise UsageError("amplitudes must be a non-empty vector")
        if self._norm2(amps) > 1 + 1e-10:
            raise DomainError("state norm exceeds one")
        object.__setattr__(self, "amplitudes", amps)

    @staticmethod
    def _norm2(amps):
        return float(np.sum(np.abs(amps) ** 2))

    @property
    def cutoff(self):
        return self.amplitudes.size

    @property
    def leak(self):
        return max(0.0, 1.0 - self._norm2(self.amplitudes))

    def probabilities(self):
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    def parity(self):
        p = self.probabilities()
        return float(p[0::2].sum() - p[1::2].sum())

    def mean_number(self):
        p = self.probabilities()
        return float(np.arange(p.size) @ p)


@dataclass(frozen=True)
class TwoModeFock:
    """Two-mode state; ``amplitudes[n_a, n_b]`` with support on ``n_a + n_b < cutoff``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise UsageError("amplitudes must be a square matrix")
        n = np.add.outer(np.arange(amps.shape[0]), np.arange(amps.shape[0]))
        if np.any(amps[n >= amps.shape[0]] != 0):
            raise UsageError("support must satisfy n_a + n_b < cutoff")
        if np.sum(np.abs(amps) ** 2) > 1 + 1e-10:
            raise DomainError("state norm exceeds one")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def product(cls, a, b):
        """``a (x) b``; the cutoff is chosen so no product component is dropped."""
        cutoff = a.cutoff + b.cutoff - 1
        amps = np.zeros((cutoff, cutoff), dtype=complex)
        amps[: a.cutoff, : b.cutoff] = np.outer(a.amplitudes, b.amplitudes)
        return cls(amps)

    @classmethod
    def basis(cls, n_a, n_b, cutoff=None):
        cutoff = n_a + n_b + 1 if cutoff is None else cutoff
        amps = np.zeros((cutoff, cutoff), dtype=complex)
        amps[n_a, n_b] = 1.0
        return cls(amps)

    @property
    def cutoff(self):
        return self.amplitudes.shape[0]

    @property
    def norm2(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def leak(self):
        return max(0.0, 1.0 - self.norm2)

    def total_number_distribution(self):
        """Unnormalised weight of each total photon number sector."""
        p = np.abs(self.amplitudes) ** 2
        total = np.add.outer(np.arange(self.cutoff), np.arange(self.cutoff))
        return np.bincount(total.ravel(), weights=p.ravel(), minlength=self.cutoff)[: self.cutoff]

    def probabilities(self):
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()


def cutoff_heuristic(mean_photon, squeezed=False, tail=1e-12):
    """Basis size for a state with the given mean photon number.

    Coherent-like statistics use ``ceil(n + 10 sqrt(n + 1) + 20)``. Squeezed
    vacuum has a geometric tail that this underestimates, so with
    ``squeezed=True`` the cutoff is also grown until the exact tail mass
    drops below ``tail``.
    """
    if not mean_photon >= 0:
        raise DomainError(f"mean photon number must be non-negative, got {mean_photon!r}")
    base = math.ceil(mean_photon + 10 * math.sqrt(mean_photon + 1) + 20)
    if not squeezed or mean_photon == 0:
        return base
    t2 = mean_photon / (mean_photon + 1)  # tanh^2 r
    p = 1 / math.sqrt(mean_photon + 1)  # P(0) = 1 / cosh r
    remaining = 1.0 - p
    m = 0
    while remaining > tail:
        p *= t2 * (2 * m + 1) / (2 * m + 2)
        remaining -= p
        m += 1
    return max(base, 2 * m + 1)


def _checked(vec, tolerance, what):
    if vec.leak > tolerance:
        raise TruncationError(f"cutoff {vec.cutoff} too small for {what}", vec.leak)
    return vec


def coherent_fock(n_c, phi_c, cutoff, leak_tolerance=LEAK_TOLERANCE):
    """Coherent state with amplitude ``sqrt(n_c) exp(-i phi_c)``."""
    if not np.isfinite(n_c) or n_c < 0:
        raise DomainError(f"n_c must be finite and non-negative, got {n_c!r}")
    k = np.arange(cutoff)
    amps = np.zeros(cutoff, dtype=complex)
    if n_c == 0:
        amps[0] = 1.0
    else:
        log_mag = -n_c / 2 + k * 0.5 * math.log(n_c) - 0.5 * gammaln(k + 1)
        amps = np.exp(log_mag) * np.exp(-1j * phi_c * k)
    return _checked(FockVector(amps), leak_tolerance, f"coherent state n_c={n_c}")


def squeezed_vacuum_fock(n_s, cutoff, leak_tolerance=LEAK_TOLERANCE):
    """Squeezed vacuum with ``sinh(r)**2 = n_s``, squeezing phase zero; only even terms."""
    if not np.isfinite(n_s) or n_s < 0:
        raise DomainError(f"n_s must be finite and non-negative, got {n_s!r}")
    amps = np.zeros(cutoff, dtype=complex)
    if n_s == 0:
        amps[0] = 1.0
    else:
        r = math.asinh(math.sqrt(n_s))
        m = np.arange((cutoff + 1) // 2)
        log_mag = (m * math.log(math.tanh(r)) + 0.5 * gammaln(2 * m + 1)
                   - m * math.log(2) - gammaln(m + 1) - 0.5 * math.log(math.cosh(r)))
        amps[0::2] = np.where(m % 2 == 0, 1.0, -1.0) * np.exp(log_mag)
    return _checked(FockVector(amps), leak_tolerance, f"squeezed vacuum n_s={n_s}")


@lru_cache(maxsize=None)
def _bs_block(n, theta):
    """``exp(i theta (a^dag b + b^dag a))`` on the ``n_a + n_b = n`` sector, indexed by ``n_a``."""
    if n == 0:
        u = np.ones((1, 1), dtype=complex)
    else:
        k = np.arange(n)
        off = np.sqrt((k + 1.0) * (n - k))
        w, v = eigh_tridiagonal(np.zeros(n + 1), off)
        u = (v * np.exp(1j * theta * w)) @ v.T
    u.setflags(write=False)
    return u


def apply_bs_fock(s, theta=BS_ANGLE):
    """Balanced beam splitter (amplitude matrix ``[[1, i], [i, 1]] / sqrt(2)`` at the default angle)."""
    c = s.cutoff
    out = np.zeros_like(s.amplitudes)
    for n in range(c):
        na = np.arange(n + 1)
        out[na, n - na] = _bs_block(n, theta) @ s.amplitudes[na, n - na]
    return TwoModeFock(out)


def apply_phase_fock(s, mode, phi):
    """Phase delay ``exp(-i phi n)`` on one mode."""
    if mode not in (0, 1):
        raise UsageError(f"mode must be 0 or 1, got {mode!r}")
    phase = np.exp(-1j * phi * np.arange(s.cutoff))
    amps = s.amplitudes * (phase[:, None] if mode == 0 else phase[None, :])
    return TwoModeFock(amps)


def mzi_fock(s, phi):
    return apply_bs_fock(apply_phase_fock(apply_bs_fock(s), 1, phi))


def _warn_leak(s):
    if s.leak > ORACLE_LEAK:
        warnings.warn(
            f"oracle state has truncation leak {s.leak:.2e}; results carry an error of that order",
            TruncationWarning,
            stacklevel=3,
        )


def parity_fock(s, mode=0):
    """``<(-1)^n>`` of one mode, normalised to the retained basis."""
    if isinstance(s, FockVector):
        return s.parity()
    if mode not in (0, 1):
        raise UsageError(f"mode must be 0 or 1, got {mode!r}")
    _warn_leak(s)
    p = s.probabilities().sum(axis=1 - mode)
    return float(p[0::2].sum() - p[1::2].sum())


def number_moments_fock(s):
    """``(<n_a>, <n_b>, Var(n_a - n_b))``."""
    _warn_leak(s)
    p = s.probabilities()
    k = np.arange(s.cutoff)
    d = np.subtract.outer(k, k)
    n_a = float(p.sum(axis=1) @ k)
    n_b = float(p.sum(axis=0) @ k)
    mean_d = n_a - n_b
    return n_a, n_b, float(np.sum(p * d * d) - mean_d**2)


def input_state_fock(n_c, phi_c, n_s, cutoff=None):
    """Coherent (mode a) x squeezed vacuum (mode b) at heuristic cutoffs."""
    ca = cutoff or cutoff_heuristic(n_c)
    cb = cutoff or cutoff_heuristic(n_s, squeezed=True)
    return TwoModeFock.product(coherent_fock(n_c, phi_c, ca), squeezed_vacuum_fock(n_s, cb))
