r"""Multimode Gaussian states in the Wigner (quadrature) picture.

Conventions used throughout the package:

* the complex amplitude of mode ``k`` is :math:`\alpha_k = x_k + i p_k`;
* quadratures are interleaved, ``(x_1, p_1, x_2, p_2, ...)``;
* the vacuum has covariance ``I/4``, so a Gaussian Wigner function reads
  :math:`W(z) = (2\pi)^{-N} \det(\Sigma)^{-1/2} e^{-\frac12 (z-\mu)^T \Sigma^{-1} (z-\mu)}`
  and the single-mode vacuum peaks at :math:`2/\pi`.

A linear optical element with mode-amplitude matrix ``M`` (``alpha_out = M @ alpha_in``)
acts on quadratures through the real matrix built by :func:`quadrature_matrix`.
"""
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DomainError, NumericalError, UsageError

COND_LIMIT = 1e12
SYMPLECTIC_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def omega(n_modes):
    """Block-diagonal symplectic form with 2x2 blocks ``[[0, 1], [-1, 0]]`` (read-only)."""
    return _frozen(np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]])))


def quadrature_matrix(m):
    """Real 2N x 2N representation of a complex N x N mode-amplitude matrix."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    s = np.zeros((2 * n, 2 * n))
    s[0::2, 0::2] = m.real
    s[0::2, 1::2] = -m.imag
    s[1::2, 0::2] = m.imag
    s[1::2, 1::2] = m.real
    return s


def amplitude_matrix(s):
    """Inverse of :func:`quadrature_matrix` for passive (phase-insensitive) maps."""
    s = np.asarray(s)
    return s[0::2, 0::2] + 1j * s[1::2, 0::2]


def is_symplectic(s, tol=SYMPLECTIC_TOL):
    s = np.asarray(s)
    w = omega(s.shape[0] // 2)
    return np.linalg.norm(s.T @ w @ s - w) <= tol


def is_passive(s, tol=SYMPLECTIC_TOL):
    s = np.asarray(s)
    return is_symplectic(s, tol) and np.linalg.norm(s.T @ s - np.eye(s.shape[0])) <= tol


@dataclass(frozen=True)
class GaussianState:
    """Mean quadrature vector and covariance of an ``n_modes`` Gaussian state.

    Instances validate themselves on construction and are immutable.
    """

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise UsageError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        dim = 2 * self.n_modes
        mean = _frozen(self.mean)
        cov = _frozen(self.cov)
        if mean.shape != (dim,) or cov.shape != (dim, dim):
            raise UsageError(
                f"expected mean of length {dim} and {dim}x{dim} cov, "
                f"got {mean.shape} and {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DomainError("mean and cov must be finite")
        if np.linalg.norm(cov - cov.T) > 1e-12 * np.linalg.norm(cov):
            raise DomainError("covariance matrix is not symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise DomainError("covariance matrix is not positive definite") from None
        # Robertson-Schroedinger bound in these units: cov + (i/4) Omega >= 0
        lowest = np.linalg.eigvalsh(cov + 0.25j * omega(self.n_modes)).min()
        if lowest < -1e-10 * max(1.0, np.abs(cov).max()):
            raise DomainError(f"covariance violates the uncertainty bound (min eig {lowest:.3e})")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def _derived(cls, n_modes, mean, cov):
        """Build without re-validating; only for results of symplectic maps or marginals of valid states."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n_modes", n_modes)
        object.__setattr__(obj, "mean", _frozen(mean))
        object.__setattr__(obj, "cov", _frozen(cov))
        return obj

    def __eq__(self, other):
        if not isinstance(other, GaussianState):
            return NotImplemented
        return (
            self.n_modes == other.n_modes
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.cov, other.cov)
        )

    __hash__ = None

    def mean_photon(self, mode):
        """Physical mean photon number of one mode."""
        return symmetric_number_mean(self, mode) - 0.5

    def total_mean_photon(self):
        return sum(self.mean_photon(k) for k in range(self.n_modes))

    @property
    def purity(self):
        """Tr(rho^2) = (1/4)^N / sqrt(det cov)."""
        return 4.0 ** (-self.n_modes) / math.sqrt(np.linalg.det(self.cov))


@dataclass(frozen=True)
class LinearMap:
    """Affine symplectic map ``z -> matrix @ z + displacement`` on quadratures."""

    n_modes: int
    matrix: np.ndarray
    displacement: np.ndarray = None

    def __post_init__(self):
        dim = 2 * self.n_modes
        matrix = _frozen(self.matrix)
        disp = _frozen(np.zeros(dim) if self.displacement is None else self.displacement)
        if matrix.shape != (dim, dim) or disp.shape != (dim,):
            raise UsageError(f"map shapes {matrix.shape}, {disp.shape} do not fit {self.n_modes} modes")
        if not is_symplectic(matrix):
            raise DomainError("map matrix is not symplectic")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "displacement", disp)

    @classmethod
    def identity(cls, n_modes):
        return cls(n_modes, np.eye(2 * n_modes))

    @classmethod
    def from_amplitudes(cls, m):
        """Passive map from a unitary mode-amplitude matrix."""
        m = np.asarray(m, dtype=complex)
        return cls(m.shape[0], quadrature_matrix(m))

    @property
    def is_passive(self):
        return is_passive(self.matrix) and not np.any(self.displacement)

    def __matmul__(self, other):
        """``self @ other`` applies ``other`` first."""
        if not isinstance(other, LinearMap):
            return NotImplemented
        if other.n_modes != self.n_modes:
            raise UsageError(f"cannot compose maps on {self.n_modes} and {other.n_modes} modes")
        return LinearMap(
            self.n_modes,
            self.matrix @ other.matrix,
            self.matrix @ other.displacement + self.displacement,
        )

    def then(self, other):
        """Map applying ``self`` and then ``other``."""
        return other @ self


def chain(*maps):
    """Compose maps in application order: ``chain(a, b, c)`` applies ``a`` first."""
    if not maps:
        raise UsageError("chain() needs at least one map")
    out = maps[0]
    for m in maps[1:]:
        out = m @ out
    return out


def embed(m, modes, n_modes):
    """Lift a map on ``len(modes)`` modes to act on ``modes`` of an ``n_modes`` system."""
    modes = list(modes)
    if len(modes) != m.n_modes or len(set(modes)) != len(modes):
        raise UsageError(f"need {m.n_modes} distinct target modes, got {modes}")
    if any(k < 0 or k >= n_modes for k in modes):
        raise UsageError(f"target modes {modes} out of range for {n_modes} modes")
    idx = np.array([2 * k + q for k in modes for q in (0, 1)])
    s = np.eye(2 * n_modes)
    s[np.ix_(idx, idx)] = m.matrix
    d = np.zeros(2 * n_modes)
    d[idx] = m.displacement
    return LinearMap(n_modes, s, d)


def displacement(mode, alpha, n_modes=1):
    """Pure displacement of ``mode`` by the complex amplitude ``alpha``."""
    d = np.zeros(2 * n_modes)
    d[2 * mode] = np.real(alpha)
    d[2 * mode + 1] = np.imag(alpha)
    return LinearMap(n_modes, np.eye(2 * n_modes), d)


def _check_photon_number(n, name):
    if not np.isfinite(n) or n < 0:
        raise DomainError(f"{name} must be finite and non-negative, got {n!r}")


def vacuum(n_modes=1):
    if int(n_modes) != n_modes or n_modes < 1:
        raise UsageError(f"n_modes must be a positive integer, got {n_modes!r}")
    return GaussianState._derived(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes) / 4)


def coherent_state(n_c, phi_c=0.0):
    """Coherent state with amplitude ``sqrt(n_c) * exp(-1j * phi_c)``."""
    _check_photon_number(n_c, "n_c")
    a = math.sqrt(n_c)
    if not math.isfinite(phi_c):
        raise DomainError(f"phi_c must be finite, got {phi_c!r}")
    return GaussianState._derived(1, [a * math.cos(phi_c), -a * math.sin(phi_c)], np.eye(2) / 4)


def squeezing_parameter(n_s):
    _check_photon_number(n_s, "n_s")
    return math.asinh(math.sqrt(n_s))


def squeezed_vacuum(n_s):
    """Squeezed vacuum with ``sinh(r)**2 = n_s``, squeezed along x (zero squeezing phase)."""
    r = squeezing_parameter(n_s)
    return GaussianState._derived(1, np.zeros(2), np.diag([math.exp(-2 * r) / 4, math.exp(2 * r) / 4]))


def tensor(*states):
    """Product state; modes are ordered as the arguments."""
    if not states:
        raise UsageError("tensor() needs at least one state")
    mean = np.concatenate([s.mean for s in states])
    cov = np.zeros((mean.size, mean.size))
    i = 0
    for s in states:
        j = i + 2 * s.n_modes
        cov[i:j, i:j] = s.cov
        i = j
    # block-diagonal products of valid states are valid
    return GaussianState._derived(sum(s.n_modes for s in states), mean, cov)


def apply(m, s):
    """Push a state through a linear map."""
    if m.n_modes != s.n_modes:
        raise UsageError(f"map acts on {m.n_modes} modes but state has {s.n_modes}")
    cov = m.matrix @ s.cov @ m.matrix.T
    # symplectic maps preserve every state invariant, so skip re-validation
    return GaussianState._derived(s.n_modes, m.matrix @ s.mean + m.displacement, (cov + cov.T) / 2)


def _check_modes(s, modes):
    modes = list(modes)
    if not modes:
        raise UsageError("mode subset must be non-empty")
    if len(set(modes)) != len(modes):
        raise UsageError(f"duplicate modes in {modes}")
    for k in modes:
        if not isinstance(k, (int, np.integer)) or not 0 <= k < s.n_modes:
            raise UsageError(f"mode {k!r} invalid for a {s.n_modes}-mode state")
    return modes


def marginal(s, modes):
    """Reduced state on ``modes`` (in the given order)."""
    modes = _check_modes(s, modes)
    idx = np.array([2 * k + q for k in modes for q in (0, 1)])
    return GaussianState._derived(len(modes), s.mean[idx], s.cov[np.ix_(idx, idx)])


def wigner_at(s, point):
    """Value of the Wigner function at a phase-space point.

    Raises:
        NumericalError: if the covariance condition number exceeds 1e12.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != s.mean.shape:
        raise UsageError(f"point must have length {s.mean.size}")
    if not np.all(np.isfinite(point)):
        raise DomainError("point must be finite")
    eig = np.linalg.eigvalsh(s.cov)
    if eig[-1] / eig[0] > COND_LIMIT:
        raise NumericalError(f"covariance condition number {eig[-1] / eig[0]:.3e} exceeds {COND_LIMIT:.0e}")
    factor = cho_factor(s.cov)
    d = point - s.mean
    quad = d @ cho_solve(factor, d)
    log_det = 2 * np.sum(np.log(np.diag(factor[0])))
    return math.exp(-0.5 * quad - 0.5 * log_det - s.n_modes * math.log(2 * math.pi))


def symmetric_number_mean(s, mode):
    """Symmetrically ordered ``<{a^dag a}_s>`` of one mode: ``x^2 + p^2 + var_x + var_p``."""
    (mode,) = _check_modes(s, [mode])
    i = 2 * mode
    x, p = s.mean[i], s.mean[i + 1]
    return x * x + p * p + s.cov[i, i] + s.cov[i + 1, i + 1]


def _pairings(items):
    """All perfect matchings of ``items`` (empty for odd length)."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        for tail in _pairings(rest[:k] + rest[k + 1:]):
            yield ((first, rest[k]),) + tail


def gaussian_moment(mean, cov, indices):
    """Raw moment ``E[z_i z_j ...]`` of a multivariate normal, by Isserlis' theorem.

    Each factor is split into ``mean + centred`` part; centred products are
    expanded over all pairings, odd ones vanish.
    """
    indices = tuple(indices)
    total = 0.0
    n = len(indices)
    for r in range(0, n + 1, 2):
        for centred in itertools.combinations(range(n), r):
            rest = [indices[k] for k in range(n) if k not in centred]
            mean_part = np.prod([mean[i] for i in rest]) if rest else 1.0
            if mean_part == 0.0:
                continue
            centred_idx = tuple(indices[k] for k in centred)
            pair_sum = sum(
                np.prod([cov[a, b] for a, b in pairing]) if pairing else 1.0
                for pairing in _pairings(centred_idx)
            )
            total += mean_part * pair_sum
    return total


def intensity_difference_moments(s, i, j):
    r"""Mean and variance of the photon-number difference ``n_i - n_j``.

    With ``Q = diag(1, 1, -1, -1)`` on the quadratures of ``(i, j)`` the
    symmetric-ordered difference is :math:`u = z^T Q z` and, for a Gaussian,
    :math:`\mathrm{Var}_W(u) = 2\,\mathrm{tr}(QVQV) + 4\mu^T QVQ \mu`. The
    mean needs no ordering correction (the two ``1/2`` terms cancel); the
    variance loses ``1/2``, the Weyl-ordering correction of
    :math:`(\hat n_i-\hat n_j)^2`. :func:`intensity_difference_moments_isserlis`
    computes the same numbers term by term.
    """
    m = marginal(s, _distinct_pair(s, i, j))
    q = np.array([1.0, 1.0, -1.0, -1.0])
    mu, v = m.mean, m.cov
    qv = q[:, None] * v
    mean = float(mu @ (q * mu) + np.trace(qv))
    var_w = 2 * np.sum(qv * qv.T) + 4 * (q * mu) @ v @ (q * mu)
    return mean, float(var_w) - 0.5


def intensity_difference_moments_isserlis(s, i, j):
    """Reference implementation of :func:`intensity_difference_moments` via raw fourth moments."""
    _distinct_pair(s, i, j)
    quads = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    signs = [1.0, 1.0, -1.0, -1.0]
    mean = sum(c * gaussian_moment(s.mean, s.cov, (q, q)) for c, q in zip(signs, quads))
    second = 0.0
    for (ca, qa), (cb, qb) in itertools.product(zip(signs, quads), repeat=2):
        second += ca * cb * gaussian_moment(s.mean, s.cov, (qa, qa, qb, qb))
    return mean, second - mean * mean - 0.5


def _distinct_pair(s, i, j):
    if i == j:
        raise UsageError("intensity difference needs two distinct modes")
    return _check_modes(s, [i, j])
