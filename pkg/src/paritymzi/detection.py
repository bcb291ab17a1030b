r"""Detection observables and phase sensitivities.

Closed forms take photon numbers ``n_c`` (coherent), ``n_s`` (squeezed vacuum),
the coherent phase ``phi_c`` and the interferometer phase ``phi``. Numeric
counterparts evaluate the same quantities on a :class:`~paritymzi.gaussian.GaussianState`.

Sensitivities use error propagation,
:math:`\Delta\phi^2 = \mathrm{Var}(O) / (d\langle O\rangle/d\phi)^2`.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, StationaryPointError, UsageError
from .gaussian import marginal, wigner_at

FD_STEP = 1e-5


@dataclass(frozen=True)
class SensitivityPoint:
    phi: float
    signal: float
    d_signal_dphi: float
    variance: float
    delta_phi: float

    @classmethod
    def from_moments(cls, phi, signal, slope, variance):
        if slope == 0.0:
            raise StationaryPointError(f"signal is stationary at phi={phi!r}")
        return cls(phi, signal, slope, variance, math.sqrt(max(variance, 0.0)) / abs(slope))


@dataclass(frozen=True)
class ResourceAccounting:
    """Photon budget of one configuration; ``n_t`` also counts the local oscillator."""

    n_in: float
    eta: float
    n_lo: float = 0.0

    @classmethod
    def from_photons(cls, n_c, n_s, n_lo=0.0):
        n_in = n_c + n_s
        return cls(n_in, n_s / n_in if n_in > 0 else 0.0, n_lo)

    @property
    def n_c(self):
        return (1 - self.eta) * self.n_in

    @property
    def n_s(self):
        return self.eta * self.n_in

    @property
    def n_t(self):
        return self.n_in + self.n_lo


def split_photons(n_in, eta):
    """``(n_c, n_s)`` for a total ``n_in`` with squeezed fraction ``eta``."""
    if not 0 <= eta <= 1:
        raise DomainError(f"eta must lie in [0, 1], got {eta!r}")
    if n_in < 0:
        raise DomainError(f"n_in must be non-negative, got {n_in!r}")
    return (1 - eta) * n_in, eta * n_in


def _non_negative(**kw):
    for name, value in kw.items():
        if not np.isfinite(value) or value < 0:
            raise DomainError(f"{name} must be finite and non-negative, got {value!r}")


def central_difference(f, x, h=FD_STEP):
    """First derivative by central differences with one Richardson step."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


# -- parity --------------------------------------------------------------


def parity_numeric(s, mode):
    """``<(-1)^n>`` of one mode: ``pi/2`` times its Wigner function at the origin."""
    m = marginal(s, [mode])
    return math.pi / 2 * wigner_at(m, np.zeros(2))


def _parity_log(n_c, n_s, phi_c, phi):
    """``log <Pi>`` and its ``phi`` derivative, written without cancellation near ``phi = 0``."""
    s2 = math.sin(phi) ** 2
    k = math.sqrt(n_s * n_s + n_s) * math.cos(2 * phi_c)
    den = n_s * s2 + 1
    # exponent/(-n_c) = (k s2 - cos phi)/den + 1, regrouped so small phi stays accurate
    expo = ((k + n_s) * s2 + 2 * math.sin(phi / 2) ** 2) / den
    log_p = -n_c * expo - 0.5 * math.log1p(n_s * s2)
    ds2 = math.sin(2 * phi)
    dden = n_s * ds2
    dexpo = ((k + n_s) * ds2 + math.sin(phi) - expo * dden) / den
    return log_p, -n_c * dexpo - 0.5 * dden / den


def parity_closed(n_c, n_s, phi_c, phi):
    """Parity of output port ``a_f`` for coherent x squeezed-vacuum input."""
    _non_negative(n_c=n_c, n_s=n_s)
    return math.exp(_parity_log(n_c, n_s, phi_c, phi)[0])


def parity_closed_slope(n_c, n_s, phi_c, phi):
    """Analytic ``d<Pi>/dphi`` of :func:`parity_closed`."""
    _non_negative(n_c=n_c, n_s=n_s)
    log_p, dlog = _parity_log(n_c, n_s, phi_c, phi)
    return math.exp(log_p) * dlog


def parity_variance(n_c, n_s, phi_c, phi):
    """``1 - <Pi>**2``, accurate to full relative precision close to the peak."""
    _non_negative(n_c=n_c, n_s=n_s)
    return -math.expm1(2 * _parity_log(n_c, n_s, phi_c, phi)[0])


def parity_curvature(n_c, n_s, phi_c):
    """``-d^2<Pi>/dphi^2`` at ``phi = 0``; its inverse is the optimal ``delta_phi**2``."""
    return (2 * n_c * math.sqrt(n_s * (n_s + 1)) * math.cos(2 * phi_c)
            + 2 * n_c * n_s + n_c + n_s)


def parity_optimal_variance(n_c, n_s, phi_c=0.0):
    """Closed-form ``delta_phi**2`` of parity detection at ``phi -> 0``."""
    _non_negative(n_c=n_c, n_s=n_s)
    a = parity_curvature(n_c, n_s, phi_c)
    if a <= 0:
        return math.inf
    return 1.0 / a


def _is_origin(phi):
    return math.remainder(phi, 2 * math.pi) == 0.0


def parity_sensitivity(n_c, n_s, phi_c, phi):
    """Parity error-propagation point; at ``phi = 0 (mod 2 pi)`` the analytic limit is returned.

    Raises:
        StationaryPointError: at any other stationary point of the signal.
    """
    _non_negative(n_c=n_c, n_s=n_s)
    if n_c + n_s <= 0:
        raise DomainError("parity sensitivity needs n_c + n_s > 0")
    signal = parity_closed(n_c, n_s, phi_c, phi)
    if _is_origin(phi):
        var = parity_optimal_variance(n_c, n_s, phi_c)
        if not math.isfinite(var):
            raise StationaryPointError("parity curvature vanishes at phi=0")
        # slope and variance both vanish at the peak; delta_phi is their limit ratio
        return SensitivityPoint(phi, signal, 0.0, 0.0, math.sqrt(var))
    slope = parity_closed_slope(n_c, n_s, phi_c, phi)
    return SensitivityPoint.from_moments(phi, signal, slope, parity_variance(n_c, n_s, phi_c, phi))


def qcrb(n_c, n_s):
    """Quantum Cramer-Rao bound ``delta_phi`` for coherent x squeezed vacuum."""
    _non_negative(n_c=n_c, n_s=n_s)
    e2r = 1 + 2 * n_s + 2 * math.sqrt(n_s * (n_s + 1))
    info = n_c * e2r + n_s
    if info == 0:
        return math.inf
    return 1 / math.sqrt(info)


def heisenberg_limit(n):
    if not n > 0:
        raise DomainError(f"photon number must be positive, got {n!r}")
    return 1.0 / n


def shot_noise_limit(n):
    if not n > 0:
        raise DomainError(f"photon number must be positive, got {n!r}")
    return 1.0 / math.sqrt(n)


# -- intensity difference (local-oscillator scheme) ----------------------


def intensity_signal_closed(n_c, n_s, phi_c, phi, n_lo, phi_lo):
    """Output intensity difference of the LO-assisted double interferometer."""
    _non_negative(n_c=n_c, n_s=n_s, n_lo=n_lo)
    return (-2 * math.sqrt(n_c * n_lo) * math.cos(phi / 2) * math.cos(phi / 2 + phi_c - phi_lo)
            + (n_c - n_s) * math.sin(phi))


def intensity_signal_slope(n_c, n_s, phi_c, phi, n_lo, phi_lo):
    _non_negative(n_c=n_c, n_s=n_s, n_lo=n_lo)
    return (math.sqrt(n_c * n_lo) * math.sin(phi + phi_c - phi_lo)
            + (n_c - n_s) * math.cos(phi))


def _ono_slope_at_pi(n_c, n_s, n_lo):
    return math.sqrt(n_c) * (math.sqrt(n_lo) - math.sqrt(n_c)) + n_s


def ono_phase_variance(n_c, n_s, n_lo):
    """Published closed-form ``delta_phi**2`` at ``phi = pi``, ``phi_c = 0``, ``phi_lo = pi/2``.

    The numerator equals twice the *Wigner* variance of ``|alpha|^2 - |beta|^2``,
    i.e. it omits the ``-1/2`` ordering correction; see :func:`ono_phase_variance_ordered`.
    """
    _non_negative(n_c=n_c, n_s=n_s, n_lo=n_lo)
    g = 2 * n_s + 1 - 2 * math.sqrt(n_s * (n_s + 1))
    slope = _ono_slope_at_pi(n_c, n_s, n_lo)
    if slope == 0:
        raise StationaryPointError("degenerate denominator: signal is flat at phi=pi")
    return (2 * g * (math.sqrt(n_c) - math.sqrt(n_lo)) ** 2 + 2 * n_s + 1) / (2 * slope**2)


def ono_phase_variance_ordered(n_c, n_s, n_lo):
    """Same operating point as :func:`ono_phase_variance` with the photon-number variance properly ordered."""
    _non_negative(n_c=n_c, n_s=n_s, n_lo=n_lo)
    g = 2 * n_s + 1 - 2 * math.sqrt(n_s * (n_s + 1))
    slope = _ono_slope_at_pi(n_c, n_s, n_lo)
    if slope == 0:
        raise StationaryPointError("degenerate denominator: signal is flat at phi=pi")
    return (g * (math.sqrt(n_c) - math.sqrt(n_lo)) ** 2 + n_s) / slope**2


def ono_sensitivity(n_c, n_s, n_lo):
    """``delta_phi`` of the LO scheme at its optimum (published closed form)."""
    if not n_lo > 0 or not n_c + n_s > 0:
        raise DomainError("need n_lo > 0 and n_c + n_s > 0")
    return math.sqrt(ono_phase_variance(n_c, n_s, n_lo))


def ono_sensitivity_infinite_lo(n_c, n_s):
    """``n_lo -> inf`` limit of :func:`ono_sensitivity`; ``inf`` when ``n_c = 0``."""
    _non_negative(n_c=n_c, n_s=n_s)
    if n_c == 0:
        return math.inf
    return math.sqrt((2 * n_s - 2 * math.sqrt(n_s * n_s + n_s) + 1) / n_c)


def ono_sensitivity_balanced(n_in, n_lo):
    """:func:`ono_sensitivity` at ``n_c = n_s = n_in / 2`` written in ``n_in`` and ``n_lo``."""
    if not (n_in > 0 and n_lo > 0):
        raise DomainError("need n_in > 0 and n_lo > 0")
    first = n_in + 1 - math.sqrt(n_in * n_in + 2 * n_in)
    second = n_in + 2 * n_lo - math.sqrt(8 * n_in * n_lo)
    return math.sqrt((first * second + n_in + 1) / (n_in * n_lo))


def ono_series(n_in, n_lo):
    """Three-term large-``n_in`` expansion of :func:`ono_sensitivity_balanced` at fixed ``n_lo``."""
    if not (n_in > 0 and n_lo > 0):
        raise DomainError("need n_in > 0 and n_lo > 0")
    return 1 / math.sqrt(n_lo) + 3 / (4 * n_in * math.sqrt(n_lo)) - 1 / math.sqrt(2 * n_in**3)


def intensity_sensitivity_numeric(signal, variance, phi, h=FD_STEP):
    """Error propagation from callables ``signal(phi)`` and ``variance(phi)``."""
    slope = central_difference(signal, phi, h)
    return SensitivityPoint.from_moments(phi, signal(phi), slope, variance(phi))


# -- fringe width --------------------------------------------------------


def coherent_parity_fwhm(n_c):
    """Exact FWHM of ``exp(-2 n_c sin^2(phi/2))``: ``4 asin(sqrt(ln 2 / (2 n_c)))``."""
    if not n_c >= math.log(2) / 2:
        raise DomainError(f"the coherent parity fringe never halves for n_c={n_c!r}")
    return 4 * math.asin(math.sqrt(math.log(2) / (2 * n_c)))


def parity_fwhm(n_c, n_s, phi_c=0.0, samples=4096):
    """FWHM of the parity fringe at ``phi = 0`` by root bracketing on the closed form.

    The fringe is even in ``phi``, so the width is twice the first half-maximum crossing.
    """
    half = parity_closed(n_c, n_s, phi_c, 0.0) / 2
    f = lambda phi: parity_closed(n_c, n_s, phi_c, phi) - half
    grid = np.linspace(0.0, math.pi, samples + 1)
    for a, b in zip(grid[:-1], grid[1:]):
        if f(b) < 0:
            return 2 * brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    raise DomainError(f"parity fringe never drops to half maximum for n_c={n_c}, n_s={n_s}")


def conventional_fwhm():
    """Width of the ``cos(phi)`` fringe at half its peak: ``2 pi / 3``."""
    return 2 * math.pi / 3



def signal_width(phi, values, center=0.0):
    """Full width at half maximum of the fringe peaked nearest ``center``.

    The half level is half the peak value (zero baseline); crossings are
    linearly interpolated between bracketing samples.
    """
    phi = np.asarray(phi, dtype=float)
    values = np.asarray(values, dtype=float)
    if phi.shape != values.shape or phi.ndim != 1 or phi.size < 3:
        raise UsageError("phi and values must be equal-length 1D samples")
    if np.any(np.diff(phi) <= 0):
        raise UsageError("phi samples must be strictly increasing")
    k = int(np.argmin(np.abs(phi - center)))
    half = values[k] / 2

    def crossing(step):
        j = k
        while 0 <= j + step < phi.size:
            if values[j + step] < half:
                a, b = j, j + step
                t = (values[a] - half) / (values[a] - values[b])
                return phi[a] + t * (phi[b] - phi[a])
            j += step
        raise UsageError("no half-maximum crossing inside the sampled range")

    return crossing(1) - crossing(-1)
