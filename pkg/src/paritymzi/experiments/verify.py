"""Cross-check matrix: closed forms vs Gaussian simulation vs Fock oracle.

Each check records its largest deviation and never stops the others. The
``quick`` level finishes in seconds; ``full`` adds the larger oracle grid,
the finite-transmissivity LO model and cutoff convergence.
"""
import itertools
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..circuits import CircuitPreset, build
from ..detection import (
    central_difference,
    intensity_signal_closed,
    ono_phase_variance,
    ono_phase_variance_ordered,
    parity_closed,
    parity_numeric,
    parity_optimal_variance,
    qcrb,
)
from ..fock import (
    TwoModeFock,
    coherent_fock,
    cutoff_heuristic,
    mzi_fock,
    number_moments_fock,
    parity_fock,
    squeezed_vacuum_fock,
)
from ..gaussian import intensity_difference_moments
from .scenario import grid

LEVELS = ("quick", "full")
SATURATION_GRID = np.arange(1, 21) * 0.5
PARITY_CASES = ((10, 0, 0.0), (0, 10, 0.0), (5, 5, 0.0), (5, 5, math.pi / 4))
ORACLE_PHIS = (0.1, 0.7, 1.6, 3.0)
ONO_POINT = dict(n_c=5.0, n_s=5.0, phi_c=0.0, n_lo=100.0, phi_lo=math.pi / 2)


@dataclass
class Check:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: max deviation {self.max_deviation:.3e} "
                f"(tolerance {self.tolerance:.1e}) {self.detail}").rstrip()


@dataclass
class Report:
    level: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def format(self):
        lines = [c.line() for c in self.checks]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{self.level}: {len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _check(name, deviation, tolerance, detail=""):
    dev = float(deviation)
    return Check(name, bool(dev < tolerance), dev, tolerance, detail)


def check_saturation(optimal_variance=parity_optimal_variance):
    """Parity optimum against the quantum Cramer-Rao bound on a photon-number grid."""
    dev = max(
        abs(math.sqrt(optimal_variance(n_c, n_s, 0.0)) / qcrb(n_c, n_s) - 1)
        for n_c, n_s in itertools.product(SATURATION_GRID, SATURATION_GRID)
    )
    return _check("parity optimum saturates the QCRB", dev, 1e-10)


def _parity_output(n_c, n_s, phi_c, phi):
    c = build(CircuitPreset("parity_mzi", {"n_c": n_c, "n_s": n_s, "phi_c": phi_c, "phi": phi}))
    return c.output()


def check_parity_numeric():
    dev = 0.0
    for n_c, n_s, phi_c in PARITY_CASES:
        for phi in grid(-math.pi, math.pi, 401):
            num = parity_numeric(_parity_output(n_c, n_s, phi_c, phi), 0)
            dev = max(dev, abs(num - parity_closed(n_c, n_s, phi_c, phi)))
    return _check("closed-form parity vs Gaussian simulation", dev, 1e-9)


def check_coherent_fringe():
    dev = max(abs(parity_closed(10, 0, 0, phi) - math.exp(-20 * math.sin(phi / 2) ** 2))
              for phi in grid(-math.pi, math.pi, 401))
    return _check("coherent-only parity equals exp(-2 n_c sin^2(phi/2))", dev, 1e-12)


def numeric_parity_limit(n_c, n_s, phi_c, phi1=1e-3):
    """``delta_phi`` at ``phi -> 0`` from simulated parity alone, Richardson-extrapolated in ``phi``."""

    def dphi2(phi):
        f = lambda x: parity_numeric(_parity_output(n_c, n_s, phi_c, x), 0)
        p = f(phi)
        return (1 - p * p) / central_difference(f, phi) ** 2

    return math.sqrt((4 * dphi2(phi1) - dphi2(2 * phi1)) / 3)


def check_numeric_limit():
    dev = 0.0
    for n_c, n_s, phi_c in ((5, 5, 0.0), (3, 7, 0.2), (10, 0, 0.0)):
        ref = math.sqrt(parity_optimal_variance(n_c, n_s, phi_c))
        dev = max(dev, abs(numeric_parity_limit(n_c, n_s, phi_c) / ref - 1))
    return _check("simulated parity sensitivity tends to the closed-form optimum", dev, 1e-6)


def _oracle_state(n_c, n_s, phi_c=0.0, extra=0):
    ca = cutoff_heuristic(n_c) + extra
    cb = cutoff_heuristic(n_s, squeezed=True) + extra
    return TwoModeFock.product(coherent_fock(n_c, phi_c, ca), squeezed_vacuum_fock(n_s, cb))


def check_oracle(values):
    """Fock oracle vs closed-form parity and vs Gaussian intensity moments."""
    dev_parity = dev_moments = 0.0
    for n_c, n_s in itertools.product(values, values):
        state = _oracle_state(n_c, n_s)
        for phi in ORACLE_PHIS:
            out = mzi_fock(state, phi)
            dev_parity = max(dev_parity, abs(parity_fock(out, 0) - parity_closed(n_c, n_s, 0.0, phi)))
            na, nb, var = number_moments_fock(out)
            mean_g, var_g = intensity_difference_moments(_parity_output(n_c, n_s, 0.0, phi), 0, 1)
            dev_moments = max(dev_moments, abs(na - nb - mean_g), abs(var - var_g))
    top = max(values)
    return [
        _check(f"Fock oracle parity (n <= {top:g})", dev_parity, 1e-6),
        _check(f"Fock oracle intensity moments (n <= {top:g})", dev_moments, 1e-6),
    ]


def ono_numeric_moments(phi, T=None, control_phase=0.0, **point):
    p = {**ONO_POINT, **point}
    c = build(CircuitPreset("ono_hofmann", {**p, "phi": phi, "T": T, "control_phase": control_phase}))
    return intensity_difference_moments(c.output(), *c.detection_modes)


def check_signal_calibration():
    dev = max(
        abs(ono_numeric_moments(phi)[0] - intensity_signal_closed(**ONO_POINT, phi=phi))
        for phi in grid(-math.pi, math.pi, 401)
    )
    return _check("LO-scheme signal matches the closed form", dev, 1e-9)


def ono_numeric_delta_phi(phi=math.pi, **point):
    mean, var = ono_numeric_moments(phi, **point)
    slope = central_difference(lambda x: ono_numeric_moments(x, **point)[0], phi)
    return math.sqrt(var) / abs(slope)


def check_ono_sensitivity():
    num = ono_numeric_delta_phi()
    args = (ONO_POINT["n_c"], ONO_POINT["n_s"], ONO_POINT["n_lo"])
    published = math.sqrt(ono_phase_variance(*args))
    ordered = math.sqrt(ono_phase_variance_ordered(*args))
    return [
        _check("LO-scheme sensitivity at phi=pi vs published closed form", abs(num / published - 1), 1e-6,
               f"numeric {num:.8f}, closed {published:.8f}"),
        _check("LO-scheme sensitivity at phi=pi vs ordered-variance closed form", abs(num / ordered - 1), 1e-6,
               f"numeric {num:.8f}, closed {ordered:.8f}"),
    ]


def check_finite_transmissivity(T=1e-8):
    dev = 0.0
    for phi in grid(0.0, 2 * math.pi, 41):
        m0, v0 = ono_numeric_moments(phi)
        m1, v1 = ono_numeric_moments(phi, T=T)
        dev = max(dev, abs(m1 - m0) / max(1.0, abs(m0)), abs(v1 - v0) / max(1.0, abs(v0)))
    return _check(f"finite-T LO (T={T:g}) vs exact displacement", dev, 1e-5)


def check_cutoff_convergence():
    dev = 0.0
    for n_c, n_s in ((2.0, 2.0), (5.0, 5.0)):
        ref = mzi_fock(_oracle_state(n_c, n_s), 0.7)
        big = mzi_fock(_oracle_state(n_c, n_s, extra=20), 0.7)
        dev = max(dev, abs(parity_fock(ref, 0) - parity_fock(big, 0)),
                  *(abs(a - b) for a, b in zip(number_moments_fock(ref), number_moments_fock(big))))
    # the discarded tail (~1e-12) is weighted by n^2 in the variance, so demand
    # stability one decade below the 1e-6 oracle tolerance rather than at 1e-12
    return _check("Fock results stable when the cutoff grows by 20", dev, 1e-7)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    elapsed = time.perf_counter() - t0
    checks = out if isinstance(out, list) else [out]
    for c in checks:
        c.seconds = elapsed / len(checks)
    return checks


def verify(level="quick", optimal_variance=parity_optimal_variance):
    """Run the cross-check matrix.

    Args:
        level: ``quick`` or ``full``.
        optimal_variance: closed-form parity optimum to test for QCRB saturation.

    Returns:
        Report collecting every check.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    report = Report(level)
    jobs = [
        (check_saturation, optimal_variance),
        (check_parity_numeric,),
        (check_coherent_fringe,),
        (check_numeric_limit,),
        (check_oracle, (0.0, 0.5, 1.0)),
        (check_signal_calibration,),
        (check_ono_sensitivity,),
    ]
    if level == "full":
        jobs += [
            (check_oracle, (0.0, 0.5, 1.0, 2.0)),
            (check_finite_transmissivity,),
            (check_cutoff_convergence,),
        ]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for fn, *args in jobs:
            try:
                report.checks.extend(_timed(fn, *args))
            except Exception as exc:  # a crashing check is a failed check
                report.checks.append(Check(fn.__name__, False, math.inf, 0.0, f"raised {exc!r}"))
    return report
