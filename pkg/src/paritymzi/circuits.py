"""Optical elements and the two interferometer layouts studied here.

``parity_mzi``: coherent light in mode 0, squeezed vacuum in mode 1, one
Mach-Zehnder interferometer, parity measured on output mode 0.

``ono_hofmann``: the same interferometer followed by local-oscillator (LO)
injection into mode 0 and a second Mach-Zehnder stage; the photon-number
difference of the two final outputs is measured.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError, UsageError
from .gaussian import (
    GaussianState,
    LinearMap,
    apply,
    chain,
    coherent_state,
    displacement,
    embed,
    squeezed_vacuum,
    tensor,
)

BS_5050 = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)

DEFAULT_T = 1e-6

# The second stage is driven at its balanced (half-transmitting) point when the
# control phase is zero; this fixes the port labelling so that the detected
# signal is I = -2 sqrt(n_c n_lo) cos(phi/2) cos(phi/2 + phi_c - phi_lo) + (n_c - n_s) sin(phi).
_SECOND_STAGE_OFFSET = math.pi / 2
# LO phase offset picked up at the mixing beam splitter, same calibration.
_LO_PHASE_OFFSET = math.pi / 2


def _two_modes(modes):
    i, j = modes
    if i == j:
        raise UsageError("beam splitter needs two distinct modes")
    if i < 0 or j < 0:
        raise UsageError(f"negative mode index in {modes}")
    return i, j


def beam_splitter_5050(modes=(0, 1), n_modes=None):
    """Balanced beam splitter with amplitude matrix ``[[1, i], [i, 1]] / sqrt(2)``."""
    i, j = _two_modes(modes)
    n_modes = max(i, j) + 1 if n_modes is None else n_modes
    return _beam_splitter(i, j, n_modes)


@lru_cache(maxsize=None)
def _beam_splitter(i, j, n_modes):
    # maps are immutable, so one instance per placement can be shared
    return embed(LinearMap.from_amplitudes(BS_5050), (i, j), n_modes)


def phase_shifter(mode, phi, n_modes=None):
    """Phase delay ``alpha -> exp(-1j * phi) * alpha`` on one mode."""
    if mode < 0:
        raise UsageError(f"invalid mode {mode}")
    n_modes = mode + 1 if n_modes is None else n_modes
    return embed(LinearMap.from_amplitudes([[np.exp(-1j * phi)]]), (mode,), n_modes)


def mzi_amplitudes(phi):
    """Mode-amplitude matrix of BS . diag(1, e^{-i phi}) . BS."""
    return BS_5050 @ np.diag([1, np.exp(-1j * phi)]) @ BS_5050


def mzi(phi, modes=(0, 1), n_modes=None):
    """Mach-Zehnder interferometer: beam splitter, phase ``phi`` on the second arm, beam splitter.

    The amplitude matrix equals ``i exp(-i phi/2) [[sin(phi/2), cos(phi/2)], [cos(phi/2), -sin(phi/2)]]``.
    """
    i, j = _two_modes(modes)
    n_modes = max(i, j) + 1 if n_modes is None else n_modes
    return chain(
        beam_splitter_5050((i, j), n_modes),
        phase_shifter(j, phi, n_modes),
        beam_splitter_5050((i, j), n_modes),
    )


def lo_amplitude(n_lo, phi_lo):
    """Complex displacement the LO imprints on the signal mode in the T -> 0 limit."""
    if not np.isfinite(n_lo) or n_lo < 0:
        raise DomainError(f"n_lo must be finite and non-negative, got {n_lo!r}")
    return math.sqrt(n_lo) * np.exp(-1j * (phi_lo + _LO_PHASE_OFFSET))


def lo_displacement(mode, n_lo, phi_lo, n_modes=None):
    """Exact T -> 0 limit of LO injection: a displacement of magnitude ``sqrt(n_lo)``."""
    n_modes = mode + 1 if n_modes is None else n_modes
    return displacement(mode, lo_amplitude(n_lo, phi_lo), n_modes)


class LOInjection(NamedTuple):
    """Finite-transmissivity LO mixer: the ancilla to append and the map on ``n_modes + 1`` modes."""

    ancilla: GaussianState
    map: LinearMap


def lo_injection(mode, n_lo, phi_lo, T=DEFAULT_T, n_modes=None):
    """Mix a coherent LO into ``mode`` through a beam splitter of transmissivity ``T``.

    The LO enters on a fresh ancilla mode (index ``n_modes``) with ``n_lo / T``
    photons, so that ``n_lo`` photons reach the signal mode. The signal keeps an
    amplitude ``sqrt(1 - T)``; at ``T = 1`` signal and ancilla swap.
    """
    if not 0 < T <= 1:
        raise DomainError(f"transmissivity must lie in (0, 1], got {T!r}")
    n_modes = mode + 1 if n_modes is None else n_modes
    if not 0 <= mode < n_modes:
        raise UsageError(f"mode {mode} out of range")
    gamma = lo_amplitude(n_lo, phi_lo) / math.sqrt(T)
    ancilla = coherent_state(abs(gamma) ** 2, -np.angle(gamma))
    t, r = math.sqrt(T), math.sqrt(1 - T)
    mixer = LinearMap.from_amplitudes([[r, t], [-t, r]])
    return LOInjection(ancilla, embed(mixer, (mode, n_modes), n_modes + 1))


@dataclass(frozen=True)
class CircuitPreset:
    """Named layout plus its parameters.

    ``parameters`` keys: ``phi, phi_c, n_c, n_s``; for ``ono_hofmann`` also
    ``n_lo, phi_lo, T, control_phase`` where ``T=None`` selects the exact
    displacement model of the LO.
    """

    name: str
    parameters: dict = field(default_factory=dict)

    NAMES = ("parity_mzi", "ono_hofmann")
    DEFAULTS = {
        "parity_mzi": {"phi": 0.0, "phi_c": 0.0, "n_c": 0.0, "n_s": 0.0},
        "ono_hofmann": {
            "phi": 0.0, "phi_c": 0.0, "n_c": 0.0, "n_s": 0.0,
            "n_lo": 0.0, "phi_lo": math.pi / 2, "T": None, "control_phase": 0.0,
        },
    }

    def __post_init__(self):
        if self.name not in self.NAMES:
            raise UsageError(f"unknown preset {self.name!r}; expected one of {self.NAMES}")
        unknown = set(self.parameters) - set(self.DEFAULTS[self.name])
        if unknown:
            raise UsageError(f"unknown parameters for {self.name}: {sorted(unknown)}")
        params = {**self.DEFAULTS[self.name], **self.parameters}
        T = params.get("T")
        if T is not None and not 0 < T <= 1:
            raise DomainError(f"transmissivity must lie in (0, 1], got {T!r}")
        object.__setattr__(self, "parameters", params)

    def __getitem__(self, key):
        return self.parameters[key]


class BuiltCircuit(NamedTuple):
    input: GaussianState
    map: LinearMap
    detection_modes: tuple

    def output(self):
        return apply(self.map, self.input)


def build(preset):
    """Input state, total map and detected modes for a preset."""
    if not isinstance(preset, CircuitPreset):
        raise UsageError(f"expected a CircuitPreset, got {type(preset).__name__}")
    p = preset.parameters
    source = tensor(coherent_state(p["n_c"], p["phi_c"]), squeezed_vacuum(p["n_s"]))
    if preset.name == "parity_mzi":
        return BuiltCircuit(source, mzi(p["phi"]), (0,))

    second = p["control_phase"] + _SECOND_STAGE_OFFSET
    if p["T"] is None:
        total = chain(mzi(p["phi"]), lo_displacement(0, p["n_lo"], p["phi_lo"], 2), mzi(second))
        return BuiltCircuit(source, total, (0, 1))
    inj = lo_injection(0, p["n_lo"], p["phi_lo"], p["T"], n_modes=2)
    total = chain(mzi(p["phi"], n_modes=3), inj.map, mzi(second, n_modes=3))
    return BuiltCircuit(tensor(source, inj.ancilla), total, (0, 1))
