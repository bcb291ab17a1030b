import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paritymzi.detection import parity_closed
from paritymzi.errors import DomainError, TruncationError, TruncationWarning, UsageError
from paritymzi.fock import (
    FockVector,
    TwoModeFock,
    apply_bs_fock,
    apply_phase_fock,
    coherent_fock,
    cutoff_heuristic,
    input_state_fock,
    mzi_fock,
    number_moments_fock,
    parity_fock,
    squeezed_vacuum_fock,
)


def test_single_photon_beam_splitter():
    out = apply_bs_fock(TwoModeFock.basis(1, 0))
    np.testing.assert_allclose(out.amplitudes[1, 0], 1 / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(out.amplitudes[0, 1], 1j / math.sqrt(2), atol=1e-15)


def test_hong_ou_mandel_dip():
    out = apply_bs_fock(TwoModeFock.basis(1, 1))
    assert abs(out.amplitudes[1, 1]) < 1e-14
    np.testing.assert_allclose(abs(out.amplitudes[2, 0]) ** 2, 0.5, atol=1e-15)
    np.testing.assert_allclose(abs(out.amplitudes[0, 2]) ** 2, 0.5, atol=1e-15)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.floats(-math.pi, math.pi))
def test_beam_splitter_and_phase_preserve_norm(seed, phi):
    rng = np.random.default_rng(seed)
    c = 12
    n = np.add.outer(np.arange(c), np.arange(c))
    amps = (rng.normal(size=(c, c)) + 1j * rng.normal(size=(c, c))) * (n < c)
    amps /= np.linalg.norm(amps)
    s = TwoModeFock(amps)
    out = mzi_fock(s, phi)
    assert out.norm2 == pytest.approx(1.0, abs=1e-13)
    # total photon number distribution is untouched by passive optics
    np.testing.assert_allclose(out.total_number_distribution(), s.total_number_distribution(), atol=1e-13)


def test_coherent_fock_statistics():
    v = coherent_fock(3.0, 0.4, 60)
    assert v.mean_number() == pytest.approx(3.0, abs=1e-12)
    k = np.arange(10)
    poisson = np.exp(-3.0) * 3.0**k / np.array([math.factorial(i) for i in k])
    np.testing.assert_allclose(v.probabilities()[:10], poisson, rtol=1e-12)
    assert v.parity() == pytest.approx(math.exp(-6.0), rel=1e-10)


def test_squeezed_vacuum_fock_statistics():
    v = squeezed_vacuum_fock(2.0, cutoff_heuristic(2.0, squeezed=True))
    p = v.probabilities()
    assert np.all(p[1::2] == 0)
    assert v.mean_number() == pytest.approx(2.0, abs=1e-9)
    assert v.parity() == pytest.approx(1.0, abs=1e-12)
    assert v.leak < 1e-12


def test_cutoff_heuristic():
    assert cutoff_heuristic(0) == 30
    assert cutoff_heuristic(10) == math.ceil(10 + 10 * math.sqrt(11) + 20)
    assert cutoff_heuristic(10, squeezed=True) > cutoff_heuristic(10)
    with pytest.raises(DomainError):
        cutoff_heuristic(-1)


@pytest.mark.parametrize("n", [1.0, 2.0, 5.0, 10.0])
def test_squeezed_cutoff_keeps_tail_small(n):
    v = squeezed_vacuum_fock(n, cutoff_heuristic(n, squeezed=True))
    assert v.leak < 1e-11


def test_truncation_error_reports_leak():
    with pytest.raises(TruncationError) as info:
        coherent_fock(20.0, 0.0, 10)
    assert info.value.leak > 0.5
    assert "leak=" in str(info.value)


def test_oracle_warns_on_leaky_state():
    s = TwoModeFock.product(coherent_fock(3.0, 0.0, 16, leak_tolerance=1e-2), coherent_fock(0.0, 0.0, 2))
    with pytest.warns(TruncationWarning):
        parity_fock(s, 0)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        coherent_fock(-1.0, 0.0, 10)
    with pytest.raises(DomainError):
        squeezed_vacuum_fock(math.nan, 10)
    with pytest.raises(UsageError):
        TwoModeFock(np.ones((2, 3)))
    with pytest.raises(UsageError):
        apply_phase_fock(TwoModeFock.basis(0, 0), 2, 0.1)
    with pytest.raises(DomainError):
        FockVector(np.ones(4))


@pytest.mark.parametrize("n_c,n_s", [(0.0, 1.0), (1.0, 0.0), (0.5, 0.5), (2.0, 1.0)])
@pytest.mark.parametrize("phi", [0.1, 0.7, 1.6, 3.0])
def test_oracle_parity_matches_closed_form(n_c, n_s, phi):
    out = mzi_fock(input_state_fock(n_c, 0.0, n_s), phi)
    assert parity_fock(out, 0) == pytest.approx(parity_closed(n_c, n_s, 0.0, phi), abs=1e-10)


def test_oracle_coherent_moments():
    # coherent light through the interferometer: n_a = n sin^2(phi/2)
    n, phi = 2.0, 0.9
    out = mzi_fock(input_state_fock(n, 0.3, 0.0), phi)
    na, nb, var = number_moments_fock(out)
    assert na == pytest.approx(n * math.sin(phi / 2) ** 2, abs=1e-10)
    assert nb == pytest.approx(n * math.cos(phi / 2) ** 2, abs=1e-10)
    assert var == pytest.approx(n, abs=1e-9)
