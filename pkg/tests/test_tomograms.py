"""Tomogram evaluation: closed forms, the quadrature route, frames,
homogeneity, and domain sizing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tomokit.errors import DegenerateFrameError, UnsupportedFrameError
from tomokit.states import (
    CoherentState,
    CrystallizedCat,
    HarmonicOscillator,
    PseudoharmonicOscillator,
    wavefunction,
)
from tomokit.tomograms import (
    FrameParams,
    frame_from_squeeze,
    optical_frame,
    optical_tomogram,
    tomogram,
    tomogram_analytic,
    tomogram_domain,
    tomogram_numeric,
)

INV_SQRT_PI = 0.56418958354775628


def _rel_defect(a: np.ndarray, b: np.ndarray) -> float:
    """Pointwise relative gap with an absolute floor tied to the curve
    peak, so exact polynomial zeros do not divide rounding noise by an
    underflowing true value."""
    floor = 1e-12 * float(np.max(np.abs(a)))
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a), floor)))


class TestFrames:
    def test_squeeze_frame(self):
        fr = frame_from_squeeze(2.0, math.pi / 2.0)
        assert fr.mu == pytest.approx(0.0, abs=1e-12)
        assert fr.nu == pytest.approx(0.5)

    def test_optical_frame_is_unit_squeeze(self):
        a = optical_frame(0.7)
        b = frame_from_squeeze(1.0, 0.7)
        assert (a.mu, a.nu) == (b.mu, b.nu)

    def test_squeeze_must_be_positive(self):
        with pytest.raises(ValueError):
            frame_from_squeeze(0.0, 1.0)

    def test_nonfinite_frame_rejected(self):
        with pytest.raises(ValueError):
            FrameParams(float("nan"), 1.0)


class TestClosedForms:
    def test_ground_state_peak(self):
        w = tomogram_analytic(HarmonicOscillator(0), 0.0, FrameParams(1.0, 0.0))
        assert w == pytest.approx(INV_SQRT_PI, rel=1e-12)

    def test_ground_state_rotated(self):
        w = tomogram_analytic(HarmonicOscillator(0), 1.0, FrameParams(1.0, 1.0))
        # Gaussian with variance s^2/2 = 1
        assert w == pytest.approx(math.exp(-0.5) / math.sqrt(2.0 * math.pi), rel=1e-12)

    def test_first_level_rotated(self):
        # mpmath: |psi_1(1/sqrt2)|^2 / sqrt2
        w = tomogram_analytic(HarmonicOscillator(1), 1.0, FrameParams(1.0, 1.0))
        assert w == pytest.approx(0.24197072451914335, rel=1e-12)

    def test_coherent_displaced_peak(self):
        w = tomogram_analytic(CoherentState(1.0), math.sqrt(2.0), FrameParams(1.0, 0.0))
        assert w == pytest.approx(INV_SQRT_PI, rel=1e-12)

    def test_position_frame_is_wavefunction_density(self):
        x = np.linspace(-3.0, 3.0, 13)
        for model in (HarmonicOscillator(2), CoherentState(0.5 - 1.0j)):
            w = tomogram_analytic(model, x, FrameParams(1.0, 0.0))
            np.testing.assert_allclose(
                w, np.abs(wavefunction(model, x)) ** 2, rtol=1e-10, atol=1e-15
            )

    def test_degenerate_frame_raises(self):
        with pytest.raises(DegenerateFrameError):
            tomogram_analytic(HarmonicOscillator(0), 0.0, FrameParams(0.0, 0.0))
        with pytest.raises(DegenerateFrameError):
            tomogram_numeric(HarmonicOscillator(0), 0.0, FrameParams(0.0, 0.0))

    def test_scalar_and_array_shapes(self):
        fr = FrameParams(0.8, -0.6)
        scalar = tomogram_analytic(HarmonicOscillator(1), 0.3, fr)
        assert isinstance(scalar, float)
        arr = tomogram_analytic(HarmonicOscillator(1), np.array([[0.3, 1.0]]), fr)
        assert arr.shape == (1, 2)
        assert arr[0, 0] == pytest.approx(scalar, rel=1e-14)


class TestNumericRoute:
    FRAMES = [
        FrameParams(1.0, 1.0),
        FrameParams(0.3, -2.0),
        FrameParams(-1.5, 0.7),
        FrameParams(2.0, 0.01),
    ]

    @pytest.mark.parametrize("frame", FRAMES)
    def test_matches_closed_forms(self, frame):
        x = np.linspace(-5.0, 5.0, 41)
        for model in (
            HarmonicOscillator(0),
            HarmonicOscillator(4),
            CoherentState(1.0 + 0.5j),
            CrystallizedCat(1.1 - 0.2j),
        ):
            a = tomogram_analytic(model, x, frame)
            n = tomogram_numeric(model, x, frame)
            assert _rel_defect(a, n) < 1e-8

    def test_matches_pho_closed_form(self):
        x = np.linspace(-6.0, 6.0, 25)
        for a_par in (0.0, 10.0):
            model = PseudoharmonicOscillator(a=a_par, n=2)
            a = tomogram_analytic(model, x, FrameParams(0.9, 1.4))
            n = tomogram_numeric(model, x, FrameParams(0.9, 1.4))
            assert _rel_defect(a, n) < 1e-7

    def test_position_like_limit(self):
        # tiny nu must fall back to the scaled wavefunction density
        model = HarmonicOscillator(2)
        x = np.linspace(-3.0, 3.0, 7)
        w = tomogram_numeric(model, x, FrameParams(2.0, 1e-9))
        expect = np.abs(wavefunction(model, x / 2.0)) ** 2 / 2.0
        np.testing.assert_allclose(w, expect, rtol=1e-7, atol=1e-14)

    def test_pho_position_frame_dispatch(self):
        # the closed form refuses nu = 0 and the dispatcher must recover
        model = PseudoharmonicOscillator(a=3.0, n=1)
        with pytest.raises(UnsupportedFrameError):
            tomogram_analytic(model, 1.0, FrameParams(1.0, 0.0))
        w = tomogram(model, 1.3, FrameParams(1.0, 0.0))
        assert w == pytest.approx(abs(wavefunction(model, 1.3)) ** 2, rel=1e-8)


class TestInvariants:
    STATES = [
        HarmonicOscillator(0),
        HarmonicOscillator(5),
        PseudoharmonicOscillator(a=10.0, n=1),
        CoherentState(1.0 + 1.0j),
        CrystallizedCat(1.5),
    ]

    @pytest.mark.parametrize("model", STATES, ids=lambda m: type(m).__name__)
    def test_nonnegative_and_normalized(self, model):
        frame = FrameParams(0.8, 1.1)
        lo, hi = tomogram_domain(model, frame)
        x = np.linspace(lo, hi, 6001)
        w = tomogram(model, x, frame)
        assert np.all(w > -1e-12)
        assert np.trapezoid(w, x) == pytest.approx(1.0, abs=5e-6)

    @given(
        lam=st.floats(min_value=0.2, max_value=5.0),
        flip=st.booleans(),
        x=st.floats(min_value=-3.0, max_value=3.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_homogeneity(self, lam, flip, x):
        """W(X | c mu, c nu) = W(X/c | mu, nu) / |c| for any c != 0."""
        if flip:
            lam = -lam
        model = HarmonicOscillator(2)
        base = FrameParams(0.9, -1.2)
        scaled = FrameParams(lam * base.mu, lam * base.nu)
        lhs = tomogram_analytic(model, x, scaled)
        rhs = tomogram_analytic(model, x / lam, base) / abs(lam)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)

    def test_homogeneity_packet_states(self):
        model = CrystallizedCat(1.0 + 0.5j)
        base = FrameParams(1.1, 0.4)
        for lam in (0.5, -2.0):
            scaled = FrameParams(lam * base.mu, lam * base.nu)
            x = np.linspace(-2.0, 2.0, 9)
            lhs = tomogram_analytic(model, x, scaled)
            rhs = tomogram_analytic(model, x / lam, base) / abs(lam)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10)

    def test_optical_tomogram_wrapper(self):
        x = np.linspace(-2.0, 2.0, 5)
        phi = 0.6
        np.testing.assert_allclose(
            optical_tomogram(HarmonicOscillator(1), x, phi),
            tomogram(HarmonicOscillator(1), x, optical_frame(phi)),
            rtol=1e-14,
        )

    def test_domain_captures_mass(self):
        # power-law tails force much wider windows than the Gaussian states
        model = PseudoharmonicOscillator(a=0.0, n=1)
        frame = FrameParams(1.0, 1.0)
        lo, hi = tomogram_domain(model, frame, tail_mass=1e-7)
        assert hi > 20.0
        x = np.linspace(lo, hi, 20001)
        w = tomogram(model, x, frame)
        assert np.trapezoid(w, x) == pytest.approx(1.0, abs=2e-6)
