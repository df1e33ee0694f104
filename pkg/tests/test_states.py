"""State catalog: wavefunctions, normalization, supports, descriptors."""

import math

import numpy as np
import pytest
from scipy import integrate

from tomokit.errors import DescriptorError
from tomokit.states import (
    CoherentState,
    CrystallizedCat,
    HarmonicOscillator,
    PseudoharmonicOscillator,
    coherent_amplitudes,
    normalization_constant,
    packet_overlap_matrix,
    parse_state,
    position_support,
    state_descriptor,
    wavefunction,
)

# mpmath, 30 digits
PI_QUARTER_INV = 0.75112554446494248
CAT_NSQ_12_04 = 0.32255912638031928  # alpha = 1.2 + 0.4j


def _mass(model) -> float:
    lo, hi = position_support(model)
    x = np.linspace(lo, hi, 20001)
    dens = np.abs(wavefunction(model, x)) ** 2
    return float(integrate.simpson(dens, x=x))


class TestHarmonicOscillator:
    def test_ground_state_at_origin(self):
        assert wavefunction(HarmonicOscillator(0), 0.0) == pytest.approx(
            PI_QUARTER_INV, rel=1e-12
        )

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 10])
    def test_unit_mass(self, n):
        assert _mass(HarmonicOscillator(n)) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonality(self):
        x = np.linspace(-12.0, 12.0, 20001)
        psi3 = wavefunction(HarmonicOscillator(3), x)
        psi5 = wavefunction(HarmonicOscillator(5), x)
        overlap = integrate.simpson(psi3 * np.conj(psi5), x=x)
        assert abs(overlap) < 1e-10

    def test_negative_level_rejected(self):
        with pytest.raises(ValueError):
            HarmonicOscillator(-1)


class TestPseudoharmonicOscillator:
    def test_b_parameter(self):
        assert PseudoharmonicOscillator(a=0.0, n=0).b == pytest.approx(0.5)
        assert PseudoharmonicOscillator(a=6.0, n=0).b == pytest.approx(2.5)

    @pytest.mark.parametrize("a,n", [(0.0, 0), (0.0, 3), (10.0, 1), (100.0, 2), (1000.0, 3)])
    def test_unit_mass(self, a, n):
        assert _mass(PseudoharmonicOscillator(a=a, n=n)) == pytest.approx(
            1.0, abs=1e-8
        )

    def test_vanishes_on_negative_axis(self):
        psi = wavefunction(PseudoharmonicOscillator(a=2.0, n=1), np.array([-1.0, -0.1, 0.0]))
        assert np.all(psi == 0.0)

    def test_zero_coupling_ground_state_shape(self):
        # a = 0, n = 0 must be proportional to x e^(-x^2/2) on x > 0
        x = np.linspace(0.1, 5.0, 40)
        psi = wavefunction(PseudoharmonicOscillator(a=0.0, n=0), x).real
        ratio = psi / (x * np.exp(-0.5 * x * x))
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-10)

    def test_orthogonality_same_a(self):
        x = np.linspace(0.0, 20.0, 40001)
        a = 10.0
        psi0 = wavefunction(PseudoharmonicOscillator(a=a, n=0), x)
        psi2 = wavefunction(PseudoharmonicOscillator(a=a, n=2), x)
        overlap = integrate.simpson(psi0 * np.conj(psi2), x=x)
        assert abs(overlap) < 1e-9

    def test_oscillator_length_scaling(self):
        base = PseudoharmonicOscillator(a=3.0, n=1)
        wide = PseudoharmonicOscillator(a=3.0, n=1, x_omega=2.0)
        x = np.linspace(0.2, 6.0, 17)
        np.testing.assert_allclose(
            wavefunction(wide, x),
            wavefunction(base, x / 2.0) / math.sqrt(2.0),
            rtol=1e-12,
        )

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            PseudoharmonicOscillator(a=-0.5, n=0)
        with pytest.raises(ValueError):
            PseudoharmonicOscillator(a=1.0, n=0, x_omega=0.0)


class TestPackets:
    def test_coherent_zero_is_ground_state(self):
        x = np.linspace(-4.0, 4.0, 33)
        np.testing.assert_allclose(
            wavefunction(CoherentState(0.0), x),
            wavefunction(HarmonicOscillator(0), x),
            rtol=1e-12,
        )

    def test_coherent_mass(self):
        assert _mass(CoherentState(1.0 + 0.5j)) == pytest.approx(1.0, abs=1e-9)

    def test_coherent_mean_position(self):
        alpha = 1.0 + 0.5j
        model = CoherentState(alpha)
        lo, hi = position_support(model)
        x = np.linspace(lo, hi, 20001)
        dens = np.abs(wavefunction(model, x)) ** 2
        mean = integrate.simpson(dens * x, x=x)
        assert mean == pytest.approx(math.sqrt(2.0) * alpha.real, abs=1e-9)

    def test_cat_amplitudes_form_triangle(self):
        amps = coherent_amplitudes(CrystallizedCat(1.0))
        assert len(amps) == 3
        # the three amplitudes are the cube roots of unity times alpha
        np.testing.assert_allclose(sorted(np.angle(amps)), [-2*math.pi/3, 0.0, 2*math.pi/3], atol=1e-12)

    def test_cat_mass(self):
        assert _mass(CrystallizedCat(1.2 + 0.4j)) == pytest.approx(1.0, abs=1e-9)

    def test_cat_normalization_oracle(self):
        nsq, _, _ = packet_overlap_matrix(CrystallizedCat(1.2 + 0.4j))
        assert nsq == pytest.approx(CAT_NSQ_12_04, rel=1e-12)

    def test_cat_small_alpha_limit(self):
        # all three packets coincide as alpha -> 0, so N^2 -> 1/9
        nsq, _, _ = packet_overlap_matrix(CrystallizedCat(1e-8))
        assert nsq == pytest.approx(1.0 / 9.0, rel=1e-6)

    def test_packet_overlap_matrix_is_gram(self):
        model = CrystallizedCat(0.9 - 0.3j)
        _, amps, gram_log = packet_overlap_matrix(model)
        x = np.linspace(-10.0, 10.0, 40001)
        for j in range(3):
            for k in range(3):
                pj = wavefunction(CoherentState(amps[j]), x)
                pk = wavefunction(CoherentState(amps[k]), x)
                direct = integrate.simpson(np.conj(pk) * pj, x=x)
                assert np.exp(gram_log[j, k]) == pytest.approx(direct, abs=1e-9)

    def test_normalization_constant(self):
        assert normalization_constant(HarmonicOscillator(2)) == 1.0
        assert normalization_constant(CrystallizedCat(1.2 + 0.4j)) == pytest.approx(
            math.sqrt(CAT_NSQ_12_04), rel=1e-10
        )


class TestDescriptors:
    @pytest.mark.parametrize(
        "text,expect",
        [
            ("ho:n=0", HarmonicOscillator(0)),
            ("ho:n=7", HarmonicOscillator(7)),
            ("pho:a=10,n=2", PseudoharmonicOscillator(a=10.0, n=2)),
            ("pho:a=0,n=1,xw=2.5", PseudoharmonicOscillator(a=0.0, n=1, x_omega=2.5)),
            ("coh:re=1", CoherentState(1.0)),
            ("coh:re=1,im=-0.5", CoherentState(1.0 - 0.5j)),
            ("ccat:re=1.2,im=0.4", CrystallizedCat(1.2 + 0.4j)),
        ],
    )
    def test_parse(self, text, expect):
        assert parse_state(text) == expect

    def test_round_trip(self):
        for model in (
            HarmonicOscillator(3),
            PseudoharmonicOscillator(a=100.0, n=1, x_omega=0.5),
            CoherentState(-0.25 + 2.0j),
            CrystallizedCat(1.0),
        ):
            assert parse_state(state_descriptor(model)) == model

    @pytest.mark.parametrize(
        "text",
        ["", "ho", "ho:n=-1", "ho:m=1", "pho:a=1", "coh:", "what:n=1", "ho:n=1,n=2", "ho:n=1.5"],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(DescriptorError):
            parse_state(text)
