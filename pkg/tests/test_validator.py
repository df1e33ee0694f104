"""Validator gates: refutation margins for classical families, soundness
on genuine states, and the report plumbing."""

import math

import numpy as np
import pytest

from tomokit.charfun import (
    AnalyticCharFn,
    CharFnProvider,
    ExpFamilyCharFn,
    MixtureCharFn,
    TabulatedPdf,
    TabulatedPdfCharFn,
    chisq_family,
    exponential_family,
    gamma_family,
    gaussian_eta_family,
)
from tomokit.errors import DivergentNormalizerError, TruncationWarning
from tomokit.states import CoherentState, HarmonicOscillator
from tomokit.validator import (
    ANALYTIC_TOLERANCES,
    EMPIRICAL_TOLERANCES,
    ValidatorConfig,
    check_diag_positivity,
    check_hermiticity,
    check_overlap,
    check_trace,
    expfamily_gate,
    frame_lattice,
    power_exponential_charfn,
    validate,
)

INV_SQRT_PI = 0.56418958354775628


class TestLattice:
    def test_symmetric_through_zero(self):
        axis = frame_lattice(6.0, 0.1)
        assert axis.size == 121
        assert axis[0] == -6.0 and axis[-1] == 6.0
        assert 0.0 in axis
        np.testing.assert_allclose(np.diff(axis), 0.1, rtol=1e-12)

    def test_halfwidth_rounding(self):
        axis = frame_lattice(6.0, 0.75)
        assert axis.size == 17
        assert axis[-1] == 6.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ValidatorConfig(halfwidth=-1.0)
        with pytest.raises(ValueError):
            ValidatorConfig(lattice_step=0.0)
        with pytest.raises(ValueError):
            ValidatorConfig(y_nodes=2)


class TestTraceGate:
    def test_exponential_witness(self):
        # lambda = 1: phi(1) = 1/(1 - i) = 0.5 + 0.5i, a fixed witness value
        res = check_trace(ExpFamilyCharFn(exponential_family(1.0)))
        assert res.value.real == pytest.approx(0.5, abs=1e-10)
        assert res.value.imag == pytest.approx(0.5, abs=1e-10)
        assert not res.passed

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_exponential_margins(self, lam):
        res = check_trace(ExpFamilyCharFn(exponential_family(lam)))
        margin = abs(res.value - 1.0)
        assert margin == pytest.approx(1.0 / math.sqrt(lam * lam + 1.0), rel=1e-9)
        assert margin >= 0.1

    @pytest.mark.parametrize("k", [1.0, 2.0, 3.0])
    def test_gamma_margins(self, k):
        res = check_trace(ExpFamilyCharFn(gamma_family(k, 1.0)))
        assert abs(res.value - 1.0) >= 0.1
        assert res.value == pytest.approx((1.0 - 1.0j) ** (-k), rel=1e-8)

    @pytest.mark.parametrize("k", [1.0, 2.0, 4.0])
    def test_chisq_margins(self, k):
        res = check_trace(ExpFamilyCharFn(chisq_family(k)))
        assert abs(res.value - 1.0) >= 0.1
        assert res.value == pytest.approx((1.0 - 2.0j) ** (-0.5 * k), rel=1e-8)

    def test_quantum_families_pass(self):
        for model in (HarmonicOscillator(3), CoherentState(1.0 + 0.5j)):
            assert check_trace(AnalyticCharFn(model)).passed


class TestPowerExponential:
    def test_fixed_values(self):
        assert power_exponential_charfn(1.0, 1.0) == pytest.approx(
            0.5 + 0.5j, abs=1e-14
        )
        assert power_exponential_charfn(2.0, 1.0) == pytest.approx(0.5j, abs=1e-14)

    def test_point_mass_limit(self):
        # p -> inf concentrates the density at 0, where phi -> 1
        assert abs(power_exponential_charfn(1.0, 1e6) - 1.0) < 2e-6

    def test_matches_gamma_integrator(self):
        for k, p in [(1.0, 1.0), (2.5, 0.7), (0.5, 2.0)]:
            closed = power_exponential_charfn(k, p)
            numeric = ExpFamilyCharFn(gamma_family(k, 1.0 / p)).charfn(1.0, 0.3, 0.7)
            assert numeric == pytest.approx(closed, rel=1e-7)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            power_exponential_charfn(0.0, 1.0)
        with pytest.raises(ValueError):
            power_exponential_charfn(1.0, -2.0)


class TestHermiticityGate:
    def test_analytic_states_exact(self):
        axis = frame_lattice(4.0, 0.5)
        for model in (HarmonicOscillator(2), CoherentState(1.0 + 1.0j)):
            sup = check_hermiticity(AnalyticCharFn(model), axis, axis)
            assert sup <= 1e-12

    def test_frame_blind_family_detected(self):
        # a fixed asymmetric pdf used at every frame: the mirrored call
        # conjugates phi, so the defect is 2 |Im phi(1)| = 1 for this family
        axis = frame_lattice(2.0, 0.5)
        sup = check_hermiticity(ExpFamilyCharFn(exponential_family(1.0)), axis, axis)
        assert sup == pytest.approx(1.0, abs=1e-9)

    def test_symmetric_frame_blind_family_slips_through(self):
        # symmetric pdfs have a real characteristic function, which this
        # particular gate cannot refute; the trace or diag gate must act
        x = np.linspace(-8.0, 8.0, 1601)
        flat = TabulatedPdf(x, np.exp(-0.125 * x * x) / math.sqrt(8.0 * math.pi))
        axis = frame_lattice(2.0, 0.5)
        assert check_hermiticity(TabulatedPdfCharFn(flat), axis, axis) <= 1e-12


class TestOverlapGate:
    def test_orthogonal_states(self):
        val = check_overlap(
            AnalyticCharFn(HarmonicOscillator(0)),
            AnalyticCharFn(HarmonicOscillator(1)),
        )
        assert abs(val) <= 1e-6

    def test_pure_state_purity(self):
        val = check_overlap(
            AnalyticCharFn(HarmonicOscillator(0)),
            AnalyticCharFn(HarmonicOscillator(0)),
        )
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_mixture_purity(self):
        mix = MixtureCharFn(
            [
                (0.5, AnalyticCharFn(HarmonicOscillator(0))),
                (0.5, AnalyticCharFn(HarmonicOscillator(1))),
            ]
        )
        assert check_overlap(mix, mix) == pytest.approx(0.5, abs=1e-6)

    def test_truncation_warning(self):
        axis = frame_lattice(2.0, 0.1)  # far too narrow for these states
        prov = AnalyticCharFn(HarmonicOscillator(0))
        with pytest.warns(TruncationWarning):
            check_overlap(prov, prov, axis, axis)


class _RippledGaussian(CharFnProvider):
    """phi(1; mu, nu) = (1 - mu^2) e^(-(mu^2 + nu^2)/4): hermitian and
    unit-trace by construction, but its nu = 0 line Fourier-transforms to
    (4 y^2 - 1) e^(-y^2) / sqrt(pi), which dips to -1/sqrt(pi) at y = 0."""

    kind = "synthetic"
    decay_halfwidth = 10.0

    def charfn(self, t, mu, nu):
        mus = np.asarray(mu, dtype=float)
        nus = np.asarray(nu, dtype=float)
        s2 = mus * mus + nus * nus
        out = (1.0 - mus * mus) * np.exp(-0.25 * t * t * s2) + 0j
        return complex(out) if out.ndim == 0 else out


class TestDiagGate:
    def test_ground_state_density(self):
        prov = AnalyticCharFn(HarmonicOscillator(0))
        y = np.linspace(-4.0, 4.0, 81)
        res = check_diag_positivity(prov, y, frame_lattice(10.0, 0.1))
        assert res.passed
        assert res.imag_sup <= 1e-10
        # the nu = 0 line inverts to the position density
        mid = res.values[res.y.size // 2]
        assert mid == pytest.approx(INV_SQRT_PI, rel=1e-8)

    def test_negative_dip_detected(self):
        res = check_diag_positivity(
            _RippledGaussian(), np.linspace(-6.0, 6.0, 121), frame_lattice(10.0, 0.1)
        )
        assert not res.passed
        assert res.diag_min == pytest.approx(-INV_SQRT_PI, abs=1e-6)


class TestValidate:
    @pytest.mark.parametrize(
        "model",
        [HarmonicOscillator(0), HarmonicOscillator(3), CoherentState(1.0 - 0.5j)],
        ids=lambda m: type(m).__name__ + str(getattr(m, "n", "")),
    )
    def test_sound_on_states(self, model):
        report = validate(AnalyticCharFn(model))
        assert report.overall
        assert report.trace_check.passed
        assert report.hermiticity_sup <= 1e-8
        assert 1.0 - 1e-3 <= report.purity.value.real <= 1.0 + 1e-3
        assert report.diag_min >= -1e-6

    def test_mixture_purity_half(self):
        mix = MixtureCharFn(
            [
                (0.5, AnalyticCharFn(HarmonicOscillator(0))),
                (0.5, AnalyticCharFn(HarmonicOscillator(1))),
            ]
        )
        report = validate(mix)
        assert report.overall
        assert report.purity.value.real == pytest.approx(0.5, abs=1e-3)

    def test_exponential_family_rejected(self):
        # frame-blind |phi| never decays, so the purity integral is also
        # visibly truncated and the report must say so
        with pytest.warns(TruncationWarning):
            report = validate(ExpFamilyCharFn(exponential_family(1.0)))
        assert not report.overall
        assert not report.trace_check.passed
        assert not report.hermiticity_pass
        assert report.warnings

    def test_lattice_sized_from_provider(self):
        prov = AnalyticCharFn(HarmonicOscillator(0))
        report = validate(prov)
        assert report.lattice["halfwidth"] == pytest.approx(prov.decay_halfwidth)
        pinned = validate(prov, ValidatorConfig(halfwidth=11.0))
        assert pinned.lattice["halfwidth"] == 11.0

    def test_worker_count_does_not_move_values(self):
        prov = AnalyticCharFn(HarmonicOscillator(1))
        a = validate(prov, ValidatorConfig(threads=1))
        b = validate(prov, ValidatorConfig(threads=4))
        assert a.trace_check.value == b.trace_check.value
        assert a.hermiticity_sup == b.hermiticity_sup
        assert a.purity.value == b.purity.value
        assert a.diag_min == b.diag_min

    def test_report_dict_shape(self):
        report = validate(AnalyticCharFn(HarmonicOscillator(0)))
        doc = report.to_dict()
        assert doc["provider"] == "ho:n=0"
        assert doc["trace_check"]["value"] == [1.0, 0.0]
        assert isinstance(doc["purity"]["value"], float)
        assert set(doc["tolerances"]) == {"trace", "hermiticity", "purity", "diag"}
        assert doc["lattice"]["nodes_per_axis"] % 2 == 1
        assert doc["overall"] is True

    def test_empirical_tolerances_are_looser(self):
        assert EMPIRICAL_TOLERANCES.trace > ANALYTIC_TOLERANCES.trace
        assert EMPIRICAL_TOLERANCES.hermiticity > ANALYTIC_TOLERANCES.hermiticity


class TestExpFamilyGate:
    # halfwidth left unset so the gate's own decay scan sizes the lattice
    CONFIG = ValidatorConfig(lattice_step=0.2)

    def test_bound_gaussian_passes_with_patched_origin(self):
        spec = gaussian_eta_family(0.0, "inv-s2")
        report = expfamily_gate(spec, self.CONFIG)
        assert report.overall
        assert any("(0, 0)" in note for note in report.notes)
        assert report.purity.value.real == pytest.approx(1.0, abs=1e-3)

    def test_exponential_fails(self):
        with pytest.warns(TruncationWarning):
            report = expfamily_gate(exponential_family(1.0), self.CONFIG)
        assert not report.overall
        margin = abs(report.trace_check.value - 1.0)
        assert margin == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-9)

    def test_family_wide_divergence_propagates(self):
        with pytest.raises(DivergentNormalizerError):
            expfamily_gate(gaussian_eta_family(0.0, 0.1), self.CONFIG)
