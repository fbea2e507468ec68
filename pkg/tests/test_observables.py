"""
Occupations, quadrature variances, squeezing verdicts and the closed forms.
"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from optocool.errors import (NegativeOccupation, NonHermitianInput, OutsideValidity)
from optocool.model import PhysicalParams
from optocool.moments import MomentVector, build_system
from optocool.observables import (FieldKind, VarianceSet, classify_field, cooling_comparison,
                                  min_phonon_asymptotic, min_phonon_breakdown, phonon_number,
                                  photon_number, rwa_phonon_closed_form, rwa_resonant_phonon,
                                  steady_report, variance_asymptotic, variances)
from optocool.solve import steady_state

variance = st.floats(0.0, 10.0)


class TestOccupations:
    """N_a and N_b read-outs."""

    def test_thermal_vector(self):
        mu = MomentVector.thermal(12.5)
        assert phonon_number(mu) == 12.5
        assert photon_number(mu) == 0.0

    def test_negative_occupation(self):
        mu = np.zeros(10, dtype=complex)
        mu[1] = -1.0
        with pytest.raises(NegativeOccupation):
            phonon_number(MomentVector(mu))
        mu[1], mu[0] = 0.0, -1.0
        with pytest.raises(NegativeOccupation):
            photon_number(MomentVector(mu))


class TestVariances:
    """Quadratures of the hybrid modes d±."""

    def test_vacuum_level(self):
        vs = variances(MomentVector.vacuum())
        assert (vs.var_X_plus, vs.var_Y_plus, vs.var_X_minus, vs.var_Y_minus) == (0.5,) * 4
        assert vs.uncertainty_products == (0.25, 0.25)

    def test_thermal_mechanics(self):
        vs = variances(MomentVector.thermal(99.0))
        for value in (vs.var_X_plus, vs.var_Y_plus, vs.var_X_minus, vs.var_Y_minus):
            assert value == pytest.approx(50.0)

    def test_quadrature_moments_split_x_and_y(self):
        mu = np.zeros(10, dtype=complex)
        mu[6] = mu[7] = 0.1
        vs = variances(MomentVector(mu))
        assert vs.var_X_plus == pytest.approx(0.55)
        assert vs.var_Y_plus == pytest.approx(0.45)

    def test_unpaired_input_rejected(self):
        mu = np.zeros(10, dtype=complex)
        mu[2] = 1j
        with pytest.raises(NonHermitianInput):
            variances(MomentVector(mu))

    def test_pair_accessor(self):
        vs = VarianceSet(0.4, 0.6, 0.7, 0.3)
        assert vs.pair("d+") == (0.4, 0.6)
        assert vs.pair("d-") == (0.7, 0.3)
        with pytest.raises(ValueError):
            vs.pair("d0")


class TestClassification:
    """Squeezed, vacuum/coherent, chaotic or mixed."""

    @pytest.mark.parametrize("var_x,var_y,kind,quadrature", [
        (0.4, 0.7, FieldKind.SQUEEZED, "X"),
        (0.9, 0.45, FieldKind.SQUEEZED, "Y"),
        (0.5, 0.5, FieldKind.COHERENT_OR_VACUUM, None),
        (0.6, 0.7, FieldKind.CHAOTIC, None),
        (0.5, 0.7, FieldKind.MIXED, None),
    ])
    def test_rules(self, var_x, var_y, kind, quadrature):
        verdict = classify_field(VarianceSet(var_x, var_y, 0.5, 0.5), "d+")
        assert verdict.classification is kind
        assert verdict.squeezed_quadrature == quadrature
        assert verdict.margin == pytest.approx(0.5 - min(var_x, var_y))

    def test_tolerance(self):
        vs = VarianceSet(0.5 - 1e-8, 0.5 + 1e-8, 0.5, 0.5)
        assert classify_field(vs, "d+").classification is FieldKind.COHERENT_OR_VACUUM
        assert classify_field(vs, "d+", tol=1e-10).classification is FieldKind.SQUEEZED

    @given(variance, variance)
    def test_squeezed_iff_below_vacuum(self, var_x, var_y):
        verdict = classify_field(VarianceSet(0.5, 0.5, var_x, var_y), "d-")
        squeezed = min(var_x, var_y) < 0.5 - 1e-6
        assert (verdict.classification is FieldKind.SQUEEZED) == squeezed
        assert (verdict.squeezed_quadrature is not None) == squeezed


class TestRwaClosedForm:
    """Stationary RWA phonon number."""

    def test_matches_numerics(self, fig2_params):
        for delta in (-1.5, -1.0, -0.7):
            params = fig2_params.replace(delta=delta)
            numeric = phonon_number(steady_state(build_system(params, rwa=True)))
            assert numeric == pytest.approx(rwa_phonon_closed_form(params), rel=1e-9)

    def test_resonant_reduction(self, fig2_params, fig3_params):
        for params in (fig2_params, fig3_params):
            assert rwa_resonant_phonon(params) == pytest.approx(
                rwa_phonon_closed_form(params), rel=1e-12)

    def test_minimum_sits_on_the_red_sideband(self, fig2_params):
        at_resonance = rwa_phonon_closed_form(fig2_params)
        for delta in (-1.01, -0.99, -1.2, -0.8):
            assert rwa_phonon_closed_form(fig2_params.replace(delta=delta)) > at_resonance

    def test_no_coupling_gives_bath_occupation(self, decoupled_params):
        assert rwa_phonon_closed_form(decoupled_params) == pytest.approx(
            decoupled_params.n_bar, rel=1e-12)


class TestAsymptoticForms:
    """Red-sideband formulas for γm → 0 with γm·n̄ fixed."""

    def test_minimum_phonon_value(self):
        estimate = min_phonon_breakdown(0.5, 0.2, 1.0, 1e-2)
        assert estimate.total == pytest.approx(0.09185, rel=1e-3)
        assert estimate.dissipation == pytest.approx(0.05268, rel=1e-3)
        assert estimate.backaction == pytest.approx(0.03917, rel=1e-3)
        assert min_phonon_asymptotic(0.5, 0.2, 1.0, 1e-2) == estimate.total

    def test_backaction_floor_without_bath(self):
        estimate = min_phonon_breakdown(0.5, 0.2, 1.0, 0.0)
        assert estimate.dissipation == 0.0
        assert estimate.total == estimate.backaction > 0

    def test_variance_values(self):
        y_plus, x_minus = variance_asymptotic(0.5, 0.2, 1.0, 1e-2)
        assert y_plus == pytest.approx(0.4383, rel=1e-3)
        assert x_minus == pytest.approx(0.4660, rel=1e-3)

    @pytest.mark.parametrize("kappa,g", [(0.5, 0.6), (0.5, 0.0), (0.0, 0.2)])
    def test_outside_validity(self, kappa, g):
        with pytest.raises(OutsideValidity):
            min_phonon_asymptotic(kappa, g, 1.0, 1e-2)
        with pytest.raises(OutsideValidity):
            variance_asymptotic(kappa, g, 1.0, 1e-2)


class TestReports:
    """Composite steady-state read-outs."""

    def test_cooling_comparison(self, fig3_params):
        comparison = cooling_comparison(fig3_params)
        assert comparison.difference == comparison.n_b_full - comparison.n_b_rwa
        assert comparison.full_is_lower == (comparison.n_b_full < comparison.n_b_rwa)
        assert comparison.n_b_rwa > 0 and comparison.n_b_full > 0

    def test_full_report_on_the_red_sideband(self, fig05_params):
        report = steady_report(fig05_params, "full")
        plus, minus = report.verdicts
        assert plus.classification is FieldKind.SQUEEZED and plus.squeezed_quadrature == "Y"
        assert minus.classification is FieldKind.SQUEEZED and minus.squeezed_quadrature == "X"
        assert report.stability.stable
        assert report.closed_forms["asymptotic_min"] == pytest.approx(report.n_b, rel=0.05)
        row = report.as_row()
        assert row["model"] == "full"
        assert row["field_plus"] == "squeezed"
        assert row["n_b"] == report.n_b

    def test_rwa_report_has_closed_form(self, fig2_params):
        report = steady_report(fig2_params, "rwa")
        assert report.closed_forms["rwa_closed_form"] == pytest.approx(report.n_b, rel=1e-9)
        assert report.closed_forms["rwa_resonant"] == pytest.approx(report.n_b, rel=1e-9)

    def test_off_resonance_skips_asymptotics(self, fig05_params):
        report = steady_report(fig05_params.replace(delta=-0.8), "full")
        assert "asymptotic_min" not in report.closed_forms

    def test_unknown_model(self, fig05_params):
        with pytest.raises(ValueError):
            steady_report(fig05_params, "both")

    def test_uncertainty_floor_on_samples(self, rng):
        for _ in range(20):
            params = PhysicalParams(kappa=rng.uniform(0.05, 1.0), g=rng.uniform(0.01, 0.45),
                                    gamma_m=1e-5, delta=-1.0, n_bar=rng.uniform(0, 100))
            vs = variances(steady_state(build_system(params, rwa=False)))
            assert min(vs.uncertainty_products) >= 0.25 - 1e-9
