import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pdmradial.errors import DomainError
from pdmradial.mass_expansion import constant_mass, expand_exponential, mass_from_series
from pdmradial.model import (
    EigenResult,
    MassProfile,
    PotentialSpec,
    QuantumNumbers,
    SeriesSolution,
    b_from_energy,
    make_cornell,
    make_coulomb,
    make_linear,
    make_oscillator,
)


class TestPotentialConstructors:
    def test_cornell_fields(self):
        pot = make_cornell(0.5, 0.2, -0.1)
        assert (pot.v1, pot.v2, pot.v3, pot.alpha, pot.beta) == (0.5, 0.2, -0.1, 1, 1)

    def test_cornell_degenerates_to_coulomb(self):
        pot = make_cornell(1.0, 0.0, 0.0)
        assert pot.v1 == 1.0 and pot.v2 == 0.0 and pot.alpha == 1

    def test_cornell_rejects_negative_couplings(self):
        with pytest.raises(DomainError):
            make_cornell(-1.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            make_cornell(1.0, -0.5, 0.0)

    def test_coulomb_fields(self):
        pot = make_coulomb(2.5)
        assert (pot.v1, pot.v2, pot.v3, pot.alpha, pot.beta) == (2.5, 0.0, 0.0, 1, 0)

    def test_oscillator_fields(self):
        pot = make_oscillator(3.0)
        assert (pot.v1, pot.v2, pot.v3, pot.alpha, pot.beta) == (0.0, 9.0, 0.0, 0, 2)

    def test_linear_fields(self):
        pot = make_linear(0.7)
        assert (pot.v1, pot.v2, pot.v3, pot.alpha, pot.beta) == (0.0, 0.7, 0.0, 0, 1)

    @pytest.mark.parametrize("ctor", [make_coulomb, make_oscillator, make_linear])
    def test_named_constructors_reject_nonpositive(self, ctor):
        with pytest.raises(DomainError):
            ctor(0.0)
        with pytest.raises(DomainError):
            ctor(-1.0)

    def test_both_couplings_zero_needs_free(self):
        with pytest.raises(DomainError):
            PotentialSpec(0.0, 0.0, 1.0, 1, 1)
        pot = PotentialSpec.free(v3=1.0)
        assert pot.v3 == 1.0

    def test_exponents_must_be_nonnegative_integers(self):
        with pytest.raises(DomainError):
            PotentialSpec(1.0, 0.0, 0.0, -1, 0)
        with pytest.raises(DomainError):
            PotentialSpec(1.0, 0.0, 0.0, 1.5, 0)

    def test_value_evaluates_all_terms(self):
        pot = make_cornell(2.0, 0.5, -1.0)
        assert pot.value(2.0) == pytest.approx(-1.0 + 1.0 - 1.0)
        arr = pot.value(np.array([1.0, 2.0]))
        assert arr == pytest.approx([-2.5, -1.0])


class TestQuantumNumbers:
    def test_k_combination(self):
        assert QuantumNumbers(3, 1, 0).k == 5
        assert QuantumNumbers(2, 0, 4).k == 2

    def test_invalid_values(self):
        with pytest.raises(DomainError):
            QuantumNumbers(0, 0, 0)
        with pytest.raises(DomainError):
            QuantumNumbers(3, -1, 0)
        with pytest.raises(DomainError):
            QuantumNumbers(3, 0, -2)


class TestBFromEnergy:
    def test_simple_values(self):
        assert b_from_energy(-0.5, 1.0) == pytest.approx(1.0)
        assert b_from_energy(-2.0, 1.0) == pytest.approx(2.0)

    def test_coulomb_decay_rate(self):
        # E = -A^2 m0 / (2 (n+l+1)^2)  =>  b = A m0 / (n+l+1)
        a_c, m0, n, ell = 1.3, 0.8, 2, 1
        e = -(a_c**2) * m0 / (2.0 * (n + ell + 1) ** 2)
        assert b_from_energy(e, m0) == pytest.approx(a_c * m0 / (n + ell + 1))

    def test_rejects_nonnegative_energy(self):
        with pytest.raises(DomainError):
            b_from_energy(0.0, 1.0)
        with pytest.raises(DomainError):
            b_from_energy(1.0, 1.0)

    @given(
        b=st.floats(min_value=1e-3, max_value=1e3),
        m0=st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_roundtrip_on_decay_rates(self, b, m0):
        e = -b * b / (2.0 * m0)
        assert b_from_energy(e, m0) == pytest.approx(b, rel=1e-14)


class TestMassProfile:
    def test_constant_profile(self):
        mass = constant_mass(1.5, order=4)
        assert mass.m0 == 1.5
        assert np.all(mass.mass_series[1:] == 0.0)
        assert np.all(mass.logderiv_series == 0.0)
        assert mass.mass_at(3.0) == 1.5
        assert mass.logderiv_at(3.0) == 0.0

    def test_exponential_profile_coefficients(self):
        mass = expand_exponential(2.0, 0.5, 4)
        nu = np.arange(5)
        expected = 2.0 * (-0.5) ** nu / np.array([1, 1, 2, 6, 24])
        assert mass.mass_series == pytest.approx(expected, rel=1e-14)
        assert mass.logderiv_series[0] == -0.5
        assert np.all(mass.logderiv_series[1:] == 0.0)

    def test_inconsistent_series_rejected(self):
        with pytest.raises(DomainError):
            MassProfile(1.0, [1.0, -1.0], [0.5, 0.0], "custom-series")

    def test_custom_profile_consistency(self):
        mass = mass_from_series([1.0, 0.3, -0.2, 0.05])
        b, bp = mass.mass_series, mass.logderiv_series
        order = b.size - 1
        prod = np.convolve(bp, b)[:order]
        deriv = np.arange(1, order + 1) * b[1:]
        assert prod == pytest.approx(deriv, abs=1e-12)

    def test_extended_is_exact_for_closed_forms(self):
        mass = expand_exponential(1.0, 0.3, 2).extended(10)
        assert mass.order == 10
        assert mass.mass_series[7] == pytest.approx((-0.3) ** 7 / math.factorial(7))

    def test_custom_cannot_extend(self):
        mass = mass_from_series([1.0, 0.2])
        with pytest.raises(DomainError):
            mass.extended(5)


class TestSeriesSolution:
    def _solution(self):
        return SeriesSolution(
            energy=-0.5,
            b=1.0,
            coeffs=np.array([1.0, -1.0, 0.25]),
            a0=1.0,
            truncation_order=2,
            quantum=QuantumNumbers(3, 0, 0),
        )

    def test_invariants(self):
        sol = self._solution()
        assert sol.coeffs[0] == sol.a0 != 0

    def test_scaling_is_homogeneous(self):
        sol = self._solution()
        scaled = sol.scaled(3.0)
        assert scaled.coeffs == pytest.approx(3.0 * sol.coeffs)
        assert scaled.a0 == pytest.approx(3.0)

    def test_rejects_positive_energy(self):
        with pytest.raises(DomainError):
            SeriesSolution(0.5, 1.0, np.array([1.0]), 1.0, 0, QuantumNumbers(3, 0, 0))

    def test_rejects_zero_leading_coefficient(self):
        with pytest.raises(DomainError):
            SeriesSolution(-0.5, 1.0, np.array([0.0, 1.0]), 0.0, 1, QuantumNumbers(3, 0, 0))


def test_eigenresult_requires_positive_norm():
    with pytest.raises(DomainError):
        EigenResult(energy=-1.0, nodes=0, norm_const=0.0, tail_residual=0.0)
