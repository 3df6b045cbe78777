import math

import numpy as np
import pytest

from idjcm import (
    BASIS_PAD,
    MM,
    PM,
    PP,
    AtomicState,
    CoherentSpec,
    FockCutoff,
    ModelKind,
    TruncationError,
    build_initial_state,
    coherent_amplitudes,
    poisson_retained,
    preset_atomic_state,
)

R2 = 1.0 / math.sqrt(2.0)


def poisson_tail_oracle(nbar, nmax):
    # independent log-domain Poisson mass on 0..nmax
    total = 0.0
    for k in range(nmax + 1):
        total += math.exp(-nbar + k * math.log(nbar) - math.lgamma(k + 1))
    return total


class TestCoherentAmplitudes:
    def test_vacuum(self):
        f = coherent_amplitudes(CoherentSpec(0.0, 1.3), FockCutoff(5))
        assert f[0] == 1.0
        assert np.all(f[1:] == 0.0)

    def test_nbar_one_value(self):
        f = coherent_amplitudes(CoherentSpec(1.0), FockCutoff(12))
        assert abs(f[1] - 0.6065306597126334) < 1e-15  # e^{-1/2}

    def test_phase_convention_is_n_dependent(self):
        phi = 0.7
        f = coherent_amplitudes(CoherentSpec(2.0, phi), FockCutoff(12))
        mags = coherent_amplitudes(CoherentSpec(2.0, 0.0), FockCutoff(12))
        n = np.arange(13)
        assert np.allclose(f, mags * np.exp(1j * phi * n), atol=1e-15)

    def test_default_cutoff_retains_mass_nbar30(self):
        cutoff = FockCutoff.for_field(CoherentSpec(30.0))
        f = coherent_amplitudes(CoherentSpec(30.0), cutoff)
        retained = float(np.sum(np.abs(f) ** 2))
        assert retained >= 1.0 - 1e-6
        assert abs(retained - poisson_tail_oracle(30.0, cutoff.nmax)) < 1e-12

    def test_default_cutoff_covers_width(self):
        for nbar in (1.0, 2.0, 30.0, 50.0, 150.0):
            cutoff = FockCutoff.for_field(CoherentSpec(nbar))
            assert cutoff.nmax >= math.ceil(nbar + 5.0 * math.sqrt(nbar))

    def test_small_cutoff_rejected(self):
        with pytest.raises(TruncationError):
            coherent_amplitudes(CoherentSpec(30.0), FockCutoff(30))

    def test_mass_below_one_and_monotone(self):
        spec = CoherentSpec(4.0)
        masses = [np.sum(np.abs(coherent_amplitudes(spec, FockCutoff(n))) ** 2)
                  for n in range(20, 41, 5)]
        assert all(m <= 1.0 + 1e-15 for m in masses)
        assert all(b >= a for a, b in zip(masses, masses[1:]))
        assert masses[-1] > 1.0 - 1e-12

    def test_retained_helper_matches_oracle(self):
        assert abs(poisson_retained(7.3, 25) - poisson_tail_oracle(7.3, 25)) < 1e-13


class TestCoherentSpec:
    def test_phase_reduced(self):
        assert abs(CoherentSpec(1.0, 2 * math.pi + 0.3).phase - 0.3) < 1e-12

    def test_negative_nbar_rejected(self):
        with pytest.raises(ValueError):
            CoherentSpec(-1.0)

    def test_amplitude(self):
        spec = CoherentSpec(4.0, math.pi / 2)
        assert abs(spec.amplitude - 2.0j) < 1e-12


class TestPresets:
    def test_phi4_is_singlet(self):
        for theta in (0.0, 0.9, 2.4):
            st = preset_atomic_state("phi4", theta)
            assert np.allclose(st.vector, [0, R2, -R2, 0], atol=1e-15)

    def test_a_state(self):
        st = preset_atomic_state("a", 0.0)
        assert np.allclose(st.vector, [0, R2, R2, 0], atol=1e-15)

    def test_phi1_at_zero_phase(self):
        st = preset_atomic_state("phi1", 0.0)
        assert np.allclose(st.vector, [0.5, 0.5, 0.5, 0.5], atol=1e-15)

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            preset_atomic_state("phi5")

    def test_eigenbasis_orthonormal_for_all_theta(self):
        for theta in np.linspace(0.0, 2 * math.pi, 7):
            vecs = np.stack([preset_atomic_state(f"phi{i}", theta).vector
                             for i in range(1, 5)])
            gram = vecs.conj() @ vecs.T
            assert np.abs(gram - np.eye(4)).max() < 1e-12

    def test_a_b_combination_identities(self):
        # (phi1 - phi2)/sqrt2 = e^{i theta} a  and  (phi1 + phi2)/sqrt2 = b
        for theta in (0.0, 0.5, 1.7, 3.0):
            phi1 = preset_atomic_state("phi1", theta).vector
            phi2 = preset_atomic_state("phi2", theta).vector
            a = preset_atomic_state("a", theta).vector
            b = preset_atomic_state("b", theta).vector
            assert np.abs((phi1 - phi2) / math.sqrt(2) - np.exp(1j * theta) * a).max() < 1e-12
            assert np.abs((phi1 + phi2) / math.sqrt(2) - b).max() < 1e-12
        # at theta = 0 the prefactor is trivially 1
        phi1 = preset_atomic_state("phi1", 0.0).vector
        phi2 = preset_atomic_state("phi2", 0.0).vector
        assert np.abs((phi1 - phi2) / math.sqrt(2)
                      - preset_atomic_state("a", 0.0).vector).max() < 1e-12


class TestAtomicState:
    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            AtomicState(1.0, 1.0, 0.0, 0.0)

    def test_from_vector_normalizes(self):
        st = AtomicState.from_vector([1, 1, 0, 0], normalize=True)
        assert abs(np.linalg.norm(st.vector) - 1.0) < 1e-15


class TestBuildInitialState:
    def test_vacuum_product(self):
        st = build_initial_state(preset_atomic_state("pp"), CoherentSpec(0.0))
        nz = np.argwhere(np.abs(st.amps) > 0)
        assert nz.tolist() == [[PP, 0]]
        assert abs(st.amplitude(PP, 0) - 1.0) < 1e-15

    def test_a_state_times_coherent_amplitude(self):
        st = build_initial_state(preset_atomic_state("a"), CoherentSpec(1.0))
        assert abs(st.amplitude(PM, 1) - 0.4288819663745432) < 1e-12  # F_1/sqrt2, renormalized
        assert abs(st.amplitude(PM, 1) - 0.4289) < 1e-4
        assert abs(st.amplitude(PP, 0)) == 0.0

    def test_normalization_contract(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            atomic = AtomicState.from_vector(
                rng.normal(size=4) + 1j * rng.normal(size=4), normalize=True)
            st = build_initial_state(atomic, CoherentSpec(3.0, 0.4))
            assert abs(np.sum(np.abs(st.amps) ** 2) - 1.0) < 1e-12

    def test_basis_padding(self):
        cutoff = FockCutoff.for_field(CoherentSpec(2.0))
        st = build_initial_state(preset_atomic_state("a"), CoherentSpec(2.0))
        assert st.cutoffs == (cutoff.nmax + BASIS_PAD,)
        assert np.all(st.amps[:, cutoff.nmax + 1:] == 0.0)

    def test_two_mode_product(self):
        st = build_initial_state(preset_atomic_state("b"),
                                 (CoherentSpec(1.0), CoherentSpec(2.0)))
        assert st.model == ModelKind.TWO_MODE
        assert st.amps.ndim == 3
        assert abs(st.norm() - 1.0) < 1e-12
        # product structure: amp(MM, n1, n2) = delta * F1_n1 * F2_n2
        ratio = st.amps[MM, 1, 2] * st.amps[MM, 0, 0] - st.amps[MM, 1, 0] * st.amps[MM, 0, 2]
        assert abs(ratio) < 1e-15

    def test_explicit_cutoff_propagates_truncation_error(self):
        with pytest.raises(TruncationError):
            build_initial_state(preset_atomic_state("a"), CoherentSpec(30.0), cutoffs=(31,))
