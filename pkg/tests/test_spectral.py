"""
Spectra, Hamiltonians, cogwheel models and the BCH identity
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from lib.fixtures import PRINTED_CYCLE_BLOCK
from lib.permops import OperatorMatrix
from lib.spectral import (
    KAPPA,
    Hamiltonian,
    bch_verify,
    chain_energies,
    chain_hamiltonian,
    chain_spectrum,
    check_convention,
    cogwheel_hamiltonian,
    cogwheel_operator,
    cogwheel_spectrum,
    decompose,
    descending_phase,
    energy_levels,
    exp_transposition_identity,
    expm_unitary,
    hamiltonian_from_powers,
    kappa_matrix,
    orbit_basis,
    permutation_generator,
    sector_block,
)
from lib.statespace import SpinConfig
from lib.validators import ContractViolationError, DimensionError, ValidationError

OMEGA = np.exp(-2j * math.pi / 3)


class TestChainSpectrum:
    def test_eigenvalues_sector_by_sector(self):
        spectrum = chain_spectrum()
        expected = [1, 1, OMEGA, OMEGA ** 2, 1, OMEGA, OMEGA ** 2, 1]
        assert np.max(np.abs(spectrum.eigenvalues - expected)) <= 1e-12

    def test_eigen_equation_and_orthonormality(self, cycle):
        spectrum = chain_spectrum()
        assert spectrum.residual <= 1e-12
        assert spectrum.orthonormality_residual() <= 1e-12
        assert spectrum.modulus_residual() <= 1e-12
        assert np.linalg.norm(spectrum.reconstruct() - cycle.entries) <= 1e-12

    def test_eigenvectors_stay_in_their_sector(self, basis3):
        vectors = chain_spectrum().eigenvectors
        sectors = basis3.sectors()
        column = 0
        for positions in sectors.values():
            outside = [k for k in range(8) if k not in positions]
            block = vectors[np.ix_(outside, range(column, column + len(positions)))]
            assert np.all(block == 0)
            column += len(positions)

    def test_uniform_sector_vector_has_real_positive_phase(self):
        v2 = chain_spectrum().eigenvectors[:, 1]
        assert np.max(np.abs(v2[1:4] - 1 / math.sqrt(3))) <= 1e-12

    def test_projectors_resolve_identity(self):
        spectrum = chain_spectrum()
        groups = spectrum.eigenspaces()
        assert sorted(len(members) for _, members in groups) == [2, 2, 4]
        total = sum(spectrum.projector(members) for _, members in groups)
        assert np.linalg.norm(total - np.eye(8)) <= 1e-12

    def test_energies_and_levels(self):
        step = 2 * math.pi / 3
        assert np.max(np.abs(chain_energies() - step * np.array([0, 0, 1, 2, 0, 1, 2, 0]))) <= 1e-12
        levels = energy_levels(T=2.0)
        assert [lvl.degeneracy for lvl in levels] == [4, 2, 2]
        assert levels[0].eigenvectors == (1, 2, 5, 8)
        assert levels[1].eigenvectors == (3, 6)
        assert abs(levels[2].energy - 2 * step / 2.0) <= 1e-15


class TestHamiltonian:
    @pytest.mark.parametrize('T', [1.0, 0.5, 3.0])
    def test_diagonal_and_permutation_forms_agree(self, T, cycle):
        forms = chain_hamiltonian(T)
        assert forms.agreement <= 1e-12
        assert forms.ontological.matrix.hermitian
        assert expm_unitary(forms.ontological, T).frobenius_distance(cycle) <= 1e-12
        assert forms.diagonal.evolution().frobenius_distance(np.diag(chain_spectrum().eigenvalues)) <= 1e-12

    def test_explicit_powers_form(self, cycle):
        forms = hamiltonian_from_powers()
        assert forms.agreement <= 1e-12
        assert expm_unitary(forms.ontological, 1.0).frobenius_distance(cycle) <= 1e-12

    @pytest.mark.parametrize('T', [0.5, 1.0, 2.0])
    def test_up_sector_block_is_kappa_circulant(self, T):
        block = sector_block(chain_hamiltonian(T).ontological.matrix, orbit_basis())
        assert np.linalg.norm(block - (2 * math.pi / (3 * T)) * kappa_matrix()) <= 1e-12

    def test_literal_convention_generates_inverse(self, cycle):
        forms = chain_hamiltonian(convention='literal')
        evolution = expm_unitary(forms.ontological, 1.0)
        assert evolution.frobenius_distance(cycle.power(2)) <= 1e-12
        assert abs(evolution.frobenius_distance(cycle) - math.sqrt(12)) <= 1e-10
        assert forms.agreement > 1.0

    @pytest.mark.parametrize('convention', ['cycle', 'literal'])
    def test_generator_is_hermitian_and_commutes(self, convention, cycle):
        g = permutation_generator(convention)
        assert g.hermitian
        assert np.linalg.norm(g.entries @ cycle.entries - cycle.entries @ g.entries) <= 1e-12
        assert g.frobenius_distance(permutation_generator(convention, squared_form=True)) <= 1e-15

    def test_kappa(self):
        assert KAPPA == complex(-0.5, math.sqrt(3) / 6)
        block = kappa_matrix()
        assert np.linalg.norm(block - block.conj().T) <= 1e-15

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValidationError):
            chain_hamiltonian(T=0)
        with pytest.raises(ValidationError):
            check_convention('mirror')
        with pytest.raises(ContractViolationError):
            Hamiltonian(OperatorMatrix(np.array([[0, 1], [0, 0]])))
        with pytest.raises(ContractViolationError):
            expm_unitary(OperatorMatrix(np.array([[0, 1j], [0, 0]])), 1.0)


class TestCogwheel:
    @hyp_settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=1, max_value=24))
    def test_spectrum_is_roots_of_unity(self, N):
        spectrum = cogwheel_spectrum(N)
        expected = np.exp(-2j * math.pi * np.arange(N) / N)
        assert np.max(np.abs(spectrum.eigenvalues - expected)) <= 1e-12
        assert spectrum.residual <= 1e-12
        assert spectrum.orthonormality_residual() <= 1e-12

    @pytest.mark.parametrize('N', [2, 3, 5, 12])
    def test_auxiliary_hamiltonian_generates_tick(self, N):
        T = 0.7
        forms = cogwheel_hamiltonian(N, T)
        assert forms.agreement <= 1e-12
        evolution = expm_unitary(forms.ontological, T)
        assert evolution.frobenius_distance(cogwheel_operator(N)) <= 1e-12

    def test_three_state_auxiliary_is_kappa_circulant(self):
        forms = cogwheel_hamiltonian(3, 1.0)
        expected = (2 * math.pi / 3) * kappa_matrix()
        assert np.linalg.norm(forms.ontological.matrix.entries - expected) <= 1e-12

    def test_tick_moves_forward(self):
        assert cogwheel_operator(4).index_map == (1, 2, 3, 0)
        with pytest.raises(DimensionError):
            cogwheel_operator(0)


class TestDecompose:
    def test_rejects_non_normal(self):
        with pytest.raises(ContractViolationError):
            decompose(OperatorMatrix(np.array([[1, 1], [0, 1]])))

    def test_descending_phase(self):
        assert descending_phase(1) == 0.0
        assert abs(descending_phase(OMEGA) - 2 * math.pi / 3) <= 1e-14
        assert descending_phase(np.exp(1e-13j)) == 0.0


class TestBlocks:
    def test_orbit_basis_follows_cycle(self):
        assert [c.to_string() for c in orbit_basis()] == ['uud', 'duu', 'udu']
        assert [c.to_string() for c in orbit_basis('ddu')] == ['ddu', 'udd', 'dud']

    def test_cycle_block_on_orbit_basis_is_shift(self, cycle):
        block = sector_block(cycle, orbit_basis())
        assert np.array_equal(block.real, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])

    def test_cycle_block_on_labelled_basis_matches_printed(self, cycle):
        labelled = [SpinConfig.from_string(s) for s in ('uud', 'udu', 'duu')]
        assert np.array_equal(sector_block(cycle, labelled).real, PRINTED_CYCLE_BLOCK)


class TestBCH:
    def test_identity_holds_in_cycle_convention(self):
        report = bch_verify(1e-12)
        assert report.passed
        assert all(v <= 1e-12 for v in report.residuals.values())
        assert report.flags['kappa_swapped'] is True
        assert report.notes
        assert report.diagnostics['literal_rhs_vs_inverse_cycle'] <= 1e-10

    def test_literal_convention_fails(self):
        report = bch_verify(1e-12, 'literal')
        assert not report.passed
        assert abs(report.residuals['lhs_vs_rhs'] - math.sqrt(12)) <= 1e-10
        assert report.residuals['lhs_vs_cycle'] <= 1e-12
        assert report.flags['kappa_swapped'] is False

    def test_serialized_pass_key(self):
        data = bch_verify(1e-12).model_dump(by_alias=True)
        assert data['pass'] is True

    def test_rejects_nonpositive_tolerance(self):
        with pytest.raises(ValidationError):
            bch_verify(0.0)

    @pytest.mark.parametrize('i,j', [(1, 2), (1, 3), (2, 3)])
    def test_transposition_as_exponential(self, i, j):
        report = exp_transposition_identity(i, j, 3, 1e-12)
        assert report.passed
        assert report.residuals['transposition_vs_exponential'] <= 1e-12
