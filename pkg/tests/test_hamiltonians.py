import numpy as np
import pytest

from idjcm import (
    MM,
    MP,
    PM,
    PP,
    CoherentSpec,
    ModelKind,
    block_matrix,
    build_one_mode,
    build_semiclassical,
    build_two_mode,
    enumerate_blocks,
    number_diagonal,
    preset_atomic_state,
)

# ---------------------------------------------------------------------------
# independent operator-algebra oracle: assemble H from explicit ladder matrices

SP = np.array([[0, 1], [0, 0]], dtype=float)
SM = SP.T
I2 = np.eye(2)


def ladder_pair(nmax):
    adag = np.diag(np.sqrt(np.arange(1.0, nmax + 1)), -1)
    a = adag.T.copy()
    sqrtn = np.diag(np.sqrt(np.arange(0.0, nmax + 1)))
    return sqrtn @ adag, a @ sqrtn  # sqrt(a+a) a+,  a sqrt(a+a)


def oracle_one_mode(nmax):
    raise_op, lower_op = ladder_pair(nmax)
    def k3(x, y, z):
        return np.kron(np.kron(x, y), z)
    return (k3(SM, I2, raise_op) + k3(SP, I2, lower_op)
            + k3(I2, SM, raise_op) + k3(I2, SP, lower_op))


def oracle_two_mode(n1, n2):
    r1, l1 = ladder_pair(n1)
    r2, l2 = ladder_pair(n2)
    def k4(x, y, z, w):
        return np.kron(np.kron(x, y), np.kron(z, w))
    return (k4(SM, I2, r1, r2) + k4(SP, I2, l1, l2)
            + k4(I2, SM, r1, r2) + k4(I2, SP, l1, l2))


class TestOneModeMatrix:
    def test_matches_operator_algebra_oracle(self):
        ham = build_one_mode(7)
        assert np.abs(ham.matrix - oracle_one_mode(7)).max() < 1e-13

    def test_single_quantum_element(self):
        ham = build_one_mode(4)
        assert ham.element((PM, 1), (PP, 0)) == 1.0

    def test_two_quanta_element(self):
        ham = build_one_mode(4)
        assert ham.element((MM, 2), (PM, 1)) == 2.0

    def test_hermitian(self):
        m = build_one_mode(9).matrix
        assert np.abs(m - m.conj().T).max() < 1e-12

    def test_number_commutator(self):
        ham = build_one_mode(10)
        n_diag = number_diagonal(ModelKind.ONE_MODE, (10,))
        comm = ham.matrix * n_diag[None, :] - n_diag[:, None] * ham.matrix
        assert np.abs(comm).max() < 1e-10


class TestTwoModeMatrix:
    def test_matches_operator_algebra_oracle(self):
        ham = build_two_mode(4, 5)
        assert np.abs(ham.matrix - oracle_two_mode(4, 5)).max() < 1e-13

    def test_pair_elements(self):
        ham = build_two_mode(5, 5)
        assert ham.element((PM, 1, 1), (PP, 0, 0)) == 1.0
        assert ham.element((PM, 2, 3), (PP, 1, 2)) == 6.0  # (1+1)(2+1)
        assert ham.element((MM, 3, 4), (MP, 2, 3)) == 12.0  # (1+2)(2+2)

    def test_hermitian(self):
        m = build_two_mode(4, 4).matrix
        assert np.abs(m - m.conj().T).max() < 1e-12

    def test_number_commutators(self):
        # n1 + n2 + 2 * excitations is conserved (photon pair per excitation)
        ham = build_two_mode(5, 4)
        n_diag = number_diagonal(ModelKind.TWO_MODE, (5, 4))
        comm = ham.matrix * n_diag[None, :] - n_diag[:, None] * ham.matrix
        assert np.abs(comm).max() < 1e-10


class TestBlocks:
    def test_interior_anchor_members(self):
        blocks = {b.anchor: b for b in enumerate_blocks(ModelKind.ONE_MODE, (8,))}
        b = blocks[(0,)]
        assert b.members == [(PP, (0,)), (PM, (1,)), (MP, (1,)), (MM, (2,))]

    def test_mm_vacuum_is_boundary_singleton(self):
        blocks = enumerate_blocks(ModelKind.ONE_MODE, (8,))
        holder = [b for b in blocks if (MM, (0,)) in b.members]
        assert len(holder) == 1
        assert holder[0].members == [(MM, (0,))]
        assert PP not in holder[0].labels

    def test_partition_covers_basis(self):
        for model, cutoffs in ((ModelKind.ONE_MODE, (9,)), (ModelKind.TWO_MODE, (4, 6))):
            blocks = enumerate_blocks(model, cutoffs)
            total = sum(b.size for b in blocks)
            dim = 4 * int(np.prod([c + 1 for c in cutoffs]))
            assert total == dim
            seen = set()
            for b in blocks:
                for member in b.members:
                    assert member not in seen
                    seen.add(member)

    def test_block_closure_under_h(self):
        # every matrix row couples only within the row's own block
        cutoff = 8
        ham = build_one_mode(cutoff)
        for b in enumerate_blocks(ModelKind.ONE_MODE, (cutoff,)):
            idx = [ham.index(label, *fock) for label, fock in b.members]
            outside = np.setdiff1d(np.arange(ham.dimension), idx)
            assert np.abs(ham.matrix[np.ix_(idx, outside)]).max() == 0.0

    def test_block_matrix_couplings(self):
        b = [blk for blk in enumerate_blocks(ModelKind.ONE_MODE, (8,)) if blk.anchor == (3,)][0]
        h = block_matrix(b)
        assert h[0, 1] == 4.0 and h[0, 2] == 4.0  # anchor+1
        assert h[1, 3] == 5.0 and h[2, 3] == 5.0  # anchor+2
        assert h[0, 3] == 0.0 and h[1, 2] == 0.0


class TestDarkSinglet:
    def test_h_annihilates_singlet_times_any_field(self):
        rng = np.random.default_rng(3)
        singlet = preset_atomic_state("phi4").vector
        for ham, nfock in ((build_one_mode(8), 9), (build_two_mode(3, 4), 20)):
            fieldvec = rng.normal(size=nfock) + 1j * rng.normal(size=nfock)
            psi = np.kron(singlet, fieldvec)
            assert np.abs(ham.matrix @ psi).max() < 1e-12


class TestSemiclassical:
    def test_zero_field_gives_zero_matrix(self):
        h = build_semiclassical(ModelKind.ONE_MODE, CoherentSpec(0.0))
        assert np.abs(h).max() == 0.0

    def test_singlet_is_zero_eigenvector(self):
        for nbar, phase in ((1.0, 0.0), (7.0, 1.1), (30.0, 2.9)):
            h = build_semiclassical(ModelKind.ONE_MODE, CoherentSpec(nbar, phase))
            singlet = preset_atomic_state("phi4").vector
            assert np.abs(h @ singlet).max() < 1e-12

    @pytest.mark.parametrize("model,fields,theta", [
        (ModelKind.ONE_MODE, (CoherentSpec(9.0, 0.8),), 0.8),
        (ModelKind.TWO_MODE, (CoherentSpec(4.0, 0.5), CoherentSpec(9.0, 0.9)), 1.4),
    ])
    def test_eigenvectors_match_presets(self, model, fields, theta):
        h = build_semiclassical(model, *fields)
        assert np.abs(h - h.conj().T).max() < 1e-12
        evals, evecs = np.linalg.eigh(h)
        strength = np.prod([f.nbar for f in fields])
        assert np.allclose(sorted(evals), sorted([2 * strength, -2 * strength, 0, 0]),
                           atol=1e-10)
        # nondegenerate eigenvectors match phi1/phi2 up to global phase
        for name, value in (("phi1", 2 * strength), ("phi2", -2 * strength)):
            vec = evecs[:, np.argmin(np.abs(evals - value))]
            preset = preset_atomic_state(name, theta).vector
            assert abs(abs(np.vdot(preset, vec)) - 1.0) < 1e-10
        # the zero eigenspace is span{phi3, phi4}
        null = evecs[:, np.abs(evals) < 1e-9]
        for name in ("phi3", "phi4"):
            preset = preset_atomic_state(name, theta).vector
            proj = null @ (null.conj().T @ preset)
            assert np.abs(proj - preset).max() < 1e-10

    def test_field_count_validation(self):
        with pytest.raises(ValueError):
            build_semiclassical(ModelKind.TWO_MODE, CoherentSpec(1.0))
        with pytest.raises(ValueError):
            build_semiclassical(ModelKind.ONE_MODE, CoherentSpec(1.0), CoherentSpec(1.0))
