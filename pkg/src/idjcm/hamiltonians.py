"""Interaction Hamiltonians for the intensity-dependent two-atom models.

One mode (units of hbar g):

    H = sum_i ( sqrt(a+ a) a+ sigma_i^-  +  sigma_i^+ a sqrt(a+ a) )

so the ladder operators act as ``sqrt(a+ a) a+ |n> = (n+1)|n+1>`` and
``a sqrt(a+ a) |n> = n|n-1>``.  The two-mode variant raises/lowers both
modes together with coupling ``(n1+1)(n2+1)``.

Both Hamiltonians conserve an excitation number, which splits the joint
basis into blocks of at most four states,

    { |++, n>, |+-, n+1>, |-+, n+1>, |--, n+2> }

(two-mode: both Fock indices shifted together).  All evolution in this
package happens blockwise; the dense matrix form is kept for small-basis
oracle tests and contract checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import MM, MP, PM, PP, CoherentSpec, ModelKind

#: atomic excitation count per label (PP, PM, MP, MM)
EXCITATIONS = (2, 1, 1, 0)

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class ExcitationBlock:
    """One invariant subspace of the interaction Hamiltonian.

    ``anchor`` is the Fock index (per mode) of the would-be ``|++>`` member;
    boundary blocks near n = 0 or near the cutoff simply omit the members
    whose Fock index falls outside the basis, so sizes range from 1 to 4.
    """

    model: ModelKind
    anchor: tuple[int, ...]
    labels: tuple[int, ...]
    fock: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def members(self) -> list[tuple[int, tuple[int, ...]]]:
        return list(zip(self.labels, self.fock))


def _member_candidates(anchor: tuple[int, ...]):
    """(label, fock) candidates of the block anchored at ``anchor``."""
    shifts = {PP: 0, PM: 1, MP: 1, MM: 2}
    for label in (PP, PM, MP, MM):
        yield label, tuple(a + shifts[label] for a in anchor)


def enumerate_blocks(model: ModelKind, cutoffs: tuple[int, ...]) -> list[ExcitationBlock]:
    """Partition of the truncated joint basis into excitation blocks.

    Every basis state (label, fock) belongs to exactly one block; the sum
    of block sizes equals 4 * prod(cutoff+1).
    """
    cutoffs = tuple(int(c) for c in cutoffs)
    nmodes = 1 if model == ModelKind.ONE_MODE else 2
    if len(cutoffs) != nmodes:
        raise ValueError(f"{model.value} needs {nmodes} cutoff(s), got {cutoffs}")

    def in_range(fock):
        return all(0 <= f <= c for f, c in zip(fock, cutoffs))

    anchors = np.ndindex(*(c + 3 for c in cutoffs))  # anchor_j in -2 .. cutoff_j
    blocks = []
    for raw in anchors:
        anchor = tuple(a - 2 for a in raw)
        labels, fock = [], []
        for label, member in _member_candidates(anchor):
            if in_range(member):
                labels.append(label)
                fock.append(member)
        if labels:
            blocks.append(ExcitationBlock(model, anchor, tuple(labels), tuple(fock)))
    return blocks


def block_matrix(block: ExcitationBlock) -> np.ndarray:
    """Hermitian coupling matrix of one block, ordered as block.labels.

    Couplings: PP <-> PM/MP carry prod(anchor_j + 1), PM/MP <-> MM carry
    prod(anchor_j + 2); everything else vanishes.
    """
    u = 1.0
    v = 1.0
    for a in block.anchor:
        u *= a + 1
        v *= a + 2
    pos = {label: i for i, label in enumerate(block.labels)}
    h = np.zeros((block.size, block.size))
    for upper, lower, g in ((PP, PM, u), (PP, MP, u), (PM, MM, v), (MP, MM, v)):
        if upper in pos and lower in pos:
            h[pos[upper], pos[lower]] = g
            h[pos[lower], pos[upper]] = g
    return h


@dataclass
class HamiltonianMatrix:
    """Dense Hermitian interaction matrix on the flattened joint basis.

    Basis index = label * n_fock + flat(fock) with Fock indices flattened
    row-major, matching ``JointState.flat()``.
    """

    model: ModelKind
    cutoffs: tuple[int, ...]
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def fock_dimension(self) -> int:
        return int(np.prod([c + 1 for c in self.cutoffs]))

    def index(self, label: int, *fock: int) -> int:
        flat = 0
        for f, c in zip(fock, self.cutoffs):
            if not 0 <= f <= c:
                raise IndexError(f"Fock index {fock} outside cutoffs {self.cutoffs}")
            flat = flat * (c + 1) + f
        return label * self.fock_dimension + flat

    def element(self, bra: tuple, ket: tuple) -> complex:
        """<label, fock...| H |label, fock...> in units of hbar g."""
        return complex(self.matrix[self.index(*bra), self.index(*ket)])


def _assemble(model: ModelKind, cutoffs: tuple[int, ...]) -> HamiltonianMatrix:
    nfock = int(np.prod([c + 1 for c in cutoffs]))
    dim = 4 * nfock
    mat = np.zeros((dim, dim), dtype=complex)

    def flat(fock):
        idx = 0
        for f, c in zip(fock, cutoffs):
            idx = idx * (c + 1) + f
        return idx

    for block in enumerate_blocks(model, cutoffs):
        h = block_matrix(block)
        idx = [label * nfock + flat(f) for label, f in block.members]
        mat[np.ix_(idx, idx)] += h
    return HamiltonianMatrix(model, cutoffs, mat)


def build_one_mode(cutoff: int) -> HamiltonianMatrix:
    """One-mode interaction Hamiltonian on Fock indices 0..cutoff."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2 to hold a complete block")
    return _assemble(ModelKind.ONE_MODE, (int(cutoff),))


def build_two_mode(cutoff1: int, cutoff2: int) -> HamiltonianMatrix:
    """Two-mode interaction Hamiltonian on indices (0..cutoff1) x (0..cutoff2)."""
    if cutoff1 < 2 or cutoff2 < 2:
        raise ValueError("cutoffs must be >= 2 to hold a complete block")
    return _assemble(ModelKind.TWO_MODE, (int(cutoff1), int(cutoff2)))


def build_semiclassical(model: ModelKind, field: CoherentSpec,
                        field2: CoherentSpec | None = None) -> np.ndarray:
    """4x4 semiclassical interaction Hamiltonian (field replaced by its amplitude).

    The effective coupling is xi = |v| v = nbar e^{i phase} for one mode and
    xi = |v1| v1 |v2| v2 = nbar1 nbar2 e^{i (phase1 + phase2)} for two modes:

        H_sc = [[0, xi, xi, 0], [xi*, 0, 0, xi], [xi*, 0, 0, xi], [0, xi*, xi*, 0]]

    Its eigenvectors are the phi1..phi4 presets with eigenvalues
    (2|xi|, -2|xi|, 0, 0).
    """
    if model == ModelKind.ONE_MODE:
        if field2 is not None:
            raise ValueError("one-mode model takes a single field")
        xi = abs(field.amplitude) * field.amplitude
    else:
        if field2 is None:
            raise ValueError("two-mode model needs both fields")
        xi = (abs(field.amplitude) * field.amplitude
              * abs(field2.amplitude) * field2.amplitude)
    h = np.zeros((4, 4), dtype=complex)
    h[PP, PM] = h[PP, MP] = h[PM, MM] = h[MP, MM] = xi
    h += h.conj().T
    return h


def number_diagonal(model: ModelKind, cutoffs: tuple[int, ...]) -> np.ndarray:
    """Diagonal of the conserved excitation number, flattened like the matrix.

    One mode counts n + (excited atoms); two modes count n1 + n2 + 2 for
    each excited atom, since one excitation exchanges a photon pair.
    """
    cutoffs = tuple(int(c) for c in cutoffs)
    if model == ModelKind.ONE_MODE:
        ns = np.arange(cutoffs[0] + 1, dtype=float)
        per_label = [ns + e for e in EXCITATIONS]
    else:
        n1 = np.arange(cutoffs[0] + 1, dtype=float)[:, None]
        n2 = np.arange(cutoffs[1] + 1, dtype=float)[None, :]
        per_label = [(n1 + n2 + 2 * e).ravel() for e in EXCITATIONS]
    return np.concatenate(per_label)
