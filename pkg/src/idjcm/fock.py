"""State construction for two two-level atoms coupled to one or two cavity modes.

Conventions used throughout the package:

* Atomic basis order ``|++>, |+->, |-+>, |-->`` with integer labels
  ``PP, PM, MP, MM = 0, 1, 2, 3``.
* Field basis: Fock states per mode, stored densely up to a cutoff.
* Joint amplitudes live in ``amps[label, n]`` (one mode) or
  ``amps[label, n1, n2]`` (two modes).
* Units: hbar = 1, coupling g = 1, time is the dimensionless gt.

The evolution basis keeps ``BASIS_PAD = 2`` extra Fock levels above the
coherent-state cutoff.  The interaction couples ``|++, n>`` up to
``|--, n+2>``, so with this padding every interaction block that the
initial state populates is complete and truncation error enters only
through the initial state itself.  The retained probability mass of the
truncated coherent state is checked against ``MIN_RETAINED``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

PP, PM, MP, MM = 0, 1, 2, 3
ATOM_KETS = ("|++>", "|+->", "|-+>", "|-->")

#: extra Fock levels kept above the coherent-state cutoff
BASIS_PAD = 2

#: minimum probability mass a truncated coherent state must retain
MIN_RETAINED = 1.0 - 1e-6

NORM_TOL = 1e-12


class ModelKind(str, Enum):
    ONE_MODE = "one_mode"
    TWO_MODE = "two_mode"


class TruncationError(ValueError):
    """Raised when a Fock cutoff keeps too little coherent-state mass."""


@dataclass(frozen=True)
class CoherentSpec:
    """Coherent field mode with mean photon number ``nbar`` and phase (rad)."""

    nbar: float
    phase: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0:
            raise ValueError(f"mean photon number must be finite and >= 0, got {self.nbar}")
        object.__setattr__(self, "phase", float(self.phase) % (2.0 * math.pi))

    @property
    def amplitude(self) -> complex:
        """Complex field amplitude sqrt(nbar) e^{i phase}."""
        return math.sqrt(self.nbar) * complex(math.cos(self.phase), math.sin(self.phase))


def poisson_retained(nbar: float, nmax: int) -> float:
    """Probability mass of Poisson(nbar) on 0..nmax, evaluated in log domain."""
    if nbar == 0.0:
        return 1.0
    k = np.arange(nmax + 1)
    logp = -nbar + k * math.log(nbar) - np.array([math.lgamma(j + 1.0) for j in k])
    return float(np.exp(logp).sum())


@dataclass(frozen=True)
class FockCutoff:
    """Highest retained Fock index of one mode."""

    nmax: int

    def __post_init__(self):
        if int(self.nmax) != self.nmax or self.nmax < 0:
            raise ValueError(f"cutoff must be a non-negative integer, got {self.nmax}")
        object.__setattr__(self, "nmax", int(self.nmax))

    @classmethod
    def for_field(cls, spec: CoherentSpec, width: float = 5.0) -> "FockCutoff":
        """Cutoff covering ``nbar + width * sqrt(nbar)`` photons.

        The Poisson tail at exactly width = 5 sigma lies slightly above
        1e-6 for nbar roughly between 1 and 100, so the cutoff is pushed
        up (typically by one) until the retained mass meets MIN_RETAINED.
        """
        n = math.ceil(spec.nbar + width * math.sqrt(spec.nbar))
        while poisson_retained(spec.nbar, n) < MIN_RETAINED:
            n += 1
        return cls(n)


def coherent_amplitudes(spec: CoherentSpec, cutoff: FockCutoff | int) -> np.ndarray:
    """Fock amplitudes F_n of a coherent state, n = 0..nmax.

    F_n = exp(-nbar/2) nbar^{n/2} / sqrt(n!) * e^{i n phase}, i.e. the
    expansion of ``|v>`` with v = sqrt(nbar) e^{i phase}.  Magnitudes are
    computed in log domain so large nbar does not overflow n!.

    Raises TruncationError when the retained mass sum|F_n|^2 falls below
    MIN_RETAINED.
    """
    nmax = cutoff.nmax if isinstance(cutoff, FockCutoff) else int(cutoff)
    if nmax < 0:
        raise ValueError("cutoff must be >= 0")
    if spec.nbar == 0.0:
        out = np.zeros(nmax + 1, dtype=complex)
        out[0] = 1.0
        return out
    n = np.arange(nmax + 1)
    logmag = -spec.nbar / 2.0 + 0.5 * n * math.log(spec.nbar) \
        - 0.5 * np.array([math.lgamma(k + 1.0) for k in n])
    mag = np.exp(logmag)
    retained = float((mag ** 2).sum())
    if retained < MIN_RETAINED:
        raise TruncationError(
            f"cutoff nmax={nmax} retains only {retained:.8f} of the coherent-state "
            f"mass for nbar={spec.nbar} (need >= {MIN_RETAINED})"
        )
    return mag * np.exp(1j * spec.phase * n)


@dataclass(frozen=True)
class AtomicState:
    """Normalized amplitudes (alpha, beta, gamma, delta) over |++>, |+->, |-+>, |-->."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        norm2 = sum(abs(c) ** 2 for c in self.vector)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"atomic amplitudes not normalized: sum|c|^2 = {norm2!r}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta], dtype=complex)

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "AtomicState":
        v = np.asarray(vec, dtype=complex)
        if v.shape != (4,):
            raise ValueError("atomic state needs exactly 4 amplitudes")
        if normalize:
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise ValueError("cannot normalize the zero vector")
            v = v / nrm
        return cls(*v)


def _phase(theta: float, k: int) -> complex:
    return complex(math.cos(k * theta), math.sin(k * theta))


#: recognized preset names for `preset_atomic_state`
PRESET_NAMES = ("phi1", "phi2", "phi3", "phi4", "a", "b", "pp", "pm", "mp", "mm")


def preset_atomic_state(name: str, theta: float = 0.0) -> AtomicState:
    """Named two-atom state.

    ``phi1..phi4`` are the eigenvectors of the semiclassical interaction
    Hamiltonian; ``theta`` is the relevant field phase (the mode phase for
    one mode, the sum of both mode phases for two modes):

        phi1 = (e^{2i theta}|++> + |--> + e^{i theta}(|+-> + |-+>)) / 2
        phi2 = (e^{2i theta}|++> + |--> - e^{i theta}(|+-> + |-+>)) / 2
        phi3 = (-e^{2i theta}|++> + |-->) / sqrt(2)
        phi4 = (|+-> - |-+>) / sqrt(2)          (the dark singlet)

    ``a`` and ``b`` are the superpositions of phi1 and phi2 that admit
    periodic exact atom-field disentanglement:

        a = (|+-> + |-+>) / sqrt(2)             = e^{-i theta}(phi1 - phi2)/sqrt(2)
        b = (e^{2i theta}|++> + |-->) / sqrt(2) = (phi1 + phi2)/sqrt(2)

    ``pp, pm, mp, mm`` are the bare product states.
    """
    r2 = 1.0 / math.sqrt(2.0)
    key = name.strip().lower()
    e1, e2 = _phase(theta, 1), _phase(theta, 2)
    table = {
        "phi1": (e2 / 2, e1 / 2, e1 / 2, 0.5),
        "phi2": (e2 / 2, -e1 / 2, -e1 / 2, 0.5),
        "phi3": (-e2 * r2, 0.0, 0.0, r2),
        "phi4": (0.0, r2, -r2, 0.0),
        "a": (0.0, r2, r2, 0.0),
        "b": (e2 * r2, 0.0, 0.0, r2),
        "pp": (1.0, 0.0, 0.0, 0.0),
        "pm": (0.0, 1.0, 0.0, 0.0),
        "mp": (0.0, 0.0, 1.0, 0.0),
        "mm": (0.0, 0.0, 0.0, 1.0),
    }
    if key not in table:
        raise ValueError(f"unknown atomic preset {name!r}; expected one of {PRESET_NAMES}")
    return AtomicState(*(complex(c) for c in table[key]))


@dataclass
class JointState:
    """Joint atom-field amplitudes on the truncated basis.

    ``amps`` has shape (4, N+1) for one mode or (4, N1+1, N2+1) for two
    modes, indexed by atomic label then Fock index per mode.  Treat
    instances as read-only; every operation in the package returns fresh
    arrays.
    """

    model: ModelKind
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        expected = 2 if self.model == ModelKind.ONE_MODE else 3
        if self.amps.ndim != expected or self.amps.shape[0] != 4:
            raise ValueError(
                f"{self.model.value} amplitudes must have shape (4, ...) with "
                f"{expected - 1} Fock axes, got {self.amps.shape}"
            )

    @property
    def cutoffs(self) -> tuple[int, ...]:
        """Highest Fock index of each mode in this basis."""
        return tuple(s - 1 for s in self.amps.shape[1:])

    def flat(self) -> np.ndarray:
        """View of the amplitudes as (4, n_fock)."""
        return self.amps.reshape(4, -1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def amplitude(self, label: int, *fock: int) -> complex:
        return complex(self.amps[(label, *fock)])

    def copy(self) -> "JointState":
        return JointState(self.model, self.amps.copy())


def _normalized_field(spec: CoherentSpec, cutoff: FockCutoff | int | None,
                      width: float) -> np.ndarray:
    if cutoff is None:
        cutoff = FockCutoff.for_field(spec, width=width)
    f = coherent_amplitudes(spec, cutoff)
    return f / np.linalg.norm(f)


def build_initial_state(atomic: AtomicState,
                        fields: CoherentSpec | tuple[CoherentSpec, ...],
                        cutoffs=None, width: float = 5.0) -> JointState:
    """Product state (atomic superposition) x (coherent mode(s)).

    One CoherentSpec selects the one-mode model, a pair selects the
    two-mode model.  ``cutoffs`` may give explicit per-mode FockCutoff/int
    values; by default `FockCutoff.for_field` is used with the given tail
    ``width``.  The coherent amplitudes are renormalized on the truncated
    basis, and the basis itself extends BASIS_PAD levels higher so the
    edge interaction blocks stay complete.
    """
    if isinstance(fields, CoherentSpec):
        fields = (fields,)
    fields = tuple(fields)
    if len(fields) not in (1, 2):
        raise ValueError("expected one or two coherent modes")
    if cutoffs is None:
        cutoffs = (None,) * len(fields)
    elif isinstance(cutoffs, (int, FockCutoff)):
        cutoffs = (cutoffs,)
    if len(cutoffs) != len(fields):
        raise ValueError("need one cutoff per mode")

    fs = [_normalized_field(spec, cut, width) for spec, cut in zip(fields, cutoffs)]
    if len(fields) == 1:
        field = np.concatenate([fs[0], np.zeros(BASIS_PAD, dtype=complex)])
        amps = atomic.vector[:, None] * field[None, :]
        model = ModelKind.ONE_MODE
    else:
        f1 = np.concatenate([fs[0], np.zeros(BASIS_PAD, dtype=complex)])
        f2 = np.concatenate([fs[1], np.zeros(BASIS_PAD, dtype=complex)])
        amps = atomic.vector[:, None, None] * f1[None, :, None] * f2[None, None, :]
        model = ModelKind.TWO_MODE
    amps /= np.linalg.norm(amps)
    return JointState(model, amps)


def random_joint_state(model: ModelKind, cutoffs: tuple[int, ...],
                       rng: np.random.Generator) -> JointState:
    """Haar-ish random normalized state on the full truncated basis (for tests)."""
    shape = (4,) + tuple(c + 1 for c in cutoffs)
    amps = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    amps /= np.linalg.norm(amps)
    return JointState(model, amps)
