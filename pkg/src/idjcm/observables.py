"""Reduced atomic density matrix, linear entropy and occupation probabilities."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .fock import PP, JointState

#: linear entropy of the maximally mixed 4-dimensional atomic state
MAX_ENTROPY = 0.75

BOUND_TOL = 1e-9


class NumericalHealthWarning(UserWarning):
    """Entropy or purity left its physical range by more than the tolerance."""


def reduce_atomic(state: JointState) -> np.ndarray:
    """4x4 reduced atomic density matrix, tracing out the field mode(s).

    rho[a, b] = sum_fock amp(a, fock) conj(amp(b, fock)).
    """
    flat = state.flat()
    return flat @ flat.conj().T


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2); for Hermitian rho this equals sum |rho_ij|^2."""
    return float(np.sum(np.abs(rho) ** 2))


def linear_entropy(rho: np.ndarray, tol: float = BOUND_TOL) -> float:
    """S = 1 - Tr(rho^2) of a reduced atomic density matrix.

    Values inside [0, 3/4] by at most ``tol`` are clipped; larger
    excursions emit a NumericalHealthWarning and are returned unclipped so
    broken inputs stay visible.
    """
    s = 1.0 - purity(rho)
    if -tol <= s <= MAX_ENTROPY + tol:
        return min(max(s, 0.0), MAX_ENTROPY)
    warnings.warn(
        f"linear entropy {s!r} outside [0, {MAX_ENTROPY}] by more than {tol}",
        NumericalHealthWarning,
        stacklevel=2,
    )
    return s


def prob_both_excited(state: JointState) -> float:
    """Probability W_pp of finding both atoms excited."""
    return float(np.sum(np.abs(state.flat()[PP]) ** 2))


@dataclass
class EntropySeries:
    """Time series of entanglement data on a gt grid."""

    gt: np.ndarray
    entropy: np.ndarray
    w_pp: np.ndarray
    norm: np.ndarray

    def __len__(self) -> int:
        return len(self.gt)


def entropy_series(evolver, times, initial: JointState | None = None) -> EntropySeries:
    """Evaluate S(t), W_pp(t) and the state norm over a time grid.

    ``evolver`` is either an already-bound propagator (anything with an
    ``at(t) -> JointState`` method, e.g. the closed-form engines or the
    result of ``engine.bind(state)``) or a spectral engine, in which case
    ``initial`` must be supplied.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("need a non-empty 1-d time grid")
    if np.any(np.diff(times) <= 0) and len(times) > 1:
        raise ValueError("time grid must be strictly increasing")
    if not hasattr(evolver, "at"):
        if initial is None:
            raise ValueError("an unbound engine needs an initial state")
        evolver = evolver.bind(initial)

    s = np.empty_like(times)
    w = np.empty_like(times)
    norm = np.empty_like(times)
    for i, t in enumerate(times):
        state = evolver.at(t)
        rho = reduce_atomic(state)
        s[i] = linear_entropy(rho)
        w[i] = prob_both_excited(state)
        norm[i] = state.norm()
    return EntropySeries(times, s, w, norm)
