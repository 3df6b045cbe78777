"""Analytic predictors: revival periods, disentanglement times, state classes.

All times are in units of 1/g.  Revival periods follow from the spread of
block frequencies around the mean photon number; exact values evaluate the
Omega formulas at integer indices, asymptotic values take the large-nbar
limit:

    one mode:   g T1R = pi k,        g T2R = pi m / 2
    two modes:  g T1R' = pi sqrt(k) / sqrt(nbar1 nbar2),   T2R' = T1R' / 2

Disentanglement-time series (asymptotic, large fields):

    t1 = (2k+1) T1R / 4   and   t2 = k pi / 2    for A/B-type initial states (one mode)
    t3 = k pi                                    for all other one-mode initial states
    t4 = m pi / 2                                for A/B-type initial states (two modes)

The two-mode series for arbitrary initial states is an open problem and is
not predicted here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import AtomicState, ModelKind, preset_atomic_state
from .evolution import _omega_one

CLASS_AB = "AB"
CLASS_GENERIC = "generic"
CLASS_EIGENSTATE = "eigenstate"
CLASS_DARK = "eigenstate-dark"

#: overlap tolerance for recognizing a preset up to global phase
CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class RevivalPrediction:
    """Revival periods of the fast Rabi oscillations.

    ``t1r``/``t2r`` are the asymptotic periods for series index k.  The
    exact one-mode variants evaluate Omega at integer photon numbers; for a
    non-integer nbar they are reported as a (floor, ceil) bracket.  The
    two-mode periods are asymptotic only and carry ``reliable = False``:
    numerical studies find revivals need not appear at every predicted
    time, although when one occurs it falls on the predicted grid.
    """

    model: ModelKind
    k: int
    t1r: float
    t2r: float
    t1r_exact: tuple[float, float] | None = None
    t2r_exact: tuple[float, float] | None = None
    reliable: bool = True


def _exact_period(nbar_int: int, k: int, harmonic: int) -> float:
    gap = abs(_omega_one(nbar_int + 1) - _omega_one(nbar_int)) * harmonic
    return 2.0 * math.pi * k / float(gap)


def revival_periods_one_mode(nbar: float, k: int = 1) -> RevivalPrediction:
    """Revival periods T1R (frequency 2 Omega) and T2R (frequency 4 Omega)."""
    if nbar <= 0:
        raise ValueError("revival periods need nbar > 0")
    if k < 1:
        raise ValueError("series index k must be >= 1")
    lo, hi = int(math.floor(nbar)), int(math.ceil(nbar))
    t1 = tuple(sorted((_exact_period(lo, k, 2), _exact_period(hi, k, 2))))
    t2 = tuple(sorted((_exact_period(lo, k, 4), _exact_period(hi, k, 4))))
    return RevivalPrediction(
        model=ModelKind.ONE_MODE,
        k=k,
        t1r=math.pi * k,
        t2r=math.pi * k / 2.0,
        t1r_exact=t1,
        t2r_exact=t2,
    )


def revival_periods_two_mode(nbar1: float, nbar2: float, k: int = 1) -> RevivalPrediction:
    """Asymptotic two-mode revival periods; valid for nbar1, nbar2 >> 1."""
    if nbar1 <= 0 or nbar2 <= 0:
        raise ValueError("revival periods need both nbar > 0")
    if k < 1:
        raise ValueError("series index k must be >= 1")
    t1 = math.pi * math.sqrt(k) / math.sqrt(nbar1 * nbar2)
    return RevivalPrediction(
        model=ModelKind.TWO_MODE,
        k=k,
        t1r=t1,
        t2r=t1 / 2.0,
        reliable=False,
    )


@dataclass(frozen=True)
class DisentanglementPrediction:
    """Predicted times at which the atoms factor out from the field."""

    model: ModelKind
    initial_class: str
    series: str
    times: np.ndarray
    by_series: dict[str, np.ndarray] = field(default_factory=dict)


def disentanglement_times(model: ModelKind, initial_class: str,
                          count: int = 8) -> DisentanglementPrediction:
    """First ``count`` asymptotic disentanglement times (units 1/g), sorted.

    ``initial_class`` is "AB" for A/B-type states or "generic" for other
    one-mode initial states.  One-mode AB states own two interleaved series
    (t1 at odd quarters of pi, t2 at multiples of pi/2); generic one-mode
    states disentangle only at multiples of pi; two-mode AB states at
    multiples of pi/2.  Two-mode generic states have no known series.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    k = np.arange(1, count + 1, dtype=float)
    if model == ModelKind.ONE_MODE and initial_class == CLASS_AB:
        t1 = (2 * np.arange(count, dtype=float) + 1) * math.pi / 4.0
        t2 = k * math.pi / 2.0
        merged = np.unique(np.concatenate([t1, t2]))[:count]
        return DisentanglementPrediction(model, initial_class, "t1+t2", merged,
                                         {"t1": t1, "t2": t2})
    if model == ModelKind.ONE_MODE and initial_class == CLASS_GENERIC:
        t3 = k * math.pi
        return DisentanglementPrediction(model, initial_class, "t3", t3, {"t3": t3})
    if model == ModelKind.TWO_MODE and initial_class == CLASS_AB:
        t4 = k * math.pi / 2.0
        return DisentanglementPrediction(model, initial_class, "t4", t4, {"t4": t4})
    if model == ModelKind.TWO_MODE and initial_class == CLASS_GENERIC:
        raise ValueError("no predicted disentanglement series for generic "
                         "two-mode initial states")
    raise ValueError(f"unknown initial-state class {initial_class!r}")


def taylor_rabi_residual(nbar: float, n: int) -> float:
    """Second-and-higher-order remainder of the linearized one-mode Omega_n.

    Returns Omega_n - [Omega_nbar + slope * (n - nbar)] with the slope
    (2 nbar + 3) / sqrt(2 (2 nbar (nbar + 3) + 5)).  Because Omega is
    convex in n the remainder is positive on both sides of nbar; its
    growth controls how the revival periodicity degrades.
    """
    if n < 0:
        raise ValueError("photon index must be >= 0")
    slope = (2.0 * nbar + 3.0) / math.sqrt(2.0 * (2.0 * nbar * (nbar + 3.0) + 5.0))
    linear = float(_omega_one(nbar)) + slope * (n - nbar)
    return float(_omega_one(n)) - linear


def phase_matching_residual(nbar: float, t: float) -> float:
    """|Omega_{n+1} - Omega_n| t mod 2 pi at n = round(nbar).

    Diagnostic for the rephasing of neighboring Fock components.  Note the
    dynamical oscillation frequencies are 2 Omega_n, so full rephasing of
    the observable coefficients happens when twice this residual vanishes
    mod 2 pi; at large nbar the gap tends to 1 and the residual alternates
    between ~0 and ~pi on the t = pi k disentanglement grid.
    """
    n = int(round(nbar))
    gap = abs(float(_omega_one(n + 1)) - float(_omega_one(n)))
    return math.fmod(gap * t, 2.0 * math.pi)


def _matches(vec: np.ndarray, target: np.ndarray) -> bool:
    return abs(np.vdot(target, vec)) > 1.0 - CLASSIFY_TOL


def classify_initial_state(atomic: AtomicState, theta: float = 0.0) -> str:
    """Route an atomic state to its disentanglement behaviour.

    Returns "eigenstate-dark" for the singlet phi4 (exactly stationary),
    "eigenstate" for phi1/phi2/phi3 (asymptotically stationary), "AB" for
    any other state in span{phi1, phi2} (periodic exact disentanglement,
    includes the a/b presets) and "generic" otherwise.  Matching is up to a
    global phase with tolerance 1e-9.
    """
    vec = atomic.vector
    phi = {name: preset_atomic_state(name, theta).vector
           for name in ("phi1", "phi2", "phi3", "phi4")}
    if _matches(vec, phi["phi4"]):
        return CLASS_DARK
    if any(_matches(vec, phi[p]) for p in ("phi1", "phi2", "phi3")):
        return CLASS_EIGENSTATE
    in_span = abs(np.vdot(phi["phi1"], vec)) ** 2 + abs(np.vdot(phi["phi2"], vec)) ** 2
    if in_span > 1.0 - CLASSIFY_TOL:
        return CLASS_AB
    return CLASS_GENERIC
