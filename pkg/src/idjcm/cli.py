"""Command-line runner: figure scenarios, predictions and engine checks.

Verbs:

* ``run <scenario|config-file>``  -- simulate, write CSV + manifest (+ PNG)
* ``list``                        -- show the scenario registry
* ``predict``                     -- print revival / disentanglement tables
* ``verify``                      -- cross-check the three evolution engines

Data files are delimited text with header ``gt,S,W_pp,norm`` and 12
significant digits; identical configurations reproduce byte-identical
files.  Figures overlay S(t) with W_pp(t) + offset and mark the predicted
disentanglement times.  The default output directory is ``$IDJCM_OUTDIR``
or ``./runs``.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__
from .fock import (
    AtomicState,
    CoherentSpec,
    FockCutoff,
    ModelKind,
    PRESET_NAMES,
    build_initial_state,
    poisson_retained,
    preset_atomic_state,
    random_joint_state,
)
from .evolution import (
    BlockExactEngine,
    ClosedFormOneMode,
    ClosedFormTwoMode,
    DenseOracleEngine,
)
from .observables import entropy_series, reduce_atomic, linear_entropy
from .predictors import (
    CLASS_AB,
    CLASS_GENERIC,
    classify_initial_state,
    disentanglement_times,
    revival_periods_one_mode,
    revival_periods_two_mode,
)

OUTDIR_ENV = "IDJCM_OUTDIR"
DEFAULT_STEPS = 2000


@dataclass(frozen=True)
class ScenarioConfig:
    """Flat, file-serializable description of one simulation run."""

    name: str = "run"
    model: str = "one_mode"
    state: str = "a"                  # preset name, or "custom"
    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j
    nbar: float = 30.0
    nbar2: float | None = None
    phase: float = 0.0
    phase2: float = 0.0
    tmax: float = 2.0 * math.pi
    steps: int = DEFAULT_STEPS
    cutoff_width: float = 5.0
    engine: str = "block"
    plot_offset: float = 0.5
    figure: bool = True

    def model_kind(self) -> ModelKind:
        try:
            return ModelKind(self.model)
        except ValueError:
            raise ValueError(f"unknown model {self.model!r}; use 'one_mode' or 'two_mode'")

    def theta(self) -> float:
        if self.model_kind() == ModelKind.ONE_MODE:
            return self.phase
        return self.phase + self.phase2

    def fields(self) -> tuple[CoherentSpec, ...]:
        if self.model_kind() == ModelKind.ONE_MODE:
            return (CoherentSpec(self.nbar, self.phase),)
        nbar2 = self.nbar if self.nbar2 is None else self.nbar2
        return (CoherentSpec(self.nbar, self.phase), CoherentSpec(nbar2, self.phase2))

    def atomic(self) -> AtomicState:
        if self.state == "custom":
            vec = np.array([self.alpha, self.beta, self.gamma, self.delta], complex)
            return AtomicState.from_vector(vec, normalize=True)
        return preset_atomic_state(self.state, self.theta())

    def times(self) -> np.ndarray:
        if self.tmax <= 0 or self.steps < 1:
            raise ValueError("need tmax > 0 and steps >= 1")
        return np.linspace(0.0, self.tmax, self.steps)


@dataclass(frozen=True)
class ScenarioEntry:
    name: str
    kind: str            # "figure", "predict" or "verify"
    description: str
    config: ScenarioConfig | None = None


def _fig(name, model, state, nbar, nbar2=None, tmax=2.0 * math.pi, description=""):
    cfg = ScenarioConfig(name=name, model=model, state=state, nbar=nbar,
                         nbar2=nbar2, tmax=tmax)
    return ScenarioEntry(name, "figure", description, cfg)


SCENARIOS: dict[str, ScenarioEntry] = {
    e.name: e for e in [
        _fig("fig1a", "one_mode", "a", 30.0,
             description="one mode, symmetric Bell state (|+-> + |-+>)/sqrt2, nbar=30"),
        _fig("fig1b", "one_mode", "pp", 30.0,
             description="one mode, both atoms excited, nbar=30"),
        _fig("fig2a", "two_mode", "a", 50.0, 50.0, tmax=3.5,
             description="two modes, symmetric Bell state, nbar1=nbar2=50"),
        _fig("fig2b", "two_mode", "a", 50.0, 150.0, tmax=3.5,
             description="two modes, symmetric Bell state, nbar1=50 nbar2=150"),
        _fig("fig3a", "two_mode", "phi3", 50.0, 50.0, tmax=3.5,
             description="two modes, semiclassical eigenstate phi3, nbar1=nbar2=50"),
        _fig("fig3b", "two_mode", "pp", 50.0, 50.0, tmax=3.5,
             description="two modes, both atoms excited, nbar1=nbar2=50"),
        ScenarioEntry("predict-one-mode", "predict",
                      "print revival and disentanglement tables for fig1a parameters",
                      ScenarioConfig(name="predict-one-mode", model="one_mode",
                                     state="a", nbar=30.0)),
        ScenarioEntry("predict-two-mode", "predict",
                      "print revival and disentanglement tables for fig2a parameters",
                      ScenarioConfig(name="predict-two-mode", model="two_mode",
                                     state="a", nbar=50.0, nbar2=50.0)),
        ScenarioEntry("oracle-check", "verify",
                      "run the engine cross-validation suite"),
    ]
}


def list_scenarios() -> dict[str, ScenarioEntry]:
    """The scenario registry (figure scenarios plus utilities)."""
    return dict(SCENARIOS)


# --------------------------------------------------------------------------
# configuration files


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("alpha", "beta", "gamma", "delta"):
        return complex(raw)
    if key in ("steps",):
        return int(raw)
    if key in ("figure",):
        return raw.lower() in ("1", "true", "yes", "on")
    if key in ("name", "model", "state", "engine"):
        return raw
    return float(raw)


def load_config_file(path: str) -> ScenarioConfig:
    """Read a flat key=value config file (# starts a comment)."""
    values = {}
    valid = set(ScenarioConfig.__dataclass_fields__)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in valid:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _parse_value(key, raw)
    values.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    return ScenarioConfig(**values)


# --------------------------------------------------------------------------
# running


def _make_evolver(config: ScenarioConfig):
    """Build the (bound) propagator plus bookkeeping for the manifest."""
    atomic = config.atomic()
    fields = config.fields()
    cutoffs = tuple(FockCutoff.for_field(f, width=config.cutoff_width) for f in fields)
    retained = [poisson_retained(f.nbar, c.nmax) for f, c in zip(fields, cutoffs)]

    if config.engine == "closed":
        if config.model_kind() == ModelKind.ONE_MODE:
            evolver = ClosedFormOneMode(atomic, fields[0], cutoffs[0])
        else:
            evolver = ClosedFormTwoMode(atomic, fields[0], fields[1], cutoffs)
        basis_cutoffs = evolver.cutoffs
    elif config.engine in ("block", "dense"):
        state = build_initial_state(atomic, fields, cutoffs)
        basis_cutoffs = state.cutoffs
        if config.engine == "block":
            evolver = BlockExactEngine(state.model, state.cutoffs).bind(state)
        else:
            evolver = DenseOracleEngine(state.model, state.cutoffs).bind(state)
    else:
        raise ValueError(f"unknown engine {config.engine!r}; "
                         "use 'block', 'closed' or 'dense'")
    info = {
        "field_cutoffs": [c.nmax for c in cutoffs],
        "basis_cutoffs": list(basis_cutoffs),
        "retained_probability": retained,
    }
    return evolver, atomic, info


def _config_dict(config: ScenarioConfig) -> dict:
    d = asdict(config)
    for key in ("alpha", "beta", "gamma", "delta"):
        d[key] = str(d[key])
    return d


def _disentanglement_markers(config: ScenarioConfig, atomic: AtomicState) -> list[float]:
    label = classify_initial_state(atomic, config.theta())
    if label not in (CLASS_AB, CLASS_GENERIC):
        return []
    if config.model_kind() == ModelKind.TWO_MODE and label == CLASS_GENERIC:
        return []
    pred = disentanglement_times(config.model_kind(), label, count=32)
    return [t for t in pred.times if t <= config.tmax]


def write_series_csv(path: str, series) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("gt,S,W_pp,norm\n")
        for row in zip(series.gt, series.entropy, series.w_pp, series.norm):
            fh.write(",".join(f"{x:.12g}" for x in row) + "\n")


def render_figure(path: str, series, config: ScenarioConfig,
                  markers: list[float]) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 3.2))
    ax.plot(series.gt, series.entropy, color="black", lw=0.9, label="S")
    ax.plot(series.gt, series.w_pp + config.plot_offset, color="0.6", lw=0.7,
            label=f"W_pp + {config.plot_offset:g}")
    for i, t in enumerate(markers):
        ax.axvline(t, color="tab:red", ls=":", lw=0.8,
                   label="predicted disentanglement" if i == 0 else None)
    ax.set_xlabel("gt")
    ax.set_ylabel("linear entropy / offset probability")
    ax.set_xlim(series.gt[0], series.gt[-1])
    ax.set_title(config.name)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


@dataclass
class RunResult:
    config: ScenarioConfig
    series: object
    files: dict
    manifest: dict


def run_scenario(config: ScenarioConfig, out_dir: str | None = None) -> RunResult:
    """Simulate one scenario and write data, manifest and (optionally) figure."""
    out_dir = out_dir or os.environ.get(OUTDIR_ENV) or "runs"
    os.makedirs(out_dir, exist_ok=True)
    start = time.perf_counter()
    evolver, atomic, info = _make_evolver(config)
    series = entropy_series(evolver, config.times())
    elapsed = time.perf_counter() - start

    files = {"data": os.path.join(out_dir, f"{config.name}.csv")}
    write_series_csv(files["data"], series)
    if config.figure:
        files["figure"] = os.path.join(out_dir, f"{config.name}.png")
        render_figure(files["figure"], series, config,
                      _disentanglement_markers(config, atomic))

    manifest = {
        "config": _config_dict(config),
        "version": __version__,
        "engine": config.engine,
        "rows": len(series),
        "wall_clock_seconds": round(elapsed, 3),
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "files": {k: os.path.basename(v) for k, v in files.items()},
        **info,
    }
    files["manifest"] = os.path.join(out_dir, f"{config.name}.manifest.json")
    with open(files["manifest"], "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return RunResult(config, series, files, manifest)


# --------------------------------------------------------------------------
# predict


def _format_times(values, limit: int = 6) -> str:
    return ", ".join(f"{v:.6g}" for v in values[:limit])


def predict_report(config: ScenarioConfig, count: int = 8) -> str:
    """Human-readable revival and disentanglement predictions."""
    model = config.model_kind()
    atomic = config.atomic()
    label = classify_initial_state(atomic, config.theta())
    lines = [f"model: {model.value}   initial state: {config.state} (class {label})"]

    if model == ModelKind.ONE_MODE:
        rev = revival_periods_one_mode(config.nbar, k=1)
        lines.append(f"revival periods (nbar={config.nbar:g}):")
        lines.append(f"  g T1R asymptotic = {rev.t1r:.9g}   exact = "
                     f"[{rev.t1r_exact[0]:.9g}, {rev.t1r_exact[1]:.9g}]")
        lines.append(f"  g T2R asymptotic = {rev.t2r:.9g}   exact = "
                     f"[{rev.t2r_exact[0]:.9g}, {rev.t2r_exact[1]:.9g}]")
    else:
        nbar2 = config.nbar if config.nbar2 is None else config.nbar2
        rev = revival_periods_two_mode(config.nbar, nbar2, k=1)
        lines.append(f"revival periods (nbar1={config.nbar:g}, nbar2={nbar2:g}, "
                     "asymptotic; revivals need not appear at every predicted time):")
        lines.append(f"  g T1R' = {rev.t1r:.9g}")
        lines.append(f"  g T2R' = {rev.t2r:.9g}")

    if label in (CLASS_AB, CLASS_GENERIC):
        try:
            pred = disentanglement_times(model, label, count=count)
        except ValueError as exc:
            lines.append(f"disentanglement times: {exc}")
        else:
            lines.append(f"disentanglement times gt (series {pred.series}):")
            lines.append(f"  {_format_times(pred.times, count)}")
            for name, values in pred.by_series.items():
                lines.append(f"    {name}: {_format_times(values, count)}")
    elif label == "eigenstate-dark":
        lines.append("disentanglement times: state is exactly stationary "
                     "(dark); S(t) = 0 for all t")
    else:
        lines.append("disentanglement times: semiclassical eigenstate; the "
                     "joint state stays approximately factorized for all t")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# verify


def verify_engines(report=print) -> bool:
    """Cross-validate the engines on small bases; True when all checks pass."""
    rng = np.random.default_rng(20230517)
    checks = []

    def run_random(model, cutoffs, tol):
        block = BlockExactEngine(model, cutoffs)
        dense = DenseOracleEngine(model, cutoffs)
        worst = 0.0
        for _ in range(5):
            state = random_joint_state(model, cutoffs, rng)
            bound_b, bound_d = block.bind(state), dense.bind(state)
            for t in rng.uniform(0.0, 10.0, size=5):
                dev = np.abs(bound_b.at(t).amps - bound_d.at(t).amps).max()
                worst = max(worst, dev)
        return worst, tol

    worst, tol = run_random(ModelKind.ONE_MODE, (8,), 1e-10)
    checks.append(("block vs dense, one mode (cutoff 8)", worst, tol))
    worst, tol = run_random(ModelKind.TWO_MODE, (6, 6), 1e-10)
    checks.append(("block vs dense, two modes (6, 6)", worst, tol))

    atomic = AtomicState.from_vector(
        rng.normal(size=4) + 1j * rng.normal(size=4), normalize=True)
    field = CoherentSpec(2.0)
    closed = ClosedFormOneMode(atomic, field)
    block = BlockExactEngine(ModelKind.ONE_MODE, closed.cutoffs).bind(closed.initial)
    worst = max(np.abs(closed.at(t).amps - block.at(t).amps).max()
                for t in (0.0, 0.4, 1.3, 3.7, 9.1))
    checks.append(("closed form vs block, one mode (nbar 2)", worst, 1e-8))

    f1, f2 = CoherentSpec(1.0), CoherentSpec(1.0)
    closed2 = ClosedFormTwoMode(atomic, f1, f2)
    block2 = BlockExactEngine(ModelKind.TWO_MODE, closed2.cutoffs).bind(closed2.initial)
    worst = max(np.abs(closed2.at(t).amps - block2.at(t).amps).max()
                for t in (0.0, 0.3, 1.1, 4.9))
    checks.append(("closed form vs block, two modes (nbar 1, 1)", worst, 1e-8))

    dark = preset_atomic_state("phi4")
    state = build_initial_state(dark, CoherentSpec(5.0))
    evolved = BlockExactEngine(state.model, state.cutoffs).evolve(state, 7.7)
    dev = max(np.abs(evolved.amps - state.amps).max(),
              linear_entropy(reduce_atomic(evolved)))
    checks.append(("dark singlet stationarity (nbar 5)", dev, 1e-12))

    ok = True
    for name, worst, tol in checks:
        passed = bool(worst < tol)
        ok = ok and passed
        report(f"[{'PASS' if passed else 'FAIL'}] {name}: "
               f"max deviation {worst:.3e} (tolerance {tol:g})")
    return ok


# --------------------------------------------------------------------------
# argument parsing


def _add_override_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nbar", type=float, help="mean photon number of mode 1")
    p.add_argument("--nbar2", type=float, help="mean photon number of mode 2")
    p.add_argument("--phase", type=float, help="phase of mode 1 (rad)")
    p.add_argument("--phase2", type=float, help="phase of mode 2 (rad)")
    p.add_argument("--state", choices=PRESET_NAMES + ("custom",),
                   help="atomic preset, or 'custom' with --alpha..--delta")
    p.add_argument("--alpha", type=complex, help="custom |++> amplitude")
    p.add_argument("--beta", type=complex, help="custom |+-> amplitude")
    p.add_argument("--gamma", type=complex, help="custom |-+> amplitude")
    p.add_argument("--delta", type=complex, help="custom |--> amplitude")
    p.add_argument("--model", choices=[m.value for m in ModelKind])
    p.add_argument("--tmax", type=float, help="end of the gt grid")
    p.add_argument("--steps", type=int, help="number of grid points")
    p.add_argument("--cutoff-width", dest="cutoff_width", type=float,
                   help="Poisson tail width multiplier for the Fock cutoff")
    p.add_argument("--engine", choices=("block", "closed", "dense"))
    p.add_argument("--plot-offset", dest="plot_offset", type=float,
                   help="vertical offset of the W_pp curve in the figure")
    p.add_argument("--no-figure", dest="figure", action="store_false",
                   default=None, help="skip rendering the PNG figure")
    p.add_argument("--name", help="base name of the output files")


def _apply_overrides(config: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    updates = {}
    for key in ScenarioConfig.__dataclass_fields__:
        value = getattr(args, key, None)
        if value is not None:
            updates[key] = value
    return replace(config, **updates) if updates else config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idjcm",
        description="Two-atom Jaynes-Cummings dynamics with intensity-dependent "
                    "coupling: entanglement entropy series, predictions, checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a named scenario or a config file")
    p_run.add_argument("scenario", help="registry name (see 'list') or config path")
    p_run.add_argument("--out", help=f"output directory (default ${OUTDIR_ENV} or ./runs)")
    _add_override_args(p_run)

    sub.add_parser("list", help="list registered scenarios")

    p_pred = sub.add_parser("predict", help="print revival/disentanglement predictions")
    p_pred.add_argument("--count", type=int, default=8, help="times per series")
    _add_override_args(p_pred)

    sub.add_parser("verify", help="run the engine cross-validation suite")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for entry in SCENARIOS.values():
                print(f"{entry.name:18s} [{entry.kind}] {entry.description}")
            return 0

        if args.command == "verify":
            return 0 if verify_engines() else 1

        if args.command == "predict":
            config = _apply_overrides(ScenarioConfig(), args)
            print(predict_report(config, count=args.count))
            return 0

        # run
        if args.scenario in SCENARIOS:
            entry = SCENARIOS[args.scenario]
            if entry.kind == "verify":
                return 0 if verify_engines() else 1
            config = _apply_overrides(entry.config, args)
            if entry.kind == "predict":
                print(predict_report(config))
                return 0
        elif os.path.exists(args.scenario):
            config = _apply_overrides(load_config_file(args.scenario), args)
        else:
            print(f"error: {args.scenario!r} is neither a registered scenario nor "
                  "a config file (try 'idjcm list')", file=sys.stderr)
            return 2

        result = run_scenario(config, out_dir=args.out)
        drift = np.abs(result.series.norm - 1.0).max()
        print(f"wrote {result.files['data']}")
        if "figure" in result.files:
            print(f"wrote {result.files['figure']}")
        print(f"wrote {result.files['manifest']}")
        print(f"S range [{result.series.entropy.min():.6g}, "
              f"{result.series.entropy.max():.6g}], norm drift {drift:.3e}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
