"""Experiment plans, sweeps, run records and reports.

Every random draw of a sweep comes from ``stream(seed, task, n, ...)`` keyed by
the point and trial, so any point can be regenerated on its own and a
partially finished sweep can resume from its persisted record.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from . import __version__
from .bell import run_quantum_enhanced, sign_products
from .bounds import lb_bounded_memory, lb_compare_abs, lb_predict_abs, lb_qpca
from .datasets import save_outcome_matrix
from .dynamics import CONVENTIONAL, QUANTUM_ENHANCED, DynamicsExperimentConfig, run_dynamics
from .ensemble import EnsembleSpec
from .errors import ConfigError, DegenerateError, ResourceLimitError
from .kpca import build_features, classify_by_split, fit_kernel_pca, score_accuracy
from .noise import ReadoutProfile
from .pauli import sample_distinct_pauli, sample_pauli_string
from .qpca import MAX_TASK_QUBITS, PcaInstance, conventional_baseline, two_copy_guess
from .rng import stream
from .shadow import run_conventional, snapshot_terms
from .statevector import MAX_UNITARY_QUBITS, compile_tsym_gate_retrying, generate_1d_circuit

log = logging.getLogger(__name__)

TASKS = ("states", "dynamics", "qpca", "bounds")
STRATEGIES = (CONVENTIONAL, QUANTUM_ENHANCED)
SYMMETRIES = ("general", "t_symmetric")
FORMATS = ("csv", "json", "svg")

DEFAULT_CAPS = {CONVENTIONAL: 5000, QUANTUM_ENHANCED: 500}
DEFAULT_REPETITIONS = {CONVENTIONAL: 1000, QUANTUM_ENHANCED: 500}
MAX_STATE_QUBITS = 64

# fields that only affect where results go, not what they are
_OUTPUT_FIELDS = ("out_dir", "formats")


@dataclass
class ExperimentPlan:
    task: str
    n_values: tuple = (2, 4, 6, 8)
    trials: int = 400
    strategies: tuple = STRATEGIES
    budgets: dict = field(default_factory=dict)  # strategy -> budgets for the accuracy curve
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    accuracy_target: float = 0.7
    seed: int = 0
    alpha: float = 0.9
    noise: str | None = None  # path to a readout profile JSON
    noise_flip: float | None = None  # uniform flip rate, alternative to ``noise``
    out_dir: str = "out"
    formats: tuple = ("csv", "json")
    # dynamics
    circuits_per_class: int = 100
    depth: int | None = None  # defaults to n
    repetitions: dict = field(default_factory=lambda: dict(DEFAULT_REPETITIONS))
    save_datasets: bool = False
    # qpca
    copies: tuple = (10, 25, 50, 100, 200)
    # bounds
    delta: float = 0.3
    memory_qubits: int = 0
    success_prob: float = 2 / 3

    def __post_init__(self):
        self.n_values = tuple(int(n) for n in self.n_values)
        self.strategies = tuple(self.strategies)
        self.formats = tuple(self.formats)
        self.copies = tuple(int(c) for c in self.copies)
        self.budgets = {k: tuple(int(b) for b in v) for k, v in self.budgets.items()}
        self.caps = {**DEFAULT_CAPS, **{k: int(v) for k, v in self.caps.items()}}
        self.repetitions = {**DEFAULT_REPETITIONS, **{k: int(v) for k, v in self.repetitions.items()}}
        self.validate()

    def validate(self):
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}")
        if not self.n_values or min(self.n_values) < 1:
            raise ConfigError("n values must be a non-empty list of positive integers")
        if self.task in ("dynamics", "qpca") and min(self.n_values) < 2:
            raise ConfigError(f"{self.task} needs n >= 2")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        bad = set(self.strategies) - set(STRATEGIES)
        if bad or not self.strategies:
            raise ConfigError(f"unknown strategies {sorted(bad)}")
        for name, table in (("budgets", self.budgets), ("caps", self.caps), ("repetitions", self.repetitions)):
            if set(table) - set(STRATEGIES):
                raise ConfigError(f"{name} keys must be strategies")
        every = [b for v in self.budgets.values() for b in v]
        every += list(self.caps.values()) + list(self.repetitions.values()) + list(self.copies)
        if any(b < 1 for b in every):
            raise ConfigError("budgets, caps, repetitions and copies must be >= 1")
        if not 0.5 < self.accuracy_target < 1:
            raise ConfigError("accuracy target must lie in (0.5, 1)")
        if not -1 < self.alpha < 1 or self.alpha == 0:
            raise ConfigError("alpha must be non-zero with |alpha| < 1")
        if self.noise_flip is not None and not 0 <= self.noise_flip < 0.5:
            raise ConfigError("noise_flip must lie in [0, 0.5)")
        if self.circuits_per_class < 1:
            raise ConfigError("circuits_per_class must be >= 1")
        if self.depth is not None and self.depth < 0:
            raise ConfigError("depth must be >= 0")
        if set(self.formats) - set(FORMATS):
            raise ConfigError(f"formats must be drawn from {FORMATS}")
        if not 0 < self.delta <= 0.5:
            raise ConfigError("delta must lie in (0, 1/2]")
        if not 0.5 < self.success_prob < 1:
            raise ConfigError("success_prob must lie in (1/2, 1)")
        if self.memory_qubits < 0:
            raise ConfigError("memory_qubits must be >= 0")

    def to_json(self) -> dict:
        obj = asdict(self)
        for k, v in obj.items():
            if isinstance(v, tuple):
                obj[k] = list(v)
        obj["budgets"] = {k: list(v) for k, v in sorted(self.budgets.items())}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentPlan":
        obj = dict(obj)
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown plan fields: {sorted(unknown)}")
        if "task" not in obj:
            raise ConfigError("plan needs a task")
        try:
            return cls(**obj)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid plan: {exc}") from exc

    def plan_hash(self) -> str:
        obj = {k: v for k, v in self.to_json().items() if k not in _OUTPUT_FIELDS}
        return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def load_plan(path, **overrides) -> ExperimentPlan:
    """Read a TOML plan.  ``n`` may be a list or ``n_range = [lo, hi, step]`` (inclusive)."""
    import tomli

    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomli.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{path}: no such config file") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if "n" in raw and "n_range" in raw:
        raise ConfigError("give either n or n_range, not both")
    if "n" in raw:
        n = raw.pop("n")
        raw["n_values"] = n if isinstance(n, list) else [n]
    if "n_range" in raw:
        r = raw.pop("n_range")
        if not isinstance(r, list) or len(r) not in (2, 3):
            raise ConfigError("n_range must be [lo, hi] or [lo, hi, step]")
        step = r[2] if len(r) == 3 else 1
        if step < 1:
            raise ConfigError("n_range step must be >= 1")
        raw["n_values"] = list(range(r[0], r[1] + 1, step))
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentPlan.from_json(raw)


def resolve_noise(plan: ExperimentPlan, width: int) -> ReadoutProfile | None:
    """Readout profile for ``width`` bits, or None when the plan is noiseless.

    A profile file holds either ``{"flip": p}`` (uniform), a single 2x2 matrix
    (applied to every bit) or one matrix per bit.
    """
    if plan.noise is not None:
        path = Path(plan.noise)
        try:
            obj = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"{path}: no such noise profile") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if isinstance(obj, dict):
            if set(obj) != {"flip"}:
                raise ConfigError(f"{path}: expected {{'flip': p}} or a list of matrices")
            return ReadoutProfile.uniform(width, float(obj["flip"]))
        calib = np.asarray(obj, dtype=float)
        if calib.shape == (2, 2):
            calib = np.broadcast_to(calib, (width, 2, 2))
        if calib.shape != (width, 2, 2):
            raise ConfigError(f"{path}: profile covers {len(calib)} bits, experiment reads {width}")
        return ReadoutProfile(np.array(calib))
    if plan.noise_flip:
        return ReadoutProfile.uniform(width, plan.noise_flip)
    return None


# -- run records ----------------------------------------------------------------------


@dataclass
class RunRecord:
    task: str
    plan_hash: str
    seed: int
    plan: dict
    versions: dict
    points: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    completed: list = field(default_factory=list)
    # wall-clock seconds per unit; kept out of equality and of the JSON record
    timings: dict = field(default_factory=dict, compare=False)

    @classmethod
    def start(cls, plan: ExperimentPlan) -> "RunRecord":
        versions = {"qlearnlab": __version__, "numpy": np.__version__}
        return cls(plan.task, plan.plan_hash(), plan.seed, plan.to_json(), versions)

    def is_done(self, unit: str) -> bool:
        return unit in self.completed

    def append(self, unit: str, points, tables=None, wall: float | None = None):
        """Add a finished unit of work; finished units are never rewritten."""
        if unit in self.completed:
            raise ValueError(f"unit {unit!r} already recorded")
        self.points.extend(_plain(p) for p in points)
        for name, rows in (tables or {}).items():
            self.tables.setdefault(name, []).extend(_plain(r) for r in rows)
        self.completed.append(unit)
        if wall is not None:
            self.timings[unit] = wall

    def to_json(self) -> dict:
        obj = asdict(self)
        del obj["timings"]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "RunRecord":
        return cls(**obj)


def _plain(obj):
    """Convert numpy scalars and containers to JSON-native values."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def save_record(record: RunRecord, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(record.to_json(), sort_keys=True, indent=1) + "\n")
    tmp.replace(path)
    return path


def load_record(path) -> RunRecord:
    return RunRecord.from_json(json.loads(Path(path).read_text()))


def resume_record(plan: ExperimentPlan, path) -> RunRecord:
    """Record persisted at ``path`` if it belongs to the same plan, else a fresh one."""
    path = Path(path)
    if path.exists():
        rec = load_record(path)
        if rec.plan_hash == plan.plan_hash():
            return rec
        log.warning("%s belongs to a different plan; starting over", path)
    return RunRecord.start(plan)


def wilson(correct: int, trials: int) -> tuple[float, float]:
    ci = binomtest(int(correct), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def _run_units(plan, record, checkpoint, units):
    """Execute ``(unit_id, fn)`` pairs not yet in ``record``; persist after each one."""
    if record is None:
        record = RunRecord.start(plan)
    elif record.plan_hash != plan.plan_hash():
        raise ConfigError("record was produced by a different plan")
    for unit, fn in units:
        if record.is_done(unit):
            continue
        t0 = time.perf_counter()
        points, tables = fn()
        record.append(unit, points, tables, time.perf_counter() - t0)
        if checkpoint is not None:
            save_record(record, checkpoint)
    return record


# -- states ---------------------------------------------------------------------------


def default_budget_grid(cap: int) -> tuple[int, ...]:
    grid = [1]
    while grid[-1] * 2 < cap:
        grid.append(grid[-1] * 2)
    return tuple(grid) + (cap,)


def draw_compare_task(seed: int, n: int, trial: int, alpha: float):
    """One comparison-task instance: (spec, o1, o2, truth) with truth 1 when o1 is the planted Pauli."""
    rng = stream(seed, "states", n, trial)
    p = sample_pauli_string(n, True, rng)
    sign = 1 if rng.random() < 0.5 else -1
    q = sample_distinct_pauli(n, p, rng)
    if rng.random() < 0.5:
        return EnsembleSpec(p, sign * alpha), p, q, 1
    return EnsembleSpec(p, sign * alpha), q, p, 2


class CompareTrials:
    """Running sums of per-record estimator terms for many comparison-task instances.

    Each trial's dataset is drawn once at the cap; the estimate at budget N
    uses its first N records, so accuracies at different budgets share
    randomness and the budget search sees a smooth curve.
    """

    def __init__(self, seed, n, strategy, trials, cap, alpha=0.9, noise=None):
        if n > MAX_STATE_QUBITS:
            raise ResourceLimitError(f"state sweeps capped at n = {MAX_STATE_QUBITS}")
        self.strategy, self.cap = strategy, cap
        self.sums = np.empty((2, trials, cap))
        self.truth = np.empty(trials, dtype=np.int64)
        for i in range(trials):
            spec, o1, o2, self.truth[i] = draw_compare_task(seed, n, i, alpha)
            rng = stream(seed, "states", n, strategy, i)
            if strategy == QUANTUM_ENHANCED:
                data = run_quantum_enhanced(spec, cap, noise, rng)
                terms = [sign_products(data.outcomes, o) for o in (o1, o2)]
            else:
                data = run_conventional(spec, cap, noise, rng)
                terms = [snapshot_terms(data, o) for o in (o1, o2)]
            for k in range(2):
                np.cumsum(terms[k], out=self.sums[k, i])
        self._cache: dict[int, int] = {}

    @property
    def trials(self) -> int:
        return len(self.truth)

    def correct(self, budget: int) -> int:
        if not 1 <= budget <= self.cap:
            raise ValueError(f"budget must be in 1..{self.cap}")
        if budget not in self._cache:
            means = self.sums[:, :, budget - 1] / budget
            if self.strategy == QUANTUM_ENHANCED:
                score = np.maximum(means, 0.0)  # b = sqrt(max(0, a)) is monotone in this
            else:
                score = np.abs(means)
            guess = np.where(score[0] >= score[1], 1, 2)
            self._cache[budget] = int(np.sum(guess == self.truth))
        return self._cache[budget]

    def accuracy(self, budget: int) -> float:
        return self.correct(budget) / self.trials


def minimal_budget(accuracy, target: float, cap: int) -> int | None:
    """Smallest budget reaching ``target``: doubling search, then bisection; None if out of reach."""
    lo, hi = 0, 1
    while accuracy(hi) < target:
        if hi >= cap:
            return None
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if accuracy(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def copies_per_experiment(strategy: str) -> int:
    return 2 if strategy == QUANTUM_ENHANCED else 1


def _states_unit(plan: ExperimentPlan, n: int, strategy: str):
    cap = plan.caps[strategy]
    width = 2 * n if strategy == QUANTUM_ENHANCED else n
    ct = CompareTrials(plan.seed, n, strategy, plan.trials, cap, plan.alpha, resolve_noise(plan, width))
    per = copies_per_experiment(strategy)
    points = []
    grid = plan.budgets.get(strategy) or default_budget_grid(cap)
    for b in sorted({b for b in grid if b <= cap}):
        k = ct.correct(b)
        lo, hi = wilson(k, ct.trials)
        points.append(
            {"kind": "accuracy", "n": n, "strategy": strategy, "budget": b, "experiments": b,
             "copies": b * per, "accuracy": k / ct.trials, "correct": k, "trials": ct.trials,
             "ci_low": lo, "ci_high": hi}
        )
    best = minimal_budget(ct.accuracy, plan.accuracy_target, cap)
    point = {"kind": "min_budget", "n": n, "strategy": strategy, "reached": best is not None,
             "budget": best, "experiments": best, "copies": None if best is None else best * per,
             "trials": ct.trials, "lower_bound": lb_compare_abs(n, plan.delta)}
    if best is not None:
        point["accuracy"] = ct.accuracy(best)
        point["correct"] = ct.correct(best)
        point["ci_low"], point["ci_high"] = wilson(point["correct"], ct.trials)
    points.append(point)
    return points, {}


def run_states_sweep(plan: ExperimentPlan, record: RunRecord | None = None, checkpoint=None) -> RunRecord:
    if plan.task != "states":
        raise ConfigError("run_states_sweep needs a states plan")
    units = [
        (f"states/n={n}/{s}", lambda n=n, s=s: _states_unit(plan, n, s))
        for n in plan.n_values
        for s in plan.strategies
    ]
    return _run_units(plan, record, checkpoint, units)


# -- dynamics -------------------------------------------------------------------------


def dynamics_circuits(seed: int, n: int, depth: int, per_class: int):
    """Equal numbers of general and T-symmetric circuits; one compiled gate per n."""
    gate = compile_tsym_gate_retrying(stream(seed, "dynamics", n, "tsym_gate")).matrix
    circuits, labels = [], []
    for label, sym in enumerate(SYMMETRIES):
        for j in range(per_class):
            rng = stream(seed, "dynamics", n, sym, j)
            circuits.append(generate_1d_circuit(n, depth, sym, rng, tsym_gate=gate, seed=j))
            labels.append(label)
    return circuits, np.array(labels)


def _dynamics_unit(plan: ExperimentPlan, n: int, strategy: str, cache: dict):
    depth = n if plan.depth is None else plan.depth
    if n not in cache:
        cache.clear()
        cache[n] = dynamics_circuits(plan.seed, n, depth, plan.circuits_per_class)
    circuits, labels = cache[n]
    reps = plan.repetitions[strategy]
    width = 2 * n if strategy == QUANTUM_ENHANCED else n
    cfg = DynamicsExperimentConfig(n, depth, reps, strategy, resolve_noise(plan, width))
    feats = []
    for c, label in zip(circuits, labels):
        sym = SYMMETRIES[label]
        m = run_dynamics(c, cfg, stream(plan.seed, "dynamics", n, strategy, sym, c.seed))
        if plan.save_datasets:
            d = Path(plan.out_dir) / "datasets"
            d.mkdir(parents=True, exist_ok=True)
            save_outcome_matrix(m, d / f"dynamics_n{n}_{strategy}_{sym}_{c.seed}.jsonl")
        feats.append(build_features(m))
    model = fit_kernel_pca(feats, d=min(2, len(feats)))
    coords = model.training_projections()
    try:
        acc = score_accuracy(classify_by_split(coords[:, 0]), labels)
        degenerate = False
    except DegenerateError:
        acc, degenerate = 0.5, True
    point = {"kind": "dynamics", "n": n, "strategy": strategy, "depth": depth, "repetitions": reps,
             "circuits": len(circuits), "accuracy": acc, "gamma": model.gamma,
             "degenerate": degenerate, "noise": cfg.noise is not None}
    rows = [
        {"n": n, "strategy": strategy, "symmetry": SYMMETRIES[label], "circuit": c.seed,
         "pc1": coords[i, 0], "pc2": coords[i, 1] if coords.shape[1] > 1 else 0.0}
        for i, (c, label) in enumerate(zip(circuits, labels))
    ]
    return [point], {"projections": rows}


def run_dynamics_sweep(plan: ExperimentPlan, record: RunRecord | None = None, checkpoint=None) -> RunRecord:
    if plan.task != "dynamics":
        raise ConfigError("run_dynamics_sweep needs a dynamics plan")
    if QUANTUM_ENHANCED in plan.strategies and max(plan.n_values) > MAX_UNITARY_QUBITS:
        raise ResourceLimitError(f"quantum-enhanced dynamics capped at n = {MAX_UNITARY_QUBITS}")
    cache: dict = {}
    units = [
        (f"dynamics/n={n}/{s}", lambda n=n, s=s: _dynamics_unit(plan, n, s, cache))
        for n in plan.n_values
        for s in plan.strategies
    ]
    return _run_units(plan, record, checkpoint, units)


# -- qpca -----------------------------------------------------------------------------


def qpca_instance(seed: int, n: int, i: int) -> PcaInstance:
    rng = stream(seed, "qpca", n, i)
    hypothesis = "A" if rng.random() < 0.5 else "B"
    return PcaInstance.sample(n, hypothesis, rng)


def _qpca_unit(plan: ExperimentPlan, n: int, strategy: str):
    instances = [qpca_instance(plan.seed, n, i) for i in range(plan.trials)]
    decide = two_copy_guess if strategy == QUANTUM_ENHANCED else conventional_baseline
    points = []
    for copies in sorted(set(plan.copies)):
        k = sum(
            decide(inst, copies, stream(plan.seed, "qpca", n, strategy, copies, i)) == inst.hypothesis
            for i, inst in enumerate(instances)
        )
        lo, hi = wilson(k, len(instances))
        points.append(
            {"kind": "qpca", "n": n, "strategy": strategy, "copies": copies, "accuracy": k / len(instances),
             "correct": k, "trials": len(instances), "ci_low": lo, "ci_high": hi, "lower_bound": lb_qpca(n)}
        )
    return points, {}


def run_qpca_sweep(plan: ExperimentPlan, record: RunRecord | None = None, checkpoint=None) -> RunRecord:
    if plan.task != "qpca":
        raise ConfigError("run_qpca_sweep needs a qpca plan")
    if max(plan.n_values) > MAX_TASK_QUBITS:
        raise ResourceLimitError(f"qpca sweeps capped at n = {MAX_TASK_QUBITS}")
    units = [
        (f"qpca/n={n}/{s}", lambda n=n, s=s: _qpca_unit(plan, n, s))
        for n in plan.n_values
        for s in plan.strategies
    ]
    return _run_units(plan, record, checkpoint, units)


# -- bounds ---------------------------------------------------------------------------


def bound_rows(plan: ExperimentPlan) -> list[dict]:
    rows = []
    for n in plan.n_values:
        rows.append({"n": n, "bound_name": "lb_predict_abs", "value": lb_predict_abs(n, plan.delta)})
        rows.append({"n": n, "bound_name": "lb_compare_abs", "value": lb_compare_abs(n, plan.delta)})
        if n >= 2:
            rows.append({"n": n, "bound_name": "lb_qpca", "value": lb_qpca(n)})
        k = min(plan.memory_qubits, n)
        rows.append({"n": n, "bound_name": "lb_bounded_memory", "value": lb_bounded_memory(n, k, plan.success_prob)})
    return rows


def run_bounds(plan: ExperimentPlan, record: RunRecord | None = None, checkpoint=None) -> RunRecord:
    if plan.task != "bounds":
        raise ConfigError("run_bounds needs a bounds plan")
    return _run_units(plan, record, checkpoint, [("bounds", lambda: (bound_rows(plan), {}))])


RUNNERS = {"states": run_states_sweep, "dynamics": run_dynamics_sweep, "qpca": run_qpca_sweep, "bounds": run_bounds}


def run_plan(plan: ExperimentPlan, record: RunRecord | None = None, checkpoint=None) -> RunRecord:
    return RUNNERS[plan.task](plan, record, checkpoint)


# -- reports --------------------------------------------------------------------------

SUMMARY_COLUMNS = {
    "states": ["kind", "n", "strategy", "budget", "experiments", "copies", "accuracy", "correct",
               "trials", "ci_low", "ci_high", "reached", "lower_bound"],
    "dynamics": ["kind", "n", "strategy", "depth", "repetitions", "circuits", "accuracy", "gamma",
                 "degenerate", "noise"],
    "qpca": ["kind", "n", "strategy", "copies", "accuracy", "correct", "trials", "ci_low", "ci_high",
             "lower_bound"],
    "bounds": ["n", "bound_name", "value"],
}
TABLE_COLUMNS = {"projections": ["n", "strategy", "symmetry", "circuit", "pc1", "pc2"]}


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def write_csv(rows, columns, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
    return path


def emit_report(record: RunRecord, out_dir, formats=("csv", "json")) -> list[Path]:
    """Write the summary CSV, extra tables, the JSON record and optional SVG plots."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    if "csv" in formats:
        written.append(write_csv(record.points, SUMMARY_COLUMNS[record.task], out / "summary.csv"))
        for name, rows in sorted(record.tables.items()):
            cols = TABLE_COLUMNS.get(name) or sorted({k for r in rows for k in r})
            written.append(write_csv(rows, cols, out / f"{name}.csv"))
    if "json" in formats:
        written.append(save_record(record, out / "record.json"))
        timings = out / "timings.json"
        timings.write_text(json.dumps(record.timings, sort_keys=True, indent=1) + "\n")
        written.append(timings)
    if "svg" in formats:
        from . import plots

        written.extend(plots.write_svgs(record, out))
    return written
