"""Grid sweeps over gate families and reproducible result files.

A sweep expands into independent point tasks (one per alpha / kind /
ancilla / ensemble combination), each seeded from (sweep seed, index of
the task in sorted order).  Scheduling therefore never changes numbers:
running on one worker or eight yields byte-identical output apart from
the wall_ms column.

CSV is the exchange format for values; JSON additionally embeds the
optimization witness and the full schedule, so every published number can
be re-checked from the file alone, without re-optimizing.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import objectives as _obj
from .annealer import (ENCODER_SCOPES, AnnealConfig, OptProblem, default_config,
                       maximize)
from .gates import FAMILY_TAGS, GateFamily
from .linalg import InvalidStateError, StateVector, SubsystemLayout
from .objectives import (ENTANGLEMENT_KINDS, HOLEVO_KINDS, KIND_CHI, KIND_E,
                         KINDS, EncodedEnsemble, FreeEnsemble, ProductInput)

CSV_HEADER = "family,alpha,kind,ensemble_size,d_anc,value,restarts,steps,seed,wall_ms"

ALPHA_MAX_DEFAULT = math.pi / 4
GRID_DEFAULT = 10          # intervals over [0, pi/4], i.e. the pi/40 grid
THREADS_ENV = "GATECAP_THREADS"

# negative noise allowed on capacities that are nonnegative by definition
VALUE_FLOOR = -1e-9


def _fmt(x: float) -> str:
    return "%.12g" % x


def _alpha_key(alpha: float) -> float:
    # records are matched across files after a %.12g round trip
    return round(float(alpha), 12)


@dataclass(frozen=True)
class PointTask:
    """One fully resolved capacity evaluation."""

    family: str
    alpha: float
    kind: str
    d_anc: int
    ensemble_size: int
    seed: int
    restarts: int = 5
    equal_probs: bool = False
    encoder_scope: str = "full"
    schedule: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILY_TAGS:
            raise ValueError(f"unknown family {self.family!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.d_anc < 1 or self.restarts < 1:
            raise ValueError("d_anc and restarts must be >= 1")
        if self.kind in ENTANGLEMENT_KINDS:
            # no ensemble enters these objectives; pin the column to 1
            object.__setattr__(self, "ensemble_size", 1)
        elif self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")

    def sort_key(self):
        return (self.family, self.alpha, self.kind, self.ensemble_size, self.d_anc)


@dataclass(frozen=True, eq=False)
class ResultRecord:
    """One sweep output row plus everything needed to re-check it."""

    family: str
    alpha: float
    kind: str
    ensemble_size: int
    d_anc: int
    value: float
    restarts: int
    steps: int
    seed: int
    wall_ms: float
    schedule_metadata: dict = field(default_factory=dict)
    equal_probs: bool = False
    encoder_scope: str = "full"
    witness: object = None
    error: str | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILY_TAGS or self.kind not in KINDS:
            raise ValueError(f"bad family/kind pair ({self.family!r}, {self.kind!r})")
        if self.error is None:
            if not np.isfinite(self.value):
                raise InvalidStateError(f"non-finite value {self.value!r}")
            if self.kind in (KIND_E, KIND_CHI) and self.value < VALUE_FLOOR:
                raise InvalidStateError(
                    f"{self.kind} value {self.value!r} below {VALUE_FLOOR}")

    @property
    def ok(self) -> bool:
        return self.error is None

    def csv_row(self) -> str:
        return ",".join([
            self.family, _fmt(self.alpha), self.kind, str(self.ensemble_size),
            str(self.d_anc), _fmt(self.value), str(self.restarts), str(self.steps),
            str(self.seed), _fmt(self.wall_ms),
        ])


@dataclass(frozen=True)
class SweepSpec:
    """A family sweep: which alphas, which capacities, which resources.

    Explicit `alphas` win over the `grid` setting; `grid` counts intervals,
    so grid=10 over [0, pi/4] gives the 11-point pi/40 mesh.  Entanglement
    kinds produce one task per (alpha, d_anc); Holevo kinds additionally
    expand over ensemble sizes.
    """

    family: str
    kinds: tuple[str, ...]
    alphas: tuple[float, ...] | None = None
    grid: int = GRID_DEFAULT
    alpha_max: float = ALPHA_MAX_DEFAULT
    d_anc: tuple[int, ...] = (1,)
    ensemble_size: tuple[int, ...] = (2,)
    equal_probs: bool = False
    encoder_scope: str = "full"
    restarts: int = 5
    seed: int = 0
    schedule: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILY_TAGS:
            raise ValueError(f"unknown family {self.family!r}")
        kinds = tuple(self.kinds)
        if not kinds:
            raise ValueError("at least one capacity kind is required")
        for k in kinds:
            if k not in KINDS:
                raise ValueError(f"unknown kind {k!r}")
        object.__setattr__(self, "kinds", kinds)
        if self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if self.grid < 1:
            raise ValueError("grid must name at least one interval")
        if any(d < 1 for d in self.d_anc) or any(n < 1 for n in self.ensemble_size):
            raise ValueError("d_anc and ensemble_size entries must be >= 1")
        if self.encoder_scope not in ENCODER_SCOPES:
            raise ValueError(f"encoder_scope must be one of {ENCODER_SCOPES}")
        if self.restarts < 1 or self.seed < 0:
            raise ValueError("restarts must be >= 1 and seed >= 0")
        for a in self.resolved_alphas():
            if a < -1e-12 or a > math.pi / 4 + 1e-12:
                warnings.warn(f"alpha {a} outside [0, pi/4]", stacklevel=2)

    def resolved_alphas(self) -> tuple[float, ...]:
        if self.alphas is not None:
            return self.alphas
        return tuple(i * self.alpha_max / self.grid for i in range(self.grid + 1))

    def tasks(self) -> list[PointTask]:
        """Deduplicated tasks in output order, each with its derived seed."""
        combos = {}
        for a in self.resolved_alphas():
            for kind in self.kinds:
                sizes = (1,) if kind in ENTANGLEMENT_KINDS else self.ensemble_size
                for d in self.d_anc:
                    for n in sizes:
                        combos[(self.family, float(a), kind, n, d)] = None
        out = []
        for idx, key in enumerate(sorted(combos)):
            family, alpha, kind, n, d = key
            task_seed = int(np.random.SeedSequence([self.seed, idx]).generate_state(1)[0])
            out.append(PointTask(
                family=family, alpha=alpha, kind=kind, d_anc=d, ensemble_size=n,
                seed=task_seed, restarts=self.restarts, equal_probs=self.equal_probs,
                encoder_scope=self.encoder_scope, schedule=dict(self.schedule)))
        return out


def _task_config(task: PointTask) -> AnnealConfig:
    over = dict(task.schedule)
    over.setdefault("seed", task.seed)
    over.setdefault("restarts", task.restarts)
    return default_config(task.kind, **over)


def run_point(task: PointTask) -> ResultRecord:
    """Run one task to completion; failures become error records, not raises."""
    layout = SubsystemLayout(2, task.d_anc, 2, task.d_anc)
    problem = OptProblem(task.kind, GateFamily(task.family, task.alpha), layout,
                         ensemble_size=task.ensemble_size,
                         equal_probs=task.equal_probs,
                         encoder_scope=task.encoder_scope)
    cfg = _task_config(task)
    start = time.perf_counter()
    try:
        res = maximize(problem, cfg)
    except Exception as exc:
        wall = (time.perf_counter() - start) * 1e3
        return ResultRecord(
            family=task.family, alpha=task.alpha, kind=task.kind,
            ensemble_size=task.ensemble_size, d_anc=task.d_anc,
            value=float("nan"), restarts=cfg.restarts, steps=0, seed=task.seed,
            wall_ms=wall, schedule_metadata=dataclasses.asdict(cfg),
            equal_probs=task.equal_probs, encoder_scope=task.encoder_scope,
            error=f"{type(exc).__name__}: {exc}")
    wall = (time.perf_counter() - start) * 1e3
    return ResultRecord(
        family=task.family, alpha=task.alpha, kind=task.kind,
        ensemble_size=task.ensemble_size, d_anc=task.d_anc,
        value=res.best_value, restarts=cfg.restarts, steps=res.total_steps,
        seed=task.seed, wall_ms=wall, schedule_metadata=dataclasses.asdict(cfg),
        equal_probs=task.equal_probs, encoder_scope=task.encoder_scope,
        witness=res.witness)


def _worker_count(n_tasks: int, workers: int | None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            workers = int(raw)
        except ValueError:
            warnings.warn(f"ignoring non-integer {THREADS_ENV}={raw!r}")
            workers = 1
    return max(1, min(workers, n_tasks)) if n_tasks else 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[ResultRecord]:
    """All records for a spec, in sorted task order.

    workers=None reads GATECAP_THREADS (default 1).  Tasks carry their own
    seeds, so the schedule never affects values, only wall time.
    """
    tasks = spec.tasks()
    n = _worker_count(len(tasks), workers)
    if n <= 1 or len(tasks) <= 1:
        return [run_point(t) for t in tasks]
    import multiprocessing
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        ctx = multiprocessing.get_context()
    with ProcessPoolExecutor(max_workers=n, mp_context=ctx) as pool:
        return list(pool.map(run_point, tasks))


def compare_report(records) -> dict:
    """Entanglement-vs-Holevo comparison over shared grid points.

    Per alpha, the best entanglement-kind value and the best Holevo-kind
    value are paired and their gap reported, along with the largest gap and
    (when several ancilla sizes are present) value(d+1) - value(d) deltas
    per kind and ensemble size.  Raises on records with no shared alphas.
    """
    recs = [r for r in records if r.ok]
    ent, hol = {}, {}
    for r in recs:
        side = ent if r.kind in ENTANGLEMENT_KINDS else hol
        key = _alpha_key(r.alpha)
        if key not in side or r.value > side[key]:
            side[key] = r.value
    if not ent or not hol:
        raise ValueError("comparison needs at least one entanglement-kind "
                         "and one Holevo-kind record")
    shared = sorted(set(ent) & set(hol))
    if not shared:
        raise ValueError("no overlapping grid points between entanglement "
                         "and Holevo records")
    rows = [{"alpha": a, "E": ent[a], "chi": hol[a], "gap": hol[a] - ent[a]}
            for a in shared]
    worst = max(rows, key=lambda row: row["gap"])
    deltas = []
    by_series = {}
    for r in recs:
        k = (r.kind, r.ensemble_size, _alpha_key(r.alpha))
        d = by_series.setdefault(k, {})
        if r.d_anc not in d or r.value > d[r.d_anc]:
            d[r.d_anc] = r.value
    for (kind, n, a), values in sorted(by_series.items()):
        for d in sorted(values):
            if d + 1 in values:
                deltas.append({"kind": kind, "ensemble_size": n, "alpha": a,
                               "d_low": d, "delta": values[d + 1] - values[d]})
    return {"rows": rows,
            "max_gap": {"alpha": worst["alpha"], "gap": worst["gap"]},
            "ancilla_deltas": deltas}


def format_report(report: dict) -> str:
    """Plain-text rendering of a compare_report result."""
    lines = ["alpha        E              chi            chi-E"]
    for row in report["rows"]:
        lines.append("%-12s %-14s %-14s %s" % (
            _fmt(row["alpha"]), _fmt(row["E"]), _fmt(row["chi"]), _fmt(row["gap"])))
    mg = report["max_gap"]
    lines.append(f"max gap {_fmt(mg['gap'])} at alpha {_fmt(mg['alpha'])}")
    if report["ancilla_deltas"]:
        lines.append("")
        lines.append("kind n alpha        d->d+1  delta")
        for d in report["ancilla_deltas"]:
            lines.append("%-4s %d %-12s %d->%d    %s" % (
                d["kind"], d["ensemble_size"], _fmt(d["alpha"]),
                d["d_low"], d["d_low"] + 1, _fmt(d["delta"])))
    return "\n".join(lines) + "\n"


def _complex_to_pairs(a: np.ndarray):
    out = []
    for z in np.asarray(a).ravel():
        out.append([float(z.real), float(z.imag)])
    return out


def _pairs_to_complex(pairs, shape=None) -> np.ndarray:
    a = np.asarray(pairs, dtype=np.float64)
    v = a[:, 0] + 1j * a[:, 1]
    return v.reshape(shape) if shape is not None else v


def witness_to_jsonable(w) -> dict | None:
    """Witness as nested lists of [re, im] pairs, amplitudes in layout order."""
    if w is None:
        return None
    if isinstance(w, ProductInput):
        return {"type": "product",
                "phi_A": _complex_to_pairs(w.phi_A.amplitudes),
                "chi_B": _complex_to_pairs(w.chi_B.amplitudes)}
    if isinstance(w, StateVector):
        return {"type": "state", "amplitudes": _complex_to_pairs(w.amplitudes)}
    if isinstance(w, EncodedEnsemble):
        return {"type": "encoded",
                "psi": _complex_to_pairs(w.psi.amplitudes),
                "encoders": [_complex_to_pairs(v) for v in w.encoders],
                "probs": [float(p) for p in w.probs]}
    if isinstance(w, FreeEnsemble):
        return {"type": "free",
                "members": [_complex_to_pairs(s.amplitudes) for s in w.states]}
    raise TypeError(f"unknown witness type {type(w).__name__}")


def witness_from_jsonable(data: dict | None, d_anc: int):
    if data is None:
        return None
    layout = SubsystemLayout(2, d_anc, 2, d_anc)
    kind = data["type"]
    if kind == "product":
        return ProductInput(
            StateVector(SubsystemLayout(2, d_anc, 1, 1),
                        _pairs_to_complex(data["phi_A"])),
            StateVector(SubsystemLayout(1, 1, 2, d_anc),
                        _pairs_to_complex(data["chi_B"])))
    if kind == "state":
        return StateVector(layout, _pairs_to_complex(data["amplitudes"]))
    if kind == "encoded":
        d_a = layout.dim_A
        encs = tuple(_pairs_to_complex(v, (d_a, d_a)) for v in data["encoders"])
        return EncodedEnsemble(StateVector(layout, _pairs_to_complex(data["psi"])),
                               encs, np.asarray(data["probs"], dtype=np.float64))
    if kind == "free":
        return FreeEnsemble(tuple(
            StateVector(layout, _pairs_to_complex(m), normalized=False)
            for m in data["members"]))
    raise ValueError(f"unknown witness type tag {kind!r}")


def _record_to_jsonable(r: ResultRecord) -> dict:
    return {
        "family": r.family, "alpha": r.alpha, "kind": r.kind,
        "ensemble_size": r.ensemble_size, "d_anc": r.d_anc, "value": r.value,
        "restarts": r.restarts, "steps": r.steps, "seed": r.seed,
        "wall_ms": r.wall_ms, "equal_probs": r.equal_probs,
        "encoder_scope": r.encoder_scope, "schedule": r.schedule_metadata,
        "witness": witness_to_jsonable(r.witness), "error": r.error,
    }


def _record_from_jsonable(d: dict) -> ResultRecord:
    return ResultRecord(
        family=d["family"], alpha=d["alpha"], kind=d["kind"],
        ensemble_size=d["ensemble_size"], d_anc=d["d_anc"], value=d["value"],
        restarts=d["restarts"], steps=d["steps"], seed=d["seed"],
        wall_ms=d["wall_ms"], schedule_metadata=d.get("schedule", {}),
        equal_probs=d.get("equal_probs", False),
        encoder_scope=d.get("encoder_scope", "full"),
        witness=witness_from_jsonable(d.get("witness"), d["d_anc"]),
        error=d.get("error"))


def render_csv(records) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def render_json(records) -> str:
    payload = {"format": "gatecap-results", "version": 1,
               "records": [_record_to_jsonable(r) for r in records]}
    return json.dumps(payload, indent=1) + "\n"


def emit(records, format: str, path) -> None:
    """Write records to path ("-" for stdout) as csv or json."""
    if format == "csv":
        text = render_csv(records)
    elif format == "json":
        text = render_json(records)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path == "-" or path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_records(path) -> list[ResultRecord]:
    """Read records back from a CSV or JSON result file.

    CSV rows carry no witness or schedule; JSON restores both.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return [_record_from_jsonable(d) for d in payload["records"]]
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: not a gatecap result file")
    out = []
    for ln in lines[1:]:
        f = ln.split(",")
        out.append(ResultRecord(
            family=f[0], alpha=float(f[1]), kind=f[2], ensemble_size=int(f[3]),
            d_anc=int(f[4]), value=float(f[5]), restarts=int(f[6]),
            steps=int(f[7]), seed=int(f[8]), wall_ms=float(f[9])))
    return out


def reevaluate(record: ResultRecord) -> float:
    """Value of a record's stored witness, recomputed from scratch."""
    if record.witness is None:
        raise ValueError("record carries no witness (CSV files do not embed them)")
    layout = SubsystemLayout(2, record.d_anc, 2, record.d_anc)
    problem = OptProblem(record.kind, GateFamily(record.family, record.alpha),
                         layout, ensemble_size=record.ensemble_size,
                         equal_probs=record.equal_probs,
                         encoder_scope=record.encoder_scope)
    return _obj.objective_value(record.kind, problem.operator(), record.witness)


def emit_gnuplot(records, directory) -> list[str]:
    """One two-column (alpha, value) file per (family, kind, n, d_anc) series."""
    series = {}
    for r in records:
        if r.ok:
            series.setdefault((r.family, r.kind, r.ensemble_size, r.d_anc), []).append(r)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for (family, kind, n, d), recs in sorted(series.items()):
        path = os.path.join(directory, f"{family}_{kind}_n{n}_d{d}.dat")
        rows = sorted((r.alpha, r.value) for r in recs)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {family} {kind} ensemble={n} d_anc={d}\n")
            fh.write("# alpha value\n")
            for a, v in rows:
                fh.write(f"{_fmt(a)} {_fmt(v)}\n")
        paths.append(path)
    return paths
