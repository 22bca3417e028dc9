"""Batch runs of the lattice attacks, reported as CSV or JSON rows.

A spec fixes the instance shape and the attack; every trial draws its
instance from a stream seeded by ``(master_seed, space, m, trial)`` so any
row can be replayed alone.  Timing is the only field that varies between
runs of the same spec.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .attacks import (
    AttackConfig,
    SolutionSpace,
    cvp_attack,
    divide_and_conquer_attack,
    generate_instance,
    parse_fraction,
)
from .xof import XofStream

CSV_COLUMNS = ("space", "m", "n", "R", "trials", "full_solution_rate", "mean_coord_fraction", "seed", "wall_ms")
TAG_BENCH = b"CKBENCv1"
ATTACKS = ("cvp", "dnc")


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    m_list: tuple[int, ...]
    R: int
    alphas: tuple[Fraction, ...]
    entry_bits: int | None = None
    trials: int = 20
    search_width: int = 10
    attack: str = "cvp"
    master_seed: int = 0
    dnc_betas: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "m_list", tuple(int(m) for m in self.m_list))
        object.__setattr__(self, "alphas", tuple(parse_fraction(a) for a in self.alphas))
        if self.dnc_betas is not None:
            object.__setattr__(self, "dnc_betas", tuple(parse_fraction(b) for b in self.dnc_betas))
        if self.entry_bits is None:
            # the experiments draw A from I_{R/8}
            object.__setattr__(self, "entry_bits", max(1, self.R // 8))
        space = self.space  # validates k | n and integral block widths
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.m_list:
            raise ValueError("m_list is empty")
        if self.attack not in ATTACKS:
            raise ValueError(f"attack must be one of {ATTACKS}")
        limit = space.block_size if self.attack == "dnc" else space.n
        for m in self.m_list:
            if not 1 <= m < limit:
                raise ValueError(f"m={m} outside [1, {limit}) for the {self.attack} attack")
        AttackConfig(self.search_width, self.dnc_betas)

    @property
    def space(self) -> SolutionSpace:
        return SolutionSpace(self.n, self.R, self.alphas)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m_list": list(self.m_list),
            "R": self.R,
            "alphas": [str(a) for a in self.alphas],
            "entry_bits": self.entry_bits,
            "trials": self.trials,
            "search_width": self.search_width,
            "attack": self.attack,
            "master_seed": self.master_seed,
            "dnc_betas": None if self.dnc_betas is None else [str(b) for b in self.dnc_betas],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentSpec:
        known = {"n", "m_list", "R", "alphas", "entry_bits", "trials", "search_width", "attack",
                 "master_seed", "dnc_betas"}
        extra = set(data) - known - {"description"}
        if extra:
            raise ValueError(f"unknown spec fields: {sorted(extra)}")
        kwargs = {k: v for k, v in data.items() if k in known}
        return cls(**kwargs)

    def spec_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class TrialResult:
    m: int
    trial: int
    satisfied: int
    total: int
    full_solution: bool


@dataclass(frozen=True)
class ReportRow:
    space: str
    m: int
    n: int
    R: int
    trials: int
    full_solution_rate: float
    mean_coord_fraction: float
    seed: int
    wall_ms: int
    samples: tuple[TrialResult, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    rows: tuple[ReportRow, ...]

    def to_records(self, timing: bool = True) -> list[dict]:
        out = []
        for row in self.rows:
            rec = {c: getattr(row, c) for c in CSV_COLUMNS}
            if not timing:
                rec["wall_ms"] = 0
            out.append(rec)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps({
            "attack": self.spec.attack,
            "spec": self.spec.to_dict(),
            "spec_hash": self.spec.spec_hash(),
            "rows": self.to_records(timing),
        }, sort_keys=True, indent=2)

    def to_csv(self, timing: bool = True, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerows(self.to_records(timing))
        return buf.getvalue()


def trial_stream(spec: ExperimentSpec, m: int, trial: int) -> XofStream:
    """Independent stream for one trial, keyed by seed, space, ``m`` and trial index."""
    key = f"{spec.master_seed}|{spec.space.label()}|{spec.n}|{spec.R}|{m}|{trial}".encode()
    return XofStream(key, TAG_BENCH)


def run_trial(spec: ExperimentSpec, m: int, trial: int) -> TrialResult:
    rng = trial_stream(spec, m, trial)
    inst = generate_instance(spec.space, m, spec.entry_bits, rng)
    cfg = AttackConfig(spec.search_width, spec.dnc_betas)
    if spec.attack == "cvp":
        rep = cvp_attack(inst, cfg)
    else:
        rep = divide_and_conquer_attack(inst, cfg, rng=rng)
    return TrialResult(m, trial, rep.satisfied_coords, rep.total_coords, rep.full_solution)


def _run_one(args) -> tuple[TrialResult, float]:
    start = time.perf_counter()
    res = run_trial(*args)
    return res, time.perf_counter() - start


def run_experiment(spec: ExperimentSpec, jobs: int = 1, progress=None) -> ExperimentReport:
    """Run every ``(m, trial)`` pair; rows are assembled in ``(m, trial)`` order whatever ``jobs`` is."""
    tasks = [(spec, m, i) for m in spec.m_list for i in range(spec.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = []
        for task in tasks:
            results.append(_run_one(task))
            if progress is not None:
                progress(results[-1][0])
    rows = []
    label = spec.space.label()
    for m in spec.m_list:
        mine = sorted((r for r in results if r[0].m == m), key=lambda r: r[0].trial)
        samples = tuple(r for r, _ in mine)
        rows.append(ReportRow(
            space=label,
            m=m,
            n=spec.n,
            R=spec.R,
            trials=spec.trials,
            full_solution_rate=sum(s.full_solution for s in samples) / spec.trials,
            mean_coord_fraction=round(sum(s.satisfied / s.total for s in samples) / spec.trials, 6),
            seed=spec.master_seed,
            wall_ms=round(1000 * sum(dt for _, dt in mine)),
            samples=samples,
        ))
    return ExperimentReport(spec, tuple(rows))


def _spec(n, alphas, m_list, trials, attack="cvp", R=80):
    return {"n": n, "R": R, "alphas": alphas, "m_list": m_list, "trials": trials, "attack": attack}


_M_ALL = [1, 2, 10, 20, 32, 40]

# Full-size presets.  Runtimes are rough single-core figures; large m dominates
# (about 25 s per trial at n = 50, m = 40).
PRESETS: dict[str, dict] = {
    "cvp-grid": {
        "description": "Six solution spaces at n = 48..50, R = 80, m up to 40, 20 trials per row (several hours).",
        "specs": [
            _spec(50, ["1"], _M_ALL, 20),
            _spec(50, ["1", "1/2"], _M_ALL, 20),
            _spec(50, ["1/2", "1/4"], _M_ALL, 20),
            _spec(48, ["1/2", "1/4", "1/8"], _M_ALL, 20),
            _spec(48, ["1", "1/2", "1/4", "1/8"], _M_ALL, 20),
            _spec(50, ["1", "1/2", "1/4", "1/8", "1/16"], _M_ALL, 20),
        ],
    },
    "cvp-wide": {
        "description": "Many-block spaces at larger R, 50 trials per row (many hours).",
        "specs": [
            _spec(54, ["1", "1/2", "1/4", "1/8", "1/16", "1/32"], _M_ALL, 50, R=64),
            _spec(70, ["1", "1/2", "1/4", "1/8", "1/16", "1/32", "1/64"], _M_ALL, 50, R=128),
            _spec(64, ["1", "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128"], _M_ALL, 50, R=256),
        ],
    },
    "dnc-grid": {
        "description": "Divide and conquer next to plain CVP where m < n/k, 20 trials per row (about an hour).",
        "specs": [
            _spec(50, ["1", "1/2"], [1, 2, 10, 20], 20, "cvp"),
            _spec(50, ["1", "1/2"], [1, 2, 10, 20], 20, "dnc"),
            _spec(50, ["1/2", "1/4"], [1, 2, 10, 20], 20, "cvp"),
            _spec(50, ["1/2", "1/4"], [1, 2, 10, 20], 20, "dnc"),
            _spec(48, ["1/2", "1/4", "1/8"], [1, 2, 10], 20, "cvp"),
            _spec(48, ["1/2", "1/4", "1/8"], [1, 2, 10], 20, "dnc"),
        ],
    },
    "cvp-single": {
        "description": "S_1 at n = 50, R = 80, m up to 40, 10 trials per row (about 10 minutes).",
        "specs": [_spec(50, ["1"], _M_ALL, 10)],
    },
    "desk": {
        "description": "Three spaces, m <= 10, 5 trials per row (about a minute).",
        "specs": [
            _spec(50, ["1"], [1, 2, 10], 5),
            _spec(50, ["1", "1/2"], [1, 2, 10], 5),
            _spec(48, ["1/2", "1/4", "1/8"], [1, 2, 10], 5),
        ],
    },
}


def load_specs(source) -> list[ExperimentSpec]:
    """Specs from a preset name, inline JSON, a JSON file (object or list) or an already parsed dict/list."""
    if isinstance(source, str):
        if source in PRESETS:
            source = PRESETS[source]
        elif source.lstrip().startswith(("{", "[")):
            source = json.loads(source)
        else:
            with open(source) as fh:
                source = json.load(fh)
    if isinstance(source, dict) and "specs" in source:
        source = source["specs"]
    if isinstance(source, dict):
        source = [source]
    if not isinstance(source, list) or not source:
        raise ValueError("spec must be an object or a nonempty list of objects")
    return [ExperimentSpec.from_dict(d) for d in source]
