"""Seeded Monte-Carlo census of real-root counts over generic integer arrays."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .engine import (RankOptions, derive_rng, rank_indscal_minimal, rank_minimal,
                     rank_square_two_slice)
from .tensor import Shape, Tensor3, classify, indscal_regime

MODES = ("general", "indscal")


def generate_generic(shape: Shape, mode: str = "general", seed: int = 0) -> Tensor3:
    """Integer entries uniform on [-99, 99]; INDSCAL slices mirror a drawn upper triangle."""
    rng = derive_rng(seed, 0)
    I, J, K = shape.I, shape.J, shape.K
    if mode == "general":
        vals = rng.integers(-99, 100, size=(K, I, J))
        return Tensor3([[[int(v) for v in row] for row in m] for m in vals])
    if mode != "indscal":
        raise ValueError(f"unknown mode {mode!r}")
    if J != K:
        raise ValueError(f"INDSCAL shapes need J == K, got {shape}")
    mats = []
    for _ in range(I):
        m = [[0] * J for _ in range(J)]
        for a in range(J):
            for b in range(a, J):
                m[a][b] = m[b][a] = int(rng.integers(-99, 100))
        mats.append(m)
    return Tensor3.from_symmetric_slices(mats)


@dataclass(frozen=True)
class CensusSpec:
    shape: Shape
    trials: int
    master_seed: int = 0
    mode: str = "general"
    backend: str = "groebner"

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def route(self) -> str:
        """Which decision procedure the census runs; raises for unsupported shapes."""
        s = self.shape
        if self.mode == "indscal":
            if s.J != s.K or indscal_regime(s.I, s.J) != "minimal":
                raise ValueError(f"census supports minimal INDSCAL shapes only, got {s}")
            return "indscal"
        cls = classify(s)
        if cls.special == "square_two_slice":
            return "pencil"
        if cls.regime == "minimal":
            return "minimal"
        raise ValueError(f"census supports minimal shapes only; {s} is {cls.regime}")


@dataclass
class CensusHistogram:
    shape: Shape
    trials: int
    counts: Dict[int, int] = field(default_factory=dict)
    degree_observed: Optional[int] = None
    anomalies: List[Tuple[int, str]] = field(default_factory=list)
    mode: str = "general"
    master_seed: int = 0

    @property
    def valid(self) -> int:
        return sum(self.counts.values())

    def fraction(self, n: int) -> float:
        return self.counts.get(n, 0) / self.valid if self.valid else float("nan")

    def prob_rank_I(self) -> float:
        """Fraction of non-anomalous trials with at least I distinct real roots."""
        if not self.valid:
            return float("nan")
        return sum(c for n, c in self.counts.items() if n >= self.shape.I) / self.valid

    def wald_interval(self, z: float = 1.96) -> Tuple[float, float]:
        p, n = self.prob_rank_I(), self.valid
        if not n:
            return (float("nan"), float("nan"))
        h = z * math.sqrt(p * (1 - p) / n)
        return (max(0.0, p - h), min(1.0, p + h))

    def to_dict(self) -> dict:
        lo, hi = self.wald_interval()
        return {
            "shape": list(self.shape.as_tuple()),
            "mode": self.mode,
            "master_seed": self.master_seed,
            "trials": self.trials,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "degree_observed": self.degree_observed,
            "anomalies": [[i, note] for i, note in self.anomalies],
            "prob_rank_I": self.prob_rank_I(),
            "wald_95": [lo, hi],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CensusHistogram":
        return cls(Shape(*d["shape"]), d["trials"], {int(k): v for k, v in d["counts"].items()},
                   d["degree_observed"], [(i, n) for i, n in d["anomalies"]],
                   d.get("mode", "general"), d.get("master_seed", 0))


def run_trial(spec: CensusSpec, index: int) -> Tuple[int, Optional[int], Optional[int], Optional[str]]:
    """(index, degree, distinct real roots, anomaly note) for one generic draw."""
    route = spec.route()
    X = trial_array(spec, index)
    opts = RankOptions(backend=spec.backend, certify=False)
    if route == "pencil":
        r = rank_square_two_slice(X, opts)
        expected = spec.shape.I
    elif route == "indscal":
        r = rank_indscal_minimal(X, opts)
        expected = r.expected_degree
    else:
        r = rank_minimal(X, opts)
        expected = r.expected_degree
    if r.eliminant is None:
        return index, None, None, "no eliminant"
    if r.degree != expected:
        return index, r.degree, r.real_root_count, f"degree {r.degree} != expected {expected}"
    if r.roots is not None and not r.roots.squarefree:
        return index, r.degree, r.real_root_count, "eliminant not squarefree"
    return index, r.degree, r.real_root_count, None


def trial_array(spec: CensusSpec, index: int) -> Tensor3:
    """The draw behind trial ``index``; reproducible from the spec alone."""
    return generate_generic(spec.shape, spec.mode, _trial_seed(spec.master_seed, index))


def _trial_seed(master: int, index: int) -> int:
    # counter-based: the trial's seed depends only on (master, index)
    return int(derive_rng(master, index + 1).integers(0, 2 ** 63))


def _run_chunk(args):
    spec, indices = args
    return [run_trial(spec, i) for i in indices]


def run_census(spec: CensusSpec, jobs: int = 1, progress: bool = False) -> CensusHistogram:
    spec.route()
    h = CensusHistogram(spec.shape, spec.trials, mode=spec.mode, master_seed=spec.master_seed)
    results = []
    if jobs > 1 and spec.trials > 1:
        chunks = [(spec, list(range(j, spec.trials, jobs))) for j in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_run_chunk, chunks):
                results.extend(part)
    else:
        for i in range(spec.trials):
            results.append(run_trial(spec, i))
            if progress and (i + 1) % max(1, spec.trials // 10) == 0:
                print(f"census {spec.shape}: {i + 1}/{spec.trials}", file=sys.stderr)
    results.sort()
    degrees = {}
    for index, deg, n, note in results:
        if note is not None:
            h.anomalies.append((index, note))
            continue
        h.counts[n] = h.counts.get(n, 0) + 1
        degrees[deg] = degrees.get(deg, 0) + 1
    if degrees:
        h.degree_observed = max(degrees, key=lambda d: (degrees[d], -d))
    return h


def merge(a: CensusHistogram, b: CensusHistogram) -> CensusHistogram:
    """Commutative merge of two histograms over the same shape."""
    if a.shape != b.shape or a.mode != b.mode:
        raise ValueError("can only merge histograms of the same shape and mode")
    counts = dict(a.counts)
    for k, v in b.counts.items():
        counts[k] = counts.get(k, 0) + v
    deg = a.degree_observed if a.degree_observed is not None else b.degree_observed
    return CensusHistogram(a.shape, a.trials + b.trials, counts, deg,
                           sorted(a.anomalies + b.anomalies), a.mode, a.master_seed)


def emit_report(h: CensusHistogram, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps(h.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    lo, hi = h.wald_interval()
    buf = io.StringIO()
    buf.write(f"# shape={h.shape} mode={h.mode} trials={h.trials} seed={h.master_seed}\n")
    buf.write(f"# degree_observed={h.degree_observed} anomalies={len(h.anomalies)}\n")
    buf.write(f"# pr_rank_I={h.prob_rank_I():.6f} wald95=[{lo:.6f},{hi:.6f}]\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["real_roots", "count", "fraction"])
    for n in sorted(h.counts):
        w.writerow([n, h.counts[n], f"{h.fraction(n):.6f}"])
    return buf.getvalue()
