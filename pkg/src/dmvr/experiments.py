"""Sweep manifests, replication runner and plot-ready CSV output.

A manifest names a topology, a list of sweep points (each a fraction
vector), the variants to compare and a replication count. Run ``r`` of point
``p`` uses seed ``base_seed + p * replications + r`` for every variant, so
variants at the same point see the same initial vote shuffle and the same
random stream, and any row can be re-run on its own.
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import NormalDist
from typing import Optional

import numpy as np

from . import analysis
from .engine import TRAJECTORY_COLUMNS, VARIANTS, Scenario, counts_from_fractions, run
from .errors import ConfigurationError, DMVRError, DomainError
from .graph import build_topology

STATS = ("tau_1", "tau_2", "tau_x", "tau_prime", "tau_dissemination")
OVERLAYS = ("expected_tau1", "expected_tau2_bound", "total_bound_binary",
            "tau_x_bound", "tau_prime_bound")
_Z95 = NormalDist().inv_cdf(0.975)


@dataclass
class Manifest:
    experiment: str
    topology: dict
    K: int
    sweep: dict
    variants: list
    replications: int = 1000
    base_seed: int = 0
    output: Optional[str] = None
    max_time: float = 1e4
    overlays: list = field(default_factory=list)
    description: str = ""
    allow_ties: bool = False

    @property
    def n(self):
        t = self.topology
        return t["rows"] * t["cols"] if t["kind"] == "torus" else t.get("n")

    def points(self):
        """``[(param, rho_vector), ...]`` in sweep order."""
        kind = self.sweep.get("kind")
        values = list(self.sweep.get("values", []))
        if kind == "rho1":
            return [(v, [v, 1.0 - v]) for v in values]
        if kind == "delta":
            base, direction = self.sweep["base"], self.sweep["direction"]
            return [(d, [b + d * s for b, s in zip(base, direction)]) for d in values]
        if kind == "explicit":
            return [(i, list(rho)) for i, rho in enumerate(self.sweep["points"])]
        raise ConfigurationError(f"unknown sweep kind {kind!r}")

    def validate(self):
        if self.replications < 1:
            raise ConfigurationError("replications must be at least 1")
        unknown = [v for v in self.variants if v not in VARIANTS]
        if unknown or not self.variants:
            raise ConfigurationError(f"unknown or missing variants {unknown}")
        for name in self.overlays:
            if name not in OVERLAYS:
                raise ConfigurationError(f"unknown overlay {name!r}")
        for param, rho in self.points():
            if len(rho) != self.K:
                raise ConfigurationError(f"point {param}: {len(rho)} fractions for K={self.K}")

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigurationError(f"bad manifest: {exc}") from None

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path):
        Path(path).write_text(self.to_json() + "\n")


_RHO1 = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]
_RHO1_LOW = [0.52, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]
_TORUS = {"kind": "torus", "rows": 10, "cols": 10}


def builtin_manifest(name, replications=1000, base_seed=0):
    """Built-in manifest by name: fig3, fig4, fig5a, fig5b, fig6 or fig7."""
    complete = {"kind": "complete", "n": 100}
    binary = ["expected_tau1", "expected_tau2_bound", "total_bound_binary"]
    table = {
        "fig3": dict(topology=complete, K=2, sweep={"kind": "rho1", "values": _RHO1},
                     variants=["compact-voting"], overlays=binary,
                     description="binary phase times versus majority fraction"),
        "fig4": dict(topology=complete, K=2, sweep={"kind": "rho1", "values": _RHO1_LOW},
                     variants=["compact-voting", "enhanced-voting"], overlays=binary,
                     description="plain versus enhanced voting, complete graph"),
        "fig5a": dict(topology={"kind": "ring", "n": 100}, K=2,
                      sweep={"kind": "rho1", "values": _RHO1_LOW},
                      variants=["compact-voting", "enhanced-voting"],
                      description="plain versus enhanced voting, ring"),
        "fig5b": dict(topology=dict(_TORUS), K=2, sweep={"kind": "rho1", "values": _RHO1_LOW},
                      variants=["compact-voting", "enhanced-voting"],
                      description="plain versus enhanced voting, 10x10 torus"),
        "fig6": dict(topology={"kind": "complete", "n": 198}, K=3,
                     sweep={"kind": "delta", "base": [1 / 3, 1 / 3, 1 / 3],
                            "direction": [1, 0, -1],
                            "values": [0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.041]},
                     variants=["enhanced-voting"],
                     description="ternary voting versus the spread of the fractions"),
        "fig7": dict(topology=complete, K=3,
                     sweep={"kind": "delta", "base": [0.34, 0.33, 0.33], "direction": [1, 0, -1],
                            "values": [0.03, 0.05, 0.08, 0.12, 0.16, 0.2]},
                     variants=["compact-ranking"], overlays=["tau_x_bound", "tau_prime_bound"],
                     description="ternary ranking against the order-statistics bounds"),
    }
    if name not in table:
        raise ConfigurationError(f"unknown built-in manifest {name!r}; choose from {sorted(table)}")
    return Manifest(experiment=name, replications=replications, base_seed=base_seed,
                    **table[name])


def overlay_values(name, n, counts):
    """Analytic value for one overlay at integral ``counts``; ``None`` if undefined."""
    rho = [c / n for c in counts]
    try:
        if name == "tau_x_bound":
            return analysis.tau_x_bound(n, rho)
        if name == "tau_prime_bound":
            return analysis.tau_prime_bound(n, rho)
        if len(counts) != 2:
            return None
        minority = min(rho)
        return {"expected_tau1": analysis.expected_tau1,
                "expected_tau2_bound": analysis.expected_tau2_bound,
                "total_bound_binary": analysis.total_bound_binary}[name](n, minority)
    except DomainError:
        return None


@dataclass
class PointResult:
    index: int
    param: float
    variant: str
    counts: tuple
    seeds: list
    samples: dict
    converged: int
    overlays: dict
    trajectories: Optional[list] = None

    def stat(self, name):
        """``(mean, std, ci_lo, ci_hi, min, max)`` over the runs that recorded ``name``."""
        x = np.array([v for v in self.samples[name] if v is not None], dtype=float)
        if x.size == 0:
            return (None,) * 6
        mean = float(x.mean())
        std = float(x.std(ddof=1)) if x.size > 1 else 0.0
        half = _Z95 * std / math.sqrt(x.size)
        return mean, std, mean - half, mean + half, float(x.min()), float(x.max())


@dataclass
class SweepResult:
    manifest: Manifest
    n: int
    points: list

    def rows(self):
        for p in self.points:
            row = {"experiment": self.manifest.experiment, "point": p.index, "param": p.param,
                   "variant": p.variant, "topology": self.manifest.topology["kind"],
                   "n": self.n, "K": self.manifest.K,
                   "counts": ";".join(str(c) for c in p.counts),
                   "rho": ";".join(repr(c / self.n) for c in p.counts),
                   "replications": len(p.seeds), "seed_first": p.seeds[0],
                   "converged": p.converged}
            for name in STATS:
                for label, v in zip(("mean", "std", "ci_lo", "ci_hi", "min", "max"), p.stat(name)):
                    row[f"{name}_{label}"] = v
            for name in OVERLAYS:
                row[name] = p.overlays.get(name)
            yield row

    def find(self, param, variant):
        for p in self.points:
            if p.param == param and p.variant == variant:
                return p
        raise KeyError((param, variant))


CSV_COLUMNS = (["experiment", "point", "param", "variant", "topology", "n", "K", "counts", "rho",
                "replications", "seed_first", "converged"]
               + [f"{s}_{x}" for s in STATS for x in ("mean", "std", "ci_lo", "ci_hi", "min", "max")]
               + list(OVERLAYS))


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(result, path=None):
    """Render ``result`` as CSV text (and write it to ``path`` when given)."""
    m = result.manifest
    buf = io.StringIO()
    buf.write(f"# experiment={m.experiment} topology={json.dumps(m.topology, sort_keys=True)} "
              f"K={m.K} replications={m.replications} base_seed={m.base_seed} "
              f"seed=base_seed+point*replications+rep; times in time units; "
              f"tau_dissemination=tau_prime-tau_x; ci is a normal 95% interval\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in result.rows():
        w.writerow([_cell(row[c]) for c in CSV_COLUMNS])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def write_runs_csv(trajectories, path=None):
    """One summary row per trajectory."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for tr in trajectories:
        row = tr.summary_row()
        w.writerow([_cell(row[c]) for c in TRAJECTORY_COLUMNS])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def run_manifest(m, keep_trajectories=False, progress=None):
    """Execute every replication of every point and variant, then aggregate.

    ``progress(done, total)`` is called after each point/variant block.
    The CSV is written to ``m.output`` when it is set.
    """
    m.validate()
    graph = build_topology(m.topology)
    n = graph.n
    pts = m.points()
    results = []
    total = len(pts) * len(m.variants)
    for idx, (param, rho) in enumerate(pts):
        try:
            counts = counts_from_fractions(n, rho)
        except DMVRError as exc:
            raise ConfigurationError(f"point {idx} (param={param}): {exc}") from None
        if not m.allow_ties and not all(a > b > 0 for a, b in zip(counts, counts[1:])):
            raise ConfigurationError(f"point {idx} (param={param}): counts {counts} are not "
                                     "strictly ordered; set allow_ties for a tie study")
        overlays = {name: overlay_values(name, n, counts) for name in m.overlays}
        seeds = [m.base_seed + idx * m.replications + r for r in range(m.replications)]
        for variant in m.variants:
            samples = {s: [] for s in STATS}
            kept = [] if keep_trajectories else None
            converged = 0
            for seed in seeds:
                sc = Scenario.from_counts(graph, counts, variant, seed, max_time=m.max_time,
                                          log_events=False)
                try:
                    sc.validate()
                except DMVRError as exc:
                    raise ConfigurationError(
                        f"point {idx} (param={param}), variant {variant}: {exc}") from None
                tr = run(sc)
                converged += tr.converged
                for s in STATS:
                    samples[s].append(tr.tau_dissemination if s == "tau_dissemination"
                                      else getattr(tr, s))
                if kept is not None:
                    kept.append(tr)
            results.append(PointResult(idx, param, variant, tuple(counts), seeds, samples,
                                       converged, overlays, kept))
            if progress is not None:
                progress(len(results), total)
    result = SweepResult(m, n, results)
    if m.output:
        write_csv(result, m.output)
    return result
