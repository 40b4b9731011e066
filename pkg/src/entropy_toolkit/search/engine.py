"""Derivative-free minimization of Ingleton-type objectives over distributions.

The search space is the probability simplex over a product alphabet,
parametrized without constraints through normalized exponentials.  Each
restart runs a Nelder-Mead simplex descent (reflection 1, expansion 2,
contraction 0.5, shrink 0.5) from a seeded start; restarts are independent
and merged deterministically, so a fixed master seed gives bit-identical
results regardless of the worker count.  ENTROPY_TOOLKIT_THREADS (or the
``threads`` argument) caps parallel restarts.

Objectives:

* ``raw_score``      - Ingleton score of the entropy function itself;
* ``tight_score``    - score of its tight part;
* ``pipeline_score`` - score after the tighten/b/a projection (the quantity
  whose infimum the cross-section geometry bounds);
* ``alpha_in_direction`` - maximize the alpha weight of the cross-section
  point subject to a penalty keeping the point near a given ray, used to
  sweep the cross-section when generating point clouds.

Degenerate inputs whose normalizer vanishes score 0 by convention.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from ..core import GroundSet
from ..entropy import JointDistribution, entropy_function
from ..frame import (
    CrossSectionPoint,
    IngletonFrame,
    cross_section_point,
    stv_coefficients,
)

OBJECTIVES = ("raw_score", "tight_score", "pipeline_score", "alpha_in_direction")

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: weight of the off-ray penalty in the alpha_in_direction objective
DIRECTION_PENALTY = 8.0

#: normalizers at or below this are treated as degenerate (score 0)
DEGENERATE_TOL = 1e-12


def minimize_scalar(f: Callable[[float], float], lo: float, hi: float,
                    tol: float = 1e-8) -> tuple[float, float]:
    """Golden-section search for the minimizer of a unimodal f on [lo, hi].

    Returns (x, f(x)) with |x - true minimizer| <= tol for unimodal f.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise ValueError("objective returned a non-finite value")
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        if not (math.isfinite(f1) and math.isfinite(f2)):
            raise ValueError("objective returned a non-finite value")
    x = x1 if f1 <= f2 else x2
    return (x, min(f1, f2))


@dataclass(frozen=True)
class SearchConfig:
    """Settings of one distribution search."""

    alphabet_sizes: tuple[int, int, int, int] = (4, 4, 4, 4)
    restarts: int = 64
    budget_evals: int = 20_000
    master_seed: int = 1
    objective: str = "pipeline_score"
    direction: tuple[float, float, float] | None = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.alphabet_sizes)
        object.__setattr__(self, "alphabet_sizes", sizes)
        if len(sizes) != 4 or any(not 1 <= s <= 11 for s in sizes):
            raise ValueError(f"alphabet sizes must be four integers in 1..11: {sizes}")
        if all(s < 2 for s in sizes):
            raise ValueError("at least one variable needs an alphabet of size >= 2")
        if self.restarts < 1:
            raise ValueError(f"restarts must be positive: {self.restarts}")
        if self.budget_evals < 1:
            raise ValueError(f"budget must be positive: {self.budget_evals}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective {self.objective!r} not one of {OBJECTIVES}")
        if self.objective == "alpha_in_direction":
            if self.direction is None:
                raise ValueError("alpha_in_direction needs a 3-vector direction")
            d = tuple(float(x) for x in self.direction)
            if len(d) != 3 or not any(d):
                raise ValueError(f"direction must be a nonzero 3-vector: {d}")
            object.__setattr__(self, "direction", d)

    def to_json(self) -> dict:
        out = {
            "alphabet_sizes": list(self.alphabet_sizes),
            "restarts": self.restarts,
            "budget_evals": self.budget_evals,
            "master_seed": self.master_seed,
            "objective": self.objective,
        }
        if self.direction is not None:
            out["direction"] = list(self.direction)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SearchConfig":
        kwargs = dict(data)
        if "alphabet_sizes" in kwargs:
            kwargs["alphabet_sizes"] = tuple(kwargs["alphabet_sizes"])
        if kwargs.get("direction") is not None:
            kwargs["direction"] = tuple(kwargs["direction"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SearchResult:
    """Best point found by a distribution search."""

    best_value: float
    best_distribution: JointDistribution
    best_point: CrossSectionPoint | None
    eval_count: int
    seed_trace: tuple[int, ...]
    budget_exhausted: bool
    best_restart: int


def _functional_vector(ground: GroundSet, coeffs: dict[int, float]) -> np.ndarray:
    vec = np.zeros(ground.size)
    for mask, c in coeffs.items():
        vec[mask] += c
    return vec


def _delta_vec(ground: GroundSet, a, b, given=()) -> np.ndarray:
    mA, mB = ground.mask(a), ground.mask(b)
    L = ground.mask(tuple(given))
    vec = np.zeros(ground.size)
    vec[mA | L] += 1.0
    vec[mB | L] += 1.0
    vec[mA | mB | L] -= 1.0
    vec[L] -= 1.0
    return vec


class DistributionObjective:
    """Vectorized entropy and score evaluation over a fixed product alphabet.

    Marginal masses for all nonempty subsets are accumulated with a single
    bincount over precomputed flat cell indices; scores and cross-section
    weights are then linear functionals of the entropy vector.  Agrees with
    the compositional path through SetFunction operations to ~1e-13.
    """

    def __init__(self, frame: IngletonFrame, alphabet_sizes: Sequence[int]):
        ground = frame.ground
        sizes = tuple(int(s) for s in alphabet_sizes)
        self.frame = frame
        self.sizes = sizes
        self.n_atoms = int(np.prod(sizes))
        configs = np.array(list(itertools.product(*(range(s) for s in sizes))),
                           dtype=np.int64).reshape(self.n_atoms, 4)

        idx_blocks = []
        offsets = [0]
        total = 0
        for I in range(1, ground.size):
            axes = [b for b in range(4) if I >> b & 1]
            idx = np.zeros(self.n_atoms, dtype=np.int64)
            for a in axes:
                idx = idx * sizes[a] + configs[:, a]
            idx_blocks.append(idx + total)
            total += int(np.prod([sizes[a] for a in axes]))
            offsets.append(total)
        self._flat_idx = np.concatenate(idx_blocks)
        self._offsets = np.array(offsets[:-1], dtype=np.int64)
        self._n_cells = total

        i, j, k, l = frame.roles
        m = ground.mask
        self.stv_vec = _functional_vector(ground, stv_coefficients(frame))
        full = ground.full_mask

        raw = np.zeros(ground.size)
        raw[full] = 1.0
        self.raw_rank_vec = raw

        tight = np.zeros(ground.size)
        tight[full] = -3.0
        for b in range(4):
            tight[full ^ (1 << b)] += 1.0
        self.tight_rank_vec = tight

        pipe = np.zeros(ground.size)
        pipe[m((i, j))] += 1.0
        pipe[m((i, k, l))] += 1.0
        pipe[m((j, k, l))] += 1.0
        pipe[full] -= 2.0
        self.pipeline_rank_vec = pipe

        self.weight_mat = np.vstack([
            -4.0 * self.stv_vec,
            _delta_vec(ground, k, l, (i,)) + _delta_vec(ground, k, l, (j,))
            + _delta_vec(ground, i, j),
            2.0 * _delta_vec(ground, i, j, (k,)) + 2.0 * _delta_vec(ground, i, j, (l,))
            + 2.0 * _delta_vec(ground, k, l, (i, j)),
            _delta_vec(ground, j, l, (k,)) + _delta_vec(ground, i, l, (k,))
            + _delta_vec(ground, j, k, (l,)) + _delta_vec(ground, i, k, (l,)),
        ])
        # entropy vectors vanish on the empty set, so coefficients there are inert
        self.weight_mat[:, 0] = 0.0

    def entropy_vector(self, p: np.ndarray) -> np.ndarray:
        """Entropy (nats) of every nonempty marginal, as a 16-vector over masks."""
        masses = np.bincount(self._flat_idx, weights=np.tile(p, 15),
                             minlength=self._n_cells)
        contrib = np.zeros_like(masses)
        live = (masses > 1e-15) & (masses < 1.0)
        contrib[live] = -masses[live] * np.log(masses[live])
        h = np.zeros(16)
        h[1:] = np.add.reduceat(contrib, self._offsets)
        return h

    def score_from_entropy(self, h: np.ndarray, objective: str) -> float:
        if objective == "raw_score":
            denom_vec = self.raw_rank_vec
        elif objective == "tight_score":
            denom_vec = self.tight_rank_vec
        elif objective == "pipeline_score":
            denom_vec = self.pipeline_rank_vec
        else:
            raise ValueError(f"not a score objective: {objective!r}")
        denom = float(denom_vec @ h)
        if denom <= DEGENERATE_TOL:
            return 0.0
        return float(self.stv_vec @ h) / denom

    def weights_from_entropy(self, h: np.ndarray) -> np.ndarray | None:
        """Normalized cross-section weights, or None when degenerate."""
        raw = self.weight_mat @ h
        denom = float(self.pipeline_rank_vec @ h)
        if denom <= DEGENERATE_TOL:
            return None
        return raw / denom

    def make_objective(self, objective: str,
                       direction: tuple[float, float, float] | None = None,
                       collector: list | None = None) -> Callable[[np.ndarray], float]:
        """Bind an objective kind to a callable on dense probability vectors.

        With a collector, every evaluation appends its weight quadruple;
        near-degenerate evaluations whose weights fail the sum-to-one
        invariant at 1e-9 are skipped.
        """
        def emit(w: np.ndarray | None) -> None:
            if w is not None and abs(float(w.sum()) - 1.0) <= 1e-9:
                collector.append(tuple(float(x) for x in w))

        if objective == "alpha_in_direction":
            d = np.asarray(direction, dtype=float)
            d = d / np.linalg.norm(d)

            def fn(p: np.ndarray) -> float:
                h = self.entropy_vector(p)
                w = self.weights_from_entropy(h)
                if w is None:
                    return 0.0
                if collector is not None:
                    emit(w)
                x = w[1:]
                along = float(x @ d)
                perp = float(np.linalg.norm(x - along * d)) if along > 0 \
                    else float(np.linalg.norm(x))
                return -w[0] + DIRECTION_PENALTY * perp
        else:
            def fn(p: np.ndarray) -> float:
                h = self.entropy_vector(p)
                if collector is not None:
                    emit(self.weights_from_entropy(h))
                return self.score_from_entropy(h, objective)
        return fn


def softmax(theta: np.ndarray) -> np.ndarray:
    """Normalized exponentials: the unconstrained simplex parametrization."""
    e = np.exp(theta - np.max(theta))
    return e / e.sum()


def nelder_mead(fn: Callable[[np.ndarray], float], x0: np.ndarray,
                budget: int, diam_tol: float = 1e-10,
                initial_step: float = 0.5) -> tuple[np.ndarray, float, int, bool]:
    """Nelder-Mead descent with the standard coefficient set.

    Reflection 1, expansion 2, contraction 0.5, shrink 0.5.  Stops when the
    simplex diameter drops below diam_tol or the evaluation budget is spent
    (an in-flight iteration may finish, so the count can exceed the budget by
    at most dim + 1).  Returns (best_x, best_value, evals, converged).
    """
    dim = len(x0)
    pts = [np.array(x0, dtype=float)]
    for b in range(dim):
        step = np.array(x0, dtype=float)
        step[b] += initial_step
        pts.append(step)
    vals = [fn(p) for p in pts]
    evals = dim + 1
    converged = False

    while evals < budget:
        order = sorted(range(dim + 1), key=lambda idx: (vals[idx], idx))
        pts = [pts[o] for o in order]
        vals = [vals[o] for o in order]
        diam = max(float(np.max(np.abs(p - pts[0]))) for p in pts[1:])
        if diam < diam_tol:
            converged = True
            break
        centroid = np.mean(pts[:-1], axis=0)
        reflected = centroid + (centroid - pts[-1])
        f_r = fn(reflected)
        evals += 1
        if f_r < vals[0]:
            expanded = centroid + 2.0 * (centroid - pts[-1])
            f_e = fn(expanded)
            evals += 1
            if f_e < f_r:
                pts[-1], vals[-1] = expanded, f_e
            else:
                pts[-1], vals[-1] = reflected, f_r
        elif f_r < vals[-2]:
            pts[-1], vals[-1] = reflected, f_r
        else:
            contracted = centroid + 0.5 * (pts[-1] - centroid)
            f_c = fn(contracted)
            evals += 1
            if f_c < vals[-1]:
                pts[-1], vals[-1] = contracted, f_c
            else:
                pts = [pts[0] + 0.5 * (p - pts[0]) for p in pts]
                vals = [vals[0]] + [fn(p) for p in pts[1:]]
                evals += dim

    best = min(range(dim + 1), key=lambda idx: (vals[idx], idx))
    return pts[best], vals[best], evals, converged


def restart_seed(master_seed: int, restart: int) -> int:
    """Stable per-restart seed derived from the master seed."""
    return int(np.random.SeedSequence((master_seed, restart)).generate_state(1)[0])


def _initial_theta(rng: np.random.Generator, dim: int, restart: int,
                   init: np.ndarray | None) -> np.ndarray:
    if init is None:
        return rng.normal(0.0, 1.0, dim)
    theta = np.log(np.maximum(init, 1e-12))
    if restart > 0:
        theta = theta + rng.normal(0.0, 0.05, dim)
    return theta


def _run_restart(args) -> tuple[float, np.ndarray, int, bool, list | None]:
    """One seeded restart; module-level so process pools can pickle it."""
    cfg_json, labels, roles, restart, init, collect = args
    cfg = SearchConfig.from_json(cfg_json)
    frame = IngletonFrame(GroundSet(labels), *roles)
    evaluator = DistributionObjective(frame, cfg.alphabet_sizes)
    collector: list | None = [] if collect else None
    objective = evaluator.make_objective(cfg.objective, cfg.direction, collector)

    rng = np.random.default_rng(np.random.SeedSequence((cfg.master_seed, restart)))
    theta0 = _initial_theta(rng, evaluator.n_atoms, restart,
                            None if init is None else np.asarray(init))
    best_theta, best_val, evals, converged = nelder_mead(
        lambda th: objective(softmax(th)), theta0, cfg.budget_evals)
    return best_val, softmax(best_theta), evals, converged, collector


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("ENTROPY_TOOLKIT_THREADS", "1")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _run_all_restarts(cfg: SearchConfig, frame: IngletonFrame,
                      init: np.ndarray | None, collect: bool,
                      threads: int | None) -> list[tuple]:
    tasks = [(cfg.to_json(), frame.ground.labels, frame.roles, r, init, collect)
             for r in range(cfg.restarts)]
    workers = min(_thread_count(threads), cfg.restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_restart, tasks))
    return [_run_restart(t) for t in tasks]


def optimize_distribution(cfg: SearchConfig, frame: IngletonFrame,
                          init: JointDistribution | None = None,
                          threads: int | None = None) -> SearchResult:
    """Run the configured restarts and merge them deterministically.

    ``init`` seeds every restart near the given distribution (restart 0
    exactly at it, later restarts jittered).  The winner is the smallest
    objective value, ties broken by restart index, so the result does not
    depend on the degree of parallelism.
    """
    init_dense = None
    if init is not None:
        if init.ground != frame.ground or init.alphabet_sizes != cfg.alphabet_sizes:
            raise ValueError("init distribution does not match frame/alphabet")
        init_dense = init.as_dense()

    outcomes = _run_all_restarts(cfg, frame, init_dense, collect=False,
                                 threads=threads)
    best_restart = min(range(cfg.restarts),
                       key=lambda r: (outcomes[r][0], r))
    best_val, best_p, _, _, _ = outcomes[best_restart]
    eval_count = sum(o[2] for o in outcomes)
    budget_exhausted = any(not o[3] for o in outcomes)

    best_distribution = JointDistribution.from_dense(
        frame.ground, cfg.alphabet_sizes, best_p)
    try:
        point, _ = cross_section_point(
            entropy_function(best_distribution), frame,
            source_tag=f"search/seed{cfg.master_seed}/r{best_restart}")
    except ValueError:
        point = None

    return SearchResult(
        best_value=float(best_val),
        best_distribution=best_distribution,
        best_point=point,
        eval_count=eval_count,
        seed_trace=tuple(restart_seed(cfg.master_seed, r)
                         for r in range(cfg.restarts)),
        budget_exhausted=budget_exhausted,
        best_restart=best_restart,
    )


def generate_cloud(directions: Sequence[Sequence[float]], cfg: SearchConfig,
                   frame: IngletonFrame, optima_only: bool = False,
                   threads: int | None = None) -> list[CrossSectionPoint]:
    """One alpha-maximization per direction; emit the visited section points.

    By default every evaluated point's weights are emitted (skipping
    near-degenerate evaluations), so the cloud density mirrors the search
    effort; ``optima_only`` keeps only the best point of each direction.
    """
    if not directions:
        raise ValueError("need at least one direction")
    cloud: list[CrossSectionPoint] = []
    for d_idx, direction in enumerate(directions):
        d_cfg = replace(cfg, objective="alpha_in_direction",
                        direction=tuple(float(x) for x in direction))
        tag = "dir{}({:.6g},{:.6g},{:.6g})".format(d_idx, *d_cfg.direction)
        outcomes = _run_all_restarts(d_cfg, frame, None, collect=True,
                                     threads=threads)
        if optima_only:
            best_restart = min(range(d_cfg.restarts),
                               key=lambda r: (outcomes[r][0], r))
            dist = JointDistribution.from_dense(
                frame.ground, d_cfg.alphabet_sizes, outcomes[best_restart][1])
            try:
                point, _ = cross_section_point(
                    entropy_function(dist), frame,
                    source_tag=f"{tag}/r{best_restart}")
                cloud.append(point)
            except ValueError:
                pass
        else:
            for r, outcome in enumerate(outcomes):
                for w in outcome[4]:
                    cloud.append(CrossSectionPoint(*w, source_tag=f"{tag}/r{r}"))
    return cloud


def sphere_directions(count: int, seed: int = 0) -> list[tuple[float, float, float]]:
    """Deterministic directions drawn uniformly on the sphere in weight space."""
    if count < 1:
        raise ValueError("need a positive direction count")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0xD1F)))
    out = []
    while len(out) < count:
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            out.append(tuple(v / norm))
    return out


def vertex_seed_distributions(frame: IngletonFrame) -> dict[str, JointDistribution]:
    """Product-of-fair-bits distributions whose section points are the
    tetrahedron corners beta, gamma, delta (the corners are entropic up to
    scaling, realized by uniform linear matroids)."""
    ground = frame.ground
    i, j, k, l = frame.roles

    def build(sizes_by_role, configs_by_role):
        sizes = [0] * 4
        for role, lab in zip("ijkl", (i, j, k, l)):
            sizes[ground.bit(lab)] = sizes_by_role[role]
        atoms = {}
        for cfg_roles, prob in configs_by_role:
            cfg = [0] * 4
            for role, lab in zip("ijkl", (i, j, k, l)):
                cfg[ground.bit(lab)] = cfg_roles[role]
            atoms[tuple(cfg)] = prob
        return JointDistribution(ground, sizes, atoms)

    beta_atoms = [({"i": y, "j": x, "k": 2 * x + y, "l": 2 * x + y}, 0.25)
                  for x in range(2) for y in range(2)]
    gamma_atoms = [({"i": 2 * x + u, "j": 2 * y + v, "k": u ^ v, "l": x ^ y}, 1 / 16)
                   for x in range(2) for y in range(2)
                   for u in range(2) for v in range(2)]
    delta_atoms = [({"i": 2 * y + w, "j": 2 * x + z, "k": 2 * z + w, "l": 2 * x + y},
                    1 / 16)
                   for x in range(2) for y in range(2)
                   for z in range(2) for w in range(2)]
    return {
        "beta": build({"i": 2, "j": 2, "k": 4, "l": 4}, beta_atoms),
        "gamma": build({"i": 4, "j": 4, "k": 2, "l": 2}, gamma_atoms),
        "delta": build({"i": 4, "j": 4, "k": 4, "l": 4}, delta_atoms),
    }
