"""Entropy functions of finite random vectors and two closed-form families.

The generic path goes distribution -> marginals -> Shannon entropies (nats).
On top of that sit the two hand-analyzed families used throughout the Ingleton
score experiments:

* the four-atom family: two exchangeable bits plus their min and max, indexed
  by the probability p of the all-zero atom;
* the ``exl`` family: four variables over {0,1,2,3} supported on forty fixed
  configurations arranged in five columns of eight, weighted by the column
  parameters p, q, r, s, t with p+q+r+s+t = 1/8.

Both families come with closed-form entropy vectors that the generic
computation must reproduce; tests rely on this mutual check.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

import numpy as np

from .core import GroundSet, SetFunction

LN2 = math.log(2.0)

#: probabilities below this are treated as exact zeros inside kappa
KAPPA_FLOOR = 1e-15

#: refuse to enumerate product alphabets larger than this
MAX_CELLS = 10_000_000


def kappa(u: float) -> float:
    """Entropy kernel -u ln u on [0, 1], with kappa(0) = 0."""
    if u < -1e-12 or u > 1.0 + 1e-9:
        raise ValueError(f"kappa argument {u} outside [0, 1]")
    if u <= KAPPA_FLOOR or u >= 1.0:
        return 0.0
    return -u * math.log(u)


@dataclass(frozen=True)
class JointDistribution:
    """Probability mass function over a finite product alphabet.

    ``atoms`` maps configuration tuples (one symbol index per variable, in
    ground-label order) to probabilities.  Probabilities are nonnegative and
    sum to one within 1e-12.  Treat instances as immutable.
    """

    ground: GroundSet
    alphabet_sizes: tuple[int, ...]
    atoms: dict[tuple[int, ...], float]

    def __init__(self, ground: GroundSet, alphabet_sizes, atoms: Mapping):
        sizes = tuple(int(s) for s in alphabet_sizes)
        if len(sizes) != ground.n or any(s < 1 for s in sizes):
            raise ValueError(f"need {ground.n} positive alphabet sizes, got {sizes}")
        n_cells = math.prod(sizes)
        if n_cells > MAX_CELLS:
            raise ValueError(f"product alphabet has {n_cells} cells, exceeding "
                             f"the {MAX_CELLS} guard")
        clean: dict[tuple[int, ...], float] = {}
        total = 0.0
        for cfg, p in atoms.items():
            cfg = tuple(int(x) for x in cfg)
            if len(cfg) != ground.n:
                raise ValueError(f"configuration {cfg} has wrong arity")
            if any(not 0 <= x < s for x, s in zip(cfg, sizes)):
                raise ValueError(f"configuration {cfg} outside alphabet {sizes}")
            p = float(p)
            if p < -1e-12:
                raise ValueError(f"negative probability {p} at {cfg}")
            p = max(p, 0.0)
            if cfg in clean:
                raise ValueError(f"duplicate configuration {cfg}")
            clean[cfg] = p
            total += p
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "alphabet_sizes", sizes)
        object.__setattr__(self, "atoms", clean)

    @property
    def n_cells(self) -> int:
        return math.prod(self.alphabet_sizes)

    def marginal(self, subset) -> dict[tuple[int, ...], float]:
        """Marginal pmf on the given subset of variables, sparsely accumulated."""
        bits = [b for b in range(self.ground.n) if self.ground.mask(subset) >> b & 1]
        out: dict[tuple[int, ...], float] = {}
        for cfg, p in self.atoms.items():
            if p <= 0.0:
                continue
            key = tuple(cfg[b] for b in bits)
            out[key] = out.get(key, 0.0) + p
        return out

    def as_dense(self) -> np.ndarray:
        """Flat probability vector over all cells, C-order over the alphabet grid."""
        vec = np.zeros(self.n_cells)
        for cfg, p in self.atoms.items():
            idx = 0
            for x, s in zip(cfg, self.alphabet_sizes):
                idx = idx * s + x
            vec[idx] = p
        return vec

    @classmethod
    def from_dense(cls, ground: GroundSet, alphabet_sizes, vec) -> "JointDistribution":
        sizes = tuple(int(s) for s in alphabet_sizes)
        vec = np.asarray(vec, dtype=float).reshape(sizes)
        atoms = {tuple(int(i) for i in idx): float(p)
                 for idx, p in np.ndenumerate(vec)}
        return cls(ground, sizes, atoms)


def entropy_function(d: JointDistribution) -> SetFunction:
    """Entropy function of a joint distribution: I -> H(marginal on I), in nats."""
    vals = np.zeros(d.ground.size)
    for I in range(1, d.ground.size):
        vals[I] = sum(kappa(p) for p in d.marginal(I).values())
    return SetFunction(d.ground, vals)


# --- four-atom family -------------------------------------------------------

@dataclass(frozen=True)
class FourAtomParams:
    """Probability p in [0, 1/2] of the all-zero atom of the four-atom family."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"p={self.p} outside [0, 1/2]")


def _four_atom_p(params) -> float:
    if isinstance(params, FourAtomParams):
        return params.p
    return FourAtomParams(float(params)).p


def four_atom_distribution(params, ground: GroundSet | None = None) -> JointDistribution:
    """Two exchangeable fair bits at positions 0,1 with their min and max.

    Atoms on {0,1}^4: (0,0,0,0) and (1,1,1,1) carry probability p each,
    (0,1,0,1) and (1,0,0,1) carry 1/2 - p each.
    """
    p = _four_atom_p(params)
    ground = ground or GroundSet("ijkl")
    if ground.n != 4:
        raise ValueError("four-atom family needs a 4-element ground set")
    atoms = {
        (0, 0, 0, 0): p,
        (0, 1, 0, 1): 0.5 - p,
        (1, 0, 0, 1): 0.5 - p,
        (1, 1, 1, 1): p,
    }
    return JointDistribution(ground, (2, 2, 2, 2), atoms)


def four_atom_score(params) -> float:
    """Closed-form Ingleton score of the four-atom family at parameter p.

    Score of the pair formed by the two exchangeable bits:
    ((2p+1) ln 2 - 2 kappa(p) - 2 kappa(1-p)) / (2 kappa(p) + 2 kappa(1/2-p)).
    The denominator is bounded away from 0 on [0, 1/2].
    """
    p = _four_atom_p(params)
    num = (2.0 * p + 1.0) * LN2 - 2.0 * kappa(p) - 2.0 * kappa(1.0 - p)
    den = 2.0 * kappa(p) + 2.0 * kappa(0.5 - p)
    if den <= 0.0:
        raise ValueError(f"degenerate denominator at p={p}")
    return num / den


# --- exl family: forty configurations over {0,1,2,3}^4 ----------------------

#: the five column parameters and their eight configurations each
EXL_COLUMNS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("p", ("0000", "0101", "1010", "1212", "2121", "2323", "3232", "3333")),
    ("q", ("0210", "0321", "1100", "1332", "2001", "2233", "3012", "3123")),
    ("r", ("0011", "0120", "1002", "1230", "2103", "2331", "3213", "3322")),
    ("s", ("0010", "0121", "1000", "1232", "2101", "2333", "3212", "3323")),
    ("t", ("0001", "0100", "1012", "1210", "2123", "2321", "3233", "3332")),
)


@dataclass(frozen=True)
class ExLParams:
    """Column weights of the forty-configuration family; they sum to 1/8."""

    p: float
    q: float
    r: float
    s: float
    t: float

    def __post_init__(self):
        vals = self.as_tuple()
        if any(v < -1e-15 for v in vals):
            raise ValueError(f"parameters must be nonnegative: {vals}")
        if abs(sum(vals) - 0.125) > 1e-12:
            raise ValueError(f"parameters sum to {sum(vals)!r}, need 1/8")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.p, self.q, self.r, self.s, self.t)


#: parameter point at which the family's tight part beats the four-atom score
EXL_REFERENCE = ExLParams(p=0.09524, q=0.02494, r=0.00160, s=0.00161, t=0.00161)


def exl_distribution(params: ExLParams, ground: GroundSet | None = None) -> JointDistribution:
    """Distribution over {0,1,2,3}^4 supported on the forty tabled configurations."""
    ground = ground or GroundSet("ijkl")
    if ground.n != 4:
        raise ValueError("exl family needs a 4-element ground set")
    weights = dict(zip("pqrst", params.as_tuple()))
    atoms: dict[tuple[int, ...], float] = {}
    for cname, cfgs in EXL_COLUMNS:
        for cfg in cfgs:
            atoms[tuple(int(c) for c in cfg)] = weights[cname]
    return JointDistribution(ground, (4, 4, 4, 4), atoms)


def exl_closed_form(params: ExLParams, ground: GroundSet | None = None) -> SetFunction:
    """Entropy function of the forty-configuration family in closed form.

    Singletons are 2 ln 2, the cross pairs il and jk are 3 ln 2, and the
    remaining coordinates are short kappa sums in the column weights.  Agrees
    with entropy_function(exl_distribution(params)) to full precision.
    """
    ground = ground or GroundSet("ijkl")
    if ground.n != 4:
        raise ValueError("exl family needs a 4-element ground set")
    p, q, r, s, t = params.as_tuple()
    k = kappa
    vals = np.zeros(16)
    m = ground.mask
    for lab in ground.labels:
        vals[m(lab)] = 2.0 * LN2
    i, j, kk, l = ground.labels
    vals[m((i, l))] = vals[m((j, kk))] = 3.0 * LN2
    vals[m((i, j))] = 8.0 * k(q) + 8.0 * k(p + r + s + t)
    vals[m((kk, l))] = 8.0 * k(r) + 8.0 * k(p + q + s + t)
    vals[m((i, kk))] = 4.0 * k(2.0 * p + 2.0 * t) + 8.0 * k(q + r + s)
    vals[m((j, l))] = 4.0 * k(2.0 * p + 2.0 * s) + 8.0 * k(q + r + t)
    vals[m((i, kk, l))] = 8.0 * k(p + t) + 8.0 * k(q + s) + 8.0 * k(r)
    vals[m((j, kk, l))] = 8.0 * k(p + s) + 8.0 * k(q + t) + 8.0 * k(r)
    vals[m((i, j, kk))] = 8.0 * k(p + t) + 8.0 * k(r + s) + 8.0 * k(q)
    vals[m((i, j, l))] = 8.0 * k(p + s) + 8.0 * k(r + t) + 8.0 * k(q)
    vals[ground.full_mask] = 8.0 * (k(p) + k(q) + k(r) + k(s) + k(t))
    return SetFunction(ground, vals)


def load_exl_table() -> tuple[tuple[str, tuple[str, ...]], ...]:
    """Read the packaged CSV copy of the forty-configuration table."""
    cols: dict[str, list[str]] = {}
    order: list[str] = []
    text = resources.files("entropy_toolkit").joinpath("data/exl40.csv").read_text()
    for row in csv.DictReader(text.splitlines()):
        name = row["column"]
        if name not in cols:
            cols[name] = []
            order.append(name)
        cols[name].append(row["config"])
    return tuple((name, tuple(cols[name])) for name in order)


# --- distribution wire formats ----------------------------------------------
#
# CSV: header "x_<label>,...,prob", one row per atom.
# JSON mirror: {"labels": [...], "alphabet_sizes": [...],
#               "atoms": [{"config": [...], "prob": ...}, ...]}

def distribution_to_csv(d: JointDistribution) -> str:
    lines = [",".join([f"x_{lab}" for lab in d.ground.labels] + ["prob"])]
    for cfg in sorted(d.atoms):
        lines.append(",".join([str(x) for x in cfg] + [repr(d.atoms[cfg])]))
    return "\n".join(lines) + "\n"


def distribution_from_csv(text: str, alphabet_sizes=None) -> JointDistribution:
    rows = list(csv.reader(line for line in text.splitlines() if line.strip()))
    if not rows:
        raise ValueError("empty distribution CSV")
    header = rows[0]
    if header[-1] != "prob" or not all(h.startswith("x_") for h in header[:-1]):
        raise ValueError(f"bad distribution header: {header}")
    ground = GroundSet(h[2:] for h in header[:-1])
    atoms = {}
    for row in rows[1:]:
        if len(row) != len(header):
            raise ValueError(f"bad row {row}")
        cfg = tuple(int(x) for x in row[:-1])
        atoms[cfg] = float(row[-1])
    if alphabet_sizes is None:
        alphabet_sizes = tuple(max(cfg[b] for cfg in atoms) + 1 for b in range(ground.n))
    return JointDistribution(ground, alphabet_sizes, atoms)


def distribution_to_json(d: JointDistribution) -> dict:
    return {
        "labels": list(d.ground.labels),
        "alphabet_sizes": list(d.alphabet_sizes),
        "atoms": [{"config": list(cfg), "prob": float(p)}
                  for cfg, p in sorted(d.atoms.items())],
    }


def distribution_from_json(data: dict) -> JointDistribution:
    try:
        ground = GroundSet(data["labels"])
        sizes = data["alphabet_sizes"]
        atoms = {tuple(a["config"]): a["prob"] for a in data["atoms"]}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed distribution document: {exc}") from exc
    return JointDistribution(ground, sizes, atoms)


def save_distribution(d: JointDistribution, path) -> None:
    path = str(path)
    if path.endswith(".csv"):
        with open(path, "w") as fh:
            fh.write(distribution_to_csv(d))
    else:
        with open(path, "w") as fh:
            json.dump(distribution_to_json(d), fh, indent=1)
            fh.write("\n")


def load_distribution(path) -> JointDistribution:
    path = str(path)
    with open(path) as fh:
        if path.endswith(".csv"):
            return distribution_from_csv(fh.read())
        return distribution_from_json(json.load(fh))
