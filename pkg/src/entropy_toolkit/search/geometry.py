"""Small-dimensional geometry of the cross-section: hulls and outer regions.

Section points are weight quadruples (alpha, beta, gamma, delta) summing to
one; geometry happens in the affine chart (beta, gamma, delta), where the
weight simplex becomes {x >= 0, sum(x) <= 1} and the alpha corner sits at the
origin.  Hulls are delegated to Qhull via scipy; the halfspace-region vertex
enumeration solves all 3x3 boundary systems directly, which is exact enough
for banks of a few dozen constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..inequalities import CrossSectionHalfspace

FEASIBILITY_TOL = 1e-9

#: names of the four simplex facets in weight order
SIMPLEX_FACETS = ("alpha>=0", "beta>=0", "gamma>=0", "delta>=0")


@dataclass(frozen=True)
class Polytope3:
    """Vertices (weight quadruples) and triangular facets of a region.

    ``dim`` is the affine dimension of the vertex set; facets are only
    populated for full-dimensional (dim 3) polytopes, referencing vertex
    indices.  An empty region has dim -1.
    """

    vertices: tuple[tuple[float, float, float, float], ...]
    facets: tuple[tuple[int, int, int], ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(
            tuple(float(x) for x in v) for v in self.vertices))
        object.__setattr__(self, "facets", tuple(
            tuple(int(x) for x in f) for f in self.facets))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == 3

    def affine_vertices(self) -> np.ndarray:
        """Vertex coordinates in the (beta, gamma, delta) chart."""
        return np.array([v[1:] for v in self.vertices], dtype=float).reshape(-1, 3)


def _as_weight_array(points: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise ValueError(f"need weight quadruples, got shape {arr.shape}")
    sums = arr.sum(axis=1)
    bad = np.where(np.abs(sums - 1.0) > 1e-6)[0]
    if bad.size:
        raise ValueError(f"point {bad[0]} has weight sum {sums[bad[0]]!r}, expected 1")
    return arr


def _dedupe(arr: np.ndarray, decimals: int = 12) -> np.ndarray:
    seen = {}
    for row in arr:
        seen.setdefault(tuple(np.round(row, decimals)), row)
    return np.array(list(seen.values()))


def _affine_dim(x: np.ndarray, tol: float = 1e-9) -> int:
    if len(x) <= 1:
        return 0
    centered = x - x[0]
    return int(np.linalg.matrix_rank(centered, tol=tol))


def convex_hull_3d(points: Sequence[Sequence[float]]) -> Polytope3:
    """Convex hull of section points in the affine chart.

    Full-dimensional input yields extreme points plus triangular facets;
    degenerate input (fewer than 4 affinely independent points) is flagged
    through ``dim`` < 3 and carries the lower-dimensional extreme points with
    no facets.
    """
    arr = _dedupe(_as_weight_array(points))
    x = arr[:, 1:]
    dim = _affine_dim(x)

    if dim == 3 and len(arr) >= 4:
        hull = ConvexHull(x)
        keep = sorted(hull.vertices)
        renumber = {old: new for new, old in enumerate(keep)}
        facets = tuple(tuple(renumber[v] for v in simplex)
                       for simplex in hull.simplices.tolist())
        verts = tuple(tuple(arr[v]) for v in keep)
        return Polytope3(verts, facets, 3)

    if dim == 2:
        origin = x[0]
        basis, *_ = np.linalg.svd((x - origin).T)
        proj = (x - origin) @ basis[:, :2]
        hull = ConvexHull(proj)
        keep = sorted(hull.vertices)
        return Polytope3(tuple(tuple(arr[v]) for v in keep), (), 2)

    if dim == 1:
        axis = x[np.argmax(np.linalg.norm(x - x[0], axis=1))] - x[0]
        coords = (x - x[0]) @ axis
        keep = sorted({int(np.argmin(coords)), int(np.argmax(coords))})
        return Polytope3(tuple(tuple(arr[v]) for v in keep), (), 1)

    return Polytope3((tuple(arr[0]),), (), 0)


def hull_contains(poly: Polytope3, point: Sequence[float],
                  tol: float = FEASIBILITY_TOL) -> bool:
    """Membership test against the facet planes of a full-dimensional hull."""
    if not poly.is_full_dimensional:
        raise ValueError("containment test needs a full-dimensional polytope")
    x = np.asarray(point, dtype=float)[1:]
    verts = poly.affine_vertices()
    centroid = verts.mean(axis=0)
    for fa, fb, fc in poly.facets:
        normal = np.cross(verts[fb] - verts[fa], verts[fc] - verts[fa])
        if normal @ (centroid - verts[fa]) > 0:
            normal = -normal
        if normal @ (x - verts[fa]) > tol * max(1.0, float(np.linalg.norm(normal))):
            return False
    return True


def hull_volume(poly: Polytope3) -> float:
    """Euclidean volume in the affine chart; 0 for degenerate hulls."""
    if not poly.is_full_dimensional:
        return 0.0
    return float(ConvexHull(poly.affine_vertices()).volume)


# --- outer approximation from halfspace banks ---------------------------------

def _affine_constraints(bank: Sequence[CrossSectionHalfspace]
                        ) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """All constraints as rows (n, off) meaning n . x + off >= 0 in the chart.

    The four simplex facets come first, then the bank; a weight constraint
    a*alpha + b*beta + c*gamma + d*delta >= 0 becomes
    (b-a, c-a, d-a) . x + a >= 0 after substituting alpha = 1 - sum(x).
    """
    normals = [np.array([-1.0, -1.0, -1.0]), np.eye(3)[0], np.eye(3)[1], np.eye(3)[2]]
    offsets = [1.0, 0.0, 0.0, 0.0]
    names = list(SIMPLEX_FACETS)
    for hs in bank:
        normals.append(np.array([hs.b - hs.a, hs.c - hs.a, hs.d - hs.a]))
        offsets.append(hs.a)
        names.append(hs.name)
    return np.array(normals), np.array(offsets), names


def outer_region(bank: Sequence[CrossSectionHalfspace]) -> Polytope3:
    """Vertices of {weights on the simplex satisfying every bank halfspace}.

    Enumerates all 3x3 systems of constraint boundaries, keeps the feasible
    solutions, and hulls them.  An empty bank returns the full simplex; an
    infeasible bank returns the explicit empty polytope.
    """
    normals, offsets, _ = _affine_constraints(bank)
    m = len(normals)
    candidates = []
    for tri in combinations(range(m), 3):
        A = normals[list(tri)]
        det = np.linalg.det(A)
        if abs(det) < 1e-12:
            continue
        x = np.linalg.solve(A, -offsets[list(tri)])
        if np.min(normals @ x + offsets) >= -FEASIBILITY_TOL:
            candidates.append(x)
    if not candidates:
        return Polytope3((), (), -1)

    arr = _dedupe(np.array(candidates))
    order = np.lexsort(arr.T[::-1])
    arr = arr[order]
    weights = np.column_stack([1.0 - arr.sum(axis=1), arr]) + 0.0  # kill -0.0

    dim = _affine_dim(arr)
    if dim == 3 and len(arr) >= 4:
        try:
            return convex_hull_3d(weights)
        except QhullError:
            pass
    return Polytope3(tuple(tuple(w) for w in weights), (), dim)


def active_constraints(weights: Sequence[float],
                       bank: Sequence[CrossSectionHalfspace],
                       tol: float = FEASIBILITY_TOL) -> list[str]:
    """Names of the simplex facets and bank halfspaces tight at a vertex."""
    normals, offsets, names = _affine_constraints(bank)
    x = np.asarray(weights, dtype=float)[1:]
    margins = normals @ x + offsets
    return [name for name, margin in zip(names, margins) if abs(margin) <= tol]


def max_alpha_on_edge(poly: Polytope3, edge: str = "alpha-beta",
                      tol: float = FEASIBILITY_TOL) -> float:
    """Largest alpha weight among region vertices on a tetrahedron edge.

    ``edge`` picks which two weights may be nonzero, e.g. "alpha-beta" keeps
    vertices with gamma = delta = 0.
    """
    names = ("alpha", "beta", "gamma", "delta")
    try:
        a, b = edge.split("-")
        keep = {names.index(a), names.index(b)}
    except ValueError:
        raise ValueError(f"bad edge spec {edge!r}, want e.g. 'alpha-beta'") from None
    best = None
    for v in poly.vertices:
        if all(abs(v[idx]) <= tol for idx in range(4) if idx not in keep):
            best = v[0] if best is None else max(best, v[0])
    if best is None:
        raise ValueError(f"no region vertex lies on edge {edge}")
    return float(best)


def hull_to_obj(poly: Polytope3) -> str:
    """OBJ-like text: v lines with (beta, gamma, delta) coords, f lines 1-based."""
    lines = [f"v {v[1]!r} {v[2]!r} {v[3]!r}" for v in poly.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in poly.facets]
    return "\n".join(lines) + ("\n" if lines else "")
