"""Four-variable reduction: Ingleton functional, basis expansion, face maps.

Everything here is relative to an :class:`IngletonFrame`, an assignment of the
roles (i, j, k, l) to the four ground labels.  The frame fixes which of the
six Ingleton instances is studied; scores and cross-section weights are
invariant under swapping i with j or k with l, which tests enforce.

The central objects:

* ``stv``, the ten-term Ingleton functional; its sign splits the polymatroid
  cone, and stv(h) / h(N) is the Ingleton score.
* the eleven generators (one special non-almost-entropic rank function plus
  ten uniform-up-to-loops matroids) whose conic hull is the tight cone on the
  reversed-Ingleton side; every tight function expands uniquely in them.
* the linear maps ``a_map`` and ``b_map`` that zero one basis coordinate
  each while preserving stv, the stabilizer average ``c_sym``, and the
  tetrahedron coordinates of the resulting three-dimensional cross-section.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    GroundSet,
    SetFunction,
    delta_given,
    matroid_rank,
    relabel,
    tight_part,
)


@dataclass(frozen=True)
class IngletonFrame:
    """Role assignment (i, j, k, l) of the four ground labels."""

    ground: GroundSet
    i: str
    j: str
    k: str
    l: str

    def __post_init__(self):
        if self.ground.n != 4:
            raise ValueError(f"frame needs a 4-element ground set, got n={self.ground.n}")
        roles = (self.i, self.j, self.k, self.l)
        if sorted(roles) != sorted(self.ground.labels):
            raise ValueError(f"frame roles {roles} must enumerate the ground set "
                             f"{self.ground.labels}")

    @classmethod
    def default(cls, ground: GroundSet) -> "IngletonFrame":
        return cls(ground, *ground.labels)

    @classmethod
    def from_spec(cls, ground: GroundSet, spec: str) -> "IngletonFrame":
        """Parse a frame given as comma-separated labels, e.g. ``"i,j,k,l"``."""
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) != 4:
            raise ValueError(f"frame spec needs 4 labels, got {spec!r}")
        return cls(ground, *parts)

    @property
    def roles(self) -> tuple[str, str, str, str]:
        return (self.i, self.j, self.k, self.l)

    def swapped_ij(self) -> "IngletonFrame":
        return IngletonFrame(self.ground, self.j, self.i, self.k, self.l)

    def swapped_kl(self) -> "IngletonFrame":
        return IngletonFrame(self.ground, self.i, self.j, self.l, self.k)


def _require_frame_ground(h: SetFunction, frame: IngletonFrame) -> None:
    if h.ground != frame.ground:
        raise ValueError(f"set function lives on {h.ground.labels}, frame on "
                         f"{frame.ground.labels}")


def stv_coefficients(frame: IngletonFrame) -> dict[int, float]:
    """Coefficient vector of the Ingleton functional, keyed by subset mask."""
    m = frame.ground.mask
    i, j, k, l = frame.roles
    coeff: dict[int, float] = {}
    for subset, c in [((i, k), 1), ((i, l), 1), ((j, k), 1), ((j, l), 1),
                      ((k, l), 1), ((i, j), -1), ((k,), -1), ((l,), -1),
                      ((i, k, l), -1), ((j, k, l), -1)]:
        coeff[m(subset)] = coeff.get(m(subset), 0.0) + c
    return coeff


def ingleton_value(h: SetFunction, frame: IngletonFrame) -> float:
    """The Ingleton functional stv applied to h.

    h(ik)+h(il)+h(jk)+h(jl)+h(kl) - h(ij) - h(k) - h(l) - h(ikl) - h(jkl);
    nonnegative on linearly representable rank functions, can be negative on
    entropy functions.
    """
    _require_frame_ground(h, frame)
    return float(sum(c * h.values[msk] for msk, c in stv_coefficients(frame).items()))


def ingleton_score(h: SetFunction, frame: IngletonFrame) -> float:
    """Normalized Ingleton expression stv(h) / h(N); requires h(N) > 0."""
    _require_frame_ground(h, frame)
    if h.rank <= 0.0:
        raise ValueError(f"Ingleton score needs h(N) > 0, got {h.rank}")
    return ingleton_value(h, frame) / h.rank


def violated_instances(h: SetFunction, tol: float = 1e-12) -> list[frozenset[str]]:
    """Unordered pairs {a, b} whose Ingleton instance is violated: stv_ab(h) < -tol.

    A polymatroid violates at most one of the six instances.
    """
    if h.ground.n != 4:
        raise ValueError("Ingleton instances need a 4-element ground set")
    out = []
    for a, b in combinations(h.ground.labels, 2):
        c, d = [x for x in h.ground.labels if x not in (a, b)]
        if ingleton_value(h, IngletonFrame(h.ground, a, b, c, d)) < -tol:
            out.append(frozenset((a, b)))
    return out


def ingleton_base(frame: IngletonFrame) -> SetFunction:
    """The extreme tight rank function with score exactly -1/4.

    Value 3 on the five pairs ik, jk, il, jl, kl and min(4, 2|K|) elsewhere;
    it generates the only extreme ray of the reversed-Ingleton tight cone
    with negative score, and it is not almost entropic.
    """
    g = frame.ground
    i, j, k, l = frame.roles
    special = {g.mask(s) for s in [(i, k), (j, k), (i, l), (j, l), (k, l)]}
    vals = [3.0 if K in special else float(min(4, 2 * bin(K).count("1")))
            for K in g.subsets()]
    return SetFunction(g, vals)


# --- basis expansion of the reversed-Ingleton tight cone ---------------------

@dataclass(frozen=True)
class BasisCoefficients:
    """Coordinates of a tight function in the eleven-generator basis.

    ``c_bar`` multiplies the extreme score -1/4 generator; the other ten are
    named after the conditional-information functionals that read them off.
    For functions in the reversed-Ingleton tight cone all eleven are
    nonnegative.
    """

    c_bar: float
    c_ij: float
    c_kl_ij: float
    c_kl_i: float
    c_kl_j: float
    c_ij_k: float
    c_ij_l: float
    c_jl_k: float
    c_il_k: float
    c_jk_l: float
    c_ik_l: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c_bar, self.c_ij, self.c_kl_ij, self.c_kl_i,
                         self.c_kl_j, self.c_ij_k, self.c_ij_l, self.c_jl_k,
                         self.c_il_k, self.c_jk_l, self.c_ik_l])

    @classmethod
    def from_array(cls, arr) -> "BasisCoefficients":
        return cls(*(float(x) for x in arr))


def basis_generators(frame: IngletonFrame) -> tuple[SetFunction, ...]:
    """The eleven generators, ordered to match :class:`BasisCoefficients`.

    The matroid paired with each coefficient is the one the corresponding
    functional picks out: c_ij pairs with the free rank-1 matroid, c_ij_k
    with the rank-2 matroid whose loop is l, c_jl_k with the rank-1 matroid
    with loops {i, k}, and so on.
    """
    g = frame.ground
    i, j, k, l = frame.roles
    return (
        ingleton_base(frame),
        matroid_rank(g, 1),
        matroid_rank(g, 3),
        matroid_rank(g, 1, (i,)),
        matroid_rank(g, 1, (j,)),
        matroid_rank(g, 2, (l,)),
        matroid_rank(g, 2, (k,)),
        matroid_rank(g, 1, (i, k)),
        matroid_rank(g, 1, (j, k)),
        matroid_rank(g, 1, (i, l)),
        matroid_rank(g, 1, (j, l)),
    )


def basis_coefficients(h: SetFunction, frame: IngletonFrame) -> BasisCoefficients:
    """Read the basis coordinates of h off the coordinate functionals.

    The read-off is linear and total; it inverts :func:`reconstruct` exactly
    on tight inputs (the generators form a basis of the tight subspace).
    """
    _require_frame_ground(h, frame)
    i, j, k, l = frame.roles
    return BasisCoefficients(
        c_bar=-ingleton_value(h, frame),
        c_ij=delta_given(h, i, j),
        c_kl_ij=delta_given(h, k, l, (i, j)),
        c_kl_i=delta_given(h, k, l, i),
        c_kl_j=delta_given(h, k, l, j),
        c_ij_k=delta_given(h, i, j, k),
        c_ij_l=delta_given(h, i, j, l),
        c_jl_k=delta_given(h, j, l, k),
        c_il_k=delta_given(h, i, l, k),
        c_jk_l=delta_given(h, j, k, l),
        c_ik_l=delta_given(h, i, k, l),
    )


def reconstruct(coeffs: BasisCoefficients, frame: IngletonFrame) -> SetFunction:
    """Sum coefficient * generator over the eleven basis functions."""
    gens = basis_generators(frame)
    vals = np.zeros(frame.ground.size)
    for c, gen in zip(coeffs.as_array(), gens):
        vals += c * gen.values
    return SetFunction(frame.ground, vals)


# --- the face maps and symmetrization ----------------------------------------

def a_map(h: SetFunction, frame: IngletonFrame) -> SetFunction:
    """Add delta(ij|empty)(h) times (rank-1-with-loop-i minus rank-1).

    Zeroes the mutual-information coordinate delta(ij|empty) while preserving
    stv; commutes with :func:`b_map`.
    """
    _require_frame_ground(h, frame)
    c = delta_given(h, frame.i, frame.j)
    shift = matroid_rank(frame.ground, 1, (frame.i,)) - matroid_rank(frame.ground, 1)
    return h + c * shift


def b_map(h: SetFunction, frame: IngletonFrame) -> SetFunction:
    """Add delta(kl|ij)(h) times (rank-2-with-loop-k minus rank-3).

    Zeroes the delta(kl|ij) coordinate while preserving stv; commutes with
    :func:`a_map`.
    """
    _require_frame_ground(h, frame)
    c = delta_given(h, frame.k, frame.l, (frame.i, frame.j))
    shift = matroid_rank(frame.ground, 2, (frame.k,)) - matroid_rank(frame.ground, 3)
    return h + c * shift


def stabilizer_permutations(frame: IngletonFrame) -> tuple[dict[str, str], ...]:
    """The four label permutations fixing the pair {i, j}: id, i<->j, k<->l, both."""
    i, j, k, l = frame.roles
    return (
        {},
        {i: j, j: i},
        {k: l, l: k},
        {i: j, j: i, k: l, l: k},
    )


def c_sym(h: SetFunction, frame: IngletonFrame) -> SetFunction:
    """Average h over the four stabilizer permutations of the pair {i, j}.

    The output is invariant under each of the four; stv and the value at N
    are preserved.
    """
    _require_frame_ground(h, frame)
    acc = np.zeros(h.ground.size)
    for perm in stabilizer_permutations(frame):
        acc += relabel(h, perm).values
    return SetFunction(h.ground, acc / 4.0)


def tetra_vertices(frame: IngletonFrame) -> tuple[SetFunction, SetFunction,
                                                  SetFunction, SetFunction]:
    """Vertices (alpha, beta, gamma, delta) of the cross-section tetrahedron.

    alpha is a quarter of the extreme non-almost-entropic generator (score
    -1/4); beta, gamma, delta are symmetrized matroid averages lying on the
    Ingleton hyperplane.  All four have value 1 at N.
    """
    g = frame.ground
    i, j, k, l = frame.roles
    alpha = 0.25 * ingleton_base(frame)
    beta = 0.5 * (matroid_rank(g, 1, (j,)) + matroid_rank(g, 1, (i,)))
    gamma = 0.25 * (matroid_rank(g, 2, (l,)) + matroid_rank(g, 2, (k,)))
    delta_v = 0.25 * (matroid_rank(g, 1, (i, k)) + matroid_rank(g, 1, (j, k))
                      + matroid_rank(g, 1, (i, l)) + matroid_rank(g, 1, (j, l)))
    return alpha, beta, gamma, delta_v


# --- cross-section coordinates ------------------------------------------------

@dataclass(frozen=True)
class CrossSectionPoint:
    """Barycentric weights of a cross-section point in the tetrahedron.

    For points produced by the tighten -> b -> a -> symmetrize -> normalize
    pipeline the weights sum to one; for polymatroid inputs all four are
    nonnegative exactly when the input satisfies the reversed Ingleton
    inequality (the alpha weight is -4 times the projected score).
    """

    alpha_w: float
    beta_w: float
    gamma_w: float
    delta_w: float
    source_tag: str = ""

    def __post_init__(self):
        for name in ("alpha_w", "beta_w", "gamma_w", "delta_w"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha_w, self.beta_w, self.gamma_w, self.delta_w)

    def affine(self) -> tuple[float, float, float]:
        """Coordinates (beta, gamma, delta) in the affine chart of the simplex."""
        return (self.beta_w, self.gamma_w, self.delta_w)

    @property
    def weight_sum(self) -> float:
        return self.alpha_w + self.beta_w + self.gamma_w + self.delta_w


def section_weights(h: SetFunction, frame: IngletonFrame) -> tuple[float, float, float, float]:
    """Tetrahedron weight functionals evaluated at h.

    alpha = -4 stv, beta = delta(kl|i) + delta(kl|j),
    gamma = 2 delta(ij|k) + 2 delta(ij|l),
    delta = delta(jl|k) + delta(il|k) + delta(jk|l) + delta(ik|l).
    They sum to h(N) whenever h is tight with delta(ij|empty) =
    delta(kl|ij) = 0, i.e. on pipeline outputs before normalization.
    """
    _require_frame_ground(h, frame)
    i, j, k, l = frame.roles
    alpha_w = -4.0 * ingleton_value(h, frame)
    beta_w = delta_given(h, k, l, i) + delta_given(h, k, l, j)
    gamma_w = 2.0 * delta_given(h, i, j, k) + 2.0 * delta_given(h, i, j, l)
    delta_w = (delta_given(h, j, l, k) + delta_given(h, i, l, k)
               + delta_given(h, j, k, l) + delta_given(h, i, k, l))
    return (alpha_w, beta_w, gamma_w, delta_w)


def cross_section_point(f: SetFunction, frame: IngletonFrame,
                        source_tag: str = "",
                        tol: float = 1e-12) -> tuple[CrossSectionPoint, SetFunction]:
    """Project f into the cross-section: tighten, b_map, a_map, symmetrize, normalize.

    Returns the weight quadruple and the normalized symmetrized function
    itself.  Raises on degenerate inputs whose projected value at N is not
    positive (then the score is 0 and the point is undefined).
    """
    _require_frame_ground(f, frame)
    g = c_sym(a_map(b_map(tight_part(f), frame), frame), frame)
    norm = g.rank
    if norm <= tol:
        raise ValueError(f"degenerate input: projected value at N is {norm}, "
                         "score vanishes and no cross-section point exists")
    h = g / norm
    w = section_weights(h, frame)
    return CrossSectionPoint(*w, source_tag=source_tag), h


def point_from_weights(w: CrossSectionPoint, frame: IngletonFrame,
                       tol: float = 1e-6) -> SetFunction:
    """Convex combination of the tetrahedron vertices with the given weights."""
    if abs(w.weight_sum - 1.0) > tol:
        raise ValueError(f"weights sum to {w.weight_sum!r}, expected 1")
    alpha, beta, gamma, delta_v = tetra_vertices(frame)
    vals = (w.alpha_w * alpha.values + w.beta_w * beta.values
            + w.gamma_w * gamma.values + w.delta_w * delta_v.values)
    return SetFunction(frame.ground, vals)


# --- diagnostics ---------------------------------------------------------------

def e_face_margins(h: SetFunction, frame: IngletonFrame) -> dict[str, float]:
    """The five functionals cutting out the distinguished face: all zero on it.

    delta(ij|k), delta(ij|l), delta(kl|i), delta(kl|j) and delta(kl|ij).
    """
    _require_frame_ground(h, frame)
    i, j, k, l = frame.roles
    return {
        "ij|k": delta_given(h, i, j, k),
        "ij|l": delta_given(h, i, j, l),
        "kl|i": delta_given(h, k, l, i),
        "kl|j": delta_given(h, k, l, j),
        "kl|ij": delta_given(h, k, l, (i, j)),
    }


def in_e_face(h: SetFunction, frame: IngletonFrame, tol: float = 1e-9) -> bool:
    """True iff all five face functionals vanish on h within tol."""
    return all(abs(v) <= tol for v in e_face_margins(h, frame).values())
