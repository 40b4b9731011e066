"""Linear information inequalities as data, plus cross-section halfspaces.

Sign convention: every stored inequality means "evaluates to >= 0 on entropic
points", so positive margins read as satisfied-by-margin-m.  Sources using
the polar-cone convention (<= 0) must be negated on load.

Two shapes coexist:

* :class:`LinearInequality`, a coefficient vector over nonempty subsets,
  evaluated against a :class:`~entropy_toolkit.core.SetFunction`;
* :class:`CrossSectionHalfspace`, the same constraint folded into the
  tetrahedron weights (alpha, beta, gamma, delta) of the symmetrized
  cross-section.

Built-ins cover the symmetrized Zhang-Yeung inequality and the one-parameter
DFZ family; anything else comes from user-supplied files, never from invented
coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import SetFunction
from .frame import IngletonFrame, stv_coefficients

BALANCE_TOL = 1e-12


@dataclass(frozen=True)
class LinearInequality:
    """A named coefficient vector over nonempty subsets, valid as >= 0 on
    entropic points (for genuine inequalities; arbitrary functionals may also
    be carried in this shape for diagnostics)."""

    name: str
    coefficients: dict[frozenset, float]

    def __init__(self, name: str, coefficients: Mapping):
        clean: dict[frozenset, float] = {}
        for key, c in coefficients.items():
            fs = frozenset(key)
            if not fs:
                raise ValueError("coefficient on the empty set is not allowed")
            c = float(c)
            if c != 0.0:
                clean[fs] = clean.get(fs, 0.0) + c
        clean = {k: v for k, v in clean.items() if v != 0.0}
        if not clean:
            raise ValueError(f"inequality {name!r} has no nonzero coefficient")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "coefficients", clean)

    def elements(self) -> frozenset:
        return frozenset().union(*self.coefficients)


def evaluate(ineq: LinearInequality, h: SetFunction) -> float:
    """Scalar product of the coefficient vector with h.

    A value >= -tol signals consistency with the inequality.  Raises if some
    coefficient key mentions a label outside h's ground set.
    """
    total = 0.0
    for key, c in ineq.coefficients.items():
        total += c * h.values[h.ground.mask(tuple(key))]
    return float(total)


def is_balanced(ineq: LinearInequality, tol: float = BALANCE_TOL) -> bool:
    """True iff for every element the coefficient sum over subsets containing
    it vanishes; balanced functionals annihilate modular functions."""
    for elem in ineq.elements():
        s = sum(c for key, c in ineq.coefficients.items() if elem in key)
        if abs(s) > tol:
            return False
    return True


@dataclass(frozen=True)
class CrossSectionHalfspace:
    """Constraint a*alpha + b*beta + c*gamma + d*delta >= 0 on section weights."""

    name: str
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.a == self.b == self.c == self.d == 0.0:
            raise ValueError(f"halfspace {self.name!r} has all-zero coefficients")

    @property
    def abcd(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def margin(self, weights: Sequence[float]) -> float:
        aw, bw, gw, dw = weights
        return self.a * aw + self.b * bw + self.c * gw + self.d * dw


# --- built-in functionals and inequalities ------------------------------------

def _delta_coeffs(a: str, b: str, given: Iterable[str] = ()) -> dict[frozenset, float]:
    """Coefficients of the conditional functional delta(ab|L) over subsets."""
    L = frozenset(given)
    out: dict[frozenset, float] = {}
    for key, c in [(L | {a}, 1.0), (L | {b}, 1.0), (L | {a, b}, -1.0), (L, -1.0)]:
        if key:
            out[frozenset(key)] = out.get(frozenset(key), 0.0) + c
    return out


def _merge(*parts: Mapping) -> dict[frozenset, float]:
    out: dict[frozenset, float] = {}
    for part in parts:
        for key, c in part.items():
            out[key] = out.get(key, 0.0) + c
    return {k: v for k, v in out.items() if v != 0.0}


def _scale(coeffs: Mapping, factor: float) -> dict[frozenset, float]:
    return {k: factor * v for k, v in coeffs.items()}


def stv_functional(frame: IngletonFrame) -> LinearInequality:
    """The Ingleton functional as a coefficient vector.

    Not a valid information inequality (entropic points can make it
    negative); exposed for balancedness checks and diagnostics.
    """
    g = frame.ground
    coeffs = {frozenset(g.labels_of(m)): c for m, c in stv_coefficients(frame).items()}
    return LinearInequality("ingleton-stv", coeffs)


def symmetrized_zy(frame: IngletonFrame) -> LinearInequality:
    """Symmetrized Zhang-Yeung inequality, valid >= 0 on entropic points.

    2 stv + [delta(ik|l) + delta(il|k) + delta(kl|i)]
          + [delta(jk|l) + delta(jl|k) + delta(kl|j)].
    In section weights it reads beta + delta >= alpha / 2.
    """
    i, j, k, l = frame.roles
    coeffs = _merge(
        _scale(stv_functional(frame).coefficients, 2.0),
        _delta_coeffs(i, k, (l,)), _delta_coeffs(i, l, (k,)), _delta_coeffs(k, l, (i,)),
        _delta_coeffs(j, k, (l,)), _delta_coeffs(j, l, (k,)), _delta_coeffs(k, l, (j,)),
    )
    return LinearInequality("symmetrized-zhang-yeung", coeffs)


def dfz_linear(s: int, frame: IngletonFrame) -> LinearInequality:
    """Unsymmetrized member s of the DFZ sequence, as a full coefficient vector.

    (2^s - 1) stv + delta(kl|i) + s 2^(s-1) [delta(ik|l) + delta(il|k)]
    + ((s-2) 2^(s-1) + 1) [delta(jk|l) + delta(jl|k)] >= 0 on entropic points.
    s = 1 is the Zhang-Yeung inequality.
    """
    _check_dfz_s(s)
    i, j, k, l = frame.roles
    half = 2 ** (s - 1)
    coeffs = _merge(
        _scale(stv_functional(frame).coefficients, float(2 ** s - 1)),
        _delta_coeffs(k, l, (i,)),
        _scale(_merge(_delta_coeffs(i, k, (l,)), _delta_coeffs(i, l, (k,))), float(s * half)),
        _scale(_merge(_delta_coeffs(j, k, (l,)), _delta_coeffs(j, l, (k,))),
               float((s - 2) * half + 1)),
    )
    return LinearInequality(f"dfz-linear-s{s}", coeffs)


def _check_dfz_s(s: int) -> None:
    if not isinstance(s, int) or not 1 <= s <= 20:
        raise ValueError(f"DFZ parameter s must be an integer in 1..20, got {s!r}")


def dfz_halfspace(s: int) -> CrossSectionHalfspace:
    """Member s of the DFZ family on section weights.

    beta + ((s-1) 2^s + 1) delta >= (2^s - 1)/2 * alpha.  At s = 1 this is
    exactly the symmetrized Zhang-Yeung halfspace.
    """
    _check_dfz_s(s)
    return CrossSectionHalfspace(
        name=f"dfz-s{s}",
        a=-(2 ** s - 1) / 2.0,
        b=1.0,
        c=0.0,
        d=float((s - 1) * 2 ** s + 1),
    )


def symmetrized_zy_halfspace() -> CrossSectionHalfspace:
    """Symmetrized Zhang-Yeung constraint beta + delta >= alpha / 2."""
    hs = dfz_halfspace(1)
    return CrossSectionHalfspace("symmetrized-zhang-yeung", hs.a, hs.b, hs.c, hs.d)


def default_halfspace_bank(max_s: int = 6) -> list[CrossSectionHalfspace]:
    """The DFZ halfspaces for s = 1..max_s (s = 1 being symmetrized ZY)."""
    _check_dfz_s(max_s)
    return [dfz_halfspace(s) for s in range(1, max_s + 1)]


# --- point checking -------------------------------------------------------------

@dataclass(frozen=True)
class PointCheckReport:
    """Margins of one weight quadruple against a halfspace bank."""

    satisfied: tuple[tuple[str, float], ...]
    violated: tuple[tuple[str, float], ...]
    tol: float

    @property
    def all_satisfied(self) -> bool:
        return not self.violated


def check_point(weights, bank: Sequence[CrossSectionHalfspace],
                tol: float = 1e-9) -> PointCheckReport:
    """Evaluate every halfspace at the given weights; margin < -tol is violated."""
    w = tuple(weights.as_tuple() if hasattr(weights, "as_tuple") else weights)
    if len(w) != 4:
        raise ValueError(f"need a weight quadruple, got {w!r}")
    if abs(sum(w) - 1.0) > 1e-6:
        raise ValueError(f"weights sum to {sum(w)!r}, expected 1")
    sat, vio = [], []
    for hs in bank:
        m = hs.margin(w)
        (sat if m >= -tol else vio).append((hs.name, m))
    return PointCheckReport(satisfied=tuple(sat), violated=tuple(vio), tol=tol)


# --- wire formats ----------------------------------------------------------------
#
# LinearInequality JSON:      {"name": ..., "coefficients": {"ik": 1.0, ...}}
# CrossSectionHalfspace JSON: {"name": ..., "abcd": [a, b, c, d]}
# A file may hold one object or a list of them; labels inside coefficient keys
# must be single characters.

def inequality_to_json(ineq: LinearInequality) -> dict:
    keys = {"".join(sorted(k)): v for k, v in ineq.coefficients.items()}
    return {"name": ineq.name, "coefficients": dict(sorted(keys.items()))}


def inequality_from_json(data: dict) -> LinearInequality:
    try:
        name = data["name"]
        coeffs = {frozenset(key): float(v) for key, v in data["coefficients"].items()}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed inequality document: {exc}") from exc
    return LinearInequality(name, coeffs)


def halfspace_to_json(hs: CrossSectionHalfspace) -> dict:
    return {"name": hs.name, "abcd": list(hs.abcd)}


def halfspace_from_json(data: dict) -> CrossSectionHalfspace:
    try:
        a, b, c, d = (float(x) for x in data["abcd"])
        return CrossSectionHalfspace(data["name"], a, b, c, d)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed halfspace document: {exc}") from exc


def load_inequality_file(path) -> list[LinearInequality | CrossSectionHalfspace]:
    """Load a JSON file holding inequalities and/or halfspaces (object or list)."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data]
    out: list[LinearInequality | CrossSectionHalfspace] = []
    for item in data:
        if "abcd" in item:
            out.append(halfspace_from_json(item))
        elif "coefficients" in item:
            out.append(inequality_from_json(item))
        else:
            raise ValueError(f"entry is neither inequality nor halfspace: {item}")
    return out
