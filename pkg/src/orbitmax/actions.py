"""Group actions on inner product spaces and their orbit-structure invariants.

Two families are supported: weighted circle actions theta -> diag{e^(i k_j theta)}
on C^d, and finite subgroups of O(d) listed explicitly as matrices.  The
invariants computed here (stabilizer order, regular Voronoi complexity,
cohomogeneity, fixed subspace) feed the template-count rules in
:mod:`orbitmax.bank`.

C^d is identified with R^(2d) once and for all via interleaved (re, im)
coordinates, with inner product <z, x> = Re(z^* x); every module in this
package uses that single isometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = [
    "DimensionMismatch",
    "WeightedCircleAction",
    "FiniteGroupAction",
    "FixedSplit",
    "to_real",
    "to_complex",
    "stabilizer_order",
    "voronoi_complexity",
    "cohomogeneity",
    "is_regular",
    "fixed_split",
    "action_to_spec",
    "action_from_spec",
]

# Tolerance for validating that listed matrices form an orthogonal group.
GROUP_TOL = 1e-9


class DimensionMismatch(ValueError):
    """A point does not match the dimension of the action it is paired with."""


def to_real(z) -> np.ndarray:
    """Flatten a complex vector into interleaved (re, im) real coordinates."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def to_complex(r) -> np.ndarray:
    """Inverse of :func:`to_real`."""
    r = np.asarray(r, dtype=np.float64).ravel()
    if r.size % 2:
        raise ValueError(f"interleaved vector must have even length, got {r.size}")
    return r[0::2] + 1j * r[1::2]


def _gcd_all(values) -> int:
    return reduce(math.gcd, values)


@dataclass(frozen=True)
class WeightedCircleAction:
    """Circle action theta -> diag{e^(i k_j theta)} on C^d with integer weights.

    The induced real action on R^(2d) is orthogonal.  Actions with every
    weight zero are rejected at construction: the complexity and
    cohomogeneity formulas below all divide by quantities that vanish there.
    Zero weights mixed with nonzero ones are fine (they span the fixed
    subspace, see :func:`fixed_split`).
    """

    weights: tuple

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        if not ws:
            raise ValueError("a weighted circle action needs at least one weight")
        if all(w == 0 for w in ws):
            raise ValueError("trivial action: every weight is zero")
        object.__setattr__(self, "weights", ws)

    @property
    def dim_complex(self) -> int:
        return len(self.weights)

    @property
    def dim_real(self) -> int:
        return 2 * len(self.weights)

    def check_point(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.complex128))
        if x.shape != (self.dim_complex,):
            raise DimensionMismatch(
                f"point has shape {x.shape}, action lives on C^{self.dim_complex}"
            )
        return x

    def apply(self, theta: float, x) -> np.ndarray:
        """Rotate x by the group element with angle theta."""
        x = self.check_point(x)
        return np.exp(1j * theta * np.asarray(self.weights)) * x

    def tangent_at(self, x) -> np.ndarray:
        """d/dtheta of apply(theta, x) at theta = 0, i.e. (i k_j x_j)_j."""
        x = self.check_point(x)
        return 1j * np.asarray(self.weights) * x

    def element_matrix(self, theta: float) -> np.ndarray:
        """The real 2d x 2d matrix of the group element with angle theta."""
        d = self.dim_complex
        m = np.zeros((2 * d, 2 * d))
        for j, k in enumerate(self.weights):
            c, s = math.cos(k * theta), math.sin(k * theta)
            m[2 * j, 2 * j] = c
            m[2 * j, 2 * j + 1] = -s
            m[2 * j + 1, 2 * j] = s
            m[2 * j + 1, 2 * j + 1] = c
        return m

    def cyclic_subgroup(self, n: int) -> "FiniteGroupAction":
        """The finite subgroup {theta = 2 pi t / n} as explicit matrices."""
        if n < 1:
            raise ValueError("subgroup order must be positive")
        mats = [self.element_matrix(2.0 * math.pi * t / n) for t in range(n)]
        return FiniteGroupAction(np.asarray(mats))


@dataclass(frozen=True, eq=False)
class FiniteGroupAction:
    """Finite subgroup of O(d) given by an explicit element list.

    Construction validates, to within ``GROUP_TOL``, that every element is
    orthogonal, that the identity is present, and that the list is closed
    under products and inverses.
    """

    elements: np.ndarray

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=np.float64)
        if el.ndim != 3 or el.shape[1] != el.shape[2]:
            raise ValueError("elements must be an (m, d, d) array of square matrices")
        m, d, _ = el.shape
        if m < 1:
            raise ValueError("a finite action needs at least one element")
        eye = np.eye(d)
        ortho_err = np.abs(np.einsum("mji,mjk->mik", el, el) - eye).max()
        if ortho_err > GROUP_TOL:
            raise ValueError(f"elements are not orthogonal (max defect {ortho_err:.3g})")
        if not self._contains_all(el, eye[None]):
            raise ValueError("identity element missing")
        products = np.einsum("aij,bjk->abik", el, el).reshape(-1, d, d)
        if not self._contains_all(el, products):
            raise ValueError("element list is not closed under products")
        if not self._contains_all(el, el.transpose(0, 2, 1)):
            raise ValueError("element list is not closed under inverses")
        el.setflags(write=False)
        object.__setattr__(self, "elements", el)

    @staticmethod
    def _contains_all(el: np.ndarray, targets: np.ndarray) -> bool:
        for t in targets:
            if np.abs(el - t).max(axis=(1, 2)).min() > GROUP_TOL:
                return False
        return True

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def dim_real(self) -> int:
        return self.elements.shape[1]

    def check_point(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if x.shape != (self.dim_real,):
            raise DimensionMismatch(
                f"point has shape {x.shape}, action lives on R^{self.dim_real}"
            )
        return x

    def apply(self, index: int, x) -> np.ndarray:
        return self.elements[index] @ self.check_point(x)

    def stabilizer(self, x, zero_tol: float = GROUP_TOL) -> tuple:
        """Indices of the elements fixing x, entrywise within zero_tol*(1+|x|)."""
        x = self.check_point(x)
        tol = zero_tol * (1.0 + np.abs(x).max(initial=0.0))
        moved = np.abs(self.elements @ x - x).max(axis=1)
        return tuple(int(i) for i in np.nonzero(moved <= tol)[0])


def _circle_nonzero_weights(action: WeightedCircleAction) -> list:
    return [abs(w) for w in action.weights if w != 0]


def stabilizer_order(action: WeightedCircleAction, x, zero_tol: float | None = None):
    """Order of the stabilizer of x under a weighted circle action.

    e^(i theta) fixes x exactly when k_j theta = 0 mod 2 pi on every
    coordinate with x_j != 0, so the parameter stabilizer is the cyclic
    subgroup of order gcd{|k_j| : x_j != 0, k_j != 0}; dividing by the order
    of the action's kernel gcd{|k_j| : k_j != 0} gives the order inside the
    group itself.  Returns ``math.inf`` when every coordinate carrying a
    nonzero weight vanishes (the whole circle fixes x).

    Stabilizer order is discontinuous in x, so which entries count as zero
    is an explicit parameter; ``zero_tol`` defaults to 1e-9 * ||x||.
    """
    x = action.check_point(x)
    if zero_tol is None:
        zero_tol = 1e-9 * float(np.linalg.norm(x))
    elif zero_tol <= 0:
        raise ValueError("zero_tol must be positive")
    support = [abs(w) for w, xj in zip(action.weights, x) if w != 0 and abs(xj) > zero_tol]
    if not support:
        return math.inf
    g0 = _gcd_all(_circle_nonzero_weights(action))
    return _gcd_all(support) // g0


def voronoi_complexity(action) -> int:
    """Regular Voronoi complexity: the largest ratio |G_x| / |G_p| over
    nested stabilizers G_p <= G_x of regular points.

    For a weighted circle action all stabilizer orders are of the form
    gcd{|k_j| : j in S} / g0 over coordinate supports S, the generic
    stabilizer is trivial, and the maximum over supports is attained at a
    singleton, giving max_j |k_j| / g0.

    For a finite action every orbit is regular, and the ratio is maximized
    over an enumerated candidate set of stabilizers: the origin, one generic
    Gaussian sample, and each coordinate-subset indicator (all subsets for
    d <= 12, singletons beyond).  This is a heuristic, exact on the group
    families shipped here; it is validated against brute force in the tests.
    """
    if isinstance(action, WeightedCircleAction):
        nz = _circle_nonzero_weights(action)
        return max(nz) // _gcd_all(nz)
    if isinstance(action, FiniteGroupAction):
        return _voronoi_complexity_finite(action)
    raise TypeError(f"unsupported action type {type(action).__name__}")


def _voronoi_complexity_finite(action: FiniteGroupAction) -> int:
    d = action.dim_real
    candidates = [np.zeros(d), np.random.default_rng(0).standard_normal(d)]
    if d <= 12:
        for mask in range(1, 2 ** d):
            candidates.append(np.array([(mask >> j) & 1 for j in range(d)], dtype=float))
    else:
        candidates.extend(np.eye(d))
    stabs = {frozenset(action.stabilizer(p)) for p in candidates}
    best = 1
    for a in stabs:
        for b in stabs:
            if b <= a:
                best = max(best, len(a) // len(b))
    return best


def cohomogeneity(action) -> int:
    """Ambient dimension minus the maximal orbit dimension.

    Weighted circle actions are measured on their nontrivial part (the d'
    coordinates with nonzero weight): real dimension 2 d', maximal orbit
    dimension 1, so the value is 2 d' - 1.  Finite-group orbits have
    dimension 0, so the value is d.
    """
    if isinstance(action, WeightedCircleAction):
        d_nz = sum(1 for w in action.weights if w != 0)
        return 2 * d_nz - 1
    if isinstance(action, FiniteGroupAction):
        return action.dim_real
    raise TypeError(f"unsupported action type {type(action).__name__}")


def is_regular(action: WeightedCircleAction, x, zero_tol: float | None = None) -> bool:
    """Whether the orbit of x has the maximal dimension (1) for this action.

    True exactly when some coordinate with nonzero weight is itself nonzero;
    for all-nonzero weight vectors this reduces to x != 0.
    """
    x = action.check_point(x)
    if zero_tol is None:
        zero_tol = 1e-9 * float(np.linalg.norm(x))
    elif zero_tol <= 0:
        raise ValueError("zero_tol must be positive")
    return any(w != 0 and abs(xj) > zero_tol for w, xj in zip(action.weights, x))


@dataclass(frozen=True, eq=False)
class FixedSplit:
    """Orthogonal split C^d = F + V into the fixed subspace F (zero-weight
    coordinates) and its complement V carrying the reduced action."""

    action: WeightedCircleAction
    fixed_idx: tuple
    moving_idx: tuple
    reduced: WeightedCircleAction
    projector_fixed: np.ndarray
    projector_moving: np.ndarray

    @property
    def dim_fixed_real(self) -> int:
        return 2 * len(self.fixed_idx)

    def fixed_part(self, x) -> np.ndarray:
        """Coordinates of P_F x inside F, as interleaved reals."""
        x = self.action.check_point(x)
        return to_real(x[list(self.fixed_idx)])

    def restrict(self, x) -> np.ndarray:
        """P_V x expressed in the reduced action's complex coordinates."""
        x = self.action.check_point(x)
        return x[list(self.moving_idx)]


def fixed_split(action: WeightedCircleAction) -> FixedSplit:
    """Split off the coordinates the whole group fixes.

    P_F and P_V are orthogonal projectors on the real form with
    P_F + P_V = I; the reduced action carries exactly the nonzero weights.
    """
    fixed_idx = tuple(j for j, w in enumerate(action.weights) if w == 0)
    moving_idx = tuple(j for j, w in enumerate(action.weights) if w != 0)
    reduced = WeightedCircleAction(tuple(action.weights[j] for j in moving_idx))
    d = action.dim_complex
    pf = np.zeros((2 * d, 2 * d))
    for j in fixed_idx:
        pf[2 * j, 2 * j] = 1.0
        pf[2 * j + 1, 2 * j + 1] = 1.0
    pv = np.eye(2 * d) - pf
    return FixedSplit(action, fixed_idx, moving_idx, reduced, pf, pv)


def action_to_spec(action) -> dict:
    """JSON-ready description, inverse of :func:`action_from_spec`."""
    if isinstance(action, WeightedCircleAction):
        return {"kind": "circle", "weights": list(action.weights)}
    if isinstance(action, FiniteGroupAction):
        return {"kind": "finite", "matrices": action.elements.tolist()}
    raise TypeError(f"unsupported action type {type(action).__name__}")


def action_from_spec(spec: dict):
    """Build an action from {"kind": "circle", "weights": [...]} or
    {"kind": "finite", "matrices": [[[...]]]}, validating on construction."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("action spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "circle":
        return WeightedCircleAction(tuple(spec["weights"]))
    if kind == "finite":
        return FiniteGroupAction(np.asarray(spec["matrices"], dtype=np.float64))
    raise ValueError(f"unknown action kind {kind!r}")
