"""Angle structures on a single tetrahedron.

A structure is a vector of six dihedral angles indexed by vertex pairs in the
slot order (01, 02, 03, 12, 13, 23); it lies in the open polytope where each
vertex's three angles are the inner angles of a spherical triangle.  From the
angles we derive face angles, signed Moebius edge lengths, the generalized
volume as a line integral of the Schlaefli form from the regular Euclidean
base point, flips, and the classical/flipped classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import trig
from .quadrature import integrate_adaptive

SLOT_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_TO_SLOT = {p: s for s, p in enumerate(SLOT_PAIRS)}
PAIR_TO_SLOT.update({(b, a): s for (a, b), s in list(PAIR_TO_SLOT.items())})

# Slots of the three edges meeting each vertex.
VERTEX_SLOTS: tuple[tuple[int, int, int], ...] = ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5))

# Slot of the edge disjoint from a given slot's edge.
OPPOSITE_SLOT: tuple[int, ...] = (5, 4, 3, 2, 1, 0)

BASE_ANGLE = math.acos(1.0 / 3.0)  # dihedral angle of the regular Euclidean tet
BASE_POINT = np.full(6, BASE_ANGLE)

# Relative agreement required between the two face computations of one edge
# cosine.  Compared on cosines, where the check is well conditioned.
COMPAT_RTOL = 5e-12

TYPE_TOL = 1e-7


class NonSphericalVertexError(ValueError):
    """A vertex triple is not a spherical triangle; input left the polytope."""


class CompatibilityViolationError(RuntimeError):
    """The two faces at an edge disagreed on its length; numerical fault."""


class UnclassifiablePatternError(RuntimeError):
    """Edge-length signs match no classical or flipped pattern."""


def edge_slot(a: int, b: int) -> int:
    return PAIR_TO_SLOT[(a, b)]


def in_AS3(x) -> tuple[bool, float]:
    """Membership test with slack: strict box bounds plus, at every vertex,
    angle sum > pi and each pairwise sum minus the third angle < pi.

    Returns (inside, minimum margin over all constraints).
    """
    x = np.asarray(x, dtype=float)
    margins = [float(np.min(x)), float(np.min(math.pi - x))]
    for v in range(4):
        a, b, c = (x[s] for s in VERTEX_SLOTS[v])
        margins.append(a + b + c - math.pi)
        margins.append(math.pi - (a + b - c))
        margins.append(math.pi - (b + c - a))
        margins.append(math.pi - (c + a - b))
    slack = float(min(margins))
    return slack > 0.0, slack


def _face_cosines(x: np.ndarray) -> np.ndarray:
    """Cosines of the twelve face angles for a batch of structures.

    x has shape (n, 6); the result fc has shape (n, 4, 4) with fc[:, i, l] the
    cosine of the angle at vertex i inside the face not containing vertex l.
    """
    c = np.cos(x)
    s = np.sin(x)
    fc = np.empty((x.shape[0], 4, 4))
    for i in range(4):
        for l in range(4):
            if i == l:
                fc[:, i, l] = np.nan
                continue
            j, k = (m for m in range(4) if m not in (i, l))
            sij, sik = s[:, edge_slot(i, j)], s[:, edge_slot(i, k)]
            fc[:, i, l] = (c[:, edge_slot(i, l)] + c[:, edge_slot(i, j)] * c[:, edge_slot(i, k)]) / (sij * sik)
    return fc


def face_angles(x) -> np.ndarray:
    """The twelve face angles as a 4x4 array: entry (i, l) is the angle at
    vertex i in the face opposite vertex l (nan on the diagonal).

    Each is the spherical length opposite the dihedral angle x_il in the
    vertex-i triangle, and lies in (0, pi) on the angle-structure polytope.
    """
    x = np.asarray(x, dtype=float).reshape(1, 6)
    fc = _face_cosines(x)[0]
    bad = np.abs(fc) > 1.0 + 1e-9
    bad &= ~np.isnan(fc)
    if np.any(bad):
        raise NonSphericalVertexError(
            f"face-angle cosine outside [-1, 1]: {fc[bad]}"
        )
    return np.arccos(np.clip(fc, -1.0, 1.0))


def _edge_cosines(x: np.ndarray, rtol: float = COMPAT_RTOL) -> np.ndarray:
    """Cosine-scale edge data per slot, checked across both adjacent faces."""
    fc = _face_cosines(x)
    fs = np.sqrt(np.clip(1.0 - fc * fc, 0.0, None))
    if np.any(fs[~np.isnan(fc)] < 1e-15):
        raise NonSphericalVertexError("degenerate face angle (sin = 0)")
    out = np.empty((x.shape[0], 6))
    for slot, (a, b) in enumerate(SLOT_PAIRS):
        cd = [m for m in range(4) if m not in (a, b)]
        vals = []
        for other, via in ((cd[1], cd[0]), (cd[0], cd[1])):
            num = fc[:, other, via] + fc[:, a, via] * fc[:, b, via]
            vals.append(num / (fs[:, a, via] * fs[:, b, via]))
        scale = np.maximum(1.0, np.maximum(np.abs(vals[0]), np.abs(vals[1])))
        mismatch = np.abs(vals[0] - vals[1]) / scale
        worst = float(np.max(mismatch))
        if worst > rtol:
            raise CompatibilityViolationError(
                f"edge {SLOT_PAIRS[slot]} cosines disagree across faces by {worst}"
            )
        out[:, slot] = 0.5 * (vals[0] + vals[1])
    return out


def _lengths_batch(x: np.ndarray) -> np.ndarray:
    return trig.moebius_scale_inv_vec(_edge_cosines(x))


def edge_lengths3(x) -> np.ndarray:
    """Signed Moebius length of each edge, computed through both adjacent
    faces and cross-checked.

    On a classical tetrahedron of curvature lam this equals lam times the
    classical edge length.
    """
    x = np.asarray(x, dtype=float).reshape(1, 6)
    return _lengths_batch(x)[0]


def schlafli_segment_integral(
    x0, x1, tol: float = 1e-10, max_intervals: int = 2**14
) -> float:
    """Line integral of (1/2) sum l_ij dx_ij along the straight segment."""
    x0 = np.asarray(x0, dtype=float)
    d = np.asarray(x1, dtype=float) - x0
    if not np.any(d):
        return 0.0

    def integrand(t: np.ndarray) -> np.ndarray:
        pts = x0[None, :] + t[:, None] * d[None, :]
        return 0.5 * (_lengths_batch(pts) @ d)

    return integrate_adaptive(integrand, 0.0, 1.0, tol=tol, max_intervals=max_intervals)


def tet_volume(x, tol: float = 1e-10, max_intervals: int = 2**14) -> float:
    """Generalized volume: integral of the Schlaefli form from the regular
    Euclidean base point, where the volume is zero.

    Path independence (the form is closed on the convex polytope) makes the
    straight segment a valid and cheapest choice.  Classical spherical and
    hyperbolic structures get their classical volume; Euclidean ones get 0.
    """
    return schlafli_segment_integral(BASE_POINT, x, tol=tol, max_intervals=max_intervals)


def tet_volume_gradient(x) -> np.ndarray:
    """Gradient of tet_volume: half the Moebius edge length per slot."""
    return 0.5 * edge_lengths3(x)


def flip3(x, i: int) -> np.ndarray:
    """Flip keeping vertex i: complements the three angles on the opposite
    face.  An involution preserving the polytope; the three edge lengths at
    vertex i are complemented to pi, the other three are unchanged.
    """
    x = np.asarray(x, dtype=float)
    out = x.copy()
    for slot, pair in enumerate(SLOT_PAIRS):
        if i not in pair:
            out[slot] = math.pi - x[slot]
    return out


class TetKind(enum.Enum):
    CLASSICAL_E = "ClassicalE"
    CLASSICAL_H = "ClassicalH"
    CLASSICAL_S = "ClassicalS"
    SINGLE_FLIP = "SingleFlip"
    DOUBLE_FLIP = "DoubleFlip"


@dataclass(frozen=True)
class TetClass:
    kind: TetKind
    vertices: tuple[int, ...] = ()

    @property
    def classical(self) -> bool:
        return self.kind in (TetKind.CLASSICAL_E, TetKind.CLASSICAL_H, TetKind.CLASSICAL_S)

    def __str__(self) -> str:
        if self.vertices:
            return f"{self.kind.value}{self.vertices}"
        return self.kind.value


def classify3(x, tol: float = TYPE_TOL) -> TetClass:
    """Classify a structure by the sign pattern of its edge lengths.

    Classical spherical: all lengths in (0, pi).  Classical Euclidean /
    hyperbolic: all lengths zero / nonpositive.  A single flip leaves the
    three edges at one vertex with length >= pi; a double flip leaves four
    edges >= pi (those joining the two flipped vertices to the others).
    """
    lengths = edge_lengths3(x)
    long_ = {s for s in range(6) if lengths[s] >= math.pi - tol}
    nonpos = {s for s in range(6) if lengths[s] <= tol}
    mid = set(range(6)) - long_ - nonpos

    if not long_:
        if len(mid) == 6:
            return TetClass(TetKind.CLASSICAL_S)
        if len(nonpos) == 6:
            if np.all(np.abs(lengths) <= tol):
                return TetClass(TetKind.CLASSICAL_E)
            return TetClass(TetKind.CLASSICAL_H)
    elif not mid:
        for v in range(4):
            if long_ == set(VERTEX_SLOTS[v]):
                return TetClass(TetKind.SINGLE_FLIP, (v,))
        for slot in range(3):
            if long_ == set(range(6)) - {slot, OPPOSITE_SLOT[slot]}:
                return TetClass(TetKind.DOUBLE_FLIP, SLOT_PAIRS[slot])
    raise UnclassifiablePatternError(
        f"edge lengths {lengths} match no classification pattern at tol {tol}"
    )


def opposite_pair_angle_sums(x) -> tuple[float, float, float]:
    """Angle sums over the three ways of choosing two opposite-edge pairs.

    On classical Euclidean and hyperbolic tetrahedra all three sums are below
    2 pi; at a double flip the sum over the four long edges exceeds 2 pi.
    """
    x = np.asarray(x, dtype=float)
    pair_sums = [x[s] + x[OPPOSITE_SLOT[s]] for s in range(3)]
    return (
        pair_sums[0] + pair_sums[1],
        pair_sums[0] + pair_sums[2],
        pair_sums[1] + pair_sums[2],
    )
