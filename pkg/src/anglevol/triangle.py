"""Two-dimensional angle structures: triangles with prescribed angles in (0, pi).

Every point of the open box (0, pi)^3 is a valid structure.  Each edge gets a
signed Moebius length through the cosine law and the moebius scale; the sign
pattern of the lengths classifies the triangle as Euclidean, hyperbolic or
spherical, and the flip involutions move between classical and non-classical
representatives.
"""

from __future__ import annotations

import enum
import math

from . import trig

# Half-width of the Euclidean band in length space.  Double-precision noise
# in a cosine near +-1 blows up to sqrt(2 * eps) ~ 2e-8 in the length, so the
# band must sit well above that.
TYPE_TOL = 1e-7


class TriangleType(enum.Enum):
    EUCLIDEAN = "Euclidean"
    HYPERBOLIC = "Hyperbolic"
    SPHERICAL = "Spherical"


class TypeDisagreementError(RuntimeError):
    """Edges voted for conflicting types; indicates a numerical fault."""


class RecoveryOutOfRangeError(ValueError):
    """Lengths do not come from a triangle of the requested type."""


def in_AS2(angles: tuple[float, float, float]) -> bool:
    return all(0.0 < a < math.pi for a in angles)


def edge_lengths2(angles: tuple[float, float, float]) -> tuple[float, float, float]:
    """Signed Moebius lengths of the three edges, opposite-angle indexed.

    On a classical triangle of curvature lam in {1, 0, -1} the result is
    lam times the classical edge length.
    """
    c = trig.cosine_law_cos_lengths(*angles)
    return tuple(trig.moebius_scale_inv(ci) for ci in c)


def _edge_type(z: float, tol: float) -> TriangleType:
    if abs(z) < tol or abs(z - math.pi) < tol:
        return TriangleType.EUCLIDEAN
    if 0.0 < z < math.pi:
        return TriangleType.SPHERICAL
    return TriangleType.HYPERBOLIC


def classify2(
    angles: tuple[float, float, float], tol: float = TYPE_TOL
) -> TriangleType:
    """Type of the triangle, read from edge 1 and cross-checked on 2 and 3."""
    z = edge_lengths2(angles)
    types = [_edge_type(zi, tol) for zi in z]
    if types[1] is not types[0] or types[2] is not types[0]:
        raise TypeDisagreementError(
            f"edge lengths {z} classify inconsistently as {[t.value for t in types]}"
        )
    return types[0]


def flip2(angles: tuple[float, float, float], i: int) -> tuple[float, float, float]:
    """Flip keeping vertex i: complements the other two angles to pi.

    An involution; edge i keeps its length while the other two lengths are
    complemented to pi.
    """
    return tuple(
        a if j == i else math.pi - a for j, a in enumerate(angles)
    )


def is_classical2(angles: tuple[float, float, float], tol: float = TYPE_TOL) -> bool:
    """False exactly when some edge length reaches pi or beyond."""
    z = edge_lengths2(angles)
    return all(zi < math.pi - tol for zi in z)


def _dual_sine(z: float, ttype: TriangleType) -> float:
    # Magnitude of sin at the scaled length; hyperbolic edges contribute an
    # imaginary sine whose i-factors cancel pairwise (see recover_angles2).
    if ttype is TriangleType.SPHERICAL:
        return math.sin(z)
    if z <= 0.0:
        return math.sinh(-z)
    return math.sinh(z - math.pi)


def recover_angles2(
    z1: float, z2: float, z3: float, ttype: TriangleType
) -> tuple[float, float, float]:
    """Invert edge_lengths2 for a non-Euclidean type.

    Applies the dual cosine law to the scaled lengths.  For hyperbolic type
    the two sines in each denominator are imaginary, so their product flips
    sign; the sign constant below accounts for that.
    """
    if ttype is TriangleType.EUCLIDEAN:
        raise RecoveryOutOfRangeError("Euclidean lengths do not determine angles")
    z = (z1, z2, z3)
    if ttype is TriangleType.SPHERICAL and not all(0.0 < zi < math.pi for zi in z):
        raise RecoveryOutOfRangeError(f"lengths {z} are not spherical")
    if ttype is TriangleType.HYPERBOLIC and any(0.0 <= zi <= math.pi for zi in z):
        raise RecoveryOutOfRangeError(f"lengths {z} are not hyperbolic")
    f = [trig.moebius_scale(zi) for zi in z]
    s = [_dual_sine(zi, ttype) for zi in z]
    sign = 1.0 if ttype is TriangleType.SPHERICAL else -1.0
    angles = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        denom = sign * s[j] * s[k]
        if abs(denom) < 1e-15:
            raise RecoveryOutOfRangeError(f"degenerate sine at lengths {z}")
        cx = (f[i] - f[j] * f[k]) / denom
        if abs(cx) > 1.0 + 1e-9:
            raise RecoveryOutOfRangeError(f"recovered cosine {cx} outside [-1, 1]")
        angles.append(math.acos(min(1.0, max(-1.0, cx))))
    return tuple(angles)
