"""Generalized cosine-law kernel.

The cosine law for a spherical triangle with inner angles (x1, x2, x3) and
opposite side lengths (y1, y2, y3),

    cos(y_i) = (cos x_i + cos x_j cos x_k) / (sin x_j sin x_k),

stays meaningful as a formula even when the right-hand side leaves [-1, 1].
This module evaluates that formula, its Gram quantity and derivatives, the
dual (length -> angle) law, and the piecewise cosh/cos/-cosh scale that turns
an arbitrary real "cosine" back into a signed Moebius length.

Everything here is a pure function of its arguments; no state is kept.
"""

from __future__ import annotations

import math

import numpy as np

GRAM_SINGULAR_TOL = 1e-14

# Rounding slop absorbed when a cosine sits on the boundary of [-1, 1].
COSH_CLAMP_TOL = 1e-12


class DegenerateAnglesError(ValueError):
    """Some sin(x_j) vanishes, so the cosine-law quotient is undefined."""


class SingularGramError(ValueError):
    """The Gram quantity is at or below the noise floor; no derivative data."""


class CosineOutOfRangeError(ValueError):
    """A recovered cosine left [-1, 1] by more than the allowed tolerance."""


def _sines_or_raise(x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    s1, s2, s3 = math.sin(x1), math.sin(x2), math.sin(x3)
    if min(abs(s1), abs(s2), abs(s3)) < 1e-15:
        raise DegenerateAnglesError(
            f"sin vanishes on angle triple ({x1}, {x2}, {x3})"
        )
    return s1, s2, s3


def cosine_law_cos_lengths(x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    """Cosines of the three side lengths opposite the angles (x1, x2, x3).

    The values are not clipped: entries outside [-1, 1] indicate hyperbolic
    side behaviour and are exactly what moebius_scale_inv expects.
    """
    s1, s2, s3 = _sines_or_raise(x1, x2, x3)
    c1, c2, c3 = math.cos(x1), math.cos(x2), math.cos(x3)
    return (
        (c1 + c2 * c3) / (s2 * s3),
        (c2 + c3 * c1) / (s3 * s1),
        (c3 + c1 * c2) / (s1 * s2),
    )


def gram_quantity(x1: float, x2: float, x3: float) -> float:
    """1 - cos^2 x1 - cos^2 x2 - cos^2 x3 - 2 cos x1 cos x2 cos x3.

    Positive exactly on angle triples of genuine spherical triangles; zero on
    the Euclidean locus; negative otherwise.
    """
    c1, c2, c3 = math.cos(x1), math.cos(x2), math.cos(x3)
    return 1.0 - c1 * c1 - c2 * c2 - c3 * c3 - 2.0 * c1 * c2 * c3


def sine_law_products(x1: float, x2: float, x3: float) -> tuple[float, float, float]:
    """The three products sin(y_i) sin(x_j) sin(x_k), one per index rotation.

    Each equals the square root of gram_quantity, so all three agree; the
    triple return lets callers check that symmetry numerically.  Requires a
    spherical triple (every |cos y_i| <= 1).
    """
    s1, s2, s3 = _sines_or_raise(x1, x2, x3)
    cy = cosine_law_cos_lengths(x1, x2, x3)
    sy = []
    for c in cy:
        if abs(c) > 1.0 + COSH_CLAMP_TOL:
            raise CosineOutOfRangeError(f"non-spherical triple, cos length {c}")
        sy.append(math.sqrt(max(0.0, 1.0 - min(1.0, abs(c)) ** 2)))
    return (sy[0] * s2 * s3, sy[1] * s3 * s1, sy[2] * s1 * s2)


def cosine_law_jacobian(x1: float, x2: float, x3: float) -> np.ndarray:
    """3x3 matrix of dy_i/dx_j for the spherical angle->length map.

    Diagonal entries are sin(x_i)/A with A = sqrt(gram_quantity); the (i, j)
    entry carries an extra factor cos(y_k) for the remaining index k.
    """
    g = gram_quantity(x1, x2, x3)
    if g <= GRAM_SINGULAR_TOL:
        raise SingularGramError(f"gram quantity {g} at or below tolerance")
    a = math.sqrt(g)
    s = (math.sin(x1), math.sin(x2), math.sin(x3))
    cy = cosine_law_cos_lengths(x1, x2, x3)
    jac = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            if i == j:
                jac[i, j] = s[i] / a
            else:
                k = 3 - i - j
                jac[i, j] = s[i] / a * cy[k]
    return jac


def dual_cosine_law(
    cy1: float, cy2: float, cy3: float, tol: float = 1e-9
) -> tuple[float, float, float]:
    """Recover the inner angles of a spherical triangle from side cosines.

    cos(x_i) = (cos y_i - cos y_j cos y_k) / (sin y_j sin y_k).  Inputs must
    be cosines of genuine spherical side lengths in (0, pi).
    """
    cy = (cy1, cy2, cy3)
    sy = []
    for c in cy:
        if abs(c) > 1.0:
            raise CosineOutOfRangeError(f"side cosine {c} outside [-1, 1]")
        sy.append(math.sqrt(1.0 - c * c))
    if min(sy) < 1e-15:
        raise DegenerateAnglesError("sin of a side length vanishes")
    out = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        cx = (cy[i] - cy[j] * cy[k]) / (sy[j] * sy[k])
        if abs(cx) > 1.0 + tol:
            raise CosineOutOfRangeError(f"recovered cosine {cx} outside [-1, 1]")
        out.append(math.acos(min(1.0, max(-1.0, cx))))
    return tuple(out)


def _arccosh(c: float) -> float:
    # log form keeps continuity at c = 1 under rounding.
    cc = max(c, 1.0)
    return math.log(cc + math.sqrt(cc * cc - 1.0))


def moebius_scale(z: float) -> float:
    """The C^1 decreasing bijection R -> R gluing cosh, cos and -cosh.

    Equals cosh(z) for z <= 0, cos(z) on [0, pi], -cosh(z - pi) for z >= pi.
    Its inverse converts a raw cosine-law value into a signed Moebius length.
    """
    if z <= 0.0:
        return math.cosh(z)
    if z >= math.pi:
        return -math.cosh(z - math.pi)
    return math.cos(z)


def moebius_scale_inv(c: float) -> float:
    """Inverse of moebius_scale: arccos on [-1, 1], cosh branches outside."""
    if c >= 1.0:
        return -_arccosh(c)
    if c <= -1.0:
        return math.pi + _arccosh(-c)
    return math.acos(c)


def moebius_scale_inv_vec(c: np.ndarray) -> np.ndarray:
    """Vectorized moebius_scale_inv over an arbitrary ndarray."""
    c = np.asarray(c, dtype=float)
    high = np.maximum(c, 1.0)
    low = np.maximum(-c, 1.0)
    out = np.arccos(np.clip(c, -1.0, 1.0))
    out = np.where(c >= 1.0, -np.arccosh(high), out)
    out = np.where(c <= -1.0, math.pi + np.arccosh(low), out)
    return out
