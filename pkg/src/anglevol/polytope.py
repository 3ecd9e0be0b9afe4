"""The moduli polytope of angle assignments on a triangulation.

Variables are the 6 * n_tets dihedral angles in tet-major slot order.  The
polytope is cut out by one linear equality per edge class (angle sum 2 pi)
and, per tetrahedron, the strict inequalities of the single-tet polytope:
4 vertex-sum rows, 12 vertex-difference rows and 12 box rows.  Feasibility
is decided by maximizing the uniform slack with a dense two-phase simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tetra import SLOT_PAIRS, VERTEX_SLOTS
from .triangulation import Triangulation


class LPNumericalFailureError(RuntimeError):
    """Simplex exceeded its pivot budget."""


@dataclass
class ModuliPolytope:
    """Equalities eq @ x = eq_rhs and strict inequalities ineq @ x > ineq_rhs."""

    eq: np.ndarray
    eq_rhs: np.ndarray
    ineq: np.ndarray
    ineq_rhs: np.ndarray

    def __post_init__(self):
        self._reduced_eq = None

    @property
    def n_vars(self) -> int:
        return self.eq.shape[1]

    def min_slack(self, x) -> float:
        return float(np.min(self.ineq @ np.asarray(x, dtype=float) - self.ineq_rhs))

    def equality_residual(self, x) -> float:
        return float(np.max(np.abs(self.eq @ np.asarray(x, dtype=float) - self.eq_rhs)))


def build_polytope(tri: Triangulation) -> ModuliPolytope:
    """Assemble the constraint matrices in the documented slot order."""
    n = tri.n_tets
    nv = 6 * n
    eq = np.zeros((len(tri.edge_classes), nv))
    for ec in tri.edge_classes:
        for tet, pair in ec.members:
            eq[ec.index, 6 * tet + SLOT_PAIRS.index(pair)] += 1.0
    eq_rhs = np.full(len(tri.edge_classes), 2.0 * math.pi)

    rows = []
    rhs = []
    for t in range(n):
        base = 6 * t
        for v in range(4):
            slots = [base + s for s in VERTEX_SLOTS[v]]
            row = np.zeros(nv)
            row[slots] = 1.0
            rows.append(row)
            rhs.append(math.pi)
            for s_plus in slots:
                row = np.zeros(nv)
                row[slots] = -1.0
                row[s_plus] = 1.0
                rows.append(row)
                rhs.append(-math.pi)
        for s in range(6):
            row = np.zeros(nv)
            row[base + s] = 1.0
            rows.append(row)
            rhs.append(0.0)
            row = np.zeros(nv)
            row[base + s] = -1.0
            rows.append(row)
            rhs.append(-math.pi)
    return ModuliPolytope(eq, eq_rhs, np.array(rows), np.array(rhs))


# ---------------------------------------------------------------------------
# dense two-phase simplex (minimize c z subject to A z = b, z >= 0)

_PIVOT_TOL = 1e-10


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def _run_simplex(T, basis, cost, allowed, max_pivots):
    """Tableau iterations for min cost over columns in `allowed`.

    cost is the reduced-cost row (updated in place alongside T).  Uses the
    most-negative entering rule, switching to Bland's smallest-index rule
    after a stall to guarantee termination.
    """
    m = T.shape[0]
    pivots = 0
    stalled = 0
    bland = False
    best = math.inf
    while True:
        red = cost[:-1]
        candidates = np.where((red < -_PIVOT_TOL) & allowed)[0]
        if candidates.size == 0:
            return
        col = int(candidates[0]) if bland else int(candidates[np.argmin(red[candidates])])
        ratios = np.full(m, math.inf)
        pos = T[:, col] > _PIVOT_TOL
        ratios[pos] = T[pos, -1] / T[pos, col]
        if not np.any(pos):
            raise LPNumericalFailureError("unbounded direction in simplex")
        row = int(np.argmin(ratios))
        if bland:
            # smallest basis index among ties, per Bland's rule
            tie = np.where(np.isclose(ratios, ratios[row], rtol=0, atol=1e-12))[0]
            row = int(tie[np.argmin(np.asarray(basis)[tie])])
        _pivot(T, basis, row, col)
        cost -= cost[col] * T[row]
        pivots += 1
        if cost[-1] < best - 1e-12:
            best = cost[-1]
            stalled = 0
        else:
            stalled += 1
            if stalled > 2 * m + 20:
                bland = True
        if pivots > max_pivots:
            raise LPNumericalFailureError(f"pivot budget {max_pivots} exceeded")


def solve_lp(A, b, c):
    """Minimize c z subject to A z = b, z >= 0.  Returns z or None if the
    constraints are infeasible."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    A = A.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # phase 1: artificial basis
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    cost = np.zeros(n + m + 1)
    cost[n:n + m] = 1.0
    for i in range(m):
        cost -= T[i]
    allowed = np.ones(n + m, dtype=bool)
    max_pivots = 500 * (m + n) + 1000
    _run_simplex(T, basis, cost, allowed, max_pivots)
    if -cost[-1] > 1e-8:
        return None

    # drive artificials out of the basis; drop rows that prove redundant
    keep_rows = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n:
            sub = np.abs(T[i, :n])
            j = int(np.argmax(sub))
            if sub[j] > _PIVOT_TOL:
                _pivot(T, basis, i, j)
            else:
                keep_rows[i] = False
    T = T[keep_rows][:, list(range(n)) + [n + m]]
    basis = [bv for bv, k in zip(basis, keep_rows) if k]

    # phase 2
    cost = np.zeros(n + 1)
    cost[:n] = c
    for i, bv in enumerate(basis):
        cost -= cost[bv] * T[i]
    allowed = np.ones(n, dtype=bool)
    _run_simplex(T, basis, cost, allowed, max_pivots)

    z = np.zeros(n)
    for i, bv in enumerate(basis):
        z[bv] = T[i, -1]
    return z


def feasible_interior(poly: ModuliPolytope):
    """Max-slack interior point of the polytope, or None when no strictly
    interior point exists.

    Solves max t subject to eq x = rhs, ineq x - t >= ineq_rhs by simplex;
    the box rows built into ineq keep the LP bounded and allow x >= 0 as a
    variable bound without cutting off any interior optimum.
    """
    m1, nv = poly.eq.shape
    m2 = poly.ineq.shape[0]
    # variables: x (nv), t+, t-, slacks (m2)
    n = nv + 2 + m2
    A = np.zeros((m1 + m2, n))
    A[:m1, :nv] = poly.eq
    A[m1:, :nv] = poly.ineq
    A[m1:, nv] = -1.0
    A[m1:, nv + 1] = 1.0
    A[m1:, nv + 2:] = -np.eye(m2)
    b = np.concatenate([poly.eq_rhs, poly.ineq_rhs])
    c = np.zeros(n)
    c[nv] = -1.0
    c[nv + 1] = 1.0
    z = solve_lp(A, b, c)
    if z is None:
        return None
    t = z[nv] - z[nv + 1]
    if t <= 1e-9:
        return None
    x = z[:nv]
    # polish the equality residual left by tableau arithmetic
    r = poly.eq_rhs - poly.eq @ x
    if np.max(np.abs(r)) > 0:
        correction, *_ = np.linalg.lstsq(poly.eq, r, rcond=None)
        x = x + correction
    return x


def _row_reduce(E, tol=1e-12):
    """Independent spanning rows of E by echelon reduction with partial
    pivoting; dependent rows are dropped rather than treated as an error."""
    R = np.asarray(E, dtype=float).copy()
    m, n = R.shape
    rows = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        piv = r + int(np.argmax(np.abs(R[r:, col])))
        if abs(R[piv, col]) <= tol:
            continue
        R[[r, piv]] = R[[piv, r]]
        R[r] /= R[r, col]
        for i in range(m):
            if i != r and R[i, col] != 0.0:
                R[i] -= R[i, col] * R[r]
        rows.append(r)
        r += 1
    return R[rows]


def project_to_tangent(poly: ModuliPolytope, g) -> np.ndarray:
    """Orthogonal projection of g onto the null space of the equality matrix."""
    if poly._reduced_eq is None:
        poly._reduced_eq = _row_reduce(poly.eq)
    R = poly._reduced_eq
    g = np.asarray(g, dtype=float)
    y = np.linalg.solve(R @ R.T, R @ g)
    return g - R.T @ y
