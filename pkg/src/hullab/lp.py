"""Dense two-phase primal simplex, deterministic and anti-cycling.

Determinism and anti-cycling outrank speed here: the entering column is
always the lowest eligible index (Bland's rule), and ratio-test ties are
broken lexicographically against the running record of the basis
inverse, which is the float-safe version of the classical anti-cycling
guarantee.  The tableau is refreshed from the basis at intervals so
pivot roundoff cannot accumulate.  Problems are minimizations over

    a_eq x = b_eq,  a_ub x <= b_ub,  lo <= x <= hi,

with lo defaulting to 0 and hi to +inf; lo = -inf marks a free variable
(split internally).  On infeasibility the returned duals form a Farkas
certificate: y' a <= 0 on the admissible cone and y' b > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-9
PIVOT_HARD_TOL = 1e-12
REDCOST_TOL = 1e-9
REFRESH_EVERY = 1200

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class DegeneratePivotError(RuntimeError):
    """Pivot stalled below 1e-12, or the iteration cap was hit."""

    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


@dataclass
class LPProblem:
    c: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.size
        if self.a_eq is None:
            self.a_eq = np.zeros((0, n))
            self.b_eq = np.zeros(0)
        else:
            self.a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, n)
            self.b_eq = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if self.a_ub is None:
            self.a_ub = np.zeros((0, n))
            self.b_ub = np.zeros(0)
        else:
            self.a_ub = np.asarray(self.a_ub, dtype=float).reshape(-1, n)
            self.b_ub = np.asarray(self.b_ub, dtype=float).reshape(-1)
        if self.lo is None:
            self.lo = np.zeros(n)
        else:
            self.lo = np.asarray(self.lo, dtype=float).reshape(n)
        if self.hi is None:
            self.hi = np.full(n, np.inf)
        else:
            self.hi = np.asarray(self.hi, dtype=float).reshape(n)
        for arr in (self.c, self.a_eq, self.b_eq, self.a_ub, self.b_ub):
            if not np.isfinite(arr).all():
                raise ValueError("LP data must be finite")
        if self.a_eq.shape[0] != self.b_eq.size or self.a_ub.shape[0] != self.b_ub.size:
            raise ValueError("inconsistent LP row dimensions")


@dataclass
class LPSolution:
    status: str
    x: np.ndarray | None = None
    dual_eq: np.ndarray | None = None
    dual_ub: np.ndarray | None = None
    objective: float | None = None
    infeasibility: float = 0.0
    iterations: int = 0
    primal_residual: float = 0.0
    extras: dict = field(default_factory=dict)


class _Tableau:
    """Working state: T = [B^-1 A | B^-1 b] plus a reduced-cost row."""

    def __init__(self, A, b, unit_col):
        m, n = A.shape
        self.A0 = A
        self.b0 = b
        self.m = m
        self.n = n
        self.unit_col = unit_col
        self.T = np.empty((m + 1, n + 1))
        self.T[:m, :n] = A
        self.T[:m, n] = b
        self.basis = unit_col.copy()
        self.cvec = np.zeros(n)
        self.pivots = 0

    def set_costs(self, cvec):
        self.cvec = cvec
        self._rebuild_objective()

    def _rebuild_objective(self):
        m, n = self.m, self.n
        cb = self.cvec[self.basis]
        self.T[m, :n] = self.cvec - cb @ self.T[:m, :n]
        self.T[m, n] = -(cb @ self.T[:m, n])

    def refresh(self):
        """Recompute the tableau from the basis to purge pivot roundoff."""
        m, n = self.m, self.n
        B = self.A0[:, self.basis]
        try:
            sol = np.linalg.solve(B, np.column_stack([self.A0, self.b0]))
        except np.linalg.LinAlgError:
            return
        self.T[:m, :] = sol
        self._rebuild_objective()

    def objective_value(self):
        return -self.T[self.m, -1]

    def rhs(self):
        return self.T[: self.m, -1]

    def pivot(self, row, col):
        T = self.T
        piv = T[row, col]
        Tp = T[row] / piv
        colvals = T[:, col].copy()
        T -= np.outer(colvals, Tp)
        T[row] = Tp
        self.basis[row] = col
        self.pivots += 1
        rhs = T[: self.m, -1]
        np.clip(rhs, 0.0, None, out=rhs)

    def duals(self, cost_on_unit):
        """y = c_B B^-1 read off the unit columns of the initial identity."""
        return cost_on_unit - self.T[self.m, self.unit_col]


def _ratio_leave(tab, col_j):
    m = tab.m
    col = tab.T[:m, col_j]
    rhs = tab.T[:m, -1]
    pos = col > PIVOT_TOL
    if not pos.any():
        nearly = col > PIVOT_HARD_TOL
        if nearly.any():
            row = int(np.nonzero(nearly)[0][0])
            raise DegeneratePivotError(
                f"pivot magnitude {col[row]:.2e} numerically stalled",
                row=row,
                col=int(col_j),
            )
        return -1
    ratios = np.where(pos, rhs / np.where(pos, col, 1.0), np.inf)
    rmin = ratios.min()
    ties = np.nonzero(ratios <= rmin + 1e-9 * (1.0 + abs(rmin)))[0]
    if ties.size == 1:
        return int(ties[0])
    # lexicographic tie-break over [rhs | B^-1] scaled by the pivot entry
    lex_cols = np.concatenate([[tab.n], tab.unit_col])
    M = tab.T[np.ix_(ties, lex_cols)] / col[ties, None]
    order = np.lexsort(M.T[::-1])
    return int(ties[order[0]])


STALL_SWITCH = 400  # pivots without progress before Bland entering kicks in


def _simplex_loop(tab, allowed, tol, max_iter):
    """Pivot until optimal or unbounded.

    Entering: most-negative reduced cost (lowest index on ties) while the
    objective makes progress; after STALL_SWITCH stagnant pivots, Bland's
    lowest-index rule takes over until progress resumes.  Leaving:
    min-ratio with lexicographic tie-break.  Optimality is only declared
    after it survives a refresh of the tableau from the basis.
    """
    it = 0
    m = tab.m
    stagnant = 0
    best_obj = tab.objective_value()
    restarts = 0
    while True:
        red = tab.T[m, :-1]
        masked = np.where(allowed, red, np.inf)
        j = int(np.argmin(masked))
        if masked[j] >= -tol:
            tab.refresh()
            masked = np.where(allowed, tab.T[m, :-1], np.inf)
            j = int(np.argmin(masked))
            if masked[j] >= -tol or restarts >= 5:
                return it, True
            restarts += 1
        if stagnant > STALL_SWITCH:
            cand = np.nonzero(allowed & (tab.T[m, :-1] < -tol))[0]
            j = int(cand[0])  # Bland's anti-cycling entering rule
        i = _ratio_leave(tab, j)
        if i < 0:
            return it, False  # unbounded direction
        tab.pivot(i, j)
        it += 1
        obj = tab.objective_value()
        if obj < best_obj - 1e-12 * (1.0 + abs(best_obj)):
            best_obj = obj
            stagnant = 0
        else:
            stagnant += 1
        if it % REFRESH_EVERY == 0:
            tab.refresh()
        if it > max_iter:
            raise DegeneratePivotError(
                f"simplex stalled after {it} pivots", row=int(i), col=int(j)
            )


def solve_lp(problem, feas_tol=FEAS_TOL, max_iter=None):
    """Solve an LPProblem; returns an LPSolution.

    status is one of "optimal", "infeasible", "unbounded".  On optimal,
    x, dual_eq, dual_ub and the objective are populated and the primal
    feasibility residual is reported.  On infeasible, dual_eq/dual_ub
    hold the Farkas certificate and `infeasibility` the phase-1 optimum.
    """
    p = problem
    n = p.c.size

    # --- standard form: split free variables, shift finite lower bounds
    col_var = [(j, 1.0) for j in range(n)]
    shifts = np.where(np.isfinite(p.lo), p.lo, 0.0)
    free = ~np.isfinite(p.lo)
    free_idx = np.nonzero(free)[0]
    for j in free_idx:
        col_var.append((int(j), -1.0))
    n_std = len(col_var)

    def expand(mat):
        out = np.empty((mat.shape[0], n_std))
        out[:, :n] = mat
        for k in range(n, n_std):
            j, s = col_var[k]
            out[:, k] = s * mat[:, j]
        return out

    a_eq = expand(p.a_eq)
    b_eq = p.b_eq - p.a_eq @ shifts
    rows_ub = [expand(p.a_ub)]
    b_ub_parts = [p.b_ub - p.a_ub @ shifts]
    bounded = np.isfinite(p.hi)
    if bounded.any():
        idx = np.nonzero(bounded)[0]
        eb = np.zeros((idx.size, n_std))
        for r, j in enumerate(idx):
            eb[r, j] = 1.0
            if free[j]:
                k = n + int(np.nonzero(free_idx == j)[0][0])
                eb[r, k] = -1.0
        rows_ub.append(eb)
        b_ub_parts.append(p.hi[idx] - shifts[idx])
    a_ub = np.vstack(rows_ub)
    b_ub = np.concatenate(b_ub_parts)

    me, mu = a_eq.shape[0], a_ub.shape[0]
    m = me + mu
    A = np.vstack([a_eq, a_ub])
    b = np.concatenate([b_eq, b_ub])

    S = np.zeros((m, mu))
    S[me:, :] = np.eye(mu)
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    S = np.where(flip[:, None], -S, S)
    b = np.abs(b)

    need_art = np.ones(m, dtype=bool)
    need_art[me:] = flip[me:]
    art_rows = np.nonzero(need_art)[0]
    n_art = art_rows.size
    R = np.zeros((m, n_art))
    for k, i in enumerate(art_rows):
        R[i, k] = 1.0

    n_tot = n_std + mu + n_art
    A_ext = np.hstack([A, S, R])
    unit_col = np.empty(m, dtype=int)
    for i in range(m):
        if need_art[i]:
            unit_col[i] = n_std + mu + int(np.nonzero(art_rows == i)[0][0])
        else:
            unit_col[i] = n_std + (i - me)

    tab = _Tableau(A_ext, b, unit_col)
    if max_iter is None:
        max_iter = 20000 + 40 * (m + n_tot)

    # phase 1: minimize the artificial sum
    c1 = np.zeros(n_tot)
    c1[n_std + mu :] = 1.0
    tab.set_costs(c1)
    allowed = np.ones(n_tot, dtype=bool)
    it1, finished = _simplex_loop(tab, allowed, REDCOST_TOL, max_iter)
    if not finished:
        raise DegeneratePivotError("phase-1 unbounded; numerical breakdown")
    tab.refresh()
    # artificial mass read from the basic values themselves, immune to
    # objective-row drift
    phase1_obj = float(
        tab.rhs()[tab.basis >= n_std + mu].sum(initial=0.0)
    )

    def mapped_duals(costs_on_unit):
        y = tab.duals(costs_on_unit)
        y = np.where(flip, -y, y)
        return y[:me], y[me : me + p.b_ub.size]

    if phase1_obj > feas_tol:
        dual_eq, dual_ub = mapped_duals(np.where(need_art, 1.0, 0.0))
        return LPSolution(
            status=INFEASIBLE,
            dual_eq=dual_eq,
            dual_ub=dual_ub,
            infeasibility=float(phase1_obj),
            iterations=it1,
        )

    # drive leftover basic artificials out; drop rows that prove redundant
    art_first = n_std + mu
    drop = []
    for i in range(m):
        if tab.basis[i] >= art_first:
            row = tab.T[i, :art_first]
            cands = np.nonzero(np.abs(row) > 1e-7)[0]
            if cands.size:
                tab.pivot(i, int(cands[0]))
            else:
                drop.append(i)
    if drop:
        keep = np.setdiff1d(np.arange(m), drop)
        tab.A0 = tab.A0[keep]
        tab.b0 = tab.b0[keep]
        tab.T = tab.T[np.concatenate([keep, [m]])]
        tab.basis = tab.basis[keep]
        tab.unit_col = tab.unit_col[keep]
        tab.m = keep.size
        kept_rows = keep
    else:
        kept_rows = np.arange(m)

    # phase 2 on the true objective; artificials may not re-enter
    c2 = np.zeros(n_tot)
    for k, (j, s) in enumerate(col_var):
        c2[k] = s * p.c[j]
    tab.set_costs(c2)
    allowed = np.zeros(n_tot, dtype=bool)
    allowed[:art_first] = True
    it2, finished = _simplex_loop(tab, allowed, REDCOST_TOL, max_iter)
    tab.refresh()
    if not finished:
        return LPSolution(
            status=UNBOUNDED,
            infeasibility=float(phase1_obj),
            iterations=it1 + it2,
        )

    x_std = np.zeros(n_tot)
    x_std[tab.basis] = tab.rhs()
    x = shifts.copy()
    for k, (j, s) in enumerate(col_var):
        x[j] += s * x_std[k]

    y_rows = tab.duals(np.zeros(tab.m))
    y_full = np.zeros(m)
    y_full[kept_rows] = y_rows
    y_full = np.where(flip, -y_full, y_full)
    dual_eq = y_full[:me]
    dual_ub = y_full[me : me + p.b_ub.size]

    r_eq = p.a_eq @ x - p.b_eq
    r_ub = np.maximum(p.a_ub @ x - p.b_ub, 0.0)
    r_lo = np.maximum(np.where(np.isfinite(p.lo), p.lo - x, 0.0), 0.0)
    r_hi = np.maximum(np.where(np.isfinite(p.hi), x - p.hi, 0.0), 0.0)
    primal_res = max(
        float(np.abs(r_eq).max(initial=0.0)),
        float(r_ub.max(initial=0.0)),
        float(r_lo.max(initial=0.0)),
        float(r_hi.max(initial=0.0)),
    )
    slack = p.b_ub - p.a_ub @ x
    comp = float(np.abs(slack * dual_ub).max(initial=0.0))

    return LPSolution(
        status=OPTIMAL,
        x=x,
        dual_eq=dual_eq,
        dual_ub=dual_ub,
        objective=float(p.c @ x),
        infeasibility=float(phase1_obj),
        iterations=it1 + it2,
        primal_residual=primal_res,
        extras={"complementary_slackness": comp},
    )
