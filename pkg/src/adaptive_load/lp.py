"""Dense two-phase primal simplex.

Problems here are small (a 24 hour window has 48 variables and about 70
rows once bounds are expanded), so a dense tableau is plenty fast and keeps
results bit-for-bit reproducible. Pivoting follows Bland's rule: the lowest
index improving column enters, ratio-test ties leave by lowest basic index.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InputError

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-10
MAX_PIVOTS = 50_000


class Relation(str, enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[float, ...]
    relation: Relation
    rhs: float

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        object.__setattr__(self, "relation", Relation(self.relation))


@dataclass(frozen=True)
class LinearProgram:
    """minimize ``objective @ x`` subject to ``constraints`` and ``bounds``.

    ``bounds`` holds one ``(lower, upper)`` pair per variable; either side may
    be ``None`` or infinite. When omitted every variable is ``x >= 0``.
    """

    objective: tuple[float, ...]
    constraints: tuple[Constraint, ...] = ()
    bounds: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        n = len(self.objective)
        object.__setattr__(self, "objective", tuple(float(c) for c in self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for i, row in enumerate(self.constraints):
            if len(row.coefficients) != n:
                raise InputError(
                    f"constraint {i} has {len(row.coefficients)} coefficients, expected {n}"
                )
        if self.bounds is None:
            bounds = ((0.0, math.inf),) * n
        else:
            if len(self.bounds) != n:
                raise InputError(f"got {len(self.bounds)} bounds for {n} variables")
            bounds = tuple(_normalize_bound(lo, hi) for lo, hi in self.bounds)
        for j, (lo, hi) in enumerate(bounds):
            if lo > hi:
                raise InputError(f"variable {j}: lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)


def _normalize_bound(lo, hi):
    lo = -math.inf if lo is None else float(lo)
    hi = math.inf if hi is None else float(hi)
    if math.isnan(lo) or math.isnan(hi):
        raise InputError("NaN bound")
    return lo, hi


@dataclass(frozen=True)
class LpSolution:
    status: Status
    x: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    # phase-2 reduced costs over the internal standard-form columns
    reduced_costs: Optional[np.ndarray] = field(default=None, repr=False)
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _StandardForm:
    """x = offset + M @ y with y >= 0; rows  A y (rel) b  over y."""

    def __init__(self, lp: LinearProgram):
        n = lp.n_vars
        cols = []  # (original index, sign)
        offset = np.zeros(n)
        extra_rows = []  # (y column, upper) for finite boxes
        for j, (lo, hi) in enumerate(lp.bounds):
            if math.isfinite(lo):
                offset[j] = lo
                cols.append((j, 1.0))
                if math.isfinite(hi):
                    extra_rows.append((len(cols) - 1, hi - lo))
            elif math.isfinite(hi):
                offset[j] = hi
                cols.append((j, -1.0))
            else:
                cols.append((j, 1.0))
                cols.append((j, -1.0))
        M = np.zeros((n, len(cols)))
        for c, (j, sign) in enumerate(cols):
            M[j, c] = sign
        self.M = M
        self.offset = offset
        self.n_y = len(cols)

        rows, rels, rhs = [], [], []
        for con in lp.constraints:
            a = np.asarray(con.coefficients)
            rows.append(a @ M)
            rels.append(con.relation)
            rhs.append(con.rhs - a @ offset)
        for c, width in extra_rows:
            a = np.zeros(self.n_y)
            a[c] = 1.0
            rows.append(a)
            rels.append(Relation.LE)
            rhs.append(width)
        self.A = np.array(rows).reshape(len(rows), self.n_y)
        self.rel = rels
        self.b = np.array(rhs, dtype=float)
        self.c = np.asarray(lp.objective) @ M
        self.c0 = float(np.asarray(lp.objective) @ offset)

    def recover(self, y: np.ndarray) -> np.ndarray:
        return self.offset + self.M @ y


def _pivot(T: np.ndarray, basis: list[int], r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def _run_simplex(T: np.ndarray, basis: list[int], n_cols: int, budget: int) -> tuple[str, int]:
    """Bland-rule iterations on tableau ``T`` whose last row is the reduced-cost row.

    Only the first ``n_cols`` columns may enter. Returns ("optimal" or
    "unbounded", pivots used).
    """
    m = T.shape[0] - 1
    pivots = 0
    while True:
        d = T[m, :n_cols]
        candidates = np.flatnonzero(d < -OPT_TOL)
        if candidates.size == 0:
            return "optimal", pivots
        j = int(candidates[0])
        col = T[:m, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded", pivots
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
        r = int(min(tied, key=lambda i: basis[i]))
        _pivot(T, basis, r, j)
        pivots += 1
        if pivots > budget:
            raise RuntimeError("simplex pivot budget exhausted")


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp``; infeasible or unbounded problems are reported via ``status``."""
    sf = _StandardForm(lp)
    A, b = sf.A.copy(), sf.b.copy()
    rels = list(sf.rel)
    n_y = sf.n_y

    # scale rows, resolve empty rows, make every rhs non-negative
    keep = []
    for i in range(A.shape[0]):
        scale = np.abs(A[i]).max() if n_y else 0.0
        if scale == 0.0:
            ok = {
                Relation.LE: b[i] >= -FEAS_TOL,
                Relation.GE: b[i] <= FEAS_TOL,
                Relation.EQ: abs(b[i]) <= FEAS_TOL,
            }[rels[i]]
            if not ok:
                return LpSolution(Status.INFEASIBLE)
            continue
        A[i] /= scale
        b[i] /= scale
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            if rels[i] is Relation.LE:
                rels[i] = Relation.GE
            elif rels[i] is Relation.GE:
                rels[i] = Relation.LE
        keep.append(i)
    A, b = A[keep], b[keep]
    rels = [rels[i] for i in keep]
    m = len(keep)

    n_slack = sum(r is not Relation.EQ for r in rels)
    n_art = sum(r is not Relation.LE for r in rels)
    n_real = n_y + n_slack
    T = np.zeros((m + 1, n_real + n_art + 1))
    T[:m, :n_y] = A
    T[:m, -1] = b
    basis = [0] * m
    s = n_y
    a = n_real
    for i, rel in enumerate(rels):
        if rel is Relation.LE:
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        else:
            if rel is Relation.GE:
                T[i, s] = -1.0
                s += 1
            T[i, a] = 1.0
            basis[i] = a
            a += 1

    pivots = 0
    if n_art:
        # phase 1: minimize the sum of artificials
        art_rows = [i for i in range(m) if basis[i] >= n_real]
        T[m, n_real:n_real + n_art] = 1.0
        T[m] -= T[art_rows].sum(axis=0)
        _, used = _run_simplex(T, basis, n_real + n_art, MAX_PIVOTS)
        pivots += used
        if -T[m, -1] > FEAS_TOL:
            return LpSolution(Status.INFEASIBLE, pivots=pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        drop = []
        for i in range(m):
            if basis[i] < n_real:
                continue
            nz = np.flatnonzero(np.abs(T[i, :n_real]) > PIVOT_TOL)
            if nz.size:
                _pivot(T, basis, i, int(nz[0]))
                pivots += 1
            else:
                drop.append(i)
        if drop:
            keep_rows = [i for i in range(m) if i not in drop]
            T = T[keep_rows + [m]]
            basis = [basis[i] for i in keep_rows]
            m = len(keep_rows)
        T = np.hstack([T[:, :n_real], T[:, -1:]])

    # phase 2
    c = np.zeros(n_real)
    c[:n_y] = sf.c
    T[m, :n_real] = c
    T[m, -1] = 0.0
    for i, j in enumerate(basis):
        if c[j] != 0.0:
            T[m] -= c[j] * T[i]
    status, used = _run_simplex(T, basis, n_real, MAX_PIVOTS)
    pivots += used
    if status == "unbounded":
        return LpSolution(Status.UNBOUNDED, pivots=pivots)

    y = np.zeros(n_real)
    for i, j in enumerate(basis):
        y[j] = T[i, -1]
    x = sf.recover(y[:n_y])
    value = float(np.asarray(lp.objective) @ x)
    return LpSolution(
        Status.OPTIMAL,
        x=x,
        objective_value=value,
        reduced_costs=T[m, :n_real].copy(),
        pivots=pivots,
    )


def le(coefficients: Sequence[float], rhs: float) -> Constraint:
    return Constraint(tuple(coefficients), Relation.LE, rhs)


def ge(coefficients: Sequence[float], rhs: float) -> Constraint:
    return Constraint(tuple(coefficients), Relation.GE, rhs)


def eq(coefficients: Sequence[float], rhs: float) -> Constraint:
    return Constraint(tuple(coefficients), Relation.EQ, rhs)
