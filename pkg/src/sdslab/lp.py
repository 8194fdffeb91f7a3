"""Exact rational linear programming with verified certificates.

A dense-tableau, two-phase primal simplex over arbitrary-precision
rationals.  Bland's rule guarantees termination; no floating point is used
anywhere.  Every outcome is re-verified by substitution before it is
returned: optimal points against every constraint, infeasibility
certificates by the Farkas sign and arithmetic conditions, and unbounded
rays as improving feasible directions.

gmpy2's ``mpq`` backs the tableau when available; results are plain
:class:`fractions.Fraction` either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

try:  # pragma: no cover - exercised implicitly by every solve
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, EQ, GE = "<=", "=", ">="


class LPError(ValueError):
    """Malformed linear program."""


def _fr(x) -> Fraction:
    return Fraction(x.numerator, x.denominator) if not isinstance(x, Fraction) else x


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in (LE, EQ, GE):
            raise LPError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point)), Fraction(0))

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        lhs = self.value_at(point)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """max/min of a linear objective over linear constraints and optional bounds."""

    num_vars: int
    objective: tuple[Fraction, ...]
    maximize: bool
    constraints: tuple[Constraint, ...]
    lower_bounds: Optional[tuple[Optional[Fraction], ...]] = None
    upper_bounds: Optional[tuple[Optional[Fraction], ...]] = None

    def __post_init__(self):
        if len(self.objective) != self.num_vars:
            raise LPError("objective length must equal the variable count")
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise LPError("constraint coefficient vector has wrong length")
        for bounds in (self.lower_bounds, self.upper_bounds):
            if bounds is not None and len(bounds) != self.num_vars:
                raise LPError("bounds vector has wrong length")

    def lower(self, j: int) -> Optional[Fraction]:
        return None if self.lower_bounds is None else self.lower_bounds[j]

    def upper(self, j: int) -> Optional[Fraction]:
        return None if self.upper_bounds is None else self.upper_bounds[j]

    def all_rows(self) -> tuple[Constraint, ...]:
        """Constraints followed by materialized bound rows, in a fixed order.

        Infeasibility certificates index into this list.
        """
        rows = list(self.constraints)
        for j in range(self.num_vars):
            lb = self.lower(j)
            if lb is not None:
                rows.append(Constraint(_unit(self.num_vars, j), GE, lb))
        for j in range(self.num_vars):
            ub = self.upper(j)
            if ub is not None:
                rows.append(Constraint(_unit(self.num_vars, j), LE, ub))
        return tuple(rows)


def _unit(size: int, index: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) if i == index else Fraction(0) for i in range(size))


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: multipliers over ``lp.all_rows()``.

    Sign-compatible with the relations (nonnegative on <=, nonpositive on >=,
    free on =); the combination has zero coefficients on every variable and a
    strictly negative combined right-hand side, i.e. it proves 0 <= negative.
    """

    certificate: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    ray: tuple[Fraction, ...]


LPOutcome = Union[Optimal, Infeasible, Unbounded]


# ---------------------------------------------------------------------------
# Verification (pure arithmetic; no solver state)
# ---------------------------------------------------------------------------


def verify_point(lp: LinearProgram, point: Sequence[Fraction]) -> bool:
    return all(row.satisfied_by(point) for row in lp.all_rows())


def verify_infeasibility_certificate(lp: LinearProgram, certificate: Sequence[Fraction]) -> bool:
    rows = lp.all_rows()
    if len(certificate) != len(rows):
        return False
    combined = [Fraction(0)] * lp.num_vars
    value = Fraction(0)
    for mult, row in zip(certificate, rows):
        if row.rel == LE and mult < 0:
            return False
        if row.rel == GE and mult > 0:
            return False
        if mult == 0:
            continue
        for j, c in enumerate(row.coeffs):
            if c:
                combined[j] += mult * c
        value += mult * row.rhs
    return all(g == 0 for g in combined) and value < 0


def verify_ray(lp: LinearProgram, ray: Sequence[Fraction]) -> bool:
    if len(ray) != lp.num_vars:
        return False
    for row in lp.all_rows():
        along = sum((c * r for c, r in zip(row.coeffs, ray)), Fraction(0))
        if row.rel == LE and along > 0:
            return False
        if row.rel == GE and along < 0:
            return False
        if row.rel == EQ and along != 0:
            return False
    gain = sum((c * r for c, r in zip(lp.objective, ray)), Fraction(0))
    return gain > 0 if lp.maximize else gain < 0


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------


class _Tableau:
    """Dense simplex tableau over exact rationals with Bland's rule."""

    def __init__(self, rows, ncols):
        self.rows = rows  # each: list of ncols coefficients + rhs
        self.ncols = ncols
        self.basis: list[int] = []
        self.obj: list = []

    def set_objective(self, costs):
        obj = list(costs) + [_Q(0)]
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                row = self.rows[i]
                obj = [a - cb * v for a, v in zip(obj, row)]
        self.obj = obj

    def pivot(self, r: int, c: int):
        rows = self.rows
        piv_row = rows[r]
        piv = piv_row[c]
        if piv != 1:
            inv = _Q(1) / piv
            piv_row = [v * inv for v in piv_row]
            rows[r] = piv_row
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if f:
                rows[i] = [a - f * b for a, b in zip(row, piv_row)]
        f = self.obj[c]
        if f:
            self.obj = [a - f * b for a, b in zip(self.obj, piv_row)]
        self.basis[r] = c

    def run(self, allowed_cols) -> Optional[int]:
        """Minimize until optimal; returns an entering column on unboundedness."""
        obj = self.obj
        while True:
            enter = -1
            for j in allowed_cols:
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return None
            leave = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return enter
            self.pivot(leave, enter)
            obj = self.obj


def solve(lp: LinearProgram) -> LPOutcome:
    """Exact two-phase simplex; the returned outcome is verified before return."""
    n = lp.num_vars

    # Variable transform: shifted y >= 0 for lower-bounded vars, split pairs
    # (pos, neg) for free vars.  Upper bounds become ordinary rows.
    col_of: list[tuple] = []
    ny = 0
    for j in range(n):
        lb = lp.lower(j)
        if lb is not None:
            col_of.append(("shift", ny, lb))
            ny += 1
        else:
            col_of.append(("split", ny, ny + 1))
            ny += 2

    # Canonical rows: (ycoeffs, rel in {<=,=}, rhs, all_rows index, negated?)
    all_rows = lp.all_rows()
    canonical = []
    lower_row_of: dict[int, int] = {}
    idx = len(lp.constraints)
    for j in range(n):
        if lp.lower(j) is not None:
            lower_row_of[j] = idx
            idx += 1
    solver_row_indices = [i for i, row in enumerate(all_rows) if i not in lower_row_of.values()]
    for ridx in solver_row_indices:
        row = all_rows[ridx]
        coeffs, rel, rhs = row.coeffs, row.rel, row.rhs
        if rel == GE:
            coeffs = tuple(-c for c in coeffs)
            rhs = -rhs
            rel = LE
            negated = True
        else:
            negated = False
        ycoeffs = [_Q(0)] * ny
        yrhs = _Q(rhs)
        for j, c in enumerate(coeffs):
            if not c:
                continue
            kind = col_of[j]
            if kind[0] == "shift":
                ycoeffs[kind[1]] += _Q(c)
                yrhs -= _Q(c) * _Q(kind[2])
            else:
                ycoeffs[kind[1]] += _Q(c)
                ycoeffs[kind[2]] -= _Q(c)
        canonical.append((ycoeffs, rel, yrhs, ridx, negated))

    nrows = len(canonical)
    nslack = sum(1 for row in canonical if row[1] == LE)
    ncols = ny + nslack + nrows
    slack_col: dict[int, int] = {}
    art_col = [0] * nrows
    tab_rows = []
    sigma = [1] * nrows
    scol = ny
    for i, (ycoeffs, rel, rhs, _ridx, _neg) in enumerate(canonical):
        row = list(ycoeffs) + [_Q(0)] * (nslack + nrows) + [rhs]
        if rel == LE:
            row[scol] = _Q(1)
            slack_col[i] = scol
            scol += 1
        acol = ny + nslack + i
        art_col[i] = acol
        if row[-1] < 0:
            row = [-v for v in row]
            sigma[i] = -1
        row[acol] = _Q(1)  # after any sign flip, so the artificial starts feasible
        tab_rows.append(row)

    # Every row keeps its artificial column (identity column, cost 1 in
    # phase 1, never entering): phase-1 reduced costs under these columns
    # yield the dual multipliers for infeasibility certificates.
    tableau = _Tableau(tab_rows, ncols)
    for i in range(nrows):
        sc = slack_col.get(i)
        if sc is not None and sigma[i] == 1:
            tableau.basis.append(sc)
        else:
            tableau.basis.append(art_col[i])

    structural = list(range(ny + nslack))

    # Phase 1: minimize the sum of artificials.
    phase1_costs = [_Q(0)] * (ny + nslack) + [_Q(1)] * nrows
    tableau.set_objective(phase1_costs)
    entering = tableau.run(structural)
    if entering is not None:
        raise AssertionError("phase 1 objective is bounded below by zero")
    infeas_value = -tableau.obj[-1]
    if infeas_value > 0:
        cert = _extract_certificate(lp, tableau, canonical, sigma, art_col, lower_row_of, all_rows)
        if not verify_infeasibility_certificate(lp, cert):
            raise AssertionError("infeasibility certificate failed verification")
        return Infeasible(cert)

    # Drive any artificial still basic (at level zero) out of the basis.
    drop: list[int] = []
    for i in range(nrows):
        if tableau.basis[i] >= ny + nslack:
            pivot_col = next(
                (j for j in structural if tableau.rows[i][j] != 0), None
            )
            if pivot_col is None:
                drop.append(i)
            else:
                tableau.pivot(i, pivot_col)
    for i in reversed(drop):
        del tableau.rows[i]
        del tableau.basis[i]

    # Phase 2 over the user objective (internally minimized).
    user_costs = [_Q(-c) if lp.maximize else _Q(c) for c in lp.objective]
    phase2_costs = [_Q(0)] * (ny + nslack)
    for j in range(n):
        cj = user_costs[j]
        if not cj:
            continue
        kind = col_of[j]
        phase2_costs[kind[1]] += cj
        if kind[0] == "split":
            phase2_costs[kind[2]] -= cj
    phase2_costs += [_Q(0)] * nrows  # artificials never re-enter
    tableau.set_objective(phase2_costs)
    entering = tableau.run(structural)

    if entering is not None:
        ydir = [_Q(0)] * ny
        if entering < ny:
            ydir[entering] = _Q(1)
        for i, b in enumerate(tableau.basis):
            if b < ny:
                ydir[b] = -tableau.rows[i][entering]
        ray = tuple(_fr(_x_component(col_of[j], ydir)) for j in range(n))
        if not verify_ray(lp, ray):
            raise AssertionError("unbounded ray failed verification")
        return Unbounded(ray)

    yvals = [_Q(0)] * ny
    for i, b in enumerate(tableau.basis):
        if b < ny:
            yvals[b] = tableau.rows[i][-1]
    point = tuple(_fr(_x_value(col_of[j], yvals)) for j in range(n))
    value = sum((c * x for c, x in zip(lp.objective, point)), Fraction(0))
    if not verify_point(lp, point):
        raise AssertionError("optimal point failed constraint verification")
    return Optimal(value, point)


def _x_component(kind, ydir):
    if kind[0] == "shift":
        return ydir[kind[1]]
    return ydir[kind[1]] - ydir[kind[2]]


def _x_value(kind, yvals):
    if kind[0] == "shift":
        return yvals[kind[1]] + _Q(kind[2])
    return yvals[kind[1]] - yvals[kind[2]]


def _extract_certificate(lp, tableau, canonical, sigma, art_col, lower_row_of, all_rows):
    """Map phase-1 duals onto multipliers over ``lp.all_rows()``."""
    cert = [Fraction(0)] * len(all_rows)
    for i, (_yc, rel, _rhs, ridx, negated) in enumerate(canonical):
        y_i = _Q(1) - tableau.obj[art_col[i]]
        w_hat = -y_i * _Q(sigma[i])
        mult = _fr(w_hat)
        cert[ridx] += -mult if negated else mult
    # Residuals on lower-bounded variables are absorbed by their bound rows.
    for j, ridx in lower_row_of.items():
        g = Fraction(0)
        for k, row in enumerate(all_rows):
            if cert[k] and k != ridx:
                c = row.coeffs[j]
                if c:
                    g += cert[k] * c
        cert[ridx] = -g
    return tuple(cert)


def check_feasible(
    constraints: Iterable[Constraint],
    num_vars: int,
    lower_bounds: Optional[tuple[Optional[Fraction], ...]] = None,
    upper_bounds: Optional[tuple[Optional[Fraction], ...]] = None,
) -> LPOutcome:
    """Solve with a zero objective: Optimal(0, point) or Infeasible(certificate)."""
    program = LinearProgram(
        num_vars=num_vars,
        objective=tuple(Fraction(0) for _ in range(num_vars)),
        maximize=True,
        constraints=tuple(constraints),
        lower_bounds=lower_bounds,
        upper_bounds=upper_bounds,
    )
    return solve(program)
