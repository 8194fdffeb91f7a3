"""Profile-class enumeration, LP synthesis under axiom and
strategyproofness constraints, per-coordinate probability bounds, and
impossibility certificates.

The search space is one lottery per profile class (full profiles, voter
multisets, or rank-matrix classes).  Anonymous-mode infeasibility implies
general infeasibility: averaging any rule over voter relabelings preserves
every supported axiom and utility-set strategyproofness (mixtures of
strategyproof rules are strategyproof), so a rule would induce an
anonymous one.  The testable shadow of that argument, dictatorship
averaging, lives with the rules tests.

All verdicts are backed by exact evidence: feasible tables are checked by
substitution into every generated constraint (and replayed through the
axiom and manipulation checkers at small sizes), infeasible outcomes carry
a Farkas certificate over the solved program together with the provenance
of every row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterable, Optional, Sequence, Union

from . import lp
from .core import (
    FINITE,
    POLYTOPE,
    VERTICES,
    DomainError,
    Lottery,
    PreferenceRelation,
    Profile,
    RefusalError,
    UtilitySet,
    UtilityVector,
    all_preferences,
    condorcet_winner,
    frac,
    pareto_dominated,
    profile_space_size,
    rank_matrix,
)
from .rules import SocialDecisionScheme, table_sds

FULL, ANONYMOUS, RANK_BASED = "full", "anonymous", "rank_based"
MODES = (FULL, ANONYMOUS, RANK_BASED)
DEFAULT_CLASS_CAP = 10**7


# ---------------------------------------------------------------------------
# Profile class index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileClass:
    index: int
    representative: Profile
    orbit_size: int
    top_counts: tuple[int, ...]
    condorcet_winners: tuple[int, ...]  # distinct winners over class members
    dominated: tuple[int, ...]  # union of Pareto-dominated alternatives over members


@dataclass(frozen=True)
class DeviationEdge:
    source: int
    true_pref: PreferenceRelation
    misreport: PreferenceRelation
    target: int


@dataclass(frozen=True, eq=False)
class ProfileClassIndex:
    mode: str
    m: int
    n: int
    classes: tuple[ProfileClass, ...]
    edges: tuple[DeviationEdge, ...]
    _keys: dict = field(repr=False)

    def class_of(self, profile: Profile) -> int:
        if profile.m != self.m or profile.n != self.n:
            raise DomainError("profile does not match this index")
        return self._keys[_class_key(self.mode, profile)]


def _class_key(mode: str, profile: Profile):
    if mode == FULL:
        return tuple(p.order for p in profile.prefs)
    if mode == ANONYMOUS:
        return tuple(sorted(p.order for p in profile.prefs))
    return rank_matrix(profile).rows


def _multiset_orbit(n: int, counts: Iterable[int]) -> int:
    size = factorial(n)
    for c in counts:
        size //= factorial(c)
    return size


def enumerate_profiles(
    m: int, n: int, mode: str, cap: int = DEFAULT_CLASS_CAP
) -> ProfileClassIndex:
    """Complete, duplicate-free class list with orbit data and deviation edges.

    Orbit sizes over all classes sum to (m!)^n.  Deviation edges cover, for
    every member profile, every voter and every misreport, deduplicated by
    (source class, true preference, target class), which is exactly the
    granularity at which they constrain class lotteries.
    """
    if mode not in MODES:
        raise DomainError(f"unknown symmetry mode {mode!r}")
    if m < 1 or n < 1:
        raise DomainError("m and n must be at least 1")
    prefs = all_preferences(m)
    if mode == FULL:
        total = profile_space_size(m, n)
        if total > cap:
            raise RefusalError(f"{total} profile classes exceed the cap of {cap}")
        classes = []
        keys = {}
        edge_set = {}
        from .core import all_profiles

        for profile in all_profiles(m, n):
            index = len(classes)
            keys[_class_key(FULL, profile)] = index
            classes.append(_make_class(index, profile, 1))
        for profile in all_profiles(m, n):
            source = keys[_class_key(FULL, profile)]
            for voter in range(n):
                true_pref = profile.prefs[voter]
                for mis in prefs:
                    if mis == true_pref:
                        continue
                    target = keys[_class_key(FULL, profile.replace(voter, mis))]
                    edge_set.setdefault((source, true_pref.order, target), (true_pref, mis))
        edges = tuple(
            DeviationEdge(s, tp, mis, t)
            for (s, _o, t), (tp, mis) in edge_set.items()
        )
        return ProfileClassIndex(FULL, m, n, tuple(classes), edges, keys)

    total_multisets = comb(len(prefs) + n - 1, n)
    if total_multisets > cap:
        raise RefusalError(f"{total_multisets} voter multisets exceed the cap of {cap}")

    multisets = list(combinations_with_replacement(range(len(prefs)), n))

    def rep_profile(ms: tuple[int, ...]) -> Profile:
        return Profile(tuple(prefs[i] for i in ms))

    keys = {}
    classes: list[ProfileClass] = []
    if mode == ANONYMOUS:
        for ms in multisets:
            profile = rep_profile(ms)
            index = len(classes)
            keys[_class_key(ANONYMOUS, profile)] = index
            counts = [0] * len(prefs)
            for i in ms:
                counts[i] += 1
            classes.append(_make_class(index, profile, _multiset_orbit(n, counts)))
        edge_set = {}
        for ms in multisets:
            source = keys[_class_key(ANONYMOUS, rep_profile(ms))]
            for role in sorted(set(ms)):
                rest = list(ms)
                rest.remove(role)
                for mis_idx, mis in enumerate(prefs):
                    if mis_idx == role:
                        continue
                    target_ms = tuple(sorted(rest + [mis_idx]))
                    target = keys[_class_key(ANONYMOUS, rep_profile(target_ms))]
                    edge_set.setdefault((source, role, target), (prefs[role], mis))
        edges = tuple(
            DeviationEdge(s, tp, mis, t)
            for (s, _r, t), (tp, mis) in edge_set.items()
        )
        return ProfileClassIndex(ANONYMOUS, m, n, tuple(classes), edges, keys)

    # rank_based: group voter multisets by rank matrix (rank matrices are
    # anonymous, so multisets cover every class and every deviation shape).
    members: dict[tuple, list[tuple[int, ...]]] = {}
    for ms in multisets:
        members.setdefault(_class_key(RANK_BASED, rep_profile(ms)), []).append(ms)
    for key, group in members.items():
        index = len(keys)
        keys[key] = index
        orbit = 0
        winners: list[int] = []
        dominated: set[int] = set()
        for ms in group:
            counts = [0] * len(prefs)
            for i in ms:
                counts[i] += 1
            orbit += _multiset_orbit(n, counts)
            profile = rep_profile(ms)
            w = condorcet_winner(profile)
            if w is not None and w not in winners:
                winners.append(w)
            dominated.update(
                x for x in range(m) if pareto_dominated(profile, x)
            )
        rep = rep_profile(group[0])
        classes.append(
            ProfileClass(
                index=index,
                representative=rep,
                orbit_size=orbit,
                top_counts=rep.top_counts(),
                condorcet_winners=tuple(winners),
                dominated=tuple(sorted(dominated)),
            )
        )
    edge_set = {}
    for key, group in members.items():
        source = keys[key]
        for ms in group:
            rest_cache = rep_profile(ms)
            for role in sorted(set(ms)):
                rest = list(ms)
                rest.remove(role)
                for mis_idx, mis in enumerate(prefs):
                    if mis_idx == role:
                        continue
                    target_ms = tuple(sorted(rest + [mis_idx]))
                    target = keys[_class_key(RANK_BASED, rep_profile(target_ms))]
                    if target == source:
                        continue
                    edge_set.setdefault((source, role, target), (prefs[role], mis))
    edges = tuple(
        DeviationEdge(s, tp, mis, t) for (s, _r, t), (tp, mis) in edge_set.items()
    )
    return ProfileClassIndex(RANK_BASED, m, n, tuple(classes), edges, keys)


def _make_class(index: int, profile: Profile, orbit: int) -> ProfileClass:
    w = condorcet_winner(profile)
    return ProfileClass(
        index=index,
        representative=profile,
        orbit_size=orbit,
        top_counts=profile.top_counts(),
        condorcet_winners=() if w is None else (w,),
        dominated=tuple(
            x for x in range(profile.m) if pareto_dominated(profile, x)
        ),
    )


# ---------------------------------------------------------------------------
# Synthesis problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KUnanimity:
    k: int


@dataclass(frozen=True)
class KAlphaUnanimity:
    k: int
    alpha: Fraction


@dataclass(frozen=True)
class CondorcetConsistent:
    pass


@dataclass(frozen=True)
class ExPostEfficient:
    pass


AxiomSpec = Union[KUnanimity, KAlphaUnanimity, CondorcetConsistent, ExPostEfficient]


@dataclass(frozen=True)
class SynthesisProblem:
    m: int
    n: int
    mode: str
    axioms: tuple[AxiomSpec, ...]
    utility_set: UtilitySet
    cap: int = DEFAULT_CLASS_CAP
    seeds: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown symmetry mode {self.mode!r}")
        if self.utility_set.kind == POLYTOPE:
            raise DomainError(
                "synthesis needs finitely many gain constraints: supply the "
                "utility set in finite or vertex form (as_vertex_set())"
            )
        if self.utility_set.m != self.m:
            raise DomainError("utility set has the wrong alternative count")
        for ax in self.axioms:
            if isinstance(ax, KUnanimity) and not 0 <= ax.k < Fraction(self.n, 2):
                raise DomainError("k-unanimity requires 0 <= k < n/2")
            if isinstance(ax, KAlphaUnanimity):
                alpha = frac(ax.alpha)
                object.__setattr__(ax, "alpha", alpha)
                if not (0 <= alpha <= 1 and 0 <= ax.k <= self.n):
                    raise DomainError("(k, alpha)-unanimity parameters out of range")


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[int, Fraction], ...]  # sparse (variable, coefficient)
    rel: str
    rhs: Fraction
    provenance: tuple


@dataclass
class SynthFeasible:
    table: dict[int, Lottery]
    lp_count: int
    seeded_by: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return True


@dataclass
class SynthInfeasible:
    program: lp.LinearProgram
    certificate: tuple[Fraction, ...]
    row_provenance: tuple[tuple, ...]  # aligned with program.constraints
    bound_provenance: tuple[tuple, ...]  # aligned with the bound rows of all_rows()
    fixed: dict[int, tuple[Fraction, tuple]]  # var -> (value, fixing provenance)
    lp_count: int

    @property
    def feasible(self) -> bool:
        return False

    def verify(self) -> bool:
        return lp.verify_infeasibility_certificate(self.program, self.certificate)


SynthesisOutcome = Union[SynthFeasible, SynthInfeasible]


def _build_rows(
    index: ProfileClassIndex, axioms: Sequence[AxiomSpec], vectors
) -> list[Row]:
    m, n = index.m, index.n
    var = lambda ci, x: ci * m + x
    rows: list[Row] = []
    for cls in index.classes:
        rows.append(
            Row(
                coeffs=tuple((var(cls.index, x), Fraction(1)) for x in range(m)),
                rel="=",
                rhs=Fraction(1),
                provenance=("lottery_total", cls.index),
            )
        )
    for ax in axioms:
        if isinstance(ax, KUnanimity):
            for cls in index.classes:
                for x, c in enumerate(cls.top_counts):
                    if c >= n - ax.k:
                        rows.append(
                            Row(
                                coeffs=((var(cls.index, x), Fraction(1)),),
                                rel="=",
                                rhs=Fraction(1),
                                provenance=("k_unanimity", ax.k, cls.index, x),
                            )
                        )
        elif isinstance(ax, KAlphaUnanimity):
            for cls in index.classes:
                for x, c in enumerate(cls.top_counts):
                    if c >= n - ax.k:
                        rows.append(
                            Row(
                                coeffs=((var(cls.index, x), Fraction(1)),),
                                rel=">=",
                                rhs=frac(ax.alpha),
                                provenance=("k_alpha_unanimity", ax.k, cls.index, x),
                            )
                        )
        elif isinstance(ax, CondorcetConsistent):
            for cls in index.classes:
                for w in cls.condorcet_winners:
                    rows.append(
                        Row(
                            coeffs=((var(cls.index, w), Fraction(1)),),
                            rel="=",
                            rhs=Fraction(1),
                            provenance=("condorcet", cls.index, w),
                        )
                    )
        elif isinstance(ax, ExPostEfficient):
            for cls in index.classes:
                for x in cls.dominated:
                    rows.append(
                        Row(
                            coeffs=((var(cls.index, x), Fraction(1)),),
                            rel="=",
                            rhs=Fraction(0),
                            provenance=("ex_post", cls.index, x),
                        )
                    )
        else:
            raise DomainError(f"unknown axiom requirement {ax!r}")
    for edge in index.edges:
        ranks = tuple(edge.true_pref.rank_of(x) for x in range(m))
        for ui, values in enumerate(vectors):
            coeffs: dict[int, Fraction] = {}
            for x in range(m):
                weight = values[ranks[x] - 1]
                if weight:
                    coeffs[var(edge.target, x)] = coeffs.get(var(edge.target, x), Fraction(0)) + weight
                    coeffs[var(edge.source, x)] = coeffs.get(var(edge.source, x), Fraction(0)) - weight
            rows.append(
                Row(
                    coeffs=tuple(sorted(coeffs.items())),
                    rel="<=",
                    rhs=Fraction(0),
                    provenance=(
                        "sp",
                        edge.source,
                        edge.true_pref.order,
                        edge.misreport.order,
                        edge.target,
                        ui,
                    ),
                )
            )
    return rows


class _RowSystem:
    """Equality-driven variable fixing plus lazily activated inequality rows."""

    def __init__(self, rows: list[Row], num_vars: int):
        self.num_vars = num_vars
        self.fixed: dict[int, tuple[Fraction, tuple]] = {}
        rows = self._dedupe(rows)
        rows = self._fix_and_imply(rows)
        self.rows = rows
        self.lp_count = 0

    @staticmethod
    def _dedupe(rows: list[Row]) -> list[Row]:
        seen = set()
        out = []
        for row in rows:
            key = (row.coeffs, row.rel, row.rhs)
            if key not in seen:
                seen.add(key)
                out.append(row)
        return out

    def _fix_and_imply(self, rows: list[Row]) -> list[Row]:
        # A single-variable equality fixes its variable; a fix to 1 inside a
        # lottery forces the sibling coordinates to 0 (emitted as explicit
        # rows so certificates can reference them).
        out = list(rows)
        lottery_vars: dict[int, tuple[int, ...]] = {}
        for row in rows:
            if row.provenance[0] == "lottery_total":
                class_index = row.provenance[1]
                lottery_vars[class_index] = tuple(v for v, _c in row.coeffs)
        queue = list(out)
        while queue:
            row = queue.pop(0)
            if row.rel != "=" or len(row.coeffs) != 1:
                continue
            v, coef = row.coeffs[0]
            value = row.rhs / coef
            if v in self.fixed:
                continue
            self.fixed[v] = (value, row.provenance)
            if value == 1 and row.provenance[0] in ("k_unanimity", "condorcet"):
                class_index = row.provenance[-2]
                for sibling in lottery_vars.get(class_index, ()):
                    if sibling == v or sibling in self.fixed:
                        continue
                    implied = Row(
                        coeffs=((sibling, Fraction(1)),),
                        rel="=",
                        rhs=Fraction(0),
                        provenance=("implied_zero", class_index, sibling % self.num_vars, row.provenance),
                    )
                    out.append(implied)
                    queue.append(implied)
        return out

    def evaluate(self, row: Row, values: dict[int, Fraction]) -> Fraction:
        return sum((c * values[v] for v, c in row.coeffs), Fraction(0))

    def satisfied(self, row: Row, values: dict[int, Fraction]) -> bool:
        lhs = self.evaluate(row, values)
        if row.rel == "<=":
            return lhs <= row.rhs
        if row.rel == ">=":
            return lhs >= row.rhs
        return lhs == row.rhs

    def check_assignment(self, values: dict[int, Fraction]) -> Optional[Row]:
        for row in self.rows:
            if not self.satisfied(row, values):
                return row
        return None

    def solve(self, objective_var: Optional[int] = None, maximize: bool = True):
        """Feasibility (objective None) or single-coordinate optimization.

        Returns ("optimal", value, assignment) or ("infeasible", SynthInfeasible-parts).
        """
        free = sorted(
            {v for row in self.rows for v, _c in row.coeffs if v not in self.fixed}
        )
        if objective_var is not None and objective_var not in self.fixed:
            if objective_var not in free:
                free = sorted(free + [objective_var])
        pos = {v: i for i, v in enumerate(free)}

        reduced: list[tuple[lp.Constraint, Row]] = []
        for row in self.rows:
            coeffs = [Fraction(0)] * len(free)
            rhs = row.rhs
            nonzero = False
            for v, c in row.coeffs:
                fx = self.fixed.get(v)
                if fx is not None:
                    rhs -= c * fx[0]
                else:
                    coeffs[pos[v]] = c
                    nonzero = True
            constraint = lp.Constraint(tuple(coeffs), row.rel, rhs)
            if not nonzero:
                zeros = tuple(Fraction(0) for _ in free)
                if constraint.satisfied_by(zeros):
                    continue  # constant row, satisfied after substitution
            reduced.append((constraint, row))

        base = [rc for rc in reduced if rc[0].rel == "=" or rc[1].provenance[0] != "sp"]
        pool = [rc for rc in reduced if rc not in base]
        # identity-based split keeps duplicates straight
        base_ids = {id(rc) for rc in base}
        pool = [rc for rc in reduced if id(rc) not in base_ids]

        objective = [Fraction(0)] * len(free)
        if objective_var is not None and objective_var in pos:
            objective[pos[objective_var]] = Fraction(1)

        active = list(base)
        while True:
            program = lp.LinearProgram(
                num_vars=len(free),
                objective=tuple(objective),
                maximize=maximize,
                constraints=tuple(c for c, _r in active),
                lower_bounds=tuple(Fraction(0) for _ in free),
            )
            self.lp_count += 1
            outcome = lp.solve(program)
            if isinstance(outcome, lp.Infeasible):
                return (
                    "infeasible",
                    SynthInfeasible(
                        program=program,
                        certificate=outcome.certificate,
                        row_provenance=tuple(r.provenance for _c, r in active),
                        bound_provenance=tuple(("nonneg", v) for v in free),
                        fixed=dict(self.fixed),
                        lp_count=self.lp_count,
                    ),
                )
            if isinstance(outcome, lp.Unbounded):
                raise AssertionError("lottery variables are bounded; LP cannot be unbounded")
            point = outcome.point
            assignment = {v: point[pos[v]] for v in free}
            assignment.update({v: val for v, (val, _p) in self.fixed.items()})
            violated = [
                rc
                for rc in pool
                if not rc[0].satisfied_by(point)
            ]
            if not violated:
                if objective_var is not None and objective_var in self.fixed:
                    value = self.fixed[objective_var][0]
                else:
                    value = outcome.value if objective_var is not None else Fraction(0)
                return ("optimal", value, assignment)
            violated_ids = {id(rc) for rc in violated}
            active.extend(violated)
            pool = [rc for rc in pool if id(rc) not in violated_ids]


def _sp_vectors(uset: UtilitySet):
    return uset.sp_vectors()


def _seed_candidates(m: int, n: int) -> list[SocialDecisionScheme]:
    from . import rules as _rules

    seeds: list[SocialDecisionScheme] = [_rules.rd()]
    for k in range(1, (n - 1) // 2 + 1):
        seeds.append(_rules.rd_k(k))
    seeds.append(_rules.omni_star())
    seeds.append(_rules.cond())
    if m == 3 and n % 2 == 0:
        seeds.append(_rules.f3())
    if m == 3 and n == 4:
        seeds.append(_rules.f2())
    if m >= 4 and n == 5:
        seeds.append(_rules.f1())
    return [s for s in seeds if s.in_domain(m, n)]


def synthesize(problem: SynthesisProblem) -> SynthesisOutcome:
    """One LP over class lotteries: axiom rows plus a gain row per deviation
    edge and utility vector.  Returns a verified feasible table or a
    verified Farkas certificate.

    Deterministic candidate rules are tried first (their tables are checked
    against every generated row exactly); the LP runs whenever no candidate
    fits, and always for infeasibility certificates.
    """
    index = enumerate_profiles(problem.m, problem.n, problem.mode, cap=problem.cap)
    vectors = _sp_vectors(problem.utility_set)
    rows = _build_rows(index, problem.axioms, vectors)
    system = _RowSystem(rows, len(index.classes) * problem.m)

    if problem.seeds:
        for candidate in _seed_candidates(problem.m, problem.n):
            try:
                assignment = _table_assignment(index, candidate, problem.m)
            except DomainError:
                continue
            if system.check_assignment(assignment) is None:
                table = _assignment_to_table(assignment, index, problem.m)
                outcome = SynthFeasible(table=table, lp_count=0, seeded_by=candidate.name)
                _replay(problem, index, outcome)
                return outcome

    result = system.solve()
    if result[0] == "infeasible":
        infeasible = result[1]
        if not infeasible.verify():
            raise AssertionError("synthesis certificate failed verification")
        return infeasible
    _status, _value, assignment = result
    bad = system.check_assignment(assignment)
    if bad is not None:
        raise AssertionError(f"feasible assignment violates row {bad.provenance}")
    table = _assignment_to_table(assignment, index, problem.m)
    outcome = SynthFeasible(table=table, lp_count=system.lp_count)
    _replay(problem, index, outcome)
    return outcome


def _table_assignment(
    index: ProfileClassIndex, rule: SocialDecisionScheme, m: int
) -> dict[int, Fraction]:
    assignment: dict[int, Fraction] = {}
    for cls in index.classes:
        lottery = rule.evaluate(cls.representative)
        for x in range(m):
            assignment[cls.index * m + x] = lottery[x]
    return assignment


def _assignment_to_table(
    assignment: dict[int, Fraction], index: ProfileClassIndex, m: int
) -> dict[int, Lottery]:
    table = {}
    for cls in index.classes:
        table[cls.index] = Lottery(
            tuple(assignment[cls.index * m + x] for x in range(m))
        )
    return table


def expand_table(
    index: ProfileClassIndex, table: dict[int, Lottery], name: str = "synthesized"
) -> SocialDecisionScheme:
    """The table as an evaluable rule over the full profile space."""
    mapping = {
        cls.representative: table[cls.index] for cls in index.classes
    }
    return table_sds(name, index.m, index.n, mapping, symmetry=index.mode)


def _replay(problem: SynthesisProblem, index: ProfileClassIndex, outcome: SynthFeasible):
    """Feasible tables at small sizes are replayed through the checkers."""
    if problem.m > 3 or problem.n > 4:
        return
    from . import axioms as _axioms
    from . import manip as _manip

    rule = expand_table(index, outcome.table)
    for ax in problem.axioms:
        if isinstance(ax, KUnanimity):
            report = _axioms.check_k_unanimity(rule, ax.k, problem.m, problem.n)
        elif isinstance(ax, KAlphaUnanimity):
            report = _axioms.check_k_alpha_unanimity(
                rule, ax.k, ax.alpha, problem.m, problem.n
            )
        elif isinstance(ax, CondorcetConsistent):
            report = _axioms.check_condorcet_consistency(rule, problem.m, problem.n)
        else:
            report = _axioms.check_ex_post_efficiency(rule, problem.m, problem.n)
        if not report.passed:
            raise AssertionError(f"synthesized table fails replay of {ax}")
    sp = _manip.check_u_sp(rule, problem.utility_set, problem.m, problem.n)
    if not sp.passed:
        raise AssertionError("synthesized table fails strategyproofness replay")


class InfeasibleProblemError(RuntimeError):
    """Raised by bound queries on infeasible problems; carries the certificate."""

    def __init__(self, outcome: SynthInfeasible):
        super().__init__("synthesis problem is infeasible")
        self.outcome = outcome


def bound_probability(
    problem: SynthesisProblem, class_index: int, x: int
) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of one lottery coordinate over the feasibility region."""
    index = enumerate_profiles(problem.m, problem.n, problem.mode, cap=problem.cap)
    if not 0 <= class_index < len(index.classes) or not 0 <= x < problem.m:
        raise DomainError("class or alternative out of range")
    vectors = _sp_vectors(problem.utility_set)
    rows = _build_rows(index, problem.axioms, vectors)
    var = class_index * problem.m + x

    bounds = []
    for maximize in (False, True):
        system = _RowSystem(rows, len(index.classes) * problem.m)
        result = system.solve(objective_var=var, maximize=maximize)
        if result[0] == "infeasible":
            infeasible = result[1]
            if not infeasible.verify():
                raise AssertionError("bound certificate failed verification")
            raise InfeasibleProblemError(infeasible)
        bounds.append(result[1])
    return bounds[0], bounds[1]


# ---------------------------------------------------------------------------
# Condorcet impossibility gadget
# ---------------------------------------------------------------------------


@dataclass
class CondorcetCertification:
    case: int
    profiles: tuple[Profile, Profile, Profile, Profile]
    winners: tuple[int, int, int]
    outcome: SynthesisOutcome


def _case1_profiles(m: int) -> tuple[Profile, ...]:
    x, y, z = 0, 1, 2
    mid = tuple(range(3, m))

    def p(a, b, c):
        return PreferenceRelation((a, b) + mid + (c,))

    r1 = Profile((p(x, y, z), p(y, z, x), p(z, x, y)))
    r2 = r1.replace(0, p(y, x, z))
    r3 = r1.replace(1, p(z, y, x))
    r4 = r1.replace(2, p(x, z, y))
    return r1, r2, r3, r4


def _case2_profiles(m: int) -> tuple[Profile, ...]:
    x, y, z = 0, 1, 2
    mid = tuple(range(3, m))

    def low(a, b, c):
        return PreferenceRelation((a,) + mid + (b, c))

    def high(a, b, c):
        return PreferenceRelation((a, b, c) + mid)

    r1 = Profile((low(x, y, z), low(z, x, y), low(y, z, x), high(x, y, z), high(z, y, x)))
    r2 = r1.replace(0, low(x, z, y))
    r3 = r1.replace(1, low(z, y, x))
    r4 = r1.replace(2, low(y, x, z))
    return r1, r2, r3, r4


def condorcet_gadget_lp(
    m: int, u: UtilityVector, case: int
) -> tuple[lp.LinearProgram, tuple[tuple, ...], tuple[Profile, ...], tuple[int, int, int]]:
    """The gadget feasibility system over the lottery at the cycle profile.

    One strategyproofness row per deviating voter against the profile where
    the named alternative is the Condorcet winner, plus the lottery simplex.
    Case 1 deviations leave the cycle profile; case 2 deviations enter it.
    """
    if m < 4:
        raise DomainError("the Condorcet gadget needs at least four alternatives")
    if u.m != m:
        raise DomainError("utility vector has the wrong alternative count")
    if case == 1:
        r1, r2, r3, r4 = _case1_profiles(m)
        expected = (1, 2, 0)  # winners of r2, r3, r4
    elif case == 2:
        r1, r2, r3, r4 = _case2_profiles(m)
        expected = (2, 1, 0)
    else:
        raise DomainError("case must be 1 or 2")
    winners = tuple(condorcet_winner(r) for r in (r2, r3, r4))
    if winners != expected:
        raise AssertionError(
            f"gadget fidelity: winners {winners} do not match the construction {expected}"
        )

    one, zero = Fraction(1), Fraction(0)
    rows = [lp.Constraint(tuple(one for _ in range(m)), "=", one)]
    provenance: list[tuple] = [("lottery_total", "cycle_profile")]
    for voter, (truth_profile, winner) in enumerate(zip((r2, r3, r4), winners)):
        if case == 1:
            true_pref = r1.prefs[voter]
        else:
            true_pref = truth_profile.prefs[voter]
        weights = tuple(u.of_rank(true_pref.rank_of(xx)) for xx in range(m))
        target_value = u.of_rank(true_pref.rank_of(winner))
        if case == 1:
            # truth at the cycle profile; deviating elects the winner
            rows.append(lp.Constraint(weights, ">=", target_value))
        else:
            # truth where the winner stands; deviating yields the cycle lottery
            rows.append(lp.Constraint(weights, "<=", target_value))
        provenance.append(
            ("sp", "voter", voter, "winner", winner, "case", case)
        )
    program = lp.LinearProgram(
        num_vars=m,
        objective=tuple(one for _ in range(m)),
        maximize=True,
        constraints=tuple(rows),
        lower_bounds=tuple(zero for _ in range(m)),
    )
    return program, tuple(provenance), (r1, r2, r3, r4), winners


def certify_condorcet_impossibility(
    m: int, u: UtilityVector, force_case: Optional[int] = None
) -> CondorcetCertification:
    """Infeasibility of Condorcet-consistency with single-vector
    strategyproofness, certified on the case-matched proof gadget."""
    if m < 4:
        raise DomainError("m must be at least 4")
    if u.m != m:
        raise DomainError("utility vector has the wrong alternative count")
    if force_case is not None:
        case = force_case
    elif u.of_rank(1) - u.of_rank(2) < u.of_rank(2) - u.of_rank(m):
        case = 1
    elif u.of_rank(1) - u.of_rank(m - 1) > u.of_rank(m - 1) - u.of_rank(m):
        case = 2
    else:
        raise AssertionError("the two utility cases are exhaustive for m >= 4")
    program, provenance, profiles, winners = condorcet_gadget_lp(m, u, case)
    outcome = lp.solve(program)
    if isinstance(outcome, lp.Infeasible):
        if not lp.verify_infeasibility_certificate(program, outcome.certificate):
            raise AssertionError("gadget certificate failed verification")
        synth_outcome: SynthesisOutcome = SynthInfeasible(
            program=program,
            certificate=outcome.certificate,
            row_provenance=provenance,
            bound_provenance=tuple(("nonneg", x) for x in range(m)),
            fixed={},
            lp_count=1,
        )
    elif isinstance(outcome, lp.Optimal):
        synth_outcome = SynthFeasible(
            table={0: Lottery(outcome.point)}, lp_count=1
        )
    else:
        raise AssertionError("gadget system is bounded")
    return CondorcetCertification(
        case=case, profiles=profiles, winners=winners, outcome=synth_outcome
    )


# ---------------------------------------------------------------------------
# Whole-space impossibility certifications
# ---------------------------------------------------------------------------


def certify_expost_impossibility(
    m: int, n: int, k: int, eps, u: UtilityVector
) -> SynthesisOutcome:
    """Ex post efficiency + near-unanimity + single-vector strategyproofness.

    Requires the nearly-indifferent hypothesis on u; the synthesized system
    is expected infeasible, and the returned certificate proves it.
    """
    eps = frac(eps)
    if m < 3 or n < 3:
        raise DomainError("m and n must be at least 3")
    if not 1 <= k <= n - 1:
        raise DomainError("k must lie in 1..n-1")
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    if u.m != m:
        raise DomainError("utility vector has the wrong alternative count")
    if u.of_rank(1) - u.of_rank(2) > eps / 2 * (u.of_rank(2) - u.of_rank(3)):
        raise DomainError(
            "hypothesis violated: u(1)-u(2) must be at most (eps/2)(u(2)-u(3))"
        )
    alpha = Fraction(n - k, n) + eps
    if alpha > 1:
        raise DomainError("(n-k)/n + eps exceeds 1; the target is vacuous")
    problem = SynthesisProblem(
        m=m,
        n=n,
        mode=ANONYMOUS,
        axioms=(ExPostEfficient(), KAlphaUnanimity(k, alpha)),
        utility_set=finite_from_vector(u),
    )
    return synthesize(problem)


def certify_rank_based_impossibility(
    m: int, n: int, k: int, u: UtilityVector
) -> SynthesisOutcome:
    """Rank-based synthesis under k-unanimity and single-vector
    strategyproofness; infeasible whenever the utility gap hypothesis holds."""
    if m < 3 or n < 3:
        raise DomainError("m and n must be at least 3")
    if not 1 <= k <= (n - 1) // 2:
        raise DomainError("k must lie in 1..floor((n-1)/2)")
    if u.m != m:
        raise DomainError("utility vector has the wrong alternative count")
    bound = sum(
        (u.of_rank(2) - u.of_rank(i) for i in range(max(3, m - k + 1), m + 1)),
        Fraction(0),
    )
    if not u.of_rank(1) - u.of_rank(2) < bound:
        raise DomainError(
            "hypothesis violated: u(1)-u(2) must be below the summed gap bound; "
            "run synthesize directly to probe the boundary"
        )
    problem = SynthesisProblem(
        m=m,
        n=n,
        mode=RANK_BASED,
        axioms=(KUnanimity(k),),
        utility_set=finite_from_vector(u),
    )
    return synthesize(problem)


def finite_from_vector(u: UtilityVector) -> UtilitySet:
    from .core import finite_utility_set

    return finite_utility_set([u])


def rank_gap_bound(tail: Sequence[Fraction], m: int, k: int) -> Fraction:
    """u(1) below which rank-based synthesis is impossible: the summed gap
    bound plus u(2), computed from a fixed tail u(2)..u(m)."""
    tail = tuple(frac(v) for v in tail)
    if len(tail) != m - 1:
        raise DomainError("tail must list u(2)..u(m)")
    u2 = tail[0]
    total = sum(
        (u2 - tail[i - 2] for i in range(max(3, m - k + 1), m + 1)),
        Fraction(0),
    )
    return total + u2


# ---------------------------------------------------------------------------
# Table documents (synthesis output as a rule definition)
# ---------------------------------------------------------------------------


def table_document(problem: SynthesisProblem, table: dict[int, Lottery]) -> dict:
    index = enumerate_profiles(problem.m, problem.n, problem.mode, cap=problem.cap)
    return {
        "m": problem.m,
        "n": problem.n,
        "symmetry": problem.mode,
        "classes": [
            {
                "representative": [list(p.order) for p in cls.representative.prefs],
                "lottery": [str(q) for q in table[cls.index].probs],
            }
            for cls in index.classes
        ],
    }


def load_table_document(doc: dict) -> SocialDecisionScheme:
    m, n, symmetry = int(doc["m"]), int(doc["n"]), doc["symmetry"]
    mapping = {}
    for entry in doc["classes"]:
        profile = Profile(
            tuple(PreferenceRelation(tuple(order)) for order in entry["representative"])
        )
        lottery = Lottery(tuple(Fraction(q) for q in entry["lottery"]))
        mapping[profile] = lottery
    return table_sds("table", m, n, mapping, symmetry=symmetry)
