"""The strategyproofness engine: exact gains, LP search over utility
polytopes, exhaustive verdicts, coalitional checks, and threshold search.

A deviation's gain is linear in the rank-indexed utility vector, with
coefficients given by the lottery change read through the deviator's TRUE
preference.  Over a finite or vertex-listed utility set the maximal gain is
attained at a listed vector; over a polytope it is decided by an exact LP
on the closure, whose positive optimum is perturbed to a strictly
decreasing witness (the closure equals the closure of its strict part by
construction of every utility set).

Rules that are tops-only by construction are swept over the exact quotient
of deviations by everything the rule ignores; this is a complete cover of
all deviation gains, not a sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterator, Optional, Sequence, Union

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
    all_profiles,
    expected_utility,
    finite_utility_set,
    frac,
    profile_space_size,
)
from .rules import SocialDecisionScheme

DEFAULT_SWEEP_CAP = 10**7
DEFAULT_GROUP_BUDGET = 10**7


@dataclass(frozen=True)
class Deviation:
    """A single voter's misreport against an otherwise fixed profile."""

    profile: Profile
    voter: int
    misreport: PreferenceRelation

    def __post_init__(self):
        if not 0 <= self.voter < self.profile.n:
            raise DomainError(f"voter {self.voter} out of range")
        if self.misreport == self.profile.prefs[self.voter]:
            raise DomainError("a misreport must differ from the true preference")
        if self.misreport.m != self.profile.m:
            raise DomainError("misreport covers the wrong alternative count")

    @property
    def true_preference(self) -> PreferenceRelation:
        return self.profile.prefs[self.voter]

    def deviated_profile(self) -> Profile:
        return self.profile.replace(self.voter, self.misreport)


@dataclass(frozen=True)
class GroupDeviation:
    """A coalition of voters sharing one true preference, misreporting jointly."""

    profile: Profile
    voters: tuple[int, ...]
    misreports: tuple[PreferenceRelation, ...]

    def __post_init__(self):
        if len(self.voters) != len(self.misreports) or not self.voters:
            raise DomainError("voters and misreports must align and be non-empty")
        shared = {self.profile.prefs[i] for i in self.voters}
        if len(shared) != 1:
            raise DomainError("a coalition must share one true preference")
        if all(
            self.profile.prefs[i] == r for i, r in zip(self.voters, self.misreports)
        ):
            raise DomainError("at least one coalition member must misreport")

    @property
    def true_preference(self) -> PreferenceRelation:
        return self.profile.prefs[self.voters[0]]

    def deviated_profile(self) -> Profile:
        prefs = list(self.profile.prefs)
        for i, r in zip(self.voters, self.misreports):
            prefs[i] = r
        return Profile(tuple(prefs))


@dataclass(frozen=True)
class ManipulationWitness:
    """A replayable strict-gain counterexample to U-strategyproofness."""

    deviation: Union[Deviation, GroupDeviation]
    utility: UtilityVector
    gain: Fraction
    truthful: Lottery
    deviated: Lottery

    def __post_init__(self):
        pref = self.deviation.true_preference
        recomputed = expected_utility(self.deviated, self.utility, pref) - expected_utility(
            self.truthful, self.utility, pref
        )
        if recomputed != self.gain or self.gain <= 0:
            raise DomainError("witness gain does not replay to a positive value")


@dataclass(frozen=True)
class SPCheckResult:
    witness: Optional[ManipulationWitness]
    deviations_checked: int
    lp_count: int
    coverage: str  # "full" or "tops_quotient"

    @property
    def passed(self) -> bool:
        return self.witness is None


def gain(f: SocialDecisionScheme, deviation: Deviation, u: UtilityVector) -> Fraction:
    """Expected-utility change of the deviation, measured through the true preference."""
    truthful = f.evaluate(deviation.profile)
    deviated = f.evaluate(deviation.deviated_profile())
    pref = deviation.true_preference
    return expected_utility(deviated, u, pref) - expected_utility(truthful, u, pref)


def gain_coefficients(
    truthful: Lottery, deviated: Lottery, pref: PreferenceRelation
) -> tuple[Fraction, ...]:
    """Per-rank coefficients c with gain(u) = sum_r c[r-1] * u(r); they sum to 0."""
    coeffs = [Fraction(0)] * pref.m
    for x in range(pref.m):
        coeffs[pref.rank_of(x) - 1] = deviated[x] - truthful[x]
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# Maximal gain over a utility set
# ---------------------------------------------------------------------------


def _gain_at(coeffs: Sequence[Fraction], values: Sequence[Fraction]) -> Fraction:
    return sum((c * v for c, v in zip(coeffs, values)), Fraction(0))


def _strictify(
    candidate: Sequence[Fraction],
    candidate_gain: Fraction,
    coeffs: Sequence[Fraction],
    strict: UtilityVector,
) -> tuple[UtilityVector, Fraction]:
    """Rational perturbation toward a strict point, keeping the gain positive."""
    if all(a > b for a, b in zip(candidate, list(candidate)[1:])):
        return UtilityVector(tuple(candidate)), candidate_gain
    strict_gain = _gain_at(coeffs, strict.values)
    if strict_gain >= 0:
        t = Fraction(1, 2)
    else:
        t = candidate_gain / (2 * (candidate_gain - strict_gain))
    values = tuple(
        (1 - t) * c + t * s for c, s in zip(candidate, strict.values)
    )
    return UtilityVector(values), _gain_at(coeffs, values)


def _best_over_candidates(coeffs, candidates):
    best_gain = None
    best = None
    for values in candidates:
        g = _gain_at(coeffs, values)
        if best_gain is None or g > best_gain:
            best_gain, best = g, values
    return best_gain, best


def _polytope_gain_lp(uset: UtilitySet, coeffs) -> lp.LinearProgram:
    m = uset.m
    one, zero = Fraction(1), Fraction(0)
    rows = [
        lp.Constraint(tuple(one if j == 0 else zero for j in range(m)), "=", one),
        lp.Constraint(tuple(one if j == m - 1 else zero for j in range(m)), "=", zero),
    ]
    for i in range(m - 1):
        chain = [zero] * m
        chain[i], chain[i + 1] = one, -one
        rows.append(lp.Constraint(tuple(chain), ">=", zero))
    for row_coeffs, rel, rhs in uset.extra_rows:
        rows.append(lp.Constraint(row_coeffs, rel, rhs))
    return lp.LinearProgram(
        num_vars=m,
        objective=tuple(coeffs),
        maximize=True,
        constraints=tuple(rows),
    )


class _GainMaximizer:
    """Decides, per deviation, whether some utility in the set gains strictly."""

    def __init__(self, uset: UtilitySet):
        self.uset = uset
        self.lp_count = 0
        try:
            self.candidates = uset.sp_vectors()
        except DomainError:
            self.candidates = None
        if self.candidates is None and uset.kind != POLYTOPE:
            raise DomainError("utility set admits neither vertices nor a polytope form")

    def best(self, coeffs) -> Optional[tuple[UtilityVector, Fraction]]:
        if self.candidates is not None:
            best_gain, best = _best_over_candidates(coeffs, self.candidates)
            if best_gain is None or best_gain <= 0:
                return None
            return _strictify(best, best_gain, coeffs, self.uset.strict_point)
        self.lp_count += 1
        outcome = lp.solve(_polytope_gain_lp(self.uset, coeffs))
        if not isinstance(outcome, lp.Optimal):
            raise AssertionError("gain maximization over a utility polytope must be bounded")
        if outcome.value <= 0:
            return None
        return _strictify(outcome.point, outcome.value, coeffs, self.uset.strict_point)


def best_manipulation_utility(
    f: SocialDecisionScheme, deviation: Deviation, uset: UtilitySet
) -> Optional[ManipulationWitness]:
    """The gain-maximizing utility in a polytope or vertex-listed set, if it gains."""
    if uset.kind == FINITE:
        raise DomainError("best_manipulation_utility requires a polytope or vertex set")
    truthful = f.evaluate(deviation.profile)
    deviated = f.evaluate(deviation.deviated_profile())
    coeffs = gain_coefficients(truthful, deviated, deviation.true_preference)
    maximizer = _GainMaximizer(uset)
    hit = maximizer.best(coeffs)
    if hit is None:
        return None
    utility, best_gain = hit
    return ManipulationWitness(
        deviation=deviation,
        utility=utility,
        gain=best_gain,
        truthful=truthful,
        deviated=deviated,
    )


# ---------------------------------------------------------------------------
# Exhaustive sweeps
# ---------------------------------------------------------------------------


def _canonical_pref(top: int, m: int) -> PreferenceRelation:
    rest = tuple(x for x in range(m) if x != top)
    return PreferenceRelation((top,) + rest)


def _quotient_deviations(
    f: SocialDecisionScheme, m: int, n: int
) -> Iterator[tuple[Profile, int, PreferenceRelation, Lottery, Lottery]]:
    """All deviation gains of a tops-only rule, one representative per class.

    Classes are (other voters' top multiset, true preference, misreported
    top); the rule cannot distinguish anything finer, so this covers every
    deviation of the full space exactly once up to equal gain.
    """
    prefs = all_preferences(m)
    for others in combinations_with_replacement(range(m), n - 1):
        base = [0] * m
        for t in others:
            base[t] += 1
        rep_others = tuple(_canonical_pref(t, m) for t in others)
        for true_pref in prefs:
            counts = list(base)
            counts[true_pref.top] += 1
            truthful = f.lottery_from_tops(tuple(counts), n)
            for mis_top in range(m):
                if mis_top == true_pref.top:
                    continue
                dev_counts = list(base)
                dev_counts[mis_top] += 1
                deviated = f.lottery_from_tops(tuple(dev_counts), n)
                profile = Profile(rep_others + (true_pref,))
                yield profile, n - 1, _canonical_pref(mis_top, m), truthful, deviated


def _full_deviations(f, m, n, cap):
    prefs = all_preferences(m)
    for profile in all_profiles(m, n, cap=cap):
        truthful = f.evaluate(profile)
        for voter in range(n):
            true_pref = profile.prefs[voter]
            for misreport in prefs:
                if misreport == true_pref:
                    continue
                deviated = f.evaluate(profile.replace(voter, misreport))
                yield profile, voter, misreport, truthful, deviated


def check_u_sp(
    f: SocialDecisionScheme,
    uset: UtilitySet,
    m: int,
    n: int,
    *,
    cap: int = DEFAULT_SWEEP_CAP,
) -> SPCheckResult:
    """Exhaustive strategyproofness verdict for all utilities in the set.

    Finite sets apply each rank-indexed vector to every deviator (its
    consistent renaming per preference); polytopes and vertex sets are
    decided by maximal gain.
    """
    if not f.in_domain(m, n):
        raise DomainError(f"rule {f.name} is not defined for m={m}, n={n}")
    if uset.m != m:
        raise DomainError("utility set has the wrong alternative count")
    maximizer = _GainMaximizer(uset)
    if f.tops_only:
        coverage = "tops_quotient"
        deviations = _quotient_deviations(f, m, n)
    else:
        coverage = "full"
        deviations = _full_deviations(f, m, n, cap)
    checked = 0
    for profile, voter, misreport, truthful, deviated in deviations:
        checked += 1
        coeffs = gain_coefficients(truthful, deviated, profile.prefs[voter])
        hit = maximizer.best(coeffs)
        if hit is not None:
            utility, best_gain = hit
            witness = ManipulationWitness(
                deviation=Deviation(profile, voter, misreport),
                utility=utility,
                gain=best_gain,
                truthful=truthful,
                deviated=deviated,
            )
            return SPCheckResult(witness, checked, maximizer.lp_count, coverage)
    return SPCheckResult(None, checked, maximizer.lp_count, coverage)


def check_u_pi_sp(
    f: SocialDecisionScheme,
    u: UtilityVector,
    m: int,
    n: int,
    *,
    cap: int = DEFAULT_SWEEP_CAP,
) -> SPCheckResult:
    """Strategyproofness for one utility vector and all its alternative relabelings.

    Rank indexing realizes exactly one consistent relabeling per preference,
    so this is the single-vector finite check.
    """
    return check_u_sp(f, finite_utility_set([u]), m, n, cap=cap)


def check_group_sp(
    f: SocialDecisionScheme,
    uset: UtilitySet,
    m: int,
    n: int,
    *,
    cap: int = DEFAULT_SWEEP_CAP,
    budget: int = DEFAULT_GROUP_BUDGET,
) -> SPCheckResult:
    """Coalitions of voters sharing a true preference, misreporting jointly.

    Enumerates maximal same-preference coalitions with every joint
    misreport tuple (members may individually stay truthful, which covers
    all sub-coalitions); refuses beyond the budget rather than sampling.
    """
    if not f.in_domain(m, n):
        raise DomainError(f"rule {f.name} is not defined for m={m}, n={n}")
    if uset.m != m:
        raise DomainError("utility set has the wrong alternative count")
    maximizer = _GainMaximizer(uset)
    prefs = all_preferences(m)
    checked = 0
    for profile in all_profiles(m, n, cap=cap):
        truthful = f.evaluate(profile)
        groups: dict[PreferenceRelation, list[int]] = {}
        for i, p in enumerate(profile.prefs):
            groups.setdefault(p, []).append(i)
        for true_pref, voters in groups.items():
            for joint in product(prefs, repeat=len(voters)):
                if all(r == true_pref for r in joint):
                    continue
                checked += 1
                if checked > budget:
                    raise RefusalError(
                        f"group sweep exceeded the budget of {budget} joint misreports"
                    )
                replaced = list(profile.prefs)
                for i, r in zip(voters, joint):
                    replaced[i] = r
                deviated = f.evaluate(Profile(tuple(replaced)))
                if deviated == truthful:
                    continue
                coeffs = gain_coefficients(truthful, deviated, true_pref)
                hit = maximizer.best(coeffs)
                if hit is not None:
                    utility, best_gain = hit
                    if len(voters) == 1:
                        dev: Union[Deviation, GroupDeviation] = Deviation(
                            profile, voters[0], joint[0]
                        )
                    else:
                        dev = GroupDeviation(profile, tuple(voters), joint)
                    witness = ManipulationWitness(
                        deviation=dev,
                        utility=utility,
                        gain=best_gain,
                        truthful=truthful,
                        deviated=deviated,
                    )
                    return SPCheckResult(witness, checked, maximizer.lp_count, "full")
    return SPCheckResult(None, checked, maximizer.lp_count, "full")


# ---------------------------------------------------------------------------
# Threshold search over the top utility
# ---------------------------------------------------------------------------


def sp_boundary(
    f: SocialDecisionScheme,
    tail: Sequence[Fraction],
    m: int,
    n: int,
    *,
    cap: int = DEFAULT_SWEEP_CAP,
) -> Fraction:
    """Least top utility making the rule strategyproof for (u(1), tail).

    Each deviation's gain is linear in u(1) with the tail fixed; a positive
    u(1) coefficient anywhere means the gain increases in u(1) and no
    boundary exists.  With all coefficients nonpositive the thresholds are
    closed-form and the maximum is exact.  The result is the infimum; it is
    attained unless it equals tail[0], where strict decrease already fails.
    """
    tail = tuple(frac(v) for v in tail)
    if len(tail) != m - 1:
        raise DomainError("tail must list u(2)..u(m)")
    if any(a <= b for a, b in zip(tail, tail[1:])):
        raise DomainError("tail must be strictly decreasing")
    if not f.in_domain(m, n):
        raise DomainError(f"rule {f.name} is not defined for m={m}, n={n}")
    if f.tops_only:
        deviations = _quotient_deviations(f, m, n)
    else:
        deviations = _full_deviations(f, m, n, cap)
    bound = tail[0]
    for profile, voter, _mis, truthful, deviated in deviations:
        coeffs = gain_coefficients(truthful, deviated, profile.prefs[voter])
        c1 = coeffs[0]
        rest = _gain_at(coeffs[1:], tail)
        if c1 > 0 or (c1 == 0 and rest > 0):
            raise DomainError(
                f"gain is not monotone non-increasing in u(1) for rule {f.name}; "
                "boundary undefined for this rule"
            )
        if c1 < 0:
            threshold = rest / (-c1)
            if threshold > bound:
                bound = threshold
    _assert_boundary(f, tail, m, n, bound, cap)
    return bound


def _assert_boundary(f, tail, m, n, bound, cap):
    u2 = tail[0]
    if bound <= u2:
        probe = UtilityVector((u2 + 1,) + tail)
        if not check_u_pi_sp(f, probe, m, n, cap=cap).passed:
            raise AssertionError("boundary consistency: expected a pass above the boundary")
        return
    at = UtilityVector((bound,) + tail)
    if not check_u_pi_sp(f, at, m, n, cap=cap).passed:
        raise AssertionError("boundary consistency: expected a pass at the boundary")
    step = Fraction(1, 1000)
    below = bound - step if bound - step > u2 else (bound + u2) / 2
    if check_u_pi_sp(f, UtilityVector((below,) + tail), m, n, cap=cap).passed:
        raise AssertionError("boundary consistency: expected a witness below the boundary")
