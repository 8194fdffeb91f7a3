"""Exhaustive axiom checkers: Pass, or a replayable counterexample.

Each checker sweeps a declared (m, n) domain, or an explicit profile list,
and never subsamples: a sweep larger than the hard cap is refused.  Voter
and alternative permutations are checked on adjacent transpositions only,
which generate the full symmetric groups.

Sweeps can be partitioned across worker processes (``jobs > 1``) when the
rule is reconstructible from its name; reports merge deterministically by
first counterexample in profile order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .core import (
    DomainError,
    Lottery,
    Profile,
    RefusalError,
    all_preferences,
    condorcet_winner,
    frac,
    pareto_dominated,
    permute_alternatives,
    permute_voters,
    profile_space_size,
    rank_matrix,
)
from .rules import SocialDecisionScheme, resolve_rule

DEFAULT_SWEEP_CAP = 10**7


@dataclass(frozen=True)
class AxiomCounterexample:
    profiles: tuple[Profile, ...]
    witness: tuple[tuple[str, object], ...]
    observed: tuple
    required: tuple


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    status: str  # "pass" | "counterexample"
    profiles_visited: int
    counterexample: Optional[AxiomCounterexample] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _sweep(
    f: SocialDecisionScheme,
    m: int,
    n: int,
    profiles: Optional[Sequence[Profile]],
    cap: int,
) -> tuple[Iterable[Profile], int]:
    if not f.in_domain(m, n):
        raise DomainError(f"rule {f.name} is not defined for m={m}, n={n}")
    if profiles is not None:
        for p in profiles:
            if p.m != m or p.n != n:
                raise DomainError("explicit profile list does not match (m, n)")
        return profiles, len(profiles)
    total = profile_space_size(m, n)
    if total > cap:
        raise RefusalError(
            f"sweep over {total} profiles exceeds the cap of {cap}; "
            "refusing rather than subsampling"
        )
    return _profile_range(m, n, 0, total), total


def _profile_range(m: int, n: int, start: int, stop: int):
    prefs = all_preferences(m)
    base = len(prefs)
    for index in range(start, stop):
        digits = []
        value = index
        for _ in range(n):
            digits.append(value % base)
            value //= base
        digits.reverse()
        yield Profile(tuple(prefs[d] for d in digits))


def _report(axiom, visited, violation) -> AxiomReport:
    if violation is None:
        return AxiomReport(axiom=axiom, status="pass", profiles_visited=visited)
    return AxiomReport(
        axiom=axiom, status="counterexample", profiles_visited=visited, counterexample=violation
    )


# ---------------------------------------------------------------------------
# Per-profile violation finders
# ---------------------------------------------------------------------------


def _anonymity_violation(f, profile):
    base = f.evaluate(profile)
    n = profile.n
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        permuted = permute_voters(profile, perm)
        other = f.evaluate(permuted)
        if other != base:
            return AxiomCounterexample(
                profiles=(profile, permuted),
                witness=(("voter_permutation", tuple(perm)),),
                observed=tuple(other.probs),
                required=tuple(base.probs),
            )
    return None


def _neutrality_violation(f, profile):
    base = f.evaluate(profile)
    m = profile.m
    for i in range(m - 1):
        perm = list(range(m))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        permuted = permute_alternatives(profile, perm)
        other = f.evaluate(permuted)
        expected = tuple(base[x] for x in range(m))
        relabeled = tuple(other[perm[x]] for x in range(m))
        if relabeled != expected:
            return AxiomCounterexample(
                profiles=(profile, permuted),
                witness=(("alternative_permutation", tuple(perm)),),
                observed=relabeled,
                required=expected,
            )
    return None


def _k_unanimity_violation(f, profile, k):
    counts = profile.top_counts()
    n = profile.n
    for x, c in enumerate(counts):
        if c >= n - k and f.evaluate(profile)[x] != 1:
            return AxiomCounterexample(
                profiles=(profile,),
                witness=(("alternative", x), ("k", k), ("top_count", c)),
                observed=(f.evaluate(profile)[x],),
                required=(Fraction(1),),
            )
    return None


def _k_alpha_violation(f, profile, k, alpha):
    counts = profile.top_counts()
    n = profile.n
    for x, c in enumerate(counts):
        if c >= n - k and f.evaluate(profile)[x] < alpha:
            return AxiomCounterexample(
                profiles=(profile,),
                witness=(("alternative", x), ("k", k), ("alpha", alpha), ("top_count", c)),
                observed=(f.evaluate(profile)[x],),
                required=(alpha,),
            )
    return None


def _condorcet_violation(f, profile):
    winner = condorcet_winner(profile)
    if winner is not None and f.evaluate(profile)[winner] != 1:
        return AxiomCounterexample(
            profiles=(profile,),
            witness=(("condorcet_winner", winner),),
            observed=(f.evaluate(profile)[winner],),
            required=(Fraction(1),),
        )
    return None


def _ex_post_violation(f, profile):
    lottery = f.evaluate(profile)
    for x in range(profile.m):
        if lottery[x] > 0 and pareto_dominated(profile, x):
            return AxiomCounterexample(
                profiles=(profile,),
                witness=(("pareto_dominated", x),),
                observed=(lottery[x],),
                required=(Fraction(0),),
            )
    return None


_FINDERS: dict[str, Callable] = {
    "anonymity": _anonymity_violation,
    "neutrality": _neutrality_violation,
    "k_unanimity": _k_unanimity_violation,
    "k_alpha_unanimity": _k_alpha_violation,
    "condorcet_consistency": _condorcet_violation,
    "ex_post_efficiency": _ex_post_violation,
}


def _worker_scan(rule_spec, axiom, m, n, start, stop, extra):
    f = resolve_rule(rule_spec)
    finder = _FINDERS[axiom]
    for offset, profile in enumerate(_profile_range(m, n, start, stop)):
        violation = finder(f, profile, *extra)
        if violation is not None:
            return start + offset, violation
    return None


def _scan(f, axiom, m, n, profiles, cap, jobs, extra=()):
    finder = _FINDERS[axiom]
    if jobs > 1 and profiles is None and _addressable(f):
        if not f.in_domain(m, n):
            raise DomainError(f"rule {f.name} is not defined for m={m}, n={n}")
        total = profile_space_size(m, n)
        if total > cap:
            raise RefusalError(
                f"sweep over {total} profiles exceeds the cap of {cap}; "
                "refusing rather than subsampling"
            )
        chunk = -(-total // jobs)
        tasks = [
            (f.name, axiom, m, n, lo, min(lo + chunk, total), extra)
            for lo in range(0, total, chunk)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [h for h in pool.map(_worker_scan_star, tasks) if h is not None]
        violation = min(hits)[1] if hits else None
        return _report(axiom, total, violation)
    iterator, total = _sweep(f, m, n, profiles, cap)
    for profile in iterator:
        violation = finder(f, profile, *extra)
        if violation is not None:
            return _report(axiom, total, violation)
    return _report(axiom, total, None)


def _worker_scan_star(args):
    return _worker_scan(*args)


def _addressable(f: SocialDecisionScheme) -> bool:
    try:
        resolve_rule(f.name)
    except DomainError:
        return False
    return True


# ---------------------------------------------------------------------------
# Public checkers
# ---------------------------------------------------------------------------


def check_anonymity(f, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1) -> AxiomReport:
    """Pass iff f is invariant under every voter permutation of every profile."""
    return _scan(f, "anonymity", m, n, profiles, cap, jobs)


def check_neutrality(f, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1) -> AxiomReport:
    """Pass iff relabeling alternatives relabels the output lottery accordingly."""
    return _scan(f, "neutrality", m, n, profiles, cap, jobs)


def check_rank_basedness(f, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP) -> AxiomReport:
    """Pass iff f is constant on every group of profiles sharing a rank matrix."""
    iterator, total = _sweep(f, m, n, profiles, cap)
    seen: dict = {}
    for profile in iterator:
        key = rank_matrix(profile)
        lottery = f.evaluate(profile)
        prior = seen.get(key)
        if prior is None:
            seen[key] = (profile, lottery)
        elif prior[1] != lottery:
            return _report(
                "rank_basedness",
                total,
                AxiomCounterexample(
                    profiles=(prior[0], profile),
                    witness=(("rank_matrix", key.rows),),
                    observed=tuple(lottery.probs),
                    required=tuple(prior[1].probs),
                ),
            )
    return _report("rank_basedness", total, None)


def check_k_unanimity(f, k, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1) -> AxiomReport:
    """Pass iff any alternative topped by at least n-k voters gets probability 1."""
    if not 0 <= k or not 2 * k < n:
        raise DomainError(f"k-unanimity requires 0 <= k < n/2, got k={k}, n={n}")
    return _scan(f, "k_unanimity", m, n, profiles, cap, jobs, extra=(k,))


def check_k_alpha_unanimity(
    f, k, alpha, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1
) -> AxiomReport:
    """Pass iff any alternative topped by at least n-k voters gets probability >= alpha."""
    alpha = frac(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in 0..n, got {k}")
    return _scan(f, "k_alpha_unanimity", m, n, profiles, cap, jobs, extra=(k, alpha))


def check_condorcet_consistency(
    f, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1
) -> AxiomReport:
    """Pass iff the Condorcet winner, whenever it exists, gets probability 1."""
    return _scan(f, "condorcet_consistency", m, n, profiles, cap, jobs)


def check_ex_post_efficiency(
    f, m, n, *, profiles=None, cap=DEFAULT_SWEEP_CAP, jobs=1
) -> AxiomReport:
    """Pass iff Pareto-dominated alternatives always get probability 0."""
    return _scan(f, "ex_post_efficiency", m, n, profiles, cap, jobs)


CHECKERS = {
    "anonymity": check_anonymity,
    "neutrality": check_neutrality,
    "rank_basedness": check_rank_basedness,
    "k_unanimity": check_k_unanimity,
    "k_alpha_unanimity": check_k_alpha_unanimity,
    "condorcet_consistency": check_condorcet_consistency,
    "ex_post_efficiency": check_ex_post_efficiency,
}
