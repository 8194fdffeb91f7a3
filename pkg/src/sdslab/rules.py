"""The social decision scheme zoo: evaluable rules with declared domains.

Each rule maps profiles to exact lotteries.  Rules whose output depends
only on how many voters top-rank each alternative carry a ``tops_lottery``
function; checkers exploit it to sweep the (much smaller) quotient of
deviations by irrelevant detail without sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Mapping, Optional

from .core import (
    DomainError,
    Lottery,
    PreferenceRelation,
    Profile,
    RankMatrix,
    all_preferences,
    all_profiles,
    condorcet_winner,
    frac,
    rank_matrix,
)


@dataclass(frozen=True, eq=False)
class SocialDecisionScheme:
    """An evaluable rule together with its domain and symmetry metadata.

    ``declared_symmetries`` are claims, verified by the axiom checkers and
    never assumed by them.  ``tops_lottery``, when present, computes the
    lottery from the top-count vector alone and is the rule's actual
    implementation, so tops-only behaviour holds by construction.
    """

    name: str
    domain: Callable[[int, int], bool]
    declared_symmetries: frozenset[str] = frozenset()
    evaluate_fn: Optional[Callable[[Profile], Lottery]] = None
    tops_lottery: Optional[Callable[[tuple[int, ...], int], Lottery]] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def in_domain(self, m: int, n: int) -> bool:
        return bool(self.domain(m, n))

    def evaluate(self, profile: Profile) -> Lottery:
        if not self.in_domain(profile.m, profile.n):
            raise DomainError(
                f"rule {self.name} is not defined for m={profile.m}, n={profile.n}"
            )
        if self.tops_lottery is not None:
            key = (profile.top_counts(), profile.n)
            hit = self._cache.get(key)
            if hit is None:
                hit = self.tops_lottery(key[0], profile.n)
                self._cache[key] = hit
            return hit
        key = profile
        hit = self._cache.get(key)
        if hit is None:
            hit = self.evaluate_fn(profile)
            self._cache[key] = hit
        return hit

    def lottery_from_tops(self, top_counts: tuple[int, ...], n: int) -> Lottery:
        if self.tops_lottery is None:
            raise DomainError(f"rule {self.name} is not tops-only")
        key = (top_counts, n)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.tops_lottery(top_counts, n)
            self._cache[key] = hit
        return hit

    @property
    def tops_only(self) -> bool:
        return self.tops_lottery is not None

    def __repr__(self) -> str:
        return f"<SDS {self.name}>"


def _any_size(m: int, n: int) -> bool:
    return m >= 1 and n >= 1


def _rd_tops(counts: tuple[int, ...], n: int) -> Lottery:
    return Lottery(tuple(Fraction(c, n) for c in counts))


def rd() -> SocialDecisionScheme:
    """Uniform random dictatorship: each voter's favorite with probability 1/n."""
    return SocialDecisionScheme(
        name="rd",
        domain=_any_size,
        declared_symmetries=frozenset({"anonymous", "neutral", "rank_based"}),
        tops_lottery=_rd_tops,
    )


def rd_k(k: int) -> SocialDecisionScheme:
    """Random dictatorship that locks in any alternative topped by n-k voters or more."""
    if k < 1:
        raise DomainError("k must be at least 1")

    def tops(counts: tuple[int, ...], n: int) -> Lottery:
        m = len(counts)
        for x, c in enumerate(counts):
            if c >= n - k:
                return Lottery.point(x, m)
        return _rd_tops(counts, n)

    return SocialDecisionScheme(
        name=f"rd_k:k={k}",
        domain=lambda m, n: m >= 1 and k <= (n - 1) // 2,
        declared_symmetries=frozenset({"anonymous", "neutral", "rank_based"}),
        tops_lottery=tops,
    )


def omni_star() -> SocialDecisionScheme:
    """Majority winner if one exists, else uniform over all top-ranked alternatives."""

    def tops(counts: tuple[int, ...], n: int) -> Lottery:
        m = len(counts)
        for x, c in enumerate(counts):
            if 2 * c > n:
                return Lottery.point(x, m)
        return Lottery.uniform_over((x for x, c in enumerate(counts) if c > 0), m)

    return SocialDecisionScheme(
        name="omni_star",
        domain=_any_size,
        declared_symmetries=frozenset({"anonymous", "neutral", "rank_based"}),
        tops_lottery=tops,
    )


def cond() -> SocialDecisionScheme:
    """Condorcet winner with probability 1; the full uniform lottery otherwise."""

    def evaluate(profile: Profile) -> Lottery:
        winner = condorcet_winner(profile)
        if winner is not None:
            return Lottery.point(winner, profile.m)
        return Lottery.uniform(profile.m)

    return SocialDecisionScheme(
        name="cond",
        domain=_any_size,
        declared_symmetries=frozenset({"anonymous", "neutral"}),
        evaluate_fn=evaluate,
    )


def f1() -> SocialDecisionScheme:
    """Five-voter hybrid: rd when at least four alternatives are topped, omni_star otherwise."""
    rd_tops = _rd_tops
    omni = omni_star()

    def tops(counts: tuple[int, ...], n: int) -> Lottery:
        distinct = sum(1 for c in counts if c > 0)
        if distinct >= 4:
            return rd_tops(counts, n)
        return omni.tops_lottery(counts, n)

    return SocialDecisionScheme(
        name="f1",
        domain=lambda m, n: m >= 4 and n == 5,
        declared_symmetries=frozenset({"anonymous", "neutral", "rank_based"}),
        tops_lottery=tops,
    )


def _f2_lottery(profile: Profile) -> Lottery:
    counts = profile.top_counts()
    n = profile.n
    best = max(counts)
    if best >= 3:
        return Lottery.point(counts.index(best), 3)
    if best == 2 and sorted(counts) == [0, 2, 2]:
        return Lottery.uniform_over((x for x, c in enumerate(counts) if c == 2), 3)
    # one alternative topped twice, the other two topped once each
    x = counts.index(2)
    others = [i for i in range(n) if profile.prefs[i].top != x]
    x_ranks = sorted(profile.prefs[i].rank_of(x) for i in others)
    if x_ranks == [2, 2]:
        return Lottery.point(x, 3)
    if x_ranks == [3, 3]:
        probs = [Fraction(1, 4)] * 3
        probs[x] = Fraction(1, 2)
        return Lottery(tuple(probs))
    # split: the alternative preferred to x by two voters gets 2/7
    y = next(
        z
        for z in range(3)
        if z != x and sum(1 for p in profile.prefs if p.prefers(z, x)) == 2
    )
    z = next(w for w in range(3) if w not in (x, y))
    probs = [Fraction(0)] * 3
    probs[x] = Fraction(4, 7)
    probs[y] = Fraction(2, 7)
    probs[z] = Fraction(1, 7)
    return Lottery(tuple(probs))


@lru_cache(maxsize=1)
def _f2_selfcheck() -> bool:
    # The case split must cover all 1296 profiles with exactly one branch;
    # checked once by running every profile through the evaluator.
    for profile in all_profiles(3, 4):
        _f2_lottery(profile)
    return True


def f2() -> SocialDecisionScheme:
    """Hand-built three-alternative, four-voter scheme with a positional case split."""
    _f2_selfcheck()
    return SocialDecisionScheme(
        name="f2",
        domain=lambda m, n: m == 3 and n == 4,
        declared_symmetries=frozenset({"anonymous", "neutral"}),
        evaluate_fn=_f2_lottery,
    )


def f3() -> SocialDecisionScheme:
    """Even-n Condorcet variant: splits ties between two half-topped alternatives."""
    base = cond()

    def evaluate(profile: Profile) -> Lottery:
        counts = profile.top_counts()
        half = profile.n // 2
        halves = [x for x, c in enumerate(counts) if c == half]
        if len(halves) == 2:
            return Lottery.uniform_over(halves, profile.m)
        return base.evaluate(profile)

    return SocialDecisionScheme(
        name="f3",
        domain=lambda m, n: m == 3 and n % 2 == 0,
        declared_symmetries=frozenset({"anonymous", "neutral"}),
        evaluate_fn=evaluate,
    )


def dictatorship(voter: int) -> SocialDecisionScheme:
    """Point lottery on a fixed voter's favorite; the canonical non-anonymous rule."""

    def evaluate(profile: Profile) -> Lottery:
        return Lottery.point(profile.prefs[voter].top, profile.m)

    return SocialDecisionScheme(
        name=f"dictatorship:voter={voter}",
        domain=lambda m, n: n > voter,
        declared_symmetries=frozenset({"neutral"}),
        evaluate_fn=evaluate,
    )


def mix(f: SocialDecisionScheme, g: SocialDecisionScheme, lam) -> SocialDecisionScheme:
    """Pointwise convex combination lam * f + (1 - lam) * g."""
    weight = frac(lam)
    if not 0 <= weight <= 1:
        raise DomainError("mixing weight must lie in [0, 1]")

    def evaluate(profile: Profile) -> Lottery:
        return f.evaluate(profile).mix_with(g.evaluate(profile), weight)

    return SocialDecisionScheme(
        name=f"mix:f={f.name},g={g.name},lam={weight}",
        domain=lambda m, n: f.in_domain(m, n) and g.in_domain(m, n),
        declared_symmetries=f.declared_symmetries & g.declared_symmetries,
        evaluate_fn=evaluate,
    )


def subset_lift(
    f: SocialDecisionScheme, n_lifted: int, n_base: Optional[int] = None
) -> SocialDecisionScheme:
    """Average of ``f`` over all order-preserving voter subsets of size ``n_base``.

    ``f`` must be anonymous so the average is independent of subset
    ordering; the declared claim is re-verified on every sub-profile
    actually evaluated, by comparing against its sorted rearrangement.
    """
    if "anonymous" not in f.declared_symmetries:
        raise DomainError(f"subset lift requires an anonymous base rule, got {f.name}")
    if n_base is None:
        candidates = [
            n
            for n in range(1, n_lifted)
            if any(f.in_domain(m, n) for m in range(1, 8))
        ]
        if len(candidates) != 1:
            raise DomainError(
                f"rule {f.name} has no unique voter count below {n_lifted}; pass n_base"
            )
        n_base = candidates[0]
    if n_lifted <= n_base:
        raise DomainError("the lifted voter count must exceed the base voter count")

    def evaluate(profile: Profile) -> Lottery:
        m = profile.m
        total = [Fraction(0)] * m
        count = 0
        seen: dict[tuple, Lottery] = {}
        for subset in combinations(range(profile.n), n_base):
            sub = Profile(tuple(profile.prefs[i] for i in subset))
            key = tuple(sorted(p.order for p in sub.prefs))
            lot = seen.get(key)
            if lot is None:
                lot = f.evaluate(sub)
                canonical = Profile(
                    tuple(PreferenceRelation(o) for o in key)
                )
                if f.evaluate(canonical) != lot:
                    raise DomainError(
                        f"rule {f.name} is not anonymous on the evaluated sub-profiles"
                    )
                seen[key] = lot
            count += 1
            for x in range(m):
                total[x] += lot[x]
        return Lottery(tuple(t / count for t in total))

    return SocialDecisionScheme(
        name=f"lift:base={f.name},n={n_lifted}",
        domain=lambda m, n: n == n_lifted and f.in_domain(m, n_base),
        declared_symmetries=f.declared_symmetries,
        evaluate_fn=evaluate,
    )


# ---------------------------------------------------------------------------
# Table-backed rules (synthesis output, Example-style fixtures)
# ---------------------------------------------------------------------------


def _anonymous_key(profile: Profile) -> tuple:
    return tuple(sorted(p.order for p in profile.prefs))


def _rank_key(profile: Profile) -> RankMatrix:
    return rank_matrix(profile)


def table_sds(
    name: str,
    m: int,
    n: int,
    table: Mapping[Profile, Lottery],
    symmetry: str = "full",
) -> SocialDecisionScheme:
    """A rule defined by an explicit profile (class) -> lottery table.

    ``symmetry`` says how table keys identify classes: ``full`` keys are
    profiles themselves, ``anonymous`` keys cover all voter reorderings of
    the stored profiles, ``rank_based`` keys cover all profiles sharing the
    stored profile's rank matrix.
    """
    if symmetry == "full":
        lookup = dict(table)
        key = lambda p: p
    elif symmetry == "anonymous":
        lookup = {_anonymous_key(p): lot for p, lot in table.items()}
        key = _anonymous_key
    elif symmetry == "rank_based":
        lookup = {_rank_key(p): lot for p, lot in table.items()}
        key = _rank_key
    else:
        raise DomainError(f"unknown table symmetry {symmetry!r}")

    def evaluate(profile: Profile) -> Lottery:
        lot = lookup.get(key(profile))
        if lot is None:
            raise DomainError(f"profile not covered by table rule {name}: {profile}")
        return lot

    symmetries = {"anonymous": frozenset({"anonymous"}), "rank_based": frozenset({"anonymous", "rank_based"})}
    return SocialDecisionScheme(
        name=name,
        domain=lambda mm, nn: mm == m and nn == n,
        declared_symmetries=symmetries.get(symmetry, frozenset()),
        evaluate_fn=evaluate,
    )


# ---------------------------------------------------------------------------
# Name resolution for the CLI
# ---------------------------------------------------------------------------


def resolve_rule(spec: str, table_loader: Optional[Callable[[str], SocialDecisionScheme]] = None) -> SocialDecisionScheme:
    """Build a rule from its address string.

    Plain names: ``rd``, ``omni_star``, ``cond``, ``f1``, ``f2``, ``f3``.
    Parameterized: ``rd_k:k=2``, ``mix:f=rd,g=cond,lam=1/2``,
    ``lift:base=f1,n=7`` (optionally ``base_n=...``), ``table:<path>``.
    """
    head, _, tail = spec.partition(":")
    simple = {
        "rd": rd,
        "omni_star": omni_star,
        "cond": cond,
        "f1": f1,
        "f2": f2,
        "f3": f3,
    }
    if head in simple:
        if tail:
            raise DomainError(f"rule {head} takes no parameters")
        return simple[head]()
    if head == "table":
        if table_loader is None:
            raise DomainError("table rules are not available here")
        return table_loader(tail)
    params = {}
    if tail:
        for part in tail.split(","):
            key, _, value = part.partition("=")
            if not value:
                raise DomainError(f"malformed rule parameter {part!r} in {spec!r}")
            params[key.strip()] = value.strip()
    def done(built: SocialDecisionScheme) -> SocialDecisionScheme:
        if params:
            raise DomainError(f"unused rule parameters {sorted(params)} in {spec!r}")
        return built

    try:
        if head == "rd_k":
            return done(rd_k(int(params.pop("k"))))
        if head == "mix":
            f = resolve_rule(params.pop("f"), table_loader)
            g = resolve_rule(params.pop("g"), table_loader)
            return done(mix(f, g, frac(params.pop("lam"))))
        if head == "lift":
            base = resolve_rule(params.pop("base"), table_loader)
            n_lifted = int(params.pop("n"))
            n_base = int(params.pop("base_n")) if "base_n" in params else None
            return done(subset_lift(base, n_lifted, n_base))
        if head == "dictatorship":
            return done(dictatorship(int(params.pop("voter"))))
    except KeyError as exc:
        raise DomainError(f"rule {spec!r} is missing parameter {exc}") from exc
    known = sorted(simple) + [
        "rd_k:k=<k>",
        "mix:f=..,g=..,lam=..",
        "lift:base=..,n=..",
        "table:<path>",
        "dictatorship:voter=<i>",
    ]
    raise DomainError(f"unknown rule {spec!r}; valid rules: {', '.join(known)}")
