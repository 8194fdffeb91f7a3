"""Domain types and profile algebra for randomized voting rules.

Preferences are strict total orders over ``m`` alternatives (identified by
their indices ``0..m-1``), profiles assign one preference per voter, and
rules return exact rational lotteries.  Everything here is immutable and
pure; all arithmetic uses :class:`fractions.Fraction` with no tolerances.

Ranks are 1-based: a voter's favorite alternative has rank 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

RationalLike = Union[Fraction, int, str]


class DomainError(ValueError):
    """An argument violates an operation's precondition."""


class RefusalError(RuntimeError):
    """An exhaustive sweep would exceed its hard cap; refusing to subsample."""


def frac(value: RationalLike) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


# ---------------------------------------------------------------------------
# Preferences and profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreferenceRelation:
    """A strict total order over alternatives, best first."""

    order: tuple[int, ...]
    _ranks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = len(self.order)
        if sorted(self.order) != list(range(m)):
            raise DomainError(f"order must be a permutation of 0..{m - 1}: {self.order}")
        ranks = [0] * m
        for pos, x in enumerate(self.order):
            ranks[x] = pos + 1
        object.__setattr__(self, "_ranks", tuple(ranks))

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def top(self) -> int:
        return self.order[0]

    def rank_of(self, x: int) -> int:
        """1-based rank of alternative ``x`` (favorite has rank 1)."""
        if not 0 <= x < self.m:
            raise DomainError(f"alternative {x} out of range for m={self.m}")
        return self._ranks[x]

    def prefers(self, x: int, y: int) -> bool:
        return self._ranks[x] < self._ranks[y]

    def __str__(self) -> str:
        return ">".join(str(x) for x in self.order)


def pref(*order: int) -> PreferenceRelation:
    """Shorthand constructor: ``pref(2, 0, 1)`` ranks alternative 2 first."""
    return PreferenceRelation(tuple(order))


@lru_cache(maxsize=None)
def all_preferences(m: int) -> tuple[PreferenceRelation, ...]:
    """All m! preference relations in lexicographic order of their orderings."""
    if m < 1:
        raise DomainError("m must be at least 1")
    return tuple(PreferenceRelation(p) for p in permutations(range(m)))


@lru_cache(maxsize=None)
def preference_index(m: int) -> dict[tuple[int, ...], int]:
    return {p.order: i for i, p in enumerate(all_preferences(m))}


@dataclass(frozen=True)
class Profile:
    """One preference relation per voter over a common set of alternatives."""

    prefs: tuple[PreferenceRelation, ...]

    def __post_init__(self):
        if not self.prefs:
            raise DomainError("a profile needs at least one voter")
        m = self.prefs[0].m
        if any(p.m != m for p in self.prefs):
            raise DomainError("all preference relations must cover the same alternatives")

    @property
    def m(self) -> int:
        return self.prefs[0].m

    @property
    def n(self) -> int:
        return len(self.prefs)

    def top_counts(self) -> tuple[int, ...]:
        counts = [0] * self.m
        for p in self.prefs:
            counts[p.top] += 1
        return tuple(counts)

    def replace(self, voter: int, new_pref: PreferenceRelation) -> "Profile":
        if not 0 <= voter < self.n:
            raise DomainError(f"voter {voter} out of range")
        if new_pref.m != self.m:
            raise DomainError("replacement preference has wrong alternative count")
        prefs = list(self.prefs)
        prefs[voter] = new_pref
        return Profile(tuple(prefs))

    def __str__(self) -> str:
        return "; ".join(str(p) for p in self.prefs)


def profile(*orders: Sequence[int]) -> Profile:
    return Profile(tuple(PreferenceRelation(tuple(o)) for o in orders))


def profile_space_size(m: int, n: int) -> int:
    size = 1
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    for _ in range(n):
        size *= fact
    return size


def all_profiles(m: int, n: int, cap: Optional[int] = None) -> Iterator[Profile]:
    """Every profile over m alternatives and n voters, in a fixed order.

    Raises :class:`RefusalError` when the space exceeds ``cap``; an
    exhaustive sweep is never silently subsampled.
    """
    total = profile_space_size(m, n)
    if cap is not None and total > cap:
        raise RefusalError(
            f"profile space (m={m}, n={n}) has {total} profiles, exceeding the cap of {cap}"
        )
    prefs = all_preferences(m)
    indices = [0] * n
    while True:
        yield Profile(tuple(prefs[i] for i in indices))
        pos = n - 1
        while pos >= 0 and indices[pos] == len(prefs) - 1:
            indices[pos] = 0
            pos -= 1
        if pos < 0:
            return
        indices[pos] += 1


# ---------------------------------------------------------------------------
# Lotteries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lottery:
    """An exact probability distribution over the m alternatives."""

    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(frac(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if any(p < 0 for p in probs):
            raise DomainError(f"negative probability in {probs}")
        if sum(probs) != 1:
            raise DomainError(f"probabilities sum to {sum(probs)}, not 1")

    @property
    def m(self) -> int:
        return len(self.probs)

    def __getitem__(self, x: int) -> Fraction:
        return self.probs[x]

    def support(self) -> tuple[int, ...]:
        return tuple(x for x, p in enumerate(self.probs) if p > 0)

    @staticmethod
    def point(x: int, m: int) -> "Lottery":
        if not 0 <= x < m:
            raise DomainError(f"alternative {x} out of range for m={m}")
        return Lottery(tuple(Fraction(1) if i == x else Fraction(0) for i in range(m)))

    @staticmethod
    def uniform(m: int) -> "Lottery":
        return Lottery(tuple(Fraction(1, m) for _ in range(m)))

    @staticmethod
    def uniform_over(support: Iterable[int], m: int) -> "Lottery":
        support = sorted(set(support))
        if not support:
            raise DomainError("empty support")
        share = Fraction(1, len(support))
        return Lottery(tuple(share if x in support else Fraction(0) for x in range(m)))

    def mix_with(self, other: "Lottery", weight: Fraction) -> "Lottery":
        """Convex combination ``weight * self + (1 - weight) * other``."""
        if self.m != other.m:
            raise DomainError("lottery dimensions differ")
        w = frac(weight)
        return Lottery(tuple(w * a + (1 - w) * b for a, b in zip(self.probs, other.probs)))


# ---------------------------------------------------------------------------
# Profile operations
# ---------------------------------------------------------------------------


def rank(preference: PreferenceRelation, x: int) -> int:
    """Rank of ``x`` in the preference: 1 plus the number of strictly better alternatives."""
    return preference.rank_of(x)


def majority_margin(profile: Profile, x: int, y: int) -> int:
    """Supporters of x over y minus supporters of y over x."""
    if x == y:
        raise DomainError("majority margin requires two distinct alternatives")
    if not (0 <= x < profile.m and 0 <= y < profile.m):
        raise DomainError("alternative out of range")
    wins = sum(1 for p in profile.prefs if p.prefers(x, y))
    return 2 * wins - profile.n


def condorcet_winner(profile: Profile) -> Optional[int]:
    """The alternative beating every other in pairwise majority, if any."""
    for x in range(profile.m):
        if all(majority_margin(profile, x, y) > 0 for y in range(profile.m) if y != x):
            return x
    return None


def pareto_dominated(profile: Profile, x: int) -> bool:
    return any(
        all(p.prefers(y, x) for p in profile.prefs)
        for y in range(profile.m)
        if y != x
    )


def pareto_optimal_set(profile: Profile) -> frozenset[int]:
    """Alternatives not unanimously beaten by another alternative; never empty."""
    return frozenset(x for x in range(profile.m) if not pareto_dominated(profile, x))


def _check_permutation(perm: Sequence[int], size: int, what: str) -> None:
    if sorted(perm) != list(range(size)):
        raise DomainError(f"{what} must be a bijection on 0..{size - 1}: {perm}")


def permute_voters(profile: Profile, perm: Sequence[int]) -> Profile:
    """Profile where voter ``perm[i]`` reports voter ``i``'s preference."""
    _check_permutation(perm, profile.n, "voter permutation")
    prefs: list[Optional[PreferenceRelation]] = [None] * profile.n
    for i, p in enumerate(profile.prefs):
        prefs[perm[i]] = p
    return Profile(tuple(prefs))  # type: ignore[arg-type]


def permute_alternatives(profile: Profile, perm: Sequence[int]) -> Profile:
    """Profile relabeling alternatives: ``perm[x]`` takes the place of ``x``."""
    _check_permutation(perm, profile.m, "alternative permutation")
    return Profile(
        tuple(PreferenceRelation(tuple(perm[x] for x in p.order)) for p in profile.prefs)
    )


def permute_preference(preference: PreferenceRelation, perm: Sequence[int]) -> PreferenceRelation:
    _check_permutation(perm, preference.m, "alternative permutation")
    return PreferenceRelation(tuple(perm[x] for x in preference.order))


@dataclass(frozen=True)
class RankMatrix:
    """Per-alternative sorted rank vectors; the quotient rank-based rules see."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])


def rank_matrix(profile: Profile) -> RankMatrix:
    rows = tuple(
        tuple(sorted(p.rank_of(x) for p in profile.prefs)) for x in range(profile.m)
    )
    return RankMatrix(rows)


# ---------------------------------------------------------------------------
# Utilities over ranks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UtilityVector:
    """Utilities indexed by rank: ``values[0]`` is the utility of a favorite.

    Strictly decreasing, so the vector is consistent with any preference
    relation once composed with the voter's ranks.
    """

    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(frac(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 1:
            raise DomainError("utility vector needs at least one entry")
        if any(a <= b for a, b in zip(values, values[1:])):
            raise DomainError(f"utilities must be strictly decreasing: {values}")

    @property
    def m(self) -> int:
        return len(self.values)

    def of_rank(self, r: int) -> Fraction:
        if not 1 <= r <= self.m:
            raise DomainError(f"rank {r} out of range 1..{self.m}")
        return self.values[r - 1]

    def normalized(self) -> "UtilityVector":
        """Positive affine image with top utility 1 and bottom utility 0."""
        if self.m == 1:
            return UtilityVector((Fraction(1),))
        top, bottom = self.values[0], self.values[-1]
        span = top - bottom
        return UtilityVector(tuple((v - bottom) / span for v in self.values))


def utility(*values: RationalLike) -> UtilityVector:
    return UtilityVector(tuple(frac(v) for v in values))


def expected_utility(lottery: Lottery, u: UtilityVector, preference: PreferenceRelation) -> Fraction:
    """Expected utility of a lottery, mapping ``u`` onto alternatives via ranks."""
    if lottery.m != preference.m or u.m != preference.m:
        raise DomainError("lottery, utility vector, and preference must agree on m")
    return sum(
        (lottery[x] * u.of_rank(preference.rank_of(x)) for x in range(preference.m)),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# Utility sets
# ---------------------------------------------------------------------------

#: extra polytope rows are (coefficients over u(1)..u(m), relation, rhs)
PolytopeRow = tuple[tuple[Fraction, ...], str, Fraction]

FINITE = "finite"
VERTICES = "vertices"
POLYTOPE = "polytope"


@dataclass(frozen=True)
class UtilitySet:
    """A set of rank-indexed utility vectors.

    ``finite`` and ``vertices`` kinds list strictly decreasing vectors (for
    ``vertices`` the set is their convex hull, which stays strictly
    decreasing).  ``polytope`` kind is a region in normalized coordinates
    (u(1)=1, u(m)=0) cut out of the weakly-decreasing chain by extra linear
    rows; construction validates that it contains a strictly decreasing
    point, so the closure equals the closure of its strict part.
    """

    kind: str
    m: int
    vectors: tuple[UtilityVector, ...] = ()
    extra_rows: tuple[PolytopeRow, ...] = ()
    preset: Optional[str] = None
    preset_params: tuple = ()
    strict_point: Optional[UtilityVector] = None
    closure_vertices: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def __post_init__(self):
        if self.kind not in (FINITE, VERTICES, POLYTOPE):
            raise DomainError(f"unknown utility set kind {self.kind!r}")
        if self.kind in (FINITE, VERTICES):
            if not self.vectors:
                raise DomainError("finite/vertex utility sets need at least one vector")
            if any(v.m != self.m for v in self.vectors):
                raise DomainError("utility vectors must all have length m")
            object.__setattr__(self, "strict_point", self.vectors[0])
        else:
            if self.strict_point is None:
                witness = _strict_polytope_point(self.m, self.extra_rows)
                object.__setattr__(self, "strict_point", witness)

    def sp_vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        """Rank-coefficient tuples whose gain constraints characterize the set.

        For a polytope this is the closed-form vertex list of its closure
        (available for presets only); entries may be weakly decreasing.
        """
        if self.kind in (FINITE, VERTICES):
            return tuple(v.values for v in self.vectors)
        if self.closure_vertices is None:
            raise DomainError(
                "general polytope utility sets have no vertex form; "
                "supply a finite or vertex-listed set instead"
            )
        return self.closure_vertices

    def as_vertex_set(self) -> "UtilitySet":
        """Vertex-kind view; requires every closure vertex to be strictly decreasing."""
        if self.kind in (FINITE, VERTICES):
            return UtilitySet(kind=VERTICES, m=self.m, vectors=self.vectors)
        return UtilitySet(
            kind=VERTICES,
            m=self.m,
            vectors=tuple(UtilityVector(v) for v in self.sp_vectors()),
        )

    def contains(self, u: UtilityVector) -> bool:
        """Membership up to positive affine rescaling (polytope kinds only)."""
        if u.m != self.m:
            return False
        if self.kind == FINITE:
            return u in self.vectors or u.normalized() in tuple(
                v.normalized() for v in self.vectors
            )
        w = u.normalized().values
        if self.kind == VERTICES:
            return _in_hull(w, tuple(v.normalized().values for v in self.vectors))
        for coeffs, rel, rhs in self.extra_rows:
            lhs = sum(c * x for c, x in zip(coeffs, w))
            if rel == "<=" and not lhs <= rhs:
                return False
            if rel == ">=" and not lhs >= rhs:
                return False
            if rel == "=" and lhs != rhs:
                return False
        return True


def _in_hull(point: tuple[Fraction, ...], vertices: tuple[tuple[Fraction, ...], ...]) -> bool:
    from . import lp as _lp

    nv = len(vertices)
    rows = []
    for coord in range(len(point)):
        rows.append(_lp.Constraint(tuple(v[coord] for v in vertices), "=", point[coord]))
    rows.append(_lp.Constraint(tuple(Fraction(1) for _ in range(nv)), "=", Fraction(1)))
    program = _lp.LinearProgram(
        num_vars=nv,
        objective=tuple(Fraction(0) for _ in range(nv)),
        maximize=True,
        constraints=tuple(rows),
        lower_bounds=tuple(Fraction(0) for _ in range(nv)),
    )
    return isinstance(_lp.solve(program), _lp.Optimal)


def _strict_polytope_point(m: int, extra_rows: tuple[PolytopeRow, ...]) -> UtilityVector:
    """A strictly decreasing point of the normalized polytope, found exactly.

    Maximizes the minimum consecutive gap; a positive optimum certifies that
    the closed region is the closure of its strictly decreasing part.
    """
    from . import lp as _lp

    if m == 1:
        if extra_rows:
            raise DomainError("m=1 utility polytopes admit no extra constraints")
        return UtilityVector((Fraction(1),))
    # variables: u(1)..u(m), then the gap g
    nv = m + 1
    rows = [
        _lp.Constraint(_unit(nv, 0), "=", Fraction(1)),
        _lp.Constraint(_unit(nv, m - 1), "=", Fraction(0)),
    ]
    for i in range(m - 1):
        coeffs = [Fraction(0)] * nv
        coeffs[i] = Fraction(1)
        coeffs[i + 1] = Fraction(-1)
        coeffs[m] = Fraction(-1)
        rows.append(_lp.Constraint(tuple(coeffs), ">=", Fraction(0)))
    for coeffs, rel, rhs in extra_rows:
        rows.append(_lp.Constraint(tuple(coeffs) + (Fraction(0),), rel, rhs))
    program = _lp.LinearProgram(
        num_vars=nv,
        objective=_unit(nv, m),
        maximize=True,
        constraints=tuple(rows),
    )
    outcome = _lp.solve(program)
    if not isinstance(outcome, _lp.Optimal) or outcome.value <= 0:
        raise DomainError(
            "utility polytope contains no strictly decreasing point; "
            "refusing to construct it"
        )
    return UtilityVector(outcome.point[:m])


def _unit(size: int, index: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) if i == index else Fraction(0) for i in range(size))


def finite_utility_set(vectors: Iterable[UtilityVector]) -> UtilitySet:
    vectors = tuple(vectors)
    return UtilitySet(kind=FINITE, m=vectors[0].m, vectors=vectors)


def vertex_utility_set(vectors: Iterable[UtilityVector]) -> UtilitySet:
    vectors = tuple(vectors)
    return UtilitySet(kind=VERTICES, m=vectors[0].m, vectors=vectors)


def _steps(m: int, ones: int, level: Fraction) -> tuple[Fraction, ...]:
    """(1, level...level, 0...0) with ``ones`` leading copies of ``level`` after u(1)."""
    values = [Fraction(1)]
    values += [level] * ones
    values += [Fraction(0)] * (m - 1 - ones)
    return tuple(values)


def sd_utility_set(m: int) -> UtilitySet:
    """All strictly decreasing utility vectors (normalized closure: the full chain)."""
    verts = tuple(_steps(m, j, Fraction(1)) for j in range(m - 1))
    return UtilitySet(
        kind=POLYTOPE, m=m, preset="SD", closure_vertices=verts
    )


def rdk_utility_set(k: int, m: int) -> UtilitySet:
    """Vectors with u(1)-u(2) at least k times u(2)-u(m)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    if m < 2:
        raise DomainError("m must be at least 2")
    coeffs = [Fraction(0)] * m
    coeffs[0] = Fraction(1)
    coeffs[1] = Fraction(-(k + 1))
    coeffs[m - 1] += Fraction(k)
    row: PolytopeRow = (tuple(coeffs), ">=", Fraction(0))
    level = Fraction(1, k + 1)
    verts = [_steps(m, 0, Fraction(0))]
    verts += [_steps(m, j, level) for j in range(1, m - 1)]
    return UtilitySet(
        kind=POLYTOPE,
        m=m,
        extra_rows=(row,),
        preset="RDK",
        preset_params=(k,),
        closure_vertices=tuple(verts),
    )


def omni_utility_set(m: int) -> UtilitySet:
    """Vectors with u(1)-u(2) at least the summed drops from u(2) to each lower rank."""
    if m < 2:
        raise DomainError("m must be at least 2")
    coeffs = [Fraction(0)] * m
    coeffs[0] = Fraction(1)
    coeffs[1] = Fraction(-(m - 1))
    for i in range(2, m):
        coeffs[i] += Fraction(1)
    row: PolytopeRow = (tuple(coeffs), ">=", Fraction(0))
    verts = [_steps(m, 0, Fraction(0))]
    verts += [_steps(m, r, Fraction(1, m - r)) for r in range(1, m - 1)]
    return UtilitySet(
        kind=POLYTOPE, m=m, extra_rows=(row,), preset="OMNI", closure_vertices=tuple(verts)
    )


def equidistant_utility_set(m: int) -> UtilitySet:
    """Vectors whose top three utilities are evenly spaced: u(1)-u(2) = u(2)-u(3)."""
    if m < 3:
        raise DomainError("m must be at least 3")
    coeffs = [Fraction(0)] * m
    coeffs[0], coeffs[1], coeffs[2] = Fraction(1), Fraction(-2), Fraction(1)
    row: PolytopeRow = (tuple(coeffs), "=", Fraction(0))
    verts = [_steps(m, 1, Fraction(1, 2))]
    verts += [_steps(m, j, Fraction(1)) for j in range(2, m - 1)]
    return UtilitySet(
        kind=POLYTOPE,
        m=m,
        extra_rows=(row,),
        preset="EQUIDISTANT",
        closure_vertices=tuple(verts),
    )


def eps_indifferent_utility_set(eps: RationalLike, m: int) -> UtilitySet:
    """Vectors nearly indifferent on top: u(1)-u(2) at most (eps/2)(u(2)-u(3))."""
    e = frac(eps)
    if e <= 0:
        raise DomainError("epsilon must be positive")
    if m < 3:
        raise DomainError("m must be at least 3")
    coeffs = [Fraction(0)] * m
    coeffs[0] = Fraction(1)
    coeffs[1] = -(1 + e / 2)
    coeffs[2] = e / 2
    row: PolytopeRow = (tuple(coeffs), "<=", Fraction(0))
    verts = [_steps(m, 1, Fraction(2, 1) / (2 + e))]
    verts += [_steps(m, j, Fraction(1)) for j in range(1, m - 1)]
    return UtilitySet(
        kind=POLYTOPE,
        m=m,
        extra_rows=(row,),
        preset="EPS_INDIFF",
        preset_params=(e,),
        closure_vertices=tuple(verts),
    )


PRESET_BUILDERS = {
    "SD": lambda m, **kw: sd_utility_set(m),
    "RDK": lambda m, k, **kw: rdk_utility_set(int(k), m),
    "OMNI": lambda m, **kw: omni_utility_set(m),
    "EQUIDISTANT": lambda m, **kw: equidistant_utility_set(m),
    "EPS_INDIFF": lambda m, epsilon, **kw: eps_indifferent_utility_set(epsilon, m),
}


# ---------------------------------------------------------------------------
# Profile text format
# ---------------------------------------------------------------------------


def parse_profile(text: str) -> tuple[Profile, tuple[str, ...]]:
    """Parse the profile text format.

    First meaningful line: ``alternatives: a b c`` (names map to indices in
    order).  Each following line: ``<count>: a > b > c``, expanding to that
    many consecutive voters.  Lines starting with ``#`` are comments.
    """
    names: Optional[tuple[str, ...]] = None
    name_to_index: dict[str, int] = {}
    prefs: list[PreferenceRelation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if names is None:
            if not line.startswith("alternatives:"):
                raise DomainError(
                    f"line {lineno}: expected 'alternatives: ...' before any ballots"
                )
            names = tuple(line[len("alternatives:"):].split())
            if not names or len(set(names)) != len(names):
                raise DomainError(f"line {lineno}: alternative names must be distinct")
            name_to_index = {name: i for i, name in enumerate(names)}
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise DomainError(f"line {lineno}: expected '<count>: a > b > c'")
        try:
            count = int(head.strip())
        except ValueError as exc:
            raise DomainError(f"line {lineno}: bad voter count {head.strip()!r}") from exc
        if count < 1:
            raise DomainError(f"line {lineno}: voter count must be positive")
        tokens = [t.strip() for t in tail.split(">")]
        if sorted(tokens) != sorted(names):
            raise DomainError(
                f"line {lineno}: ballot must rank every alternative exactly once"
            )
        order = tuple(name_to_index[t] for t in tokens)
        prefs.extend([PreferenceRelation(order)] * count)
    if names is None:
        raise DomainError("profile text contains no alternatives line")
    if not prefs:
        raise DomainError("profile text contains no ballots")
    return Profile(tuple(prefs)), names


def format_profile(profile: Profile, names: Optional[Sequence[str]] = None) -> str:
    if names is None:
        names = [chr(ord("a") + i) for i in range(profile.m)]
    if len(names) != profile.m:
        raise DomainError("name list must cover every alternative")
    lines = ["alternatives: " + " ".join(names)]
    run: Optional[PreferenceRelation] = None
    count = 0
    for p in list(profile.prefs) + [None]:  # type: ignore[list-item]
        if p == run:
            count += 1
            continue
        if run is not None:
            lines.append(f"{count}: " + " > ".join(names[x] for x in run.order))
        run, count = p, 1
    return "\n".join(lines) + "\n"
