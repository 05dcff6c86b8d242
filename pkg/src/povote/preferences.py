"""Strict partial orders over a finite set of alternatives, and profiles of them.

Alternatives are identified by their index ``0..m-1`` everywhere in the library; a
:class:`Universe` attaches display labels to those indices. A :class:`PartialOrder` stores its
transitively closed dominance relation as one bitmask per alternative, which keeps orders
hashable and cheap to compare, relabel and enumerate.
"""

import enum
import functools
import itertools
import logging
import math
import string
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from povote.configmanager import enumeration_bound

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Permutation = Tuple[int, ...]


class CycleError(ValueError):
    """Raised when a set of dominance edges closes into a cycle

    Parameters
    ----------
    message : str
        Exception message
    cycle : list of edges, optional
        The edges forming the offending cycle
    """

    def __init__(self, message: str, cycle: Optional[List[Edge]] = None):
        super().__init__(message)
        self.cycle = cycle or []


class ResourceError(ValueError):
    """Raised when a request exceeds the configured enumeration bound"""


class OverlapError(ValueError):
    """Raised when two profiles that must be disjoint share voter ids"""


class ArityError(ValueError):
    """Raised when preferences over universes of different sizes are combined"""


class DegenerateBallotError(ValueError):
    """Raised for an approval ballot that approves nothing or everything"""


class PermutationError(ValueError):
    """Raised when a sequence is not a permutation of the alternative indices"""


class Alternative(NamedTuple):
    index: int
    label: str


def default_labels(m: int) -> Tuple[str, ...]:
    """Labels ``a, b, c, ...`` for small universes, ``x0, x1, ...`` beyond 26 alternatives"""
    if m <= len(string.ascii_lowercase):
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"x{i}" for i in range(m))


@dataclass(frozen=True)
class Universe:
    """The labelled set of alternatives a profile is defined over"""

    labels: Tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("A universe needs at least one alternative")
        if any(not label for label in self.labels):
            raise ValueError("Alternative labels must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Alternative labels must be distinct, got {', '.join(self.labels)}")

    @classmethod
    def default(cls, m: int) -> "Universe":
        return cls(default_labels(m))

    @property
    def m(self) -> int:
        return len(self.labels)

    @property
    def alternatives(self) -> Tuple[Alternative, ...]:
        return tuple(Alternative(i, label) for i, label in enumerate(self.labels))

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        """Returns the index of a label, raising KeyError for unknown labels"""
        return self._index[label]

    def label(self, index: int) -> str:
        return self.labels[index]

    def format_set(self, alternatives: Iterable[int]) -> List[str]:
        return [self.labels[a] for a in sorted(alternatives)]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class PartialOrder:
    """A strict partial order over ``m`` alternatives.

    ``rows[a]`` has bit ``b`` set iff ``a`` dominates ``b``. The relation is always stored
    transitively closed; use :func:`build_partial_order` to close an arbitrary edge list.
    """

    m: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"A partial order needs at least one alternative, got m={self.m}")
        if len(self.rows) != self.m:
            raise ValueError(f"Expected {self.m} rows, got {len(self.rows)}")
        full = (1 << self.m) - 1
        for a, row in enumerate(self.rows):
            if row & ~full:
                raise IndexError(f"Row {a} refers to alternatives outside 0..{self.m - 1}")
            if row >> a & 1:
                raise ValueError(f"Relation is not irreflexive: {a} dominates itself")
            for b in _bits(row):
                if self.rows[b] >> a & 1:
                    raise ValueError(f"Relation is not antisymmetric: {a} and {b} dominate each other")
                if self.rows[b] & ~row:
                    raise ValueError(f"Relation is not transitively closed below {a} via {b}")

    def dominates(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    @cached_property
    def incidence(self) -> Tuple[Tuple[bool, ...], ...]:
        """The ``m`` x ``m`` boolean incidence matrix of the relation"""
        return tuple(tuple(bool(row >> b & 1) for b in range(self.m)) for row in self.rows)

    @cached_property
    def pairs(self) -> Tuple[Edge, ...]:
        return tuple((a, b) for a, row in enumerate(self.rows) for b in _bits(row))

    @cached_property
    def _dominated_mask(self) -> int:
        mask = 0
        for row in self.rows:
            mask |= row
        return mask

    @cached_property
    def top(self) -> FrozenSet[int]:
        return frozenset(a for a in range(self.m) if not self._dominated_mask >> a & 1)

    @cached_property
    def bottom(self) -> FrozenSet[int]:
        return frozenset(a for a, row in enumerate(self.rows) if not row)

    @property
    def nontop(self) -> FrozenSet[int]:
        return frozenset(range(self.m)) - self.top

    @property
    def nonbottom(self) -> FrozenSet[int]:
        return frozenset(range(self.m)) - self.bottom

    @cached_property
    def dominance_counts(self) -> Tuple[int, ...]:
        return tuple(bin(row).count("1") for row in self.rows)

    @property
    def is_linear(self) -> bool:
        return len(self.pairs) == self.m * (self.m - 1) // 2

    @property
    def is_empty(self) -> bool:
        return not any(self.rows)

    @cached_property
    def sort_key(self) -> Tuple[int, ...]:
        """Incidence bits in row-major order; sorting by this key gives the canonical order"""
        return tuple(row >> b & 1 for row in self.rows for b in range(self.m))


def build_partial_order(m: int, edges: Iterable[Edge]) -> PartialOrder:
    """Builds the strict partial order generated by a list of dominance edges

    Parameters
    ----------
    m : int
        Number of alternatives
    edges : Iterable of (winner, loser) index pairs
        Dominance edges; they need not be transitively closed

    Returns
    -------
    PartialOrder
        The transitive closure of the edges

    Raises
    ------
    IndexError
        If an edge refers to an index outside 0..m-1
    CycleError
        If the closure would make some alternative dominate itself
    """
    if m < 1:
        raise ValueError(f"A partial order needs at least one alternative, got m={m}")

    graph = nx.DiGraph()
    graph.add_nodes_from(range(m))
    for a, b in edges:
        if not (0 <= a < m and 0 <= b < m):
            raise IndexError(f"Edge ({a}, {b}) is outside the alternatives 0..{m - 1}")
        if a == b:
            raise CycleError(f"Alternative {a} cannot dominate itself", cycle=[(a, b)])
        graph.add_edge(a, b)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = [(u, v) for u, v, *_ in nx.find_cycle(graph)]
        raise CycleError(
            "Edges contain a cycle: " + " > ".join(str(u) for u, _ in cycle) + f" > {cycle[0][0]}", cycle=cycle
        )

    rows = [0] * m
    for a, b in nx.transitive_closure_dag(graph).edges:
        rows[a] |= 1 << b
    return PartialOrder(m, tuple(rows))


def empty_order(m: int) -> PartialOrder:
    return PartialOrder(m, (0,) * m)


def linear_order(ranking: Sequence[int]) -> PartialOrder:
    """The chain ``ranking[0] > ranking[1] > ...`` over ``len(ranking)`` alternatives"""
    return build_partial_order(len(ranking), zip(ranking, ranking[1:]))


def hasse_edges(po: PartialOrder) -> List[Edge]:
    """Covering pairs of the order, sorted; the smallest edge list that closes back to ``po``"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(po.m))
    graph.add_edges_from(po.pairs)
    return sorted(nx.transitive_reduction(graph).edges)


def top(po: PartialOrder) -> FrozenSet[int]:
    """Alternatives no other alternative dominates; never empty"""
    return po.top


def bottom(po: PartialOrder) -> FrozenSet[int]:
    """Alternatives that dominate nothing; never empty, and may overlap the top"""
    return po.bottom


def dominance_count(po: PartialOrder, a: int) -> int:
    """Number of alternatives ``a`` dominates under the closed relation"""
    return po.dominance_counts[a]


def check_permutation(sigma: Sequence[int], m: int) -> Permutation:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(m)):
        raise PermutationError(f"{sigma} is not a permutation of 0..{m - 1}")
    return sigma


def identity_permutation(m: int) -> Permutation:
    return tuple(range(m))


def transposition(m: int, a: int, b: int) -> Permutation:
    """The permutation swapping ``a`` and ``b``"""
    sigma = list(range(m))
    sigma[a], sigma[b] = b, a
    return tuple(sigma)


def permute_set(sigma: Permutation, alternatives: Iterable[int]) -> FrozenSet[int]:
    return frozenset(sigma[a] for a in alternatives)


def relabel(po: PartialOrder, sigma: Sequence[int]) -> PartialOrder:
    """Applies a renaming of alternatives: the result has ``sigma[a] > sigma[b]`` iff ``a > b``"""
    sigma = check_permutation(sigma, po.m)
    rows = [0] * po.m
    for a, b in po.pairs:
        rows[sigma[a]] |= 1 << sigma[b]
    return PartialOrder(po.m, tuple(rows))


def _extensions(rows: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    """All ways to add one new alternative (index ``k``) to an order on ``k`` alternatives"""
    k = len(rows)
    preds = [0] * k
    for a, row in enumerate(rows):
        for b in _bits(row):
            preds[b] |= 1 << a

    masks = range(1 << k)
    down_sets = [d for d in masks if all(rows[x] & ~d == 0 for x in _bits(d))]
    up_sets = [u for u in masks if all(preds[x] & ~u == 0 for x in _bits(u))]

    for up in up_sets:
        for down in down_sets:
            if up & down:
                continue
            # everything above the new alternative must already dominate everything below it
            if any(down & ~rows[u] for u in _bits(up)):
                continue
            extended = tuple(row | (1 << k) if up >> a & 1 else row for a, row in enumerate(rows))
            yield extended + (down,)


@functools.lru_cache(maxsize=None)
def _all_partial_orders(m: int) -> Tuple[PartialOrder, ...]:
    layer: List[Tuple[int, ...]] = [()]
    for _ in range(m):
        layer = [extended for rows in layer for extended in _extensions(rows)]
    orders = sorted((PartialOrder(m, rows) for rows in layer), key=lambda po: po.sort_key)
    logger.debug("Enumerated %d partial orders for m=%d", len(orders), m)
    return tuple(orders)


def _check_bound(m: int, max_m: Optional[int], what: str):
    bound = enumeration_bound() if max_m is None else max_m
    if m > bound:
        raise ResourceError(f"Cannot {what} for m={m}: the enumeration bound is {bound}")


def enumerate_partial_orders(m: int, max_m: Optional[int] = None) -> List[PartialOrder]:
    """All strict partial orders on ``m`` labelled alternatives, in canonical order

    Canonical order is lexicographic on the row-major incidence bits, so the empty relation
    comes first.

    Parameters
    ----------
    m : int
        Number of alternatives, at least 1
    max_m : int, optional
        Enumeration bound; defaults to the configured bound

    Raises
    ------
    ResourceError
        If m exceeds the enumeration bound
    """
    if m < 1:
        raise ValueError(f"Cannot enumerate orders on {m} alternatives")
    _check_bound(m, max_m, "enumerate partial orders")
    return list(_all_partial_orders(m))


def is_approval_ballot(po: PartialOrder) -> bool:
    """Top and bottom partition the alternatives"""
    return not (po.top & po.bottom) and len(po.top | po.bottom) == po.m


class BallotKind(str, enum.Enum):
    LINEAR = "linear"
    APPROVAL = "approval"
    GENERAL = "general"


def ballot_kind(po: PartialOrder) -> BallotKind:
    """Classifies an order; a linear order wins over the approval condition it meets when m=2"""
    if po.is_linear:
        return BallotKind.LINEAR
    if is_approval_ballot(po):
        return BallotKind.APPROVAL
    return BallotKind.GENERAL


def approval_ballot(approved: Iterable[int], m: int) -> PartialOrder:
    """The order where every approved alternative dominates every unapproved one, and nothing else

    Raises
    ------
    DegenerateBallotError
        If nothing or everything is approved
    IndexError
        If an approved index is outside 0..m-1
    """
    approved = frozenset(approved)
    if any(not 0 <= a < m for a in approved):
        raise IndexError(f"Approved alternatives {sorted(approved)} are outside 0..{m - 1}")
    if not approved or len(approved) == m:
        raise DegenerateBallotError("An approval ballot must approve a nonempty proper subset of the alternatives")

    unapproved_mask = sum(1 << b for b in range(m) if b not in approved)
    return PartialOrder(m, tuple(unapproved_mask if a in approved else 0 for a in range(m)))


@dataclass(frozen=True)
class Profile:
    """An ordered association of distinct positive voter ids to preferences over one universe"""

    ballots: Tuple[Tuple[int, PartialOrder], ...]

    def __post_init__(self):
        if not self.ballots:
            raise ValueError("A profile needs at least one voter")
        ids = [voter_id for voter_id, _ in self.ballots]
        if any(not isinstance(voter_id, int) or voter_id < 1 for voter_id in ids):
            raise ValueError(f"Voter ids must be positive integers, got {ids}")
        if len(set(ids)) != len(ids):
            raise ValueError(f"Voter ids must be distinct, got {ids}")
        if len({po.m for _, po in self.ballots}) != 1:
            raise ArityError("All preferences in a profile must range over the same alternatives")

    @classmethod
    def from_preferences(cls, preferences: Iterable[PartialOrder], first_id: int = 1) -> "Profile":
        """Numbers the preferences consecutively starting at ``first_id``"""
        return cls(tuple(enumerate(preferences, start=first_id)))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, PartialOrder]) -> "Profile":
        return cls(tuple(mapping.items()))

    @property
    def m(self) -> int:
        return self.ballots[0][1].m

    @property
    def voter_ids(self) -> Tuple[int, ...]:
        return tuple(voter_id for voter_id, _ in self.ballots)

    @property
    def preferences(self) -> Tuple[PartialOrder, ...]:
        return tuple(po for _, po in self.ballots)

    @cached_property
    def _by_id(self) -> Dict[int, PartialOrder]:
        return dict(self.ballots)

    def __len__(self) -> int:
        return len(self.ballots)

    def __iter__(self) -> Iterator[Tuple[int, PartialOrder]]:
        return iter(self.ballots)

    def __getitem__(self, voter_id: int) -> PartialOrder:
        return self._by_id[voter_id]

    def replace(self, voter_id: int, po: PartialOrder) -> "Profile":
        """The profile where ``voter_id`` reports ``po`` instead"""
        if voter_id not in self._by_id:
            raise KeyError(voter_id)
        return Profile(tuple((i, po if i == voter_id else old) for i, old in self.ballots))

    def relabel(self, sigma: Sequence[int]) -> "Profile":
        return Profile(tuple((i, relabel(po, sigma)) for i, po in self.ballots))

    def renumber(self, voter_ids: Sequence[int]) -> "Profile":
        """Gives the voters, in order, the ids ``voter_ids``"""
        if len(voter_ids) != len(self):
            raise ValueError(f"Need {len(self)} voter ids, got {len(voter_ids)}")
        return Profile(tuple(zip(voter_ids, self.preferences)))


def concat_profiles(p1: Profile, p2: Profile) -> Profile:
    """The profile in which both electorates vote

    Raises
    ------
    OverlapError
        If the electorates share a voter id
    ArityError
        If the profiles range over different numbers of alternatives
    """
    shared = set(p1.voter_ids) & set(p2.voter_ids)
    if shared:
        raise OverlapError(f"Electorates share voter ids {sorted(shared)}")
    if p1.m != p2.m:
        raise ArityError(f"Cannot concatenate profiles over {p1.m} and {p2.m} alternatives")
    return Profile(p1.ballots + p2.ballots)


def replicate_profile(p: Profile, k: int, reserved: Iterable[int] = ()) -> Profile:
    """``k`` copies of a profile

    The first copy keeps the original ids. Every further copy hands out, voter by voter in the
    original order, the smallest positive id that is neither reserved nor used before.

    Parameters
    ----------
    p : Profile
        The profile to replicate
    k : int
        Number of copies, at least 1
    reserved : Iterable[int]
        Ids that may not be handed out, typically the ids of both electorates
    """
    if k < 1:
        raise ValueError(f"Number of copies must be at least 1, got {k}")

    used: Set[int] = set(reserved) | set(p.voter_ids)
    ballots = list(p.ballots)
    candidate = 1
    for _ in range(k - 1):
        for po in p.preferences:
            while candidate in used:
                candidate += 1
            used.add(candidate)
            ballots.append((candidate, po))
    return Profile(tuple(ballots))


def symmetrized_profile(po: PartialOrder, fresh_ids_from: int = 1, max_m: Optional[int] = None) -> Profile:
    """The profile of all ``m!`` relabelings of ``po``, one voter each

    Every positional scoring function gives all alternatives the same total on it.

    Raises
    ------
    ResourceError
        If m! exceeds the number of relabelings of the largest enumerable universe, bound!
    """
    if fresh_ids_from < 1:
        raise ValueError(f"Voter ids must be positive, got {fresh_ids_from}")
    bound = enumeration_bound() if max_m is None else max_m
    relabelings, limit = math.factorial(po.m), math.factorial(bound)
    if relabelings > limit:
        raise ResourceError(
            f"Cannot build {relabelings} relabelings for m={po.m}: at most {limit} ({bound}!) are allowed"
        )
    return Profile.from_preferences(
        (relabel(po, sigma) for sigma in itertools.permutations(range(po.m))), first_id=fresh_ids_from
    )
