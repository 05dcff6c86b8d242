"""Positional scoring functions, their built-in families, and classification into rule classes.

Scores are exact :class:`fractions.Fraction` values throughout; floats never enter winner
determination.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from povote.const import POSITIONALITY_CHECK_M
from povote.preferences import ArityError, PartialOrder, enumerate_partial_orders, relabel

logger = logging.getLogger(__name__)

ScoreLike = Union[int, str, Fraction]
ScoreCallable = Callable[[PartialOrder, int], Fraction]


class WeightError(ValueError):
    """Raised when a weight sequence violates the monotonicity or positivity constraints"""


class AlphaError(ValueError):
    """Raised for a non-positive scaling factor in an affine transformation"""


class NonPositionalError(ValueError):
    """Raised when registering a scoring function that is not invariant under relabelings"""


def as_score(value: ScoreLike) -> Fraction:
    """Converts ints, Fractions and strings like ``"1/2"`` into an exact score"""
    if isinstance(value, float):
        raise TypeError(f"Scores must be exact, got the float {value!r}")
    return Fraction(value)


class ScoringFunction:
    """A map from (preference, alternative) to an exact score

    Parameters
    ----------
    name : str
        Identifier of the function, used in reports
    score : Callable[[PartialOrder, int], Fraction]
        The pure evaluation function
    params : tuple, optional
        Parameters the function was built from, such as a weight sequence
    """

    def __init__(self, name: str, score: ScoreCallable, params: Tuple = ()):
        self.name = name
        self.params = tuple(params)
        self._score = score
        self._vectors: Dict[PartialOrder, Tuple[Fraction, ...]] = {}

    def __call__(self, po: PartialOrder, a: int) -> Fraction:
        return self.score_vector(po)[a]

    def score_vector(self, po: PartialOrder) -> Tuple[Fraction, ...]:
        """Scores of every alternative under ``po``, memoised per order"""
        vector = self._vectors.get(po)
        if vector is None:
            vector = tuple(as_score(self._score(po, a)) for a in range(po.m))
            self._vectors[po] = vector
        return vector

    def __repr__(self) -> str:
        if self.params:
            return f"ScoringFunction({self.name!r}, params={[str(p) for p in self.params]})"
        return f"ScoringFunction({self.name!r})"


def score_uniform_plurality(po: PartialOrder, a: int) -> Fraction:
    return Fraction(1) if a in po.top else Fraction(0)


def score_dominance_plurality(po: PartialOrder, a: int) -> Fraction:
    """Top alternatives score the number of alternatives they dominate; the rest score 0"""
    return Fraction(po.dominance_counts[a]) if a in po.top else Fraction(0)


def score_borda_dominance(po: PartialOrder, a: int) -> Fraction:
    return Fraction(po.dominance_counts[a])


def score_uniform_antiplurality(po: PartialOrder, a: int) -> Fraction:
    return Fraction(-1) if a in po.bottom else Fraction(0)


def check_weights(weights: Iterable[ScoreLike]) -> Tuple[Fraction, ...]:
    """Validates a size-family weight sequence ``w(1), ..., w(m)``

    Raises
    ------
    WeightError
        If the weights increase somewhere, if a weight before the last is not positive,
        or if the last weight is negative
    """
    try:
        weights = tuple(as_score(w) for w in weights)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise WeightError(f"Weights must be exact rationals: {e}") from e

    if not weights:
        raise WeightError("Need one weight per alternative, got none")
    for t, (w, w_next) in enumerate(zip(weights, weights[1:]), start=1):
        if w < w_next:
            raise WeightError(f"Weights must be non-increasing, but w({t})={w} < w({t + 1})={w_next}")
    if any(w <= 0 for w in weights[:-1]):
        raise WeightError("Weights w(1)..w(m-1) must be positive")
    if weights[-1] < 0:
        raise WeightError(f"The last weight must be non-negative, got {weights[-1]}")
    return weights


def _check_arity(po: PartialOrder, weights: Tuple[Fraction, ...]):
    if po.m != len(weights):
        raise ArityError(f"Weights are defined for m={len(weights)}, but the preference has m={po.m}")


def score_size_family(weights: Sequence[ScoreLike]) -> ScoringFunction:
    """Size approval: a top alternative scores ``w(|T|)``, every other alternative 0"""
    weights = check_weights(weights)

    def score(po: PartialOrder, a: int) -> Fraction:
        _check_arity(po, weights)
        return weights[len(po.top) - 1] if a in po.top else Fraction(0)

    return ScoringFunction("size-approval", score, params=weights)


def score_antisize_family(weights: Sequence[ScoreLike]) -> ScoringFunction:
    """Anti-size approval: a bottom alternative scores ``-v(|B|)``, every other alternative 0"""
    weights = check_weights(weights)

    def score(po: PartialOrder, a: int) -> Fraction:
        _check_arity(po, weights)
        return -weights[len(po.bottom) - 1] if a in po.bottom else Fraction(0)

    return ScoringFunction("anti-size", score, params=weights)


def affine_transform(s: ScoringFunction, alpha: ScoreLike, beta: ScoreLike) -> ScoringFunction:
    """The scoring function ``alpha * s + beta``; it induces the same winners as ``s``

    Raises
    ------
    AlphaError
        If alpha is not positive
    """
    alpha, beta = as_score(alpha), as_score(beta)
    if alpha <= 0:
        raise AlphaError(f"The scaling factor must be positive, got {alpha}")

    def score(po: PartialOrder, a: int) -> Fraction:
        return alpha * s(po, a) + beta

    return ScoringFunction(f"{s.name}*{alpha}+{beta}", score, params=(*s.params, alpha, beta))


def is_positional(s: ScoringFunction, m: int, max_m: Optional[int] = None) -> bool:
    """Checks ``s(po, a) == s(relabel(po, sigma), sigma[a])`` over every order and permutation

    Raises
    ------
    ResourceError
        If m exceeds the enumeration bound
    """
    orders = enumerate_partial_orders(m, max_m=max_m)
    for po in orders:
        scores = s.score_vector(po)
        for sigma in itertools.permutations(range(m)):
            relabelled = s.score_vector(relabel(po, sigma))
            if any(scores[a] != relabelled[sigma[a]] for a in range(m)):
                logger.debug("%s is not positional: order %s, permutation %s", s.name, po.pairs, sigma)
                return False
    return True


@dataclass(frozen=True)
class ScoringTable:
    """Score sequences of one scoring function for every partial order on ``m`` alternatives"""

    name: str
    m: int
    orders: Tuple[PartialOrder, ...]
    scores: Tuple[Tuple[Fraction, ...], ...]

    def rows(self) -> Iterable[Tuple[PartialOrder, Tuple[Fraction, ...]]]:
        return zip(self.orders, self.scores)


def tabulate(s: ScoringFunction, m: int, max_m: Optional[int] = None) -> ScoringTable:
    orders = tuple(enumerate_partial_orders(m, max_m=max_m))
    return ScoringTable(s.name, m, orders, tuple(s.score_vector(po) for po in orders))


@dataclass(frozen=True)
class ClassMembership:
    plurality_class: bool
    simple_plurality: bool
    monotonic_simple_plurality: bool
    uniform_plurality: bool
    anti_plurality_class: bool
    simple_anti_plurality: bool
    monotonic_simple_anti_plurality: bool
    uniform_anti_plurality: bool

    def as_dict(self) -> Dict[str, bool]:
        """The eight flags in their fixed order"""
        return {f.name: value for f, value in zip(fields(self), astuple(self))}


def _classify_side(table: ScoringTable, anti: bool) -> Tuple[bool, bool, bool, bool]:
    """Class, simple, monotonic simple and uniform flags for one side of the hierarchy

    With ``anti`` set, scores are negated so that the anti-plurality conditions on bottoms
    become the plurality conditions on tops.
    """
    in_class = simple = True
    # normalised score of the distinguished set, grouped by the size of that set
    by_size: Dict[int, List[Fraction]] = defaultdict(list)

    for po, scores in table.rows():
        favoured = po.bottom if anti else po.top
        if len(favoured) == po.m:
            continue
        values = [-x for x in scores] if anti else list(scores)
        rest = {values[a] for a in range(po.m) if a not in favoured}
        if len(rest) != 1:
            in_class = False
            break
        (k_rest,) = rest
        shifted = [values[a] - k_rest for a in favoured]
        if any(x < 0 for x in shifted) or all(x == 0 for x in shifted):
            in_class = False
            break
        if len(set(shifted)) != 1:
            simple = False
        else:
            by_size[len(favoured)].append(shifted[0])

    simple = simple and in_class
    monotonic = simple
    if monotonic:
        previous = None
        for size in sorted(by_size):
            values = set(by_size[size])
            if len(values) != 1:
                monotonic = False
                break
            (k,) = values
            if previous is not None and k > previous:
                monotonic = False
                break
            previous = k
    uniform = monotonic and len({k for ks in by_size.values() for k in ks}) <= 1
    return in_class, simple, monotonic, uniform


def classify(table: ScoringTable) -> ClassMembership:
    """Decides membership of the tabulated function in the eight plurality-type classes

    Each order's non-top (non-bottom) score is normalised to 0 before comparing, so the result
    is invariant under positive affine transformations. Orders where every alternative is
    top (bottom), i.e. the empty relation, impose no condition.
    """
    membership = ClassMembership(*_classify_side(table, anti=False), *_classify_side(table, anti=True))
    logger.debug("Classified %s at m=%d: %s", table.name, table.m, membership)
    return membership


UNIFORM_PLURALITY = ScoringFunction("uniform-plurality", score_uniform_plurality)
DOMINANCE_PLURALITY = ScoringFunction("dominance-plurality", score_dominance_plurality)
BORDA_DOMINANCE = ScoringFunction("borda", score_borda_dominance)
UNIFORM_ANTIPLURALITY = ScoringFunction("uniform-anti-plurality", score_uniform_antiplurality)

SCORING_FUNCTIONS: Dict[str, ScoringFunction] = {}


def register_scoring_function(s: ScoringFunction, m: int = POSITIONALITY_CHECK_M) -> ScoringFunction:
    """Adds a scoring function to the registry after checking it is positional at ``m``

    Raises
    ------
    NonPositionalError
        If the function scores some relabelled order differently
    """
    if not is_positional(s, m, max_m=m):
        raise NonPositionalError(f"Scoring function {s.name} is not positional at m={m}")
    SCORING_FUNCTIONS[s.name] = s
    return s


def get_scoring_function(name: str) -> ScoringFunction:
    try:
        return SCORING_FUNCTIONS[name]
    except KeyError as e:
        raise KeyError(f"Unknown scoring function {name!r}; known: {', '.join(sorted(SCORING_FUNCTIONS))}") from e


for _builtin in (UNIFORM_PLURALITY, DOMINANCE_PLURALITY, BORDA_DOMINANCE, UNIFORM_ANTIPLURALITY):
    register_scoring_function(_builtin)
