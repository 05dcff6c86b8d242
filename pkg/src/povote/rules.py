"""Voting rules over profiles of partial orders.

A :class:`VotingRule` wraps a winner function together with the structural flags the axiom
checkers rely on. Rules built from a :class:`~povote.scoring.ScoringFunction` keep a reference to
it so that Continuity can be decided analytically.
"""

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from povote.preferences import Profile, default_labels, is_approval_ballot
from povote.scoring import (
    BORDA_DOMINANCE,
    DOMINANCE_PLURALITY,
    UNIFORM_ANTIPLURALITY,
    UNIFORM_PLURALITY,
    ScoringFunction,
    score_antisize_family,
    score_size_family,
    score_uniform_antiplurality,
    score_uniform_plurality,
)

logger = logging.getLogger(__name__)

Winners = FrozenSet[int]


class DomainError(ValueError):
    """Raised when a rule receives a ballot outside the domain it is defined on"""


class Side(str, enum.Enum):
    TOP = "top"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class VotingRule:
    """A map from profiles to nonempty winner sets

    Attributes
    ----------
    name : str
        Rule specification string, as accepted by :func:`povote.ballots.parse_rule_spec`
    evaluate : Callable[[Profile], FrozenSet[int]]
        Winner function
    anonymous, neutral : bool
        Whether the rule is anonymous (neutral) by construction
    needs_voter_ids : bool
        Whether the outcome may depend on which id a voter carries
    scoring : ScoringFunction, optional
        The per-ballot scoring function whose summed argmax the rule selects, if any
    positional : bool
        Whether ``scoring`` is invariant under relabeling alternatives
    tally : Callable[[Profile], ScoreBoard], optional
        Totals behind the winners when they are not the plain sum of ``scoring``
    """

    name: str
    evaluate: Callable[[Profile], Winners]
    anonymous: bool = True
    neutral: bool = True
    needs_voter_ids: bool = False
    scoring: Optional[ScoringFunction] = None
    positional: bool = False
    tally: Optional[Callable[[Profile], "ScoreBoard"]] = None

    def __call__(self, profile: Profile) -> Winners:
        return self.evaluate(profile)

    def totals(self, profile: Profile) -> Optional["ScoreBoard"]:
        """The score board the winners are read from, or None for rules that do not sum scores"""
        if self.tally is not None:
            return self.tally(profile)
        if self.scoring is not None:
            return score_board(self.scoring, profile)
        return None


@dataclass(frozen=True)
class ScoreBoard:
    """Exact total score of every alternative for one profile"""

    totals: Tuple[Fraction, ...]

    @property
    def maximum(self) -> Fraction:
        return max(self.totals)

    @property
    def winners(self) -> Winners:
        best = self.maximum
        return frozenset(a for a, total in enumerate(self.totals) if total == best)


def score_board(s: ScoringFunction, p: Profile, weights: Optional[Dict[int, int]] = None) -> ScoreBoard:
    """Sums ``s`` over all voters; ``weights`` multiplies the ballots of the listed voter ids"""
    totals = [Fraction(0)] * p.m
    for voter_id, po in p:
        factor = weights.get(voter_id, 1) if weights else 1
        for a, score in enumerate(s.score_vector(po)):
            totals[a] += factor * score
    return ScoreBoard(tuple(totals))


def winners_scoring(s: ScoringFunction, p: Profile) -> Winners:
    return score_board(s, p).winners


def winners_standard_approval(p: Profile) -> Winners:
    """Alternatives approved by the most voters

    Raises
    ------
    DomainError
        If some ballot's top and bottom do not partition the alternatives
    """
    for voter_id, po in p:
        if not is_approval_ballot(po):
            raise DomainError(f"Ballot of voter {voter_id} is not an approval ballot")
    counts = [sum(a in po.top for po in p.preferences) for a in range(p.m)]
    best = max(counts)
    return frozenset(a for a, count in enumerate(counts) if count == best)


def winners_full_set(p: Profile) -> Winners:
    return frozenset(range(p.m))


def _uniform(side: Side) -> ScoringFunction:
    return UNIFORM_PLURALITY if side == Side.TOP else UNIFORM_ANTIPLURALITY


def winners_two_step(side: Side, p: Profile) -> Winners:
    """Uniform (anti-)plurality winners, narrowed by whether they are some voter's unique top (bottom)

    Top side keeps the winners that are the unique top of some voter; bottom side keeps the
    winners that are nobody's unique bottom. An empty narrowing falls back to the first step.
    """
    first = winners_scoring(_uniform(side), p)
    if side == Side.TOP:
        unique = {next(iter(po.top)) for po in p.preferences if len(po.top) == 1}
        second = first & unique
    else:
        unique = {next(iter(po.bottom)) for po in p.preferences if len(po.bottom) == 1}
        second = first - unique
    return frozenset(second) or first


def winners_runner_up(side: Side, p: Profile) -> Winners:
    """Uniform (anti-)plurality winners together with every alternative exactly one point behind

    A single voter instead gets their top set (top side) or their non-bottom set (bottom side);
    a lone empty relation has no non-bottom alternatives and yields every alternative.
    """
    if len(p) == 1:
        (po,) = p.preferences
        chosen = po.top if side == Side.TOP else po.nonbottom
        return frozenset(chosen) or winners_full_set(p)

    board = score_board(_uniform(side), p)
    best = board.maximum
    return frozenset(a for a, total in enumerate(board.totals) if total in (best, best - 1))


def biased_scoring_function(x: int, side: Side) -> ScoringFunction:
    """Uniform (anti-)plurality scoring with the score of alternative ``x`` doubled on every ballot"""
    base = score_uniform_plurality if side == Side.TOP else score_uniform_antiplurality

    def score(po, a):
        return 2 * base(po, a) if a == x else base(po, a)

    return ScoringFunction(f"double-{x}-{side.value}", score, params=(x, side.value))


def winners_biased_alternative(x: int, side: Side, p: Profile) -> Winners:
    return winners_scoring(biased_scoring_function(x, side), p)


PRIVILEGED_VOTER = 1


def voter_privilege_board(side: Side, p: Profile) -> ScoreBoard:
    """Uniform (anti-)plurality totals where the voter with id 1 counts twice"""
    return score_board(_uniform(side), p, weights={PRIVILEGED_VOTER: 2})


def winners_voter_privilege(side: Side, p: Profile) -> Winners:
    return voter_privilege_board(side, p).winners


def scoring_rule(s: ScoringFunction, name: Optional[str] = None) -> VotingRule:
    """The positional scoring rule selecting the argmax of summed scores"""
    return VotingRule(
        name=name or s.name,
        evaluate=lambda p: winners_scoring(s, p),
        scoring=s,
        positional=True,
    )


def size_approval_rule(weights) -> VotingRule:
    s = score_size_family(weights)
    return scoring_rule(s, name="size-approval:" + ",".join(str(w) for w in s.params))


def antisize_rule(weights) -> VotingRule:
    s = score_antisize_family(weights)
    return scoring_rule(s, name="anti-size:" + ",".join(str(w) for w in s.params))


def two_step_rule(side: Side) -> VotingRule:
    return VotingRule(name=f"two-step-{side.value}", evaluate=lambda p: winners_two_step(side, p))


def runner_up_rule(side: Side) -> VotingRule:
    name = "runner-up-plurality" if side == Side.TOP else "runner-up-anti-plurality"
    return VotingRule(name=name, evaluate=lambda p: winners_runner_up(side, p))


def biased_alternative_rule(x: int, side: Side, label: Optional[str] = None) -> VotingRule:
    s = biased_scoring_function(x, side)
    label = label if label is not None else default_labels(x + 1)[x]
    return VotingRule(
        name=f"double:{label}-{side.value}",
        evaluate=lambda p: winners_scoring(s, p),
        neutral=False,
        scoring=s,
    )


def voter_privilege_rule(side: Side) -> VotingRule:
    return VotingRule(
        name=f"voter1-{side.value}",
        evaluate=lambda p: winners_voter_privilege(side, p),
        anonymous=False,
        needs_voter_ids=True,
        tally=lambda p: voter_privilege_board(side, p),
    )


UNIFORM_PLURALITY_RULE = scoring_rule(UNIFORM_PLURALITY)
UNIFORM_ANTIPLURALITY_RULE = scoring_rule(UNIFORM_ANTIPLURALITY)
DOMINANCE_PLURALITY_RULE = scoring_rule(DOMINANCE_PLURALITY)
BORDA_DOMINANCE_RULE = scoring_rule(BORDA_DOMINANCE)
FULL_SET_RULE = VotingRule(name="full-set", evaluate=winners_full_set)
STANDARD_APPROVAL_RULE = VotingRule(name="approval", evaluate=winners_standard_approval)


def registered_rules(m: int) -> List[VotingRule]:
    """Every built-in rule that is total on all partial orders over ``m`` alternatives

    The size families use the weights ``m, m-1, ..., 1``. Standard approval is left out since it
    is only defined on approval ballots.
    """
    descending = list(range(m, 0, -1))
    return [
        UNIFORM_PLURALITY_RULE,
        UNIFORM_ANTIPLURALITY_RULE,
        DOMINANCE_PLURALITY_RULE,
        BORDA_DOMINANCE_RULE,
        size_approval_rule(descending),
        antisize_rule(descending),
        FULL_SET_RULE,
        two_step_rule(Side.TOP),
        two_step_rule(Side.BOTTOM),
        runner_up_rule(Side.TOP),
        runner_up_rule(Side.BOTTOM),
        biased_alternative_rule(0, Side.TOP),
        biased_alternative_rule(0, Side.BOTTOM),
        voter_privilege_rule(Side.TOP),
        voter_privilege_rule(Side.BOTTOM),
    ]
