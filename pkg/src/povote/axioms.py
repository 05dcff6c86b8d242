"""Bounded, exhaustive verification of voting axioms.

Every checker enumerates the instances of one axiom within the bounds of a :class:`CheckConfig`
(universe size, electorate size, ballot domain), in a fixed order, and stops at the first
violation. Seed instances supplied in the configuration are tried before the enumeration.

Continuity quantifies over an unbounded number of replications. For rules that sum a scoring
function the replication bound is computed exactly; for other rules the outcome is simulated up
to ``k_max`` replications and then over a verification window, and a violation is only reported
when the outcome has settled on alternatives the replicated electorate does not select.
"""

import dataclasses
import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence
from typing import Set, Tuple, Union

from tqdm import tqdm

from povote.configmanager import enumeration_bound
from povote.const import (
    DEFAULT_CONTINUITY_VOTERS,
    DEFAULT_DOMAIN,
    DEFAULT_K_MAX,
    DEFAULT_MAX_VOTERS,
    DEFAULT_VERIFY_WINDOW,
)
from povote.preferences import (
    PartialOrder,
    Profile,
    ResourceError,
    build_partial_order,
    concat_profiles,
    enumerate_partial_orders,
    is_approval_ballot,
    permute_set,
    replicate_profile,
)
from povote.rules import VotingRule, Winners, score_board

logger = logging.getLogger(__name__)

DOMAINS = ("all", "linear", "approval")

Instance = Tuple[Profile, ...]


class AxiomId(str, enum.Enum):
    ANONYMITY = "anonymity"
    NEUTRALITY = "neutrality"
    REINFORCEMENT = "reinforcement"
    CONTINUITY = "continuity"
    PARTIAL_FAITHFULNESS = "partial-faithfulness"
    FAITHFULNESS = "faithfulness"
    PARTIAL_AVERSENESS = "partial-averseness"
    AVERSENESS = "averseness"
    T_CONGRUITY = "t-congruity"
    B_CONGRUITY = "b-congruity"
    CONTRACTION = "contraction"
    STRONG_CONTRACTION = "strong-contraction"
    EXPANSION = "expansion"
    STRONG_EXPANSION = "strong-expansion"
    TOPS_ONLY = "tops-only"
    BOTTOMS_ONLY = "bottoms-only"


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Seed:
    """An instance to try before the exhaustive enumeration of ``axiom``"""

    axiom: AxiomId
    profiles: Tuple[Profile, ...]


@dataclass(frozen=True)
class CheckConfig:
    """Bounds for the axiom checkers

    Attributes
    ----------
    m : int
        Number of alternatives, at least 3
    max_voters : int
        Largest electorate enumerated per quantified profile
    domain : str
        Ballots drawn from: "all" partial orders, "linear" orders, or "approval" ballots
    k_max : int
        Largest replication count searched as a Continuity bound
    verify_window : int
        Number of replication counts past the bound that must confirm it
    continuity_voters : int
        Largest electorate per side simulated for Continuity of rules without a scoring function
    seeds : tuple of Seed
        Instances tried first
    max_m : int, optional
        Enumeration bound; defaults to the configured bound
    progress : bool
        Shows a progress bar per check
    """

    m: int = 3
    max_voters: int = DEFAULT_MAX_VOTERS
    domain: str = DEFAULT_DOMAIN
    k_max: int = DEFAULT_K_MAX
    verify_window: int = DEFAULT_VERIFY_WINDOW
    continuity_voters: int = DEFAULT_CONTINUITY_VOTERS
    seeds: Tuple[Seed, ...] = ()
    max_m: Optional[int] = None
    progress: bool = False

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"Axioms are checked on at least 3 alternatives, got m={self.m}")
        if self.max_voters < 1 or self.continuity_voters < 1:
            raise ValueError("Electorates must allow at least one voter")
        if self.domain not in DOMAINS:
            raise ValueError(f"Unknown domain {self.domain!r}, expected one of {', '.join(DOMAINS)}")
        if self.k_max < 0 or self.verify_window < 1:
            raise ValueError("k_max must be non-negative and verify_window positive")
        bound = enumeration_bound() if self.max_m is None else self.max_m
        if self.m > bound:
            raise ResourceError(f"Cannot check axioms for m={self.m}: the enumeration bound is {bound}")

    @classmethod
    def from_settings(cls, settings: Mapping[str, Any], m: int, **overrides) -> "CheckConfig":
        """Builds a configuration from the [axioms] settings; ``None`` overrides are ignored"""
        values = {k: v for k, v in settings.items() if k in {f.name for f in dataclasses.fields(cls)}}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(m=m, **values)

    @property
    def bounds(self) -> Dict[str, Any]:
        return {"m": self.m, "max_voters": self.max_voters, "domain": self.domain}

    def seeds_for(self, axiom: AxiomId) -> List[Instance]:
        """Seeds for ``axiom`` over this universe whose ballots all lie in the domain"""
        return [
            seed.profiles
            for seed in self.seeds
            if seed.axiom == axiom
            and all(p.m == self.m and all(in_domain(po, self.domain) for po in p.preferences) for p in seed.profiles)
        ]


@dataclass(frozen=True)
class Witness:
    """Concrete profiles violating an axiom, with the outcomes that show it

    ``details`` holds winner sets and top or bottom sets, ``alternative`` an alternative
    index, ``permutation`` a relabeling, ``voter`` a voter id and ``k`` a replication count.
    """

    profiles: Dict[str, Profile]
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class CheckResult:
    axiom: AxiomId
    verdict: Verdict
    instances_checked: int
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    bounds: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


class Undecided(NamedTuple):
    reason: str


Outcome = Union[None, Witness, Undecided]


class _Evaluator:
    """Memoises a rule's winners; anonymous rules share results between reorderings of ballots"""

    def __init__(self, rule: VotingRule, by_multiset: bool):
        self.rule = rule
        self.by_multiset = by_multiset
        self.notes: Dict[str, Any] = {}
        self._cache: Dict[Any, Winners] = {}

    def __call__(self, p: Profile) -> Winners:
        key = tuple(sorted(po.rows for po in p.preferences)) if self.by_multiset else p
        winners = self._cache.get(key)
        if winners is None:
            winners = frozenset(self.rule(p))
            if not winners:
                raise ValueError(f"Rule {self.rule.name} returned no winners")
            self._cache[key] = winners
        return winners


def in_domain(po: PartialOrder, domain: str) -> bool:
    if domain == "linear":
        return po.is_linear
    if domain == "approval":
        return is_approval_ballot(po)
    return True


def domain_orders(cfg: CheckConfig) -> List[PartialOrder]:
    """The ballots quantified over, in canonical order"""
    return [po for po in enumerate_partial_orders(cfg.m, max_m=cfg.max_m) if in_domain(po, cfg.domain)]


def enumerate_profiles(
    orders: Sequence[PartialOrder], max_voters: int, multiset: bool, first_id: int = 1
) -> Iterator[Profile]:
    """Profiles of 1..max_voters voters with consecutive ids, smaller electorates first

    With ``multiset`` set, ballots are enumerated in non-decreasing canonical order only.
    """
    for n in range(1, max_voters + 1):
        ballots = itertools.combinations_with_replacement(orders, n) if multiset else itertools.product(orders, repeat=n)
        for prefs in ballots:
            yield Profile.from_preferences(prefs, first_id=first_id)


def _multiset(rule: VotingRule) -> bool:
    return rule.anonymous and not rule.needs_voter_ids


def _singles(rule: VotingRule, cfg: CheckConfig, multiset: Optional[bool] = None) -> Iterator[Instance]:
    multiset = _multiset(rule) if multiset is None else multiset
    for p in enumerate_profiles(domain_orders(cfg), cfg.max_voters, multiset):
        yield (p,)


def _single_voters(rule: VotingRule, cfg: CheckConfig) -> Iterator[Instance]:
    for po in domain_orders(cfg):
        yield (Profile(((1, po),)),)


def _pairs(rule: VotingRule, cfg: CheckConfig, max_voters: Optional[int] = None) -> Iterator[Instance]:
    """Pairs of profiles over disjoint electorates: ids 1..n, then n+1 onwards"""
    orders = domain_orders(cfg)
    max_voters = max_voters or cfg.max_voters
    multiset = _multiset(rule)
    for p in enumerate_profiles(orders, max_voters, multiset):
        for q in enumerate_profiles(orders, max_voters, multiset, first_id=len(p) + 1):
            yield p, q


def _replacements(
    rule: VotingRule, cfg: CheckConfig, related: Callable[[PartialOrder, PartialOrder], bool]
) -> Iterator[Instance]:
    """A profile together with a one-voter profile holding a replacement ballot for that voter"""
    orders = domain_orders(cfg)
    for (p,) in _singles(rule, cfg):
        for voter_id, old in p:
            for new in orders:
                if related(old, new):
                    yield p, Profile(((voter_id, new),))


def _same_sets(rule: VotingRule, cfg: CheckConfig, key: Callable[[PartialOrder], FrozenSet[int]]) -> Iterator[Instance]:
    """Pairs of profiles over the same voters whose ballots agree on ``key`` voter by voter"""
    orders = domain_orders(cfg)
    for (p,) in _singles(rule, cfg):
        choices = [[po for po in orders if key(po) == key(old)] for old in p.preferences]
        for combination in itertools.product(*choices):
            yield p, Profile(tuple(zip(p.voter_ids, combination)))


def _anonymity(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
    (p,) = instance
    winners = ev(p)
    pool = range(1, max(cfg.max_voters, len(p)) + 3)
    for ids in itertools.permutations(pool, len(p)):
        renamed = p.renumber(ids)
        renamed_winners = ev(renamed)
        if renamed_winners != winners:
            return Witness(
                {"profile": p, "renamed": renamed}, {"winners": winners, "renamed_winners": renamed_winners}
            )
    return None


def _neutrality(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
    (p,) = instance
    winners = ev(p)
    for sigma in itertools.permutations(range(p.m)):
        relabelled = p.relabel(sigma)
        relabelled_winners = ev(relabelled)
        if relabelled_winners != permute_set(sigma, winners):
            return Witness(
                {"profile": p, "relabelled": relabelled},
                {"permutation": sigma, "winners": winners, "relabelled_winners": relabelled_winners},
            )
    return None


def _reinforcement(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
    p, q = instance
    winners, other_winners = ev(p), ev(q)
    shared = winners & other_winners
    if not shared:
        return None
    combined_winners = ev(concat_profiles(p, q))
    if combined_winners != shared:
        return Witness(
            {"profile": p, "other": q},
            {"winners": winners, "other_winners": other_winners, "combined_winners": combined_winners},
        )
    return None


def continuity_bound(rule: VotingRule, p: Profile, q: Profile) -> int:
    """Smallest K such that every k > K replications of ``p`` joined by ``q`` select within F(p)

    Only valid for rules selecting the argmax of a summed scoring function.
    """
    totals = score_board(rule.scoring, p).totals
    other_totals = score_board(rule.scoring, q).totals
    best = max(totals)
    winners = [a for a, total in enumerate(totals) if total == best]
    best_other = max(other_totals[b] for b in winners)

    bound = 0
    for a, total in enumerate(totals):
        if total != best:
            bound = max(bound, math.floor((other_totals[a] - best_other) / (best - total)))
    return bound


def _continuity(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
    p, q = instance
    winners = ev(p)
    reserved = set(p.voter_ids) | set(q.voter_ids)

    if ev.rule.scoring is not None:
        bound = continuity_bound(ev.rule, p, q)
        ev.notes["largest_bound"] = max(bound, ev.notes.get("largest_bound", 0))
        first, last = bound + 1, bound + cfg.verify_window
    else:
        first, last = 1, cfg.k_max + cfg.verify_window

    copies = replicate_profile(p, last, reserved)
    outcomes = {}
    for k in range(first, last + 1):
        combined = concat_profiles(Profile(copies.ballots[: k * len(p)]), q)
        outcomes[k] = ev(combined)

    failing = [k for k, outcome in outcomes.items() if not outcome <= winners]
    if not failing:
        return None
    if ev.rule.scoring is not None:
        k = failing[0]
        return Witness(
            {"profile": p, "other": q}, {"winners": winners, "combined_winners": outcomes[k], "k": k, "bound": first - 1}
        )

    if failing[-1] <= cfg.k_max:
        return None
    window = [outcomes[k] for k in range(cfg.k_max + 1, last + 1)]
    if len(set(window)) == 1 and not window[0] & winners:
        return Witness({"profile": p, "other": q}, {"winners": winners, "combined_winners": window[0], "k": last})
    return Undecided(f"no bound K <= {cfg.k_max} confirmed over {cfg.verify_window} further replications")


def _faithfulness(partial: bool):
    def violation(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
        (p,) = instance
        (po,) = p.preferences
        winners = ev(p)
        holds = winners <= po.top if partial else winners == po.top
        return None if holds else Witness({"profile": p}, {"winners": winners, "top": po.top})

    return violation


def _averseness(partial: bool):
    def violation(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
        (p,) = instance
        (po,) = p.preferences
        if len(po.bottom) == po.m:
            return None
        winners = ev(p)
        holds = not po.bottom <= winners if partial else not po.bottom & winners
        return None if holds else Witness({"profile": p}, {"winners": winners, "bottom": po.bottom})

    return violation


def _congruity(tops: bool):
    """T-Congruity keeps losers losing, B-Congruity keeps winners winning"""

    def violation(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
        p, q = instance
        winners = ev(p)
        if tops:
            candidates = [x for x in range(p.m) if x not in winners and all(x not in po.top for po in q.preferences)]
        else:
            candidates = [x for x in winners if all(x not in po.bottom for po in q.preferences)]
        if not candidates:
            return None
        combined_winners = ev(concat_profiles(p, q))
        for x in sorted(candidates):
            if (x in combined_winners) == tops:
                return Witness(
                    {"profile": p, "other": q},
                    {"alternative": x, "winners": winners, "combined_winners": combined_winners},
                )
        return None

    return violation


def _replacement_axiom(tops: bool, strong: bool):
    """Contraction (tops) and Expansion (bottoms), plain or strong"""

    def violation(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
        p, replacement = instance
        ((voter_id, new),) = replacement.ballots
        old = p[voter_id]
        if tops:
            if not new.top <= old.top:
                return None
            removed, kept = old.top - new.top, new.top
        else:
            if not old.bottom <= new.bottom:
                return None
            removed, kept = new.bottom - old.bottom, old.bottom

        winners = ev(p)
        if strong:
            protected = winners - removed
        else:
            protected = winners & kept
            if not protected:
                return None

        modified = p.replace(voter_id, new)
        modified_winners = ev(modified)
        if not protected <= modified_winners:
            return Witness(
                {"profile": p, "replacement": replacement, "modified": modified},
                {"voter": voter_id, "winners": winners, "modified_winners": modified_winners},
            )
        return None

    return violation


def _only(ev: _Evaluator, cfg: CheckConfig, instance: Instance) -> Outcome:
    p, q = instance
    winners, other_winners = ev(p), ev(q)
    if winners != other_winners:
        return Witness({"profile": p, "other": q}, {"winners": winners, "other_winners": other_winners})
    return None


@dataclass(frozen=True)
class _AxiomCheck:
    instances: Callable[[VotingRule, CheckConfig], Iterable[Instance]]
    violation: Callable[[_Evaluator, CheckConfig, Instance], Outcome]
    names: Tuple[str, ...]


def _continuity_pairs(rule: VotingRule, cfg: CheckConfig) -> Iterable[Instance]:
    return _pairs(rule, cfg, cfg.max_voters if rule.scoring is not None else cfg.continuity_voters)


_CHECKS: Dict[AxiomId, _AxiomCheck] = {
    AxiomId.ANONYMITY: _AxiomCheck(lambda r, c: _singles(r, c, multiset=False), _anonymity, ("profile",)),
    AxiomId.NEUTRALITY: _AxiomCheck(_singles, _neutrality, ("profile",)),
    AxiomId.REINFORCEMENT: _AxiomCheck(_pairs, _reinforcement, ("profile", "other")),
    AxiomId.CONTINUITY: _AxiomCheck(_continuity_pairs, _continuity, ("profile", "other")),
    AxiomId.PARTIAL_FAITHFULNESS: _AxiomCheck(_single_voters, _faithfulness(partial=True), ("profile",)),
    AxiomId.FAITHFULNESS: _AxiomCheck(_single_voters, _faithfulness(partial=False), ("profile",)),
    AxiomId.PARTIAL_AVERSENESS: _AxiomCheck(_single_voters, _averseness(partial=True), ("profile",)),
    AxiomId.AVERSENESS: _AxiomCheck(_single_voters, _averseness(partial=False), ("profile",)),
    AxiomId.T_CONGRUITY: _AxiomCheck(_pairs, _congruity(tops=True), ("profile", "other")),
    AxiomId.B_CONGRUITY: _AxiomCheck(_pairs, _congruity(tops=False), ("profile", "other")),
    AxiomId.CONTRACTION: _AxiomCheck(
        lambda r, c: _replacements(r, c, lambda old, new: new.top <= old.top),
        _replacement_axiom(tops=True, strong=False),
        ("profile", "replacement"),
    ),
    AxiomId.STRONG_CONTRACTION: _AxiomCheck(
        lambda r, c: _replacements(r, c, lambda old, new: new.top <= old.top),
        _replacement_axiom(tops=True, strong=True),
        ("profile", "replacement"),
    ),
    AxiomId.EXPANSION: _AxiomCheck(
        lambda r, c: _replacements(r, c, lambda old, new: old.bottom <= new.bottom),
        _replacement_axiom(tops=False, strong=False),
        ("profile", "replacement"),
    ),
    AxiomId.STRONG_EXPANSION: _AxiomCheck(
        lambda r, c: _replacements(r, c, lambda old, new: old.bottom <= new.bottom),
        _replacement_axiom(tops=False, strong=True),
        ("profile", "replacement"),
    ),
    AxiomId.TOPS_ONLY: _AxiomCheck(lambda r, c: _same_sets(r, c, lambda po: po.top), _only, ("profile", "other")),
    AxiomId.BOTTOMS_ONLY: _AxiomCheck(
        lambda r, c: _same_sets(r, c, lambda po: po.bottom), _only, ("profile", "other")
    ),
}


def _evaluator(rule: VotingRule, axiom: AxiomId) -> _Evaluator:
    return _Evaluator(rule, by_multiset=_multiset(rule) and axiom != AxiomId.ANONYMITY)


def check_axiom(rule: VotingRule, cfg: CheckConfig, axiom: AxiomId) -> CheckResult:
    """Checks one axiom exhaustively within the bounds of ``cfg``

    Parameters
    ----------
    rule : VotingRule
        The rule under test
    cfg : CheckConfig
        Bounds and seeds
    axiom : AxiomId
        The axiom to check

    Returns
    -------
    CheckResult
        Fail with the first witness in enumeration order (seeds first), Inconclusive when some
        instance could not be decided within the bounds, Pass otherwise
    """
    check = _CHECKS[AxiomId(axiom)]
    axiom = AxiomId(axiom)
    bounds = dict(cfg.bounds)
    if axiom == AxiomId.CONTINUITY:
        bounds.update(k_max=cfg.k_max, verify_window=cfg.verify_window)
        if rule.scoring is None:
            bounds["continuity_voters"] = cfg.continuity_voters
    logger.debug("Checking %s of %s with bounds %s", axiom.value, rule.name, bounds)

    ev = _evaluator(rule, axiom)
    instances = itertools.chain(cfg.seeds_for(axiom), check.instances(rule, cfg))
    checked = 0
    undecided: List[Undecided] = []
    for instance in tqdm(instances, desc=axiom.value, unit=" instances", disable=not cfg.progress, leave=False):
        checked += 1
        outcome = check.violation(ev, cfg, instance)
        if isinstance(outcome, Witness):
            logger.info("Counterexample to %s found for %s after %d instances", axiom.value, rule.name, checked)
            return CheckResult(axiom, Verdict.FAIL, checked, witness=outcome, bounds=bounds, details=ev.notes)
        if outcome is not None:
            undecided.append(outcome)

    if undecided:
        reason = f"{len(undecided)} instance(s) undecided: {undecided[0].reason}"
        logger.info("%s of %s is inconclusive: %s", axiom.value, rule.name, reason)
        return CheckResult(axiom, Verdict.INCONCLUSIVE, checked, reason=reason, bounds=bounds, details=ev.notes)

    logger.info("%s holds for %s on %d instances", axiom.value, rule.name, checked)
    return CheckResult(axiom, Verdict.PASS, checked, bounds=bounds, details=ev.notes)


def check_anonymity(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.ANONYMITY)


def check_neutrality(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.NEUTRALITY)


def check_reinforcement(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.REINFORCEMENT)


def check_continuity(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.CONTINUITY)


def check_faithfulness(rule: VotingRule, cfg: CheckConfig, partial: bool = True) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.PARTIAL_FAITHFULNESS if partial else AxiomId.FAITHFULNESS)


def check_averseness(rule: VotingRule, cfg: CheckConfig, partial: bool = True) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.PARTIAL_AVERSENESS if partial else AxiomId.AVERSENESS)


def check_t_congruity(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.T_CONGRUITY)


def check_b_congruity(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.B_CONGRUITY)


def check_contraction(rule: VotingRule, cfg: CheckConfig, strong: bool = False) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.STRONG_CONTRACTION if strong else AxiomId.CONTRACTION)


def check_expansion(rule: VotingRule, cfg: CheckConfig, strong: bool = False) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.STRONG_EXPANSION if strong else AxiomId.EXPANSION)


def check_tops_only(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.TOPS_ONLY)


def check_bottoms_only(rule: VotingRule, cfg: CheckConfig) -> CheckResult:
    return check_axiom(rule, cfg, AxiomId.BOTTOMS_ONLY)


def check_all(
    rule: VotingRule, cfg: CheckConfig, axioms: Optional[Iterable[AxiomId]] = None
) -> Dict[AxiomId, CheckResult]:
    """Runs the given checkers (all of them by default) in declaration order

    A checker raising a ``ValueError``, for instance a rule undefined on the ballot domain, is
    reported as Inconclusive with the error as reason.
    """
    wanted = set(AxiomId) if axioms is None else {AxiomId(a) for a in axioms}
    report = {}
    for axiom in AxiomId:
        if axiom not in wanted:
            continue
        try:
            report[axiom] = check_axiom(rule, cfg, axiom)
        except ResourceError:
            raise
        except ValueError as e:
            logger.warning("Could not check %s for %s: %s", axiom.value, rule.name, e)
            report[axiom] = CheckResult(axiom, Verdict.INCONCLUSIVE, 0, reason=str(e), bounds=dict(cfg.bounds))
    return report


def cross_check_implication(rule: VotingRule, cfg: CheckConfig, premise: AxiomId, conclusion: AxiomId) -> bool:
    """False only if the premise passes while the conclusion fails at the configured bounds"""
    if check_axiom(rule, cfg, premise).verdict != Verdict.PASS:
        return True
    return check_axiom(rule, cfg, conclusion).verdict != Verdict.FAIL


def replay_witness(rule: VotingRule, result: CheckResult, cfg: CheckConfig) -> bool:
    """Re-evaluates a Fail witness standalone; true iff the violation is reproduced"""
    if result.witness is None:
        return False
    check = _CHECKS[result.axiom]
    instance = tuple(result.witness.profiles[name] for name in check.names)
    return isinstance(check.violation(_evaluator(rule, result.axiom), cfg, instance), Witness)


@dataclass(frozen=True)
class Suite:
    """A set of axioms characterising one rule class

    ``membership`` names the :class:`~povote.scoring.ClassMembership` flag of the class, and
    ``domain`` the ballot domain the characterisation is stated on, when it is not all orders.
    """

    name: str
    axioms: Tuple[AxiomId, ...]
    membership: Optional[str] = None
    domain: Optional[str] = None


_A, _N, _R, _C = AxiomId.ANONYMITY, AxiomId.NEUTRALITY, AxiomId.REINFORCEMENT, AxiomId.CONTINUITY

SUITES: Dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite(
            "plurality-class",
            (_A, _N, _R, _C, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.T_CONGRUITY),
            "plurality_class",
        ),
        Suite("simple-plurality", (_A, _N, _R, _C, AxiomId.FAITHFULNESS, AxiomId.T_CONGRUITY), "simple_plurality"),
        Suite(
            "monotonic-simple-plurality",
            (_A, _N, _R, _C, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.CONTRACTION),
            "monotonic_simple_plurality",
        ),
        Suite(
            "uniform-plurality",
            (_A, _N, _R, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.STRONG_CONTRACTION),
            "uniform_plurality",
        ),
        Suite(
            "anti-plurality-class",
            (_A, _N, _R, _C, AxiomId.PARTIAL_AVERSENESS, AxiomId.B_CONGRUITY),
            "anti_plurality_class",
        ),
        Suite(
            "simple-anti-plurality",
            (_A, _N, _R, _C, AxiomId.AVERSENESS, AxiomId.B_CONGRUITY),
            "simple_anti_plurality",
        ),
        Suite(
            "monotonic-simple-anti-plurality",
            (_A, _N, _R, _C, AxiomId.PARTIAL_AVERSENESS, AxiomId.EXPANSION),
            "monotonic_simple_anti_plurality",
        ),
        Suite(
            "uniform-anti-plurality",
            (_A, _N, _R, AxiomId.PARTIAL_AVERSENESS, AxiomId.STRONG_EXPANSION),
            "uniform_anti_plurality",
        ),
        Suite(
            "size-approval",
            (_A, _N, _R, _C, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.CONTRACTION),
            "monotonic_simple_plurality",
            "approval",
        ),
        Suite(
            "standard-approval",
            (_A, _N, _R, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.STRONG_CONTRACTION),
            "uniform_plurality",
            "approval",
        ),
        Suite(
            "standard-approval-averse",
            (_A, _N, _R, AxiomId.PARTIAL_AVERSENESS, AxiomId.STRONG_EXPANSION),
            "uniform_anti_plurality",
            "approval",
        ),
        Suite(
            "anti-size-approval",
            (_A, _N, _R, _C, AxiomId.PARTIAL_AVERSENESS, AxiomId.EXPANSION),
            "monotonic_simple_anti_plurality",
            "approval",
        ),
    )
}


def check_suite(rule: VotingRule, cfg: CheckConfig, name: str) -> Dict[AxiomId, CheckResult]:
    """Runs the axioms of a named suite, on the suite's ballot domain if it has one

    Raises
    ------
    KeyError
        If no suite has that name
    """
    try:
        suite = SUITES[name]
    except KeyError as e:
        raise KeyError(f"Unknown suite {name!r}; known: {', '.join(SUITES)}") from e
    if suite.domain is not None and suite.domain != cfg.domain:
        logger.info("Suite %s is stated on %s ballots, switching domain", name, suite.domain)
        cfg = dataclasses.replace(cfg, domain=suite.domain)
    return check_all(rule, cfg, suite.axioms)


def independence_matrix(
    rules: Iterable[VotingRule], axioms: Sequence[AxiomId], cfg: CheckConfig
) -> Dict[str, Dict[AxiomId, CheckResult]]:
    """Verdict grid of every rule against every axiom"""
    return {rule.name: check_all(rule, cfg, axioms) for rule in rules}


def overall_verdict(results: Iterable[CheckResult]) -> Verdict:
    """Fail if anything fails, otherwise Inconclusive if anything is, otherwise Pass"""
    verdicts: Set[Verdict] = {result.verdict for result in results}
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def literature_seeds(m: int = 3) -> Tuple[Seed, ...]:
    """Known witnesses, written over the first three alternatives of an ``m``-universe

    Two Continuity pairs on which the two-step rules never settle inside F of the replicated
    profile, and the large Reinforcement pair for the runner-up rule.
    """
    a, b, c = 0, 1, 2

    def order(*edges):
        return build_partial_order(m, edges)

    abc, bac, cba = order((a, b), (b, c)), order((b, a), (a, c)), order((c, b), (b, a))
    a_last = order((b, a), (c, a))
    a_first = order((a, b), (a, c))

    return (
        Seed(
            AxiomId.CONTINUITY,
            (Profile(((1, abc), (2, a_last))), Profile(((3, a_last),))),
        ),
        Seed(
            AxiomId.CONTINUITY,
            (Profile(((1, cba), (2, a_first))), Profile(((3, a_first),))),
        ),
        Seed(
            AxiomId.REINFORCEMENT,
            (
                Profile.from_preferences([abc] * 10 + [bac] * 9),
                Profile.from_preferences([abc] * 7 + [bac] * 6, first_id=20),
            ),
        ),
    )
