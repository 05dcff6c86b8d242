"""Ballot files, rule specifications and JSON reports.

A ballot file is line oriented; ``#`` starts a comment::

    alternatives: a b c
    voter 1: a>b, b>c
    voter 2: approve {a, b}
    voter 3: linear c>b>a
    voter 4:

A ballot is a comma-separated list of edges (``x>y``, chains such as ``x>y>z`` allowed),
``approve {...}``, ``linear`` followed by every alternative once, or nothing for the empty relation.
"""

import enum
import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from povote.axioms import AxiomId, CheckResult, Witness, overall_verdict
from povote.preferences import (
    CycleError,
    DegenerateBallotError,
    PartialOrder,
    Profile,
    Universe,
    approval_ballot,
    build_partial_order,
    default_labels,
    empty_order,
    hasse_edges,
    is_approval_ballot,
)
from povote.rules import (
    BORDA_DOMINANCE_RULE,
    DOMINANCE_PLURALITY_RULE,
    FULL_SET_RULE,
    STANDARD_APPROVAL_RULE,
    UNIFORM_ANTIPLURALITY_RULE,
    UNIFORM_PLURALITY_RULE,
    ScoreBoard,
    Side,
    VotingRule,
    antisize_rule,
    biased_alternative_rule,
    runner_up_rule,
    size_approval_rule,
    two_step_rule,
    voter_privilege_rule,
)
from povote.scoring import ClassMembership, WeightError

logger = logging.getLogger(__name__)

LABEL_PATTERN = re.compile(r"[^\s>,{}:#]+")
HEADER_PATTERN = re.compile(r"\s*alternatives\s*:(?P<labels>.*)")
VOTER_PATTERN = re.compile(r"\s*voter\s+(?P<id>\S+?)\s*:(?P<ballot>.*)")
HEADER_TOKEN_PATTERN = re.compile(r"[^\s,]+")
APPROVE_PATTERN = re.compile(r"\s*approve\s*\{(?P<labels>[^}]*)\}\s*")
LINEAR_PATTERN = re.compile(r"\s*linear\s+(?P<chain>.*)")


class ParseError(ValueError):
    """Raised when a ballot file cannot be parsed

    Parameters
    ----------
    message : str
        Exception message
    line, column : int, optional
        1-based position of the offending text
    voter_id : int, optional
        The voter whose ballot is malformed
    """

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[int] = None, voter_id: Optional[int] = None
    ):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.voter_id = voter_id

    def __str__(self) -> str:
        position = []
        if self.line is not None:
            position.append(f"line {self.line}")
        if self.column is not None:
            position.append(f"column {self.column}")
        if self.voter_id is not None:
            position.append(f"voter {self.voter_id}")
        return f"{', '.join(position)}: {self.message}" if position else self.message


class DuplicateVoterError(ParseError):
    pass


class UnknownLabelError(ParseError):
    pass


class VoterCycleError(ParseError, CycleError):
    pass


class DegenerateApprovalError(ParseError, DegenerateBallotError):
    pass


class GrammarError(ValueError):
    """Raised for a rule specification outside the rule grammar"""


@dataclass(frozen=True)
class BallotDocument:
    """A parsed ballot file; ``spans`` maps voter ids to the (line, column) of their ballot"""

    universe: Universe
    profile: Profile
    spans: Dict[int, Tuple[int, int]]


def _tokens(text: str, separator: str, offset: int) -> List[Tuple[str, int]]:
    """Splits on ``separator``, returning stripped pieces with their 1-based column"""
    tokens = []
    start = 0
    for piece in text.split(separator):
        stripped = piece.strip()
        column = offset + start + (len(piece) - len(piece.lstrip())) + 1
        tokens.append((stripped, column))
        start += len(piece) + len(separator)
    return tokens


class _BallotParser:
    def __init__(self, universe: Universe, line: int, voter_id: int):
        self.universe = universe
        self.line = line
        self.voter_id = voter_id

    def _error(self, cls, message: str, column: int) -> ParseError:
        return cls(message, line=self.line, column=column, voter_id=self.voter_id)

    def label(self, token: str, column: int) -> int:
        if not token:
            raise self._error(ParseError, "Expected an alternative", column)
        try:
            return self.universe.index(token)
        except KeyError:
            raise self._error(UnknownLabelError, f"Unknown alternative {token!r}", column) from None

    def chain(self, text: str, offset: int) -> List[int]:
        return [self.label(token, column) for token, column in _tokens(text, ">", offset)]

    def parse(self, text: str, offset: int) -> PartialOrder:
        m = self.universe.m
        if not text.strip():
            return empty_order(m)

        if match := APPROVE_PATTERN.fullmatch(text):
            body_offset = offset + match.start("labels")
            tokens = _tokens(match["labels"], ",", body_offset) if match["labels"].strip() else []
            approved = [self.label(t, c) for t, c in tokens]
            try:
                return approval_ballot(approved, m)
            except DegenerateBallotError as e:
                raise self._error(DegenerateApprovalError, str(e), offset + 1) from e

        if match := LINEAR_PATTERN.fullmatch(text):
            ranking = self.chain(match["chain"], offset + match.start("chain"))
            if sorted(ranking) != list(range(m)):
                raise self._error(ParseError, "A linear ballot must rank every alternative exactly once", offset + 1)
            return self._close(list(zip(ranking, ranking[1:])), offset)

        edges = []
        for item, column in _tokens(text, ",", offset):
            ranking = self.chain(item, column - 1)
            if len(ranking) < 2:
                raise self._error(ParseError, f"Expected an edge like x>y, got {item!r}", column)
            edges.extend(zip(ranking, ranking[1:]))
        return self._close(edges, offset)

    def _close(self, edges, offset: int) -> PartialOrder:
        try:
            return build_partial_order(self.universe.m, edges)
        except CycleError as e:
            labels = [self.universe.label(a) for a, _ in e.cycle]
            error = self._error(
                VoterCycleError, "Ballot contains a cycle: " + " > ".join(labels + labels[:1]), offset + 1
            )
            error.cycle = e.cycle
            raise error from e


def parse_ballots(text: str) -> BallotDocument:
    """Parses a ballot file

    Parameters
    ----------
    text : str
        Contents of the file

    Returns
    -------
    BallotDocument
        The universe, the profile in file order and the position of every ballot

    Raises
    ------
    ParseError
        For malformed lines, and through its subclasses for duplicate voters, unknown labels,
        cyclic ballots and degenerate approval ballots
    """
    universe: Optional[Universe] = None
    ballots: List[Tuple[int, PartialOrder]] = []
    spans: Dict[int, Tuple[int, int]] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue

        if header := HEADER_PATTERN.fullmatch(line):
            if universe is not None:
                raise ParseError("Alternatives are declared twice", line=number, column=1)
            labels = [
                (token.group(), header.start("labels") + token.start() + 1)
                for token in HEADER_TOKEN_PATTERN.finditer(header["labels"])
            ]
            for token, column in labels:
                if not LABEL_PATTERN.fullmatch(token):
                    raise ParseError(f"Invalid alternative label {token!r}", line=number, column=column)
            try:
                universe = Universe(tuple(token for token, _ in labels))
            except ValueError as e:
                raise ParseError(str(e), line=number, column=header.start("labels") + 1) from e
            continue

        voter = VOTER_PATTERN.fullmatch(line)
        if not voter:
            raise ParseError("Expected 'alternatives: ...' or 'voter <id>: <ballot>'", line=number, column=1)
        if universe is None:
            raise ParseError("Voter before the 'alternatives:' header", line=number, column=1)
        try:
            voter_id = int(voter["id"])
        except ValueError:
            voter_id = 0
        if voter_id < 1:
            raise ParseError(f"Voter ids must be positive integers, got {voter['id']!r}", line=number, column=voter.start("id") + 1)
        if voter_id in spans:
            raise DuplicateVoterError(
                f"Voter {voter_id} already voted on line {spans[voter_id][0]}",
                line=number,
                column=voter.start("id") + 1,
                voter_id=voter_id,
            )

        offset = voter.start("ballot")
        po = _BallotParser(universe, number, voter_id).parse(voter["ballot"], offset)
        ballots.append((voter_id, po))
        spans[voter_id] = (number, offset + 1)

    if universe is None:
        raise ParseError("Missing 'alternatives:' header")
    if not ballots:
        raise ParseError("The file contains no voters")
    logger.debug("Parsed %d ballots over %d alternatives", len(ballots), universe.m)
    return BallotDocument(universe, Profile(tuple(ballots)), spans)


def format_ballot(po: PartialOrder, universe: Universe) -> str:
    """Shortest ballot text for ``po``: linear, approval, or the covering edges"""
    labels = universe.labels
    if po.is_empty:
        return ""
    if po.is_linear:
        ranking = sorted(range(po.m), key=lambda a: -po.dominance_counts[a])
        return "linear " + ">".join(labels[a] for a in ranking)
    if is_approval_ballot(po) and po == approval_ballot(po.top, po.m):
        return "approve {" + ",".join(labels[a] for a in sorted(po.top)) + "}"
    return ", ".join(f"{labels[a]}>{labels[b]}" for a, b in hasse_edges(po))


def serialize_ballots(profile: Profile, universe: Optional[Universe] = None) -> str:
    """Writes a profile as a ballot file that :func:`parse_ballots` reads back identically"""
    universe = universe or Universe.default(profile.m)
    lines = ["alternatives: " + " ".join(universe.labels)]
    lines.extend(f"voter {voter_id}: {format_ballot(po, universe)}".rstrip() for voter_id, po in profile)
    return "\n".join(lines) + "\n"


_FIXED_RULES = {
    "uniform-plurality": lambda: UNIFORM_PLURALITY_RULE,
    "uniform-anti-plurality": lambda: UNIFORM_ANTIPLURALITY_RULE,
    "dominance-plurality": lambda: DOMINANCE_PLURALITY_RULE,
    "borda": lambda: BORDA_DOMINANCE_RULE,
    "full-set": lambda: FULL_SET_RULE,
    "two-step-top": lambda: two_step_rule(Side.TOP),
    "two-step-bottom": lambda: two_step_rule(Side.BOTTOM),
    "runner-up-plurality": lambda: runner_up_rule(Side.TOP),
    "runner-up-anti-plurality": lambda: runner_up_rule(Side.BOTTOM),
    "voter1-top": lambda: voter_privilege_rule(Side.TOP),
    "voter1-bottom": lambda: voter_privilege_rule(Side.BOTTOM),
    "approval": lambda: STANDARD_APPROVAL_RULE,
}

RULE_GRAMMAR = " | ".join(
    [*list(_FIXED_RULES), "size-approval:<w1,...,wm>", "anti-size:<v1,...,vm>", "double:<label>[-top|-bottom]"]
)

WEIGHTED_PATTERN = re.compile(r"(?P<family>size-approval|anti-size):(?P<weights>.+)")
DOUBLE_PATTERN = re.compile(r"double:(?P<label>.+?)(?:-(?P<side>top|bottom))?")


def parse_rule_spec(spec: str, labels: Optional[Sequence[str]] = None) -> VotingRule:
    """Resolves a rule specification string

    Parameters
    ----------
    spec : str
        A specification in the rule grammar, see RULE_GRAMMAR
    labels : Sequence[str], optional
        Alternative labels; fixes the number of weights and the labels ``double:`` may name.
        Defaults to ``a, b, c, ...``

    Raises
    ------
    GrammarError
        If the string is not in the grammar
    WeightError
        If the weights violate the size family constraints
    """
    spec = spec.strip()
    if spec in _FIXED_RULES:
        return _FIXED_RULES[spec]()

    if match := WEIGHTED_PATTERN.fullmatch(spec):
        weights = [w.strip() for w in match["weights"].split(",")]
        if labels is not None and len(weights) != len(labels):
            raise WeightError(f"Expected {len(labels)} weights, one per alternative, got {len(weights)}")
        factory = size_approval_rule if match["family"] == "size-approval" else antisize_rule
        return factory(weights)

    if match := DOUBLE_PATTERN.fullmatch(spec):
        known = list(labels) if labels is not None else list(default_labels(26))
        if match["label"] not in known:
            raise GrammarError(f"Unknown alternative {match['label']!r} in rule {spec!r}")
        side = Side(match["side"] or "top")
        return biased_alternative_rule(known.index(match["label"]), side, label=match["label"])

    raise GrammarError(f"Unknown rule {spec!r}; expected one of: {RULE_GRAMMAR}")


def format_score(score: Fraction) -> str:
    return f"{score.numerator}/{score.denominator}"


def _details(details: Mapping[str, Any], universe: Universe) -> Dict[str, Any]:
    converted = {}
    for key, value in details.items():
        if key == "alternative":
            converted[key] = universe.label(value)
        elif key == "permutation":
            converted[key] = {universe.label(a): universe.label(b) for a, b in enumerate(value)}
        else:
            converted[key] = to_jsonable(value, universe)
    return converted


def to_jsonable(obj: Any, universe: Universe) -> Any:
    """Converts results into JSON-compatible values; alternatives become labels, scores "p/q" strings"""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_score(obj)
    if isinstance(obj, (set, frozenset)):
        return universe.format_set(obj)
    if isinstance(obj, Profile):
        return serialize_ballots(obj, universe)
    if isinstance(obj, Witness):
        return {
            "profiles": {name: serialize_ballots(p, universe) for name, p in obj.profiles.items()},
            "details": _details(obj.details, universe),
        }
    if isinstance(obj, CheckResult):
        report = {
            "axiom": obj.axiom.value,
            "verdict": obj.verdict.value,
            "instances_checked": obj.instances_checked,
            "bounds": to_jsonable(obj.bounds, universe),
        }
        if obj.witness is not None:
            report["witness"] = to_jsonable(obj.witness, universe)
        if obj.reason is not None:
            report["reason"] = obj.reason
        if obj.details:
            report["details"] = to_jsonable(obj.details, universe)
        return report
    if isinstance(obj, ClassMembership):
        return obj.as_dict()
    if isinstance(obj, ScoreBoard):
        return {
            "scores": {universe.label(a): format_score(total) for a, total in enumerate(obj.totals)},
            "winners": universe.format_set(obj.winners),
        }
    if isinstance(obj, Mapping):
        return {to_jsonable(k, universe): to_jsonable(v, universe) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, universe) for v in obj]
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def axiom_report(rule: VotingRule, results: Mapping[AxiomId, CheckResult]) -> Dict[str, Any]:
    """Wraps checker results with the rule name and the overall verdict"""
    return {"rule": rule.name, "verdict": overall_verdict(results.values()), "results": dict(results)}


def serialize_report(result: Any, universe: Optional[Universe] = None) -> str:
    """Canonical JSON text for a result: sorted keys, labels for alternatives, exact scores

    Parameters
    ----------
    result : CheckResult, ScoreBoard, ClassMembership or a mapping of those
        What to serialize
    universe : Universe, optional
        Labels for the alternatives; defaults to ``a, b, c, ...``
    """
    if universe is None:
        universe = Universe.default(_guess_m(result))
    return json.dumps(to_jsonable(result, universe), sort_keys=True, indent=2)


def _guess_m(result: Any) -> int:
    if isinstance(result, ScoreBoard):
        return len(result.totals)
    if isinstance(result, CheckResult):
        return result.bounds.get("m", 26)
    if isinstance(result, Mapping):
        for value in result.values():
            if isinstance(value, (CheckResult, ScoreBoard, Mapping)):
                return _guess_m(value)
    return 26
