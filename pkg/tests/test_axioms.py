import dataclasses

import pytest

from povote.axioms import (
    SUITES,
    AxiomId,
    CheckConfig,
    Seed,
    Verdict,
    check_all,
    check_anonymity,
    check_averseness,
    check_axiom,
    check_b_congruity,
    check_bottoms_only,
    check_continuity,
    check_contraction,
    check_expansion,
    check_faithfulness,
    check_neutrality,
    check_reinforcement,
    check_suite,
    check_t_congruity,
    check_tops_only,
    continuity_bound,
    cross_check_implication,
    domain_orders,
    enumerate_profiles,
    independence_matrix,
    literature_seeds,
    overall_verdict,
    replay_witness,
)
from povote.preferences import (
    Profile,
    ResourceError,
    approval_ballot,
    build_partial_order,
    concat_profiles,
    linear_order,
    replicate_profile,
)
from povote.rules import (
    BORDA_DOMINANCE_RULE,
    DOMINANCE_PLURALITY_RULE,
    FULL_SET_RULE,
    STANDARD_APPROVAL_RULE,
    UNIFORM_ANTIPLURALITY_RULE,
    UNIFORM_PLURALITY_RULE,
    Side,
    antisize_rule,
    biased_alternative_rule,
    registered_rules,
    runner_up_rule,
    size_approval_rule,
    two_step_rule,
    voter_privilege_rule,
)

from .conftest import A, B, C

_A, _N, _R, _C = AxiomId.ANONYMITY, AxiomId.NEUTRALITY, AxiomId.REINFORCEMENT, AxiomId.CONTINUITY

TOP_AXIOMS = (_A, _N, _R, _C, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.T_CONGRUITY, AxiomId.CONTRACTION)
BOTTOM_AXIOMS = (_A, _N, _R, _C, AxiomId.PARTIAL_AVERSENESS, AxiomId.B_CONGRUITY, AxiomId.EXPANSION)

TOP_RULES = [
    BORDA_DOMINANCE_RULE,
    FULL_SET_RULE,
    two_step_rule(Side.TOP),
    runner_up_rule(Side.TOP),
    biased_alternative_rule(A, Side.TOP),
    voter_privilege_rule(Side.TOP),
]
BOTTOM_RULES = [
    BORDA_DOMINANCE_RULE,
    FULL_SET_RULE,
    two_step_rule(Side.BOTTOM),
    runner_up_rule(Side.BOTTOM),
    biased_alternative_rule(A, Side.BOTTOM),
    voter_privilege_rule(Side.BOTTOM),
]

# rule name -> (failing axioms, inconclusive axioms); everything else passes
TOP_MATRIX = {
    "borda": ({AxiomId.T_CONGRUITY, AxiomId.CONTRACTION}, set()),
    "full-set": ({AxiomId.PARTIAL_FAITHFULNESS}, set()),
    "two-step-top": ({_C, _R}, set()),
    "runner-up-plurality": ({_R, AxiomId.T_CONGRUITY}, set()),
    "double:a-top": ({_N}, set()),
    "voter1-top": ({_A}, {_C}),
}
BOTTOM_MATRIX = {
    "borda": ({AxiomId.B_CONGRUITY, AxiomId.EXPANSION}, set()),
    "full-set": ({AxiomId.PARTIAL_AVERSENESS}, set()),
    "two-step-bottom": ({_C}, set()),
    "runner-up-anti-plurality": ({_R}, set()),
    "double:a-bottom": ({_N}, set()),
    "voter1-bottom": ({_A}, {_C}),
}


def desk_config(**kwargs):
    defaults = dict(m=3, max_voters=2, continuity_voters=1, seeds=literature_seeds(3), max_m=3)
    defaults.update(kwargs)
    return CheckConfig(**defaults)


def expected_verdict(matrix, name, axiom):
    failing, inconclusive = matrix[name]
    if axiom in failing:
        return Verdict.FAIL
    if axiom in inconclusive:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


@pytest.fixture(scope="module")
def top_matrix():
    return independence_matrix(TOP_RULES, TOP_AXIOMS, desk_config())


@pytest.fixture(scope="module")
def bottom_matrix():
    return independence_matrix(BOTTOM_RULES, BOTTOM_AXIOMS, desk_config())


@pytest.mark.parametrize("name", list(TOP_MATRIX))
@pytest.mark.parametrize("axiom", TOP_AXIOMS, ids=lambda a: a.value)
def test_top_independence_matrix(top_matrix, name, axiom):
    result = top_matrix[name][axiom]

    assert result.verdict == expected_verdict(TOP_MATRIX, name, axiom)
    if result.verdict == Verdict.FAIL:
        assert result.witness is not None
    else:
        assert result.witness is None


@pytest.mark.parametrize("name", list(BOTTOM_MATRIX))
@pytest.mark.parametrize("axiom", BOTTOM_AXIOMS, ids=lambda a: a.value)
def test_bottom_independence_matrix(bottom_matrix, name, axiom):
    result = bottom_matrix[name][axiom]

    assert result.verdict == expected_verdict(BOTTOM_MATRIX, name, axiom)


def test_every_witness_replays(top_matrix, bottom_matrix):
    cfg = desk_config()
    rules = {rule.name: rule for rule in TOP_RULES + BOTTOM_RULES}

    replayed = 0
    for matrix in (top_matrix, bottom_matrix):
        for name, report in matrix.items():
            for result in report.values():
                if result.verdict == Verdict.FAIL:
                    assert replay_witness(rules[name], result, cfg), (name, result.axiom)
                    replayed += 1
    assert replayed == 16


def test_passes_carry_instance_counts(top_matrix):
    for report in top_matrix.values():
        for result in report.values():
            if result.passed:
                assert result.instances_checked > 0
                assert result.bounds["m"] == 3


def test_uniform_plurality_characterisation(cfg):
    report = check_suite(UNIFORM_PLURALITY_RULE, cfg, "uniform-plurality")

    assert set(report) == {_A, _N, _R, AxiomId.PARTIAL_FAITHFULNESS, AxiomId.STRONG_CONTRACTION}
    assert overall_verdict(report.values()) == Verdict.PASS


def test_uniform_antiplurality_characterisation(cfg):
    report = check_suite(UNIFORM_ANTIPLURALITY_RULE, cfg, "uniform-anti-plurality")

    assert set(report) == {_A, _N, _R, AxiomId.PARTIAL_AVERSENESS, AxiomId.STRONG_EXPANSION}
    assert overall_verdict(report.values()) == Verdict.PASS


def test_dominance_plurality_is_in_the_plurality_class(cfg):
    report = check_suite(DOMINANCE_PLURALITY_RULE, cfg, "plurality-class")

    assert all(result.passed for result in report.values())


def test_size_approval_is_monotonic_simple(cfg):
    report = check_suite(size_approval_rule([3, 2, 1]), cfg, "monotonic-simple-plurality")

    assert all(result.passed for result in report.values())


def test_unknown_suite(cfg):
    with pytest.raises(KeyError):
        check_suite(UNIFORM_PLURALITY_RULE, cfg, "copeland")


@pytest.mark.parametrize(
    "rule, suite",
    [
        (STANDARD_APPROVAL_RULE, "standard-approval"),
        (STANDARD_APPROVAL_RULE, "standard-approval-averse"),
        (size_approval_rule([3, 2, 1]), "size-approval"),
        (antisize_rule([3, 2, 1]), "anti-size-approval"),
    ],
    ids=["standard", "standard-averse", "size", "anti-size"],
)
def test_approval_suites(cfg, rule, suite):
    report = check_suite(rule, cfg, suite)

    assert SUITES[suite].domain == "approval"
    assert all(result.passed for result in report.values())
    assert all(result.bounds["domain"] == "approval" for result in report.values())


def test_standard_approval_is_undefined_off_the_approval_domain(cfg):
    report = check_all(STANDARD_APPROVAL_RULE, cfg, [AxiomId.PARTIAL_FAITHFULNESS])
    result = report[AxiomId.PARTIAL_FAITHFULNESS]

    assert result.verdict == Verdict.INCONCLUSIVE
    assert "not an approval ballot" in result.reason


@pytest.mark.parametrize("rule", registered_rules(3), ids=lambda r: r.name)
def test_approval_domain_equivalences(rule):
    cfg = desk_config(domain="approval")

    faithful = check_faithfulness(rule, cfg, partial=True)
    averse = check_averseness(rule, cfg, partial=False)
    assert faithful.verdict == averse.verdict

    contraction = check_contraction(rule, cfg, strong=True)
    expansion = check_expansion(rule, cfg, strong=True)
    assert contraction.verdict == expansion.verdict


@pytest.mark.parametrize("rule", registered_rules(3), ids=lambda r: r.name)
def test_strong_forms_imply_only_axioms(cfg, rule):
    assert cross_check_implication(rule, cfg, AxiomId.STRONG_CONTRACTION, AxiomId.TOPS_ONLY)
    assert cross_check_implication(rule, cfg, AxiomId.STRONG_EXPANSION, AxiomId.BOTTOMS_ONLY)


def test_cross_check_vacuous_premise(cfg):
    assert check_contraction(BORDA_DOMINANCE_RULE, cfg, strong=True).verdict == Verdict.FAIL
    assert cross_check_implication(BORDA_DOMINANCE_RULE, cfg, AxiomId.STRONG_CONTRACTION, AxiomId.TOPS_ONLY)


def test_anonymity():
    cfg = desk_config()

    assert check_anonymity(UNIFORM_PLURALITY_RULE, cfg).passed
    result = check_anonymity(voter_privilege_rule(Side.TOP), cfg)
    assert result.verdict == Verdict.FAIL
    assert result.witness.details["renamed_winners"] != result.witness.details["winners"]


def test_anonymity_pinned_witness():
    b_top, a_top = linear_order([B, A, C]), linear_order([A, B, C])
    seed = Seed(_A, (Profile(((1, b_top), (2, a_top))),))
    cfg = desk_config(seeds=(seed,))

    result = check_anonymity(voter_privilege_rule(Side.TOP), cfg)

    assert result.instances_checked == 1
    assert result.witness.details["winners"] == {B}
    assert result.witness.details["renamed_winners"] != {B}


def test_neutrality():
    cfg = desk_config()

    assert check_neutrality(UNIFORM_ANTIPLURALITY_RULE, cfg).passed
    result = check_neutrality(biased_alternative_rule(A, Side.TOP), cfg)
    assert result.verdict == Verdict.FAIL
    sigma = result.witness.details["permutation"]
    assert sorted(sigma) == [A, B, C]


def test_reinforcement_seed_witness():
    result = check_reinforcement(runner_up_rule(Side.TOP), desk_config())

    assert result.verdict == Verdict.FAIL
    assert result.instances_checked == 1
    assert result.witness.details["winners"] == {A, B}
    assert result.witness.details["other_winners"] == {A, B}
    assert result.witness.details["combined_winners"] == {A}


def test_reinforcement_small_witness_for_runner_up():
    result = check_reinforcement(runner_up_rule(Side.TOP), desk_config(seeds=()))

    assert result.verdict == Verdict.FAIL
    assert len(result.witness.profiles["profile"]) + len(result.witness.profiles["other"]) <= 4


def test_two_step_reinforcement_pinned_witness():
    abc, bac = linear_order([A, B, C]), linear_order([B, A, C])
    a_c_over_b = build_partial_order(3, [(A, B), (C, B)])
    seed = Seed(_R, (Profile(((1, abc), (2, bac))), Profile(((3, bac), (4, a_c_over_b)))))

    result = check_reinforcement(two_step_rule(Side.TOP), desk_config(seeds=(seed,)))

    assert result.instances_checked == 1
    assert result.witness.details == {
        "winners": {A, B},
        "other_winners": {B},
        "combined_winners": {A, B},
    }


def test_runner_up_t_congruity_pinned_witness():
    seed = Seed(AxiomId.T_CONGRUITY, (Profile(((1, linear_order([A, B, C])),)), Profile(((2, linear_order([C, A, B])),))))

    result = check_t_congruity(runner_up_rule(Side.TOP), desk_config(seeds=(seed,)))

    assert result.instances_checked == 1
    assert result.witness.details["alternative"] == B
    assert result.witness.details["combined_winners"] == {A, B, C}


def test_continuity_of_scoring_rules_is_analytic(cfg):
    result = check_continuity(UNIFORM_PLURALITY_RULE, cfg)

    assert result.passed
    assert "largest_bound" in result.details
    assert "continuity_voters" not in result.bounds


def test_continuity_bound():
    p = Profile(((1, linear_order([A, B, C])),))
    q = Profile.from_preferences([linear_order([B, C, A])] * 2, first_id=2)

    assert continuity_bound(UNIFORM_PLURALITY_RULE, p, q) == 2
    for k, winners in [(2, {A, B}), (3, {A}), (4, {A})]:
        combined = concat_profiles(replicate_profile(p, k, reserved={1, 2, 3}), q)
        assert UNIFORM_PLURALITY_RULE(combined) == winners


def test_continuity_bound_agrees_with_simulation():
    rule = DOMINANCE_PLURALITY_RULE
    orders = domain_orders(desk_config())
    pairs = [(p, q) for p in enumerate_profiles(orders, 1, True) for q in enumerate_profiles(orders, 1, True, first_id=2)]

    for p, q in pairs:
        bound = continuity_bound(rule, p, q)
        for k in range(max(bound, 1), bound + 4):
            combined = rule(concat_profiles(replicate_profile(p, k, reserved={1, 2}), q))
            if k > bound:
                assert combined <= rule(p)
        if bound > 0:
            combined = rule(concat_profiles(replicate_profile(p, bound, reserved={1, 2}), q))
            assert not combined <= rule(p)


def test_continuity_two_step_never_settles():
    result = check_continuity(two_step_rule(Side.TOP), desk_config())

    assert result.verdict == Verdict.FAIL
    assert result.instances_checked == 1
    assert result.witness.details["winners"] == {A}
    assert result.witness.details["combined_winners"] == {B, C}
    assert result.bounds["continuity_voters"] == 1


def test_voter_privilege_continuity_single_voters():
    assert check_continuity(voter_privilege_rule(Side.TOP), desk_config(seeds=())).passed


def test_voter_privilege_continuity_pinned_witness():
    p = Profile(((1, build_partial_order(3, [(C, B)])), (2, approval_ballot({B}, 3))))
    q = Profile.from_preferences([approval_ballot({B}, 3)] * 2, first_id=3)
    cfg = desk_config(seeds=(Seed(_C, (p, q)),))

    result = check_continuity(voter_privilege_rule(Side.TOP), cfg)

    assert result.verdict == Verdict.FAIL
    assert result.instances_checked == 1
    assert result.witness.details["winners"] == {A, C}
    assert result.witness.details["combined_winners"] == {B}
    for k in (1, 2, 3, 10, 30):
        combined = concat_profiles(replicate_profile(p, k, reserved={1, 2, 3, 4}), q)
        assert voter_privilege_rule(Side.TOP)(combined) == {B}


@pytest.mark.slow
def test_voter_privilege_continuity_two_voters():
    rule = voter_privilege_rule(Side.TOP)
    cfg = desk_config(seeds=(), continuity_voters=2)

    result = check_continuity(rule, cfg)

    assert result.verdict == Verdict.FAIL
    assert not result.witness.details["combined_winners"] & result.witness.details["winners"]
    assert replay_witness(rule, result, cfg)


def test_faithfulness():
    cfg = desk_config()

    assert check_faithfulness(UNIFORM_PLURALITY_RULE, cfg, partial=False).instances_checked == 19
    assert check_faithfulness(DOMINANCE_PLURALITY_RULE, cfg).passed

    result = check_faithfulness(DOMINANCE_PLURALITY_RULE, cfg, partial=False)
    assert result.verdict == Verdict.FAIL
    assert result.witness.details["winners"] < result.witness.details["top"]


def test_full_set_faithfulness_witness():
    result = check_faithfulness(FULL_SET_RULE, desk_config())

    assert result.verdict == Verdict.FAIL
    assert result.witness.details["winners"] == {A, B, C}
    assert not result.witness.details["winners"] <= result.witness.details["top"]


def test_averseness():
    cfg = desk_config()

    assert check_averseness(UNIFORM_ANTIPLURALITY_RULE, cfg, partial=False).passed
    assert check_averseness(BORDA_DOMINANCE_RULE, cfg).passed
    assert check_averseness(FULL_SET_RULE, cfg).verdict == Verdict.FAIL


def test_congruity():
    cfg = desk_config()

    assert check_t_congruity(UNIFORM_PLURALITY_RULE, cfg).passed
    assert check_b_congruity(UNIFORM_ANTIPLURALITY_RULE, cfg).passed
    result = check_t_congruity(BORDA_DOMINANCE_RULE, cfg)
    assert result.verdict == Verdict.FAIL
    assert result.witness.details["alternative"] not in result.witness.details["winners"]
    assert result.witness.details["alternative"] in result.witness.details["combined_winners"]
    assert check_b_congruity(BORDA_DOMINANCE_RULE, cfg).verdict == Verdict.FAIL


def test_contraction():
    cfg = desk_config()

    assert check_contraction(UNIFORM_PLURALITY_RULE, cfg, strong=True).passed
    assert check_contraction(DOMINANCE_PLURALITY_RULE, cfg, strong=True).verdict == Verdict.FAIL

    a_over_c = build_partial_order(3, [(A, C)])
    b_over_c = build_partial_order(3, [(B, C)])
    seed = Seed(AxiomId.CONTRACTION, (Profile(((1, a_over_c),)), Profile(((1, b_over_c),))))
    result = check_contraction(BORDA_DOMINANCE_RULE, desk_config(seeds=(seed,)))
    assert result.instances_checked == 1
    assert result.witness.details == {"voter": 1, "winners": {A}, "modified_winners": {B}}


def test_expansion():
    cfg = desk_config()

    assert check_expansion(UNIFORM_ANTIPLURALITY_RULE, cfg, strong=True).passed
    assert check_expansion(antisize_rule([3, 2, 1]), cfg).passed
    assert check_expansion(BORDA_DOMINANCE_RULE, cfg).verdict == Verdict.FAIL


def test_only_axioms():
    cfg = desk_config()

    assert check_tops_only(UNIFORM_PLURALITY_RULE, cfg).passed
    assert check_bottoms_only(UNIFORM_ANTIPLURALITY_RULE, cfg).passed
    assert check_bottoms_only(UNIFORM_PLURALITY_RULE, cfg).verdict == Verdict.FAIL

    result = check_tops_only(BORDA_DOMINANCE_RULE, cfg)
    assert result.verdict == Verdict.FAIL
    profile, other = result.witness.profiles["profile"], result.witness.profiles["other"]
    assert [po.top for po in profile.preferences] == [po.top for po in other.preferences]


def test_check_all_full_set(cfg):
    report = check_all(FULL_SET_RULE, cfg, TOP_AXIOMS + BOTTOM_AXIOMS)

    failing = {axiom for axiom, result in report.items() if result.verdict == Verdict.FAIL}
    assert failing == {AxiomId.PARTIAL_FAITHFULNESS, AxiomId.PARTIAL_AVERSENESS}
    assert list(report) == [axiom for axiom in AxiomId if axiom in report]


def test_checks_are_deterministic():
    first = check_axiom(BORDA_DOMINANCE_RULE, desk_config(), AxiomId.T_CONGRUITY)
    second = check_axiom(BORDA_DOMINANCE_RULE, desk_config(), AxiomId.T_CONGRUITY)

    assert first == second


def test_linear_domain_filters_seeds():
    cfg = desk_config(domain="linear")

    assert cfg.seeds_for(_C) == []
    assert len(cfg.seeds_for(_R)) == 1
    assert all(po.is_linear for po in domain_orders(cfg))
    assert len(domain_orders(cfg)) == 6


def test_approval_domain():
    orders = domain_orders(desk_config(domain="approval"))

    assert set(orders) == {approval_ballot(s, 3) for s in ({A}, {B}, {C}, {A, B}, {A, C}, {B, C})}


def test_enumerate_profiles_multiset():
    orders = domain_orders(desk_config())

    assert sum(1 for _ in enumerate_profiles(orders, 2, multiset=True)) == 19 + 190
    assert sum(1 for _ in enumerate_profiles(orders, 2, multiset=False)) == 19 + 361


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(m=2),
        dict(max_voters=0),
        dict(continuity_voters=0),
        dict(domain="weak"),
        dict(k_max=-1),
        dict(verify_window=0),
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        CheckConfig(**kwargs)


def test_config_resource_bound(monkeypatch):
    with pytest.raises(ResourceError):
        CheckConfig(m=6)
    with pytest.raises(ResourceError):
        CheckConfig(m=4, max_m=3)

    monkeypatch.setenv("POVOTE_MAX_M", "3")
    with pytest.raises(ResourceError):
        CheckConfig(m=4)


def test_config_from_settings():
    settings = {"max_voters": 1, "domain": "linear", "k_max": 7, "unused": True}

    cfg = CheckConfig.from_settings(settings, 3, max_voters=None, k_max=9)

    assert (cfg.max_voters, cfg.domain, cfg.k_max) == (1, "linear", 9)
    assert dataclasses.replace(cfg, domain="all").domain == "all"


def test_overall_verdict(cfg):
    passed = check_neutrality(UNIFORM_PLURALITY_RULE, cfg)
    failed = check_faithfulness(FULL_SET_RULE, cfg)
    undecided = dataclasses.replace(passed, verdict=Verdict.INCONCLUSIVE)

    assert overall_verdict([passed]) == Verdict.PASS
    assert overall_verdict([passed, undecided]) == Verdict.INCONCLUSIVE
    assert overall_verdict([undecided, failed, passed]) == Verdict.FAIL


def test_replay_rejects_passes(cfg):
    result = check_neutrality(UNIFORM_PLURALITY_RULE, cfg)

    assert not replay_witness(UNIFORM_PLURALITY_RULE, result, cfg)
