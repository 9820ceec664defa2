import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import secweave.machine as M
import secweave.xacml as X
from secweave import corpus
from secweave.errors import (
    SchemaError,
    TypeMismatch,
    UnknownSet,
    UnresolvableAttribute,
    UnsupportedFeature,
    UnsupportedFunction,
    XmlError,
)

SETS = {"ValidPositions": ("GPSin",), "FranceDestinations": ("destinationIn",)}


def drp_attrs(action, **kw):
    attrs = {("action", "action-id"): action,
             ("resource", "resource-id"): "server"}
    for k, v in kw.items():
        category = "environment" if k == "GPSposition" else "subject"
        attrs[(category, k)] = v
    return attrs


# -- parsing ------------------------------------------------------------------

def test_parse_corpus_policy(drp_policy):
    p = drp_policy
    assert p.id == "drp-policy"
    assert p.combining == "deny-overrides"
    assert [(r.id, r.effect) for r in p.rules] == [
        ("rule-1", "Permit"), ("rule-2", "Permit"), ("rule-3", "Deny")]
    resources = p.target.resources
    assert resources[0].attribute_id == "resource-id"
    assert resources[0].value == "server"
    assert p.rules[0].target.actions[0].value == "ask_access"


def test_parse_accepts_full_urn_identifiers():
    text = """<?xml version="1.0"?>
<Policy xmlns="urn:oasis:names:tc:xacml:2.0:policy:schema:os"
        PolicyId="p"
        RuleCombiningAlgId="urn:oasis:names:tc:xacml:1.0:rule-combining-algorithm:permit-overrides">
  <Target/>
  <Rule RuleId="r" Effect="Permit">
    <Target>
      <Actions><Action>
        <ActionMatch MatchId="urn:oasis:names:tc:xacml:1.0:function:string-equal">
          <AttributeValue DataType="http://www.w3.org/2001/XMLSchema#string">go</AttributeValue>
          <ActionAttributeDesignator AttributeId="urn:oasis:names:tc:xacml:1.0:action:action-id"/>
        </ActionMatch>
      </Action></Actions>
    </Target>
    <Condition>
      <Apply FunctionId="urn:oasis:names:tc:xacml:1.0:function:integer-less-than">
        <SubjectAttributeDesignator AttributeId="n"/>
        <AttributeValue DataType="http://www.w3.org/2001/XMLSchema#integer">4</AttributeValue>
      </Apply>
    </Condition>
  </Rule>
</Policy>"""
    p = X.parse_policy(text)
    assert p.combining == "permit-overrides"
    assert p.rules[0].target.actions[0].attribute_id == "action-id"
    cond = p.rules[0].condition
    assert cond.function == "integer-less-than"
    assert cond.args[1] == X.AttrLiteral(4)
    assert X.evaluate_policy(p, drp_attrs("go", n=3)) is X.Decision.PERMIT


def test_parse_rejections():
    with pytest.raises(XmlError):
        X.parse_policy("<Policy")
    with pytest.raises(UnsupportedFeature):
        X.parse_policy("<PolicySet/>")
    with pytest.raises(SchemaError):
        X.parse_policy('<Policy PolicyId="p"><Target/></Policy>')
    with pytest.raises(SchemaError):
        X.parse_policy(
            '<Policy PolicyId="p"><Target/>'
            '<Rule RuleId="r" Effect="Maybe"/></Policy>')
    with pytest.raises(UnsupportedFeature):
        X.parse_policy(
            '<Policy PolicyId="p" RuleCombiningAlgId="only-one-applicable">'
            '<Target/><Rule RuleId="r" Effect="Permit"/></Policy>')
    with pytest.raises(UnsupportedFunction):
        X.parse_policy(
            '<Policy PolicyId="p"><Target><Actions><Action>'
            '<ActionMatch MatchId="string-regexp-match">'
            '<AttributeValue>x</AttributeValue>'
            '<ActionAttributeDesignator AttributeId="action-id"/>'
            '</ActionMatch></Action></Actions></Target>'
            '<Rule RuleId="r" Effect="Permit"/></Policy>')
    with pytest.raises(SchemaError):
        # member-of wants a literal set name as its second argument
        X.parse_policy(
            '<Policy PolicyId="p"><Target/><Rule RuleId="r" Effect="Permit">'
            '<Condition><Apply FunctionId="member-of">'
            '<SubjectAttributeDesignator AttributeId="a"/>'
            '<SubjectAttributeDesignator AttributeId="b"/>'
            '</Apply></Condition></Rule></Policy>')


# -- decisions on the corpus policy --------------------------------------------

def test_rule1_grants_valid_couple_from_valid_position(drp_policy):
    attrs = drp_attrs("ask_access", login="log1", password="pwd1",
                      GPSposition="GPSin")
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.PERMIT


@pytest.mark.parametrize("login,password,position", [
    ("log1", "pwd2", "GPSin"),   # crossed couple
    ("log2", "pwd1", "GPSin"),
    ("log1", "pwd1", "GPSout"),  # invalid position
])
def test_rule1_not_applicable_outside_its_condition(
        drp_policy, login, password, position):
    attrs = drp_attrs("ask_access", login=login, password=password,
                      GPSposition=position)
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.NOT_APPLICABLE


def test_rule3_denies_regular_user_abroad(drp_policy):
    attrs = drp_attrs("ask_for_route", **{
        "class": "regular", "destination": "destinationOut"})
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.DENY


def test_rule2_permits_premium(drp_policy):
    attrs = drp_attrs("ask_for_route", **{
        "class": "premium", "destination": "destinationOut"})
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.PERMIT


def test_unmatched_action_is_not_applicable(drp_policy):
    attrs = drp_attrs("exit_service")
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.NOT_APPLICABLE


def test_wrong_resource_is_not_applicable(drp_policy):
    attrs = {("action", "action-id"): "ask_access",
             ("resource", "resource-id"): "printer"}
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.NOT_APPLICABLE


def test_missing_attribute_is_indeterminate_not_deny(drp_policy):
    """An erroring rule must surface as Indeterminate under deny-overrides."""
    attrs = drp_attrs("ask_access")  # no login/password/GPSposition at all
    assert X.evaluate_policy(drp_policy, attrs, SETS) is X.Decision.INDETERMINATE


# -- rule evaluation ------------------------------------------------------------

def always() -> X.Target:
    return X.Target((), (), (), ())


def test_rule_without_condition_applies_by_target():
    r = X.Rule("r", "Permit", target=None, condition=None)
    assert X.evaluate_rule(r, {}) is X.Decision.PERMIT


def test_rule_condition_false_is_not_applicable():
    r = X.Rule("r", "Deny", condition=X.AttrLiteral(False))
    assert X.evaluate_rule(r, {}) is X.Decision.NOT_APPLICABLE


def test_rule_non_boolean_condition_is_indeterminate():
    r = X.Rule("r", "Permit", condition=X.AttrLiteral("yes"))
    assert X.evaluate_rule(r, {}) is X.Decision.INDETERMINATE


def test_condition_evaluation_errors():
    missing = X.AttrDesignator("subject", "ghost")
    with pytest.raises(UnresolvableAttribute):
        X.eval_condition(missing, {})
    with pytest.raises(UnknownSet):
        X.eval_condition(
            X.FuncApply("member-of", (X.AttrLiteral("x"), X.AttrLiteral("S"))),
            {}, sets={})
    with pytest.raises(TypeMismatch):
        X.eval_condition(
            X.FuncApply("and", (X.AttrLiteral("x"), X.AttrLiteral(True))), {})


# -- combining algebra ----------------------------------------------------------

OUTCOMES = {
    "permit": X.Rule("p", "Permit", condition=X.AttrLiteral(True)),
    "deny": X.Rule("d", "Deny", condition=X.AttrLiteral(True)),
    "na": X.Rule("n", "Permit", condition=X.AttrLiteral(False)),
    "error-permit": X.Rule(
        "ep", "Permit", condition=X.AttrDesignator("subject", "ghost")),
    "error-deny": X.Rule(
        "ed", "Deny", condition=X.AttrDesignator("subject", "ghost")),
}


def expected_deny_overrides(kinds):
    if any(k == "deny" for k in kinds):
        return X.Decision.DENY
    if any(k.startswith("error") for k in kinds):
        return X.Decision.INDETERMINATE
    if any(k == "permit" for k in kinds):
        return X.Decision.PERMIT
    return X.Decision.NOT_APPLICABLE


def expected_permit_overrides(kinds):
    if any(k == "permit" for k in kinds):
        return X.Decision.PERMIT
    if any(k.startswith("error") for k in kinds):
        return X.Decision.INDETERMINATE
    if any(k == "deny" for k in kinds):
        return X.Decision.DENY
    return X.Decision.NOT_APPLICABLE


def expected_first_applicable(kinds):
    table = {"permit": X.Decision.PERMIT, "deny": X.Decision.DENY,
             "error-permit": X.Decision.INDETERMINATE,
             "error-deny": X.Decision.INDETERMINATE}
    for k in kinds:
        if k in table:
            return table[k]
    return X.Decision.NOT_APPLICABLE


@given(st.lists(st.sampled_from(sorted(OUTCOMES)), min_size=1, max_size=5))
def test_combining_algebra(kinds):
    rules = tuple(OUTCOMES[k] for k in kinds)
    for combining, expected in [
            ("deny-overrides", expected_deny_overrides(kinds)),
            ("permit-overrides", expected_permit_overrides(kinds)),
            ("first-applicable", expected_first_applicable(kinds))]:
        p = X.Policy("p", always(), rules, combining)
        assert X.evaluate_policy(p, {}) is expected, combining


# -- compilation onto transitions ------------------------------------------------

def designators(cond):
    out = []
    if isinstance(cond, X.AttrDesignator):
        out.append(cond)
    elif isinstance(cond, X.FuncApply):
        for a in cond.args:
            out.extend(designators(a))
    return out


def test_compile_matches_direct_evaluation_exhaustively(drp, drp_policy):
    """Dual route: the compiled guard agrees with the PDP on every request
    that names its attributes the way the condition's designators do."""
    sets = {s.name: s.members for s in drp.subsets}
    cfg = drp.initial_configuration()
    for t, rule in ((drp.transitions[0], drp_policy.rules[0]),
                    (drp.transitions[1], drp_policy.rules[1]),
                    (drp.transitions[1], drp_policy.rules[2])):
        compiled = X.compile_condition(rule.condition, drp, t)
        domains = [drp.domain_of(tn)
                   for tn in drp.signal_by_name[t.input.signal].param_types]
        for combo in itertools.product(*domains):
            bindings = dict(zip(t.input.params, combo))
            attrs = {(d.category, d.attribute_id): bindings[d.attribute_id]
                     for d in designators(rule.condition)}
            direct = X.eval_condition(rule.condition, attrs, sets)
            assert M.eval_expr(drp, compiled, cfg, bindings) == direct


def test_compile_binds_variables_too(v2i):
    cond = X.FuncApply("string-equal", (
        X.AttrDesignator("subject", "servicex"),
        X.AttrLiteral("DynamicPlannigRoute")))
    compiled = X.compile_condition(cond, v2i, v2i.transitions[2])
    assert compiled == M.Compare(
        "=", M.VarRef("servicex"), M.Lit("DynamicPlannigRoute"))


def test_compile_unresolvable_attribute(drp):
    cond = X.AttrDesignator("subject", "badge")
    with pytest.raises(UnresolvableAttribute) as exc:
        X.compile_condition(cond, drp, drp.transitions[0])
    assert str(exc.value).startswith("UnresolvableAttribute")
    assert "badge" in str(exc.value)


def test_compile_unknown_set(drp):
    cond = X.FuncApply("member-of", (
        X.AttrDesignator("subject", "login"), X.AttrLiteral("Atlantis")))
    with pytest.raises(UnknownSet):
        X.compile_condition(cond, drp, drp.transitions[0])


def test_compile_absent_condition_is_true(drp):
    assert X.compile_condition(None, drp, drp.transitions[0]) == M.Lit(True)
