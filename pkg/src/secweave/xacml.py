"""Access-control policies: a small XACML-style subset.

Accepted XML elements: ``Policy`` (with ``PolicyId``, ``RuleCombiningAlgId``),
``Description``, ``Target``, ``Subjects``/``Resources``/``Actions``/
``Environments`` with their item and match elements, ``Rule`` (with
``RuleId``, ``Effect``), ``Condition``, ``Apply`` (with ``FunctionId``),
``AttributeValue``, and the four ``*AttributeDesignator`` elements (plus a
generic ``AttributeDesignator`` carrying a ``Category``).  Anything else,
``PolicySet`` and ``Obligations`` included, is rejected as unsupported.

Functions: ``and``, ``or``, ``not``, ``string-equal``, ``boolean-equal``,
``integer-equal``, ``integer-less-than``, ``integer-less-than-or-equal``,
``integer-greater-than``, ``integer-greater-than-or-equal``, and
``member-of`` (membership of an attribute in a named subset declared by the
model).  Standard URN prefixes on function ids, combining-algorithm ids,
and attribute ids are tolerated and stripped.

Decisions follow the usual four-valued scheme; evaluation errors (missing
attribute, type clash, unknown set) fold into ``Indeterminate`` and never
escape a rule evaluation.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

from . import machine as M
from .errors import (
    SchemaError,
    TypeMismatch,
    UnknownSet,
    UnresolvableAttribute,
    UnsupportedFeature,
    UnsupportedFunction,
    XmlError,
)


class Decision(Enum):
    PERMIT = "Permit"
    DENY = "Deny"
    NOT_APPLICABLE = "NotApplicable"
    INDETERMINATE = "Indeterminate"


CATEGORIES = ("subject", "resource", "action", "environment")

COMBINING_ALGORITHMS = ("deny-overrides", "permit-overrides", "first-applicable")

_COMPARISONS = {
    "string-equal": "=",
    "boolean-equal": "=",
    "integer-equal": "=",
    "integer-less-than": "<",
    "integer-less-than-or-equal": "<=",
    "integer-greater-than": ">",
    "integer-greater-than-or-equal": ">=",
}

FUNCTIONS = ("and", "or", "not", "member-of") + tuple(_COMPARISONS)

_URN_FUNCTION = re.compile(r"^urn:oasis:names:tc:xacml:[\d.]+:function:")
_URN_COMBINING = re.compile(r"^urn:oasis:names:tc:xacml:[\d.]+:rule-combining-algorithm:")
_URN_ATTRIBUTE = re.compile(
    r"^urn:oasis:names:tc:xacml:[\d.]+:(?:subject|resource|action|environment):")


# ---------------------------------------------------------------------------
# data model

@dataclass(frozen=True)
class AttrLiteral:
    value: M.Value


@dataclass(frozen=True)
class AttrDesignator:
    category: str  # one of CATEGORIES
    attribute_id: str


@dataclass(frozen=True)
class FuncApply:
    function: str
    args: tuple["ConditionNode", ...]


ConditionNode = Union[AttrLiteral, AttrDesignator, FuncApply]


@dataclass(frozen=True)
class Matcher:
    category: str
    attribute_id: str
    function: str  # string-equal | integer-equal | boolean-equal
    value: M.Value


@dataclass(frozen=True)
class Target:
    """Per-category matcher lists; an empty list matches everything."""

    subjects: tuple[Matcher, ...] = ()
    resources: tuple[Matcher, ...] = ()
    actions: tuple[Matcher, ...] = ()
    environments: tuple[Matcher, ...] = ()

    def sections(self) -> tuple[tuple[Matcher, ...], ...]:
        return (self.subjects, self.resources, self.actions, self.environments)


@dataclass(frozen=True)
class Rule:
    id: str
    effect: str  # "Permit" | "Deny"
    target: Target | None = None
    condition: ConditionNode | None = None


@dataclass(frozen=True)
class Policy:
    id: str
    target: Target = field(default_factory=Target)
    rules: tuple[Rule, ...] = ()
    combining: str = "deny-overrides"


Attrs = Mapping[tuple[str, str], M.Value]
Sets = Mapping[str, tuple[M.Value, ...]]


# ---------------------------------------------------------------------------
# parsing

def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_policy(xml_text: str) -> Policy:
    """Parse one policy document; see the module docstring for the subset."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise XmlError(f"malformed XML: {exc}") from exc
    tag = _local(root.tag)
    if tag == "PolicySet":
        raise UnsupportedFeature("PolicySet")
    if tag != "Policy":
        raise SchemaError(f"expected a Policy document, found {tag!r}")

    combining_raw = root.get("RuleCombiningAlgId", "deny-overrides")
    combining = _URN_COMBINING.sub("", combining_raw)
    if combining not in COMBINING_ALGORITHMS:
        raise UnsupportedFeature(f"rule-combining algorithm {combining_raw!r}")

    policy_target = Target()
    rules: list[Rule] = []
    for child in root:
        tag = _local(child.tag)
        if tag == "Description":
            continue
        if tag == "Target":
            policy_target = _parse_target(child)
        elif tag == "Rule":
            rules.append(_parse_rule(child, default_id=f"rule-{len(rules) + 1}"))
        else:
            raise UnsupportedFeature(tag)
    if not rules:
        raise SchemaError("policy declares no rules")
    return Policy(
        id=root.get("PolicyId", "policy"),
        target=policy_target,
        rules=tuple(rules),
        combining=combining,
    )


_SECTION_ITEMS = {
    "Subjects": ("Subject", "SubjectMatch", "subject"),
    "Resources": ("Resource", "ResourceMatch", "resource"),
    "Actions": ("Action", "ActionMatch", "action"),
    "Environments": ("Environment", "EnvironmentMatch", "environment"),
}


def _parse_target(el: ET.Element) -> Target:
    sections: dict[str, tuple[Matcher, ...]] = {}
    for child in el:
        tag = _local(child.tag)
        if tag not in _SECTION_ITEMS:
            raise UnsupportedFeature(tag)
        item_tag, match_tag, category = _SECTION_ITEMS[tag]
        matchers: list[Matcher] = []
        for item in child:
            itag = _local(item.tag)
            if itag == match_tag:  # match directly under the section
                matchers.append(_parse_match(item, category))
            elif itag == item_tag:
                for match in item:
                    if _local(match.tag) != match_tag:
                        raise UnsupportedFeature(_local(match.tag))
                    matchers.append(_parse_match(match, category))
            else:
                raise UnsupportedFeature(itag)
        sections[category] = tuple(matchers)
    return Target(
        subjects=sections.get("subject", ()),
        resources=sections.get("resource", ()),
        actions=sections.get("action", ()),
        environments=sections.get("environment", ()),
    )


def _parse_match(el: ET.Element, category: str) -> Matcher:
    function = _function_name(el.get("MatchId", ""))
    if function not in ("string-equal", "integer-equal", "boolean-equal"):
        raise UnsupportedFunction(f"target match function {el.get('MatchId')!r}")
    value: M.Value | None = None
    attribute_id: str | None = None
    for child in el:
        tag = _local(child.tag)
        if tag == "AttributeValue":
            value = _parse_attribute_value(child, function)
        elif tag.endswith("AttributeDesignator"):
            d = _parse_designator(child, category)
            attribute_id = d.attribute_id
        else:
            raise UnsupportedFeature(tag)
    if value is None or attribute_id is None:
        raise SchemaError(f"{_local(el.tag)} needs an AttributeValue and a designator")
    return Matcher(category, attribute_id, function, value)


def _parse_rule(el: ET.Element, default_id: str) -> Rule:
    effect = el.get("Effect")
    if effect not in ("Permit", "Deny"):
        raise SchemaError(f"rule effect must be Permit or Deny, found {effect!r}")
    target: Target | None = None
    condition: ConditionNode | None = None
    for child in el:
        tag = _local(child.tag)
        if tag == "Description":
            continue
        if tag == "Target":
            target = _parse_target(child)
        elif tag == "Condition":
            exprs = list(child)
            if len(exprs) != 1:
                raise SchemaError("Condition must hold exactly one expression")
            condition = _parse_condition(exprs[0])
        else:
            raise UnsupportedFeature(tag)
    return Rule(id=el.get("RuleId", default_id), effect=effect,
                target=target, condition=condition)


def _parse_condition(el: ET.Element) -> ConditionNode:
    tag = _local(el.tag)
    if tag == "AttributeValue":
        return AttrLiteral(_parse_attribute_value(el, function=None))
    if tag.endswith("AttributeDesignator"):
        return _parse_designator(el, default_category=None)
    if tag != "Apply":
        raise UnsupportedFeature(tag)
    function = _function_name(el.get("FunctionId", ""))
    if function not in FUNCTIONS:
        raise UnsupportedFunction(f"function {el.get('FunctionId')!r}")
    args = tuple(_parse_condition(c) for c in el)
    if function == "not" and len(args) != 1:
        raise SchemaError("'not' takes exactly one argument")
    if function in _COMPARISONS and len(args) != 2:
        raise SchemaError(f"{function!r} takes exactly two arguments")
    if function == "member-of":
        if len(args) != 2 or not isinstance(args[1], AttrLiteral) \
                or not isinstance(args[1].value, str):
            raise SchemaError("'member-of' takes an expression and a set-name literal")
    # integer comparisons get integer-coerced literal arguments
    if function in _COMPARISONS and function.startswith("integer-"):
        args = tuple(
            AttrLiteral(_coerce_int(a.value)) if isinstance(a, AttrLiteral) else a
            for a in args)
    return FuncApply(function, args)


def _parse_designator(el: ET.Element, default_category: str | None) -> AttrDesignator:
    tag = _local(el.tag)
    category: str | None
    if tag == "AttributeDesignator":
        raw = el.get("Category", default_category or "")
        category = next((c for c in CATEGORIES if c in raw.lower()), None)
    else:
        prefix = tag[: -len("AttributeDesignator")].lower()
        category = prefix if prefix in CATEGORIES else None
    if category is None:
        raise SchemaError(f"cannot determine the category of {tag!r}")
    attribute_id = el.get("AttributeId")
    if not attribute_id:
        raise SchemaError(f"{tag} is missing AttributeId")
    return AttrDesignator(category, _URN_ATTRIBUTE.sub("", attribute_id))


def _parse_attribute_value(el: ET.Element, function: str | None) -> M.Value:
    text = (el.text or "").strip()
    data_type = el.get("DataType", "")
    if data_type.endswith("#integer") or data_type == "integer":
        return _coerce_int(text)
    if data_type.endswith("#boolean") or data_type == "boolean":
        if text not in ("true", "false"):
            raise SchemaError(f"not a boolean literal: {text!r}")
        return text == "true"
    if function is not None and function.startswith("integer-"):
        return _coerce_int(text)
    return text


def _coerce_int(value: M.Value | str) -> int:
    if isinstance(value, bool):
        raise SchemaError(f"expected an integer literal, found boolean {value!r}")
    if isinstance(value, int):
        return value
    try:
        return int(value)
    except ValueError:
        raise SchemaError(f"not an integer literal: {value!r}") from None


def _function_name(raw: str) -> str:
    return _URN_FUNCTION.sub("", raw)


# ---------------------------------------------------------------------------
# request evaluation

def match_target(t: Target, attrs: Attrs) -> bool:
    """True iff every non-empty section has at least one satisfied matcher."""
    for section in t.sections():
        if not section:
            continue
        if not any(_matcher_holds(m, attrs) for m in section):
            return False
    return True


def _matcher_holds(matcher: Matcher, attrs: Attrs) -> bool:
    got = attrs.get((matcher.category, matcher.attribute_id))
    if got is None:
        return False
    if matcher.function == "integer-equal":
        return isinstance(got, int) and not isinstance(got, bool) and got == matcher.value
    return M.same_value(got, matcher.value)


def eval_condition(c: ConditionNode, attrs: Attrs, sets: Sets | None = None) -> M.Value:
    """Evaluate a condition tree against request attributes.

    Raises on missing attributes, type clashes, and unknown sets; rule
    evaluation turns those into Indeterminate.
    """
    if isinstance(c, AttrLiteral):
        return c.value
    if isinstance(c, AttrDesignator):
        key = (c.category, c.attribute_id)
        if attrs is None or key not in attrs:
            raise UnresolvableAttribute(c.attribute_id, f"category {c.category}")
        return attrs[key]
    if isinstance(c, FuncApply):
        if c.function == "and":
            return all(_eval_bool(a, attrs, sets) for a in c.args)
        if c.function == "or":
            return any(_eval_bool(a, attrs, sets) for a in c.args)
        if c.function == "not":
            return not _eval_bool(c.args[0], attrs, sets)
        if c.function == "member-of":
            item = eval_condition(c.args[0], attrs, sets)
            set_name = c.args[1].value  # literal, checked at parse time
            if sets is None or set_name not in sets:
                raise UnknownSet(f"unknown set {set_name!r}")
            return M.value_in_domain(item, sets[set_name])
        op = _COMPARISONS[c.function]
        left = eval_condition(c.args[0], attrs, sets)
        right = eval_condition(c.args[1], attrs, sets)
        if c.function.startswith("integer-"):
            for v in (left, right):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise TypeMismatch(f"{c.function} over non-integer {v!r}")
            if op == "=":
                return left == right
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        if type(left) is not type(right):
            raise TypeMismatch(f"{c.function} over {left!r} and {right!r}")
        return left == right
    raise TypeMismatch(f"not a condition node: {c!r}")


def _eval_bool(c: ConditionNode, attrs: Attrs, sets: Sets | None) -> bool:
    v = eval_condition(c, attrs, sets)
    if not isinstance(v, bool):
        raise TypeMismatch(f"expected a boolean, found {v!r}")
    return v


def evaluate_rule(r: Rule, attrs: Attrs, sets: Sets | None = None) -> Decision:
    if r.target is not None and not match_target(r.target, attrs):
        return Decision.NOT_APPLICABLE
    if r.condition is None:
        return Decision(r.effect)
    try:
        truth = eval_condition(r.condition, attrs, sets)
    except Exception:
        return Decision.INDETERMINATE
    if not isinstance(truth, bool):
        return Decision.INDETERMINATE
    return Decision(r.effect) if truth else Decision.NOT_APPLICABLE


def evaluate_policy(p: Policy, attrs: Attrs, sets: Sets | None = None) -> Decision:
    if not match_target(p.target, attrs):
        return Decision.NOT_APPLICABLE
    decisions = [evaluate_rule(r, attrs, sets) for r in p.rules]
    if p.combining == "first-applicable":
        for d in decisions:
            if d is not Decision.NOT_APPLICABLE:
                return d
        return Decision.NOT_APPLICABLE
    first, second = (
        (Decision.DENY, Decision.PERMIT)
        if p.combining == "deny-overrides"
        else (Decision.PERMIT, Decision.DENY))
    if first in decisions:
        return first
    if Decision.INDETERMINATE in decisions:
        return Decision.INDETERMINATE
    if second in decisions:
        return second
    return Decision.NOT_APPLICABLE


# ---------------------------------------------------------------------------
# compilation into machine predicates

def compile_condition(c: ConditionNode | None, m: M.Efsm, t: M.Transition) -> M.Expr:
    """Turn a rule condition into a predicate over the transition's names.

    Attribute ids bind to the transition's input parameters first, then to
    machine variables; the designator's category does not participate.  An
    absent condition compiles to the true literal.
    """
    if c is None:
        return M.Lit(True)
    params = set(t.input.params)

    def compile_node(node: ConditionNode) -> M.Expr:
        if isinstance(node, AttrLiteral):
            return M.Lit(node.value)
        if isinstance(node, AttrDesignator):
            if node.attribute_id in params:
                return M.ParamRef(node.attribute_id)
            if node.attribute_id in m.var_by_name:
                return M.VarRef(node.attribute_id)
            raise UnresolvableAttribute(
                node.attribute_id,
                f"not a parameter of input {t.input.signal!r} nor a variable")
        if node.function == "and":
            return M.conj(*(compile_node(a) for a in node.args))
        if node.function == "or":
            return M.disj(*(compile_node(a) for a in node.args))
        if node.function == "not":
            return M.neg(compile_node(node.args[0]))
        if node.function == "member-of":
            set_name = node.args[1].value
            if set_name not in m.subset_by_name:
                raise UnknownSet(f"unknown set {set_name!r}")
            return M.MemberOf(compile_node(node.args[0]), set_name)
        return M.Compare(_COMPARISONS[node.function],
                         compile_node(node.args[0]),
                         compile_node(node.args[1]))

    return compile_node(c)
