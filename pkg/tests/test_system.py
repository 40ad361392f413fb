from snpcrypt.linfun import LinParams, build_pi_add
from snpcrypt.patterns import Atom, Plus
from snpcrypt.system import (
    FiringRule, ForgettingRule, Neuron, SnpSystem, applicable_rules, validate_system,
)


def errors(sys):
    return [v for v in validate_system(sys) if v.severity == "error"]


def test_pi_add_is_valid():
    assert validate_system(build_pi_add(LinParams(3, 2, 4))) == []


def test_self_synapse():
    n = Neuron("s1", 1, (FiringRule.exact(1),))
    found = errors(SnpSystem((n,), {("s1", "s1")}, "s1"))
    assert [v.kind for v in found] == ["self-synapse"]


def test_unknown_output():
    n = Neuron("s1", 1)
    found = errors(SnpSystem((n,), set(), "s9"))
    assert [v.kind for v in found] == ["unknown output neuron"]


def test_unknown_endpoint_and_duplicate_id():
    a, b = Neuron("a"), Neuron("a")
    kinds = {v.kind for v in errors(SnpSystem((a, b), {("a", "zz")}, "a"))}
    assert kinds == {"duplicate neuron", "unknown neuron"}


def test_consume_must_not_exceed_pattern():
    rule = FiringRule(Plus(Atom(2)), 3, 0)  # pattern accepts 2 < 3
    found = errors(SnpSystem((Neuron("n", 0, (rule,)),), set(), "n"))
    assert [v.kind for v in found] == ["consume exceeds pattern"]
    assert "n.firing[0]" in found[0].where


def test_overlap_is_only_a_warning():
    n = Neuron("n", 2, (FiringRule(Plus(Atom(1)), 1, 0),), (ForgettingRule(2),))
    found = validate_system(SnpSystem((n,), set(), "n"))
    assert [(v.kind, v.severity) for v in found] == [("firing/forgetting overlap", "warning")]


def test_applicable_rules_examples():
    s1 = build_pi_add(LinParams(3, 2, 4)).neuron("s1")
    assert applicable_rules(s1, 7) == [s1.firing_rules[0]]
    assert s1.firing_rules[0].delay == 2

    forget = ForgettingRule(3)
    assert applicable_rules(Neuron("f", 0, (), (forget,)), 3) == [forget]
    assert applicable_rules(Neuron("g", 0, (FiringRule.exact(4, 1),)), 2) == []


def test_applicable_rules_order_firing_first():
    fire = FiringRule(Plus(Atom(1)), 1, 0)
    forget = ForgettingRule(2)
    n = Neuron("n", 0, (fire,), (forget,))
    assert applicable_rules(n, 2) == [fire, forget]
    assert applicable_rules(n, 1) == [fire]
