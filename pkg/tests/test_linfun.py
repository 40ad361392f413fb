import pytest

from snpcrypt.engine import OverBudget, run
from snpcrypt.linfun import LinParams, build_pi_add, eval_linear, linfun_oracle, literal_budget
from snpcrypt.patterns import Atom, Plus


def test_build_instance():
    sys = build_pi_add(LinParams(3, 2, 4))
    s1, s2, s3 = sys.neurons
    assert (s1.id, s1.initial_spikes) == ("s1", 7)
    assert s1.firing_rules[0].pattern == Plus(Atom(1)) and s1.firing_rules[0].consume == 1
    assert s1.firing_rules[0].delay == 2
    assert (s2.initial_spikes, s2.firing_rules[0].delay) == (1, 0)
    assert s3.initial_spikes == 0 and s3.firing_rules[0].pattern == Atom(4)
    assert s3.firing_rules[0].delay == 1
    assert sys.synapses == {("s1", "s3"), ("s3", "s2")} and sys.output == "s2"


def test_smallest_instance():
    s1, _, s3 = build_pi_add(LinParams(1, 1, 1)).neurons
    assert s1.initial_spikes == 1
    assert s1.firing_rules[0].delay == 0 and s3.firing_rules[0].delay == 0


@pytest.mark.parametrize("args", [(0, 2, 4), (3, 0, 4), (3, 2, 0), (-1, 1, 1)])
def test_zero_parameters_rejected(args):
    with pytest.raises(ValueError):
        LinParams(*args)


def test_oracle():
    assert linfun_oracle(LinParams(3, 2, 4)) == 14
    assert linfun_oracle(LinParams(1, 1, 1)) == 2
    assert linfun_oracle(LinParams(251, 13, 97)) == 24360


def test_eval_examples():
    assert eval_linear(LinParams(3, 2, 4)) == 14
    assert eval_linear(LinParams(1, 1, 1)) == 2
    assert eval_linear(LinParams(251, 13, 97), "events") == 24360


def test_eval_over_budget():
    with pytest.raises(OverBudget):
        eval_linear(LinParams(3, 2, 4), budget=10)


@pytest.mark.parametrize("engine", ["literal", "events"])
def test_grid(engine):
    r = range(1, 13)
    for t1 in r:
        for t2 in r:
            for k in r:
                p = LinParams(t1, t2, k)
                assert eval_linear(p, engine) == linfun_oracle(p)


def test_s3_fires_once_and_keeps_leftovers():
    for p in (LinParams(3, 2, 4), LinParams(2, 5, 6), LinParams(1, 1, 5), LinParams(4, 1, 3)):
        fires = []
        sys = build_pi_add(p)
        from snpcrypt.engine import initial_state, step
        st = initial_state(sys)
        for _ in range(literal_budget(p)):
            st, ev = step(st, sys)
            fires += [n for n, _ in ev.fired if n == "s3"]
        assert fires == ["s3"]
        assert st.spikes[2] <= p.k - 1
        assert run(sys, literal_budget(p)).halted


def test_huge_parameters_closed_and_events_agree_when_k_small():
    p = LinParams(2 ** 256 + 3, 2 ** 255 + 1, 5)
    assert eval_linear(p, "events") == linfun_oracle(p)
