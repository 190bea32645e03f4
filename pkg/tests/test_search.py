import logging

import pytest

from colorstrings.core import DerivationScript, LSet, canonicalize, replay, start_state
from colorstrings.search import (
    Probe,
    SearchConfig,
    bfs,
    check_probe_missing_letter,
    reachable_states,
    state_key,
    verify_witness,
    witness_problem,
)
from oracles import cd_images, naive_bfs


def S(*strings, k=4):
    return LSet.from_strings(strings, k=k)


def test_depth_zero_has_only_start():
    rep = bfs(S("acb"), SearchConfig(max_depth=0))
    assert rep.depth_counts == [1]
    assert not rep.goal_found
    assert rep.witness is None
    assert rep.transitions == 0
    assert rep.truncated_depth


def test_goal_in_one_step():
    rep = bfs(S("acbd"), SearchConfig(max_depth=1))
    assert rep.goal_found
    assert rep.goal_depth == 1
    assert [tuple(x) for x in rep.witness.steps] == [(1, 4)]
    assert verify_witness(S("acbd"), rep.witness)


def test_no_goal_from_start_at_desk_scale():
    rep = bfs(start_state(), SearchConfig(max_depth=6, max_length=7, group="cd"))
    assert not rep.goal_found
    assert rep.truncated_length and rep.truncated_depth
    assert not rep.truncated_memory


@pytest.mark.parametrize("group", ["none", "cd", "cd-rev"])
def test_counts_match_string_level_oracle(group):
    images = {"none": None, "cd": cd_images()}.get(group)
    if group == "cd-rev":
        from oracles import relabel

        images = cd_images() + [
            lambda X: relabel({s[::-1] for s in X}, {"a": "b", "b": "a"}),
            lambda X: relabel({s[::-1] for s in X}, {"a": "b", "b": "a", "c": "d", "d": "c"}),
        ]
    expected, goal = naive_bfs(["acb"], 5, 6, "abcd", images)
    rep = bfs(start_state(), SearchConfig(max_depth=5, max_length=6, group=group))
    assert rep.depth_counts == expected
    assert rep.goal_found == goal


@pytest.mark.parametrize("group", ["cd", "cd-rev", "full"])
@pytest.mark.parametrize("start", [("acb",), ("abcb", "adcb"), ("acbd", "abdc")])
def test_dedup_is_sound(group, start):
    L = S(*start)
    plain = list(reachable_states(L, SearchConfig(max_depth=4, max_length=7, group="none")))
    reduced = list(reachable_states(L, SearchConfig(max_depth=4, max_length=7, group=group)))
    assert {canonicalize(x, group) for _, x in plain} == {x for _, x in reduced}
    # first depth of each orbit agrees
    first = {}
    for d, x in plain:
        first.setdefault(canonicalize(x, group), d)
    assert {x: d for d, x in reduced} == first
    assert bfs(L, SearchConfig(max_depth=4, group="none")).goal_found == bfs(
        L, SearchConfig(max_depth=4, group=group)
    ).goal_found


def test_witness_lifted_through_symmetries():
    # a start whose canonical image differs from itself under every group
    L = S("adbc", "bdca")
    for group in ("none", "cd", "cd-rev", "full"):
        rep = bfs(L, SearchConfig(max_depth=3, group=group))
        assert rep.goal_found
        assert verify_witness(L, rep.witness), group


def test_witness_depth_matches_goal_depth():
    L = S("abcd", "acbd", "adcb")
    rep = bfs(L, SearchConfig(max_depth=4, group="cd-rev"))
    assert rep.goal_found
    assert len(rep.witness.steps) == rep.goal_depth
    assert not replay(rep.witness)[-1]


def test_reachable_states_examples():
    states = list(reachable_states(S("acb"), SearchConfig(max_depth=1, group="cd")))
    assert states[0] == (0, S("acb"))
    expected = {canonicalize(x, "cd") for x in (S("abcb", "adcb"), S("adb"), S("acab", "acdb"))} - {S("acb")}
    assert {x for d, x in states if d == 1} == expected
    assert list(reachable_states(LSet.empty(3), SearchConfig())) == [(0, LSet.empty(3))]


def test_reachable_states_consistent_with_bfs():
    cfg = SearchConfig(max_depth=5, max_length=7)
    states = list(reachable_states(start_state(), cfg))
    depths = [d for d, _ in states]
    assert depths == sorted(depths)
    counts = [depths.count(d) for d in range(max(depths) + 1)]
    assert counts == bfs(start_state(), cfg).depth_counts


def test_determinism_and_workers():
    cfg = SearchConfig(max_depth=5, max_length=7, probes=("missing-letter",))
    a = bfs(start_state(), cfg).summary()
    b = bfs(start_state(), cfg).summary()
    c = bfs(start_state(), SearchConfig(max_depth=5, max_length=7, probes=("missing-letter",), workers=2)).summary()
    assert a == b == c


def test_workers_do_not_change_goal_report():
    L = S("adbc", "bdca", "abcd")
    one = bfs(L, SearchConfig(max_depth=3))
    two = bfs(L, SearchConfig(max_depth=3, workers=3))
    assert one.summary() == two.summary()


def test_raising_depth_keeps_earlier_counts():
    prev = bfs(start_state(), SearchConfig(max_depth=2)).depth_counts
    for depth in range(3, 7):
        cur = bfs(start_state(), SearchConfig(max_depth=depth)).depth_counts
        assert cur[: len(prev)] == prev
        prev = cur


def test_memory_budget_truncates_loudly(caplog):
    with caplog.at_level(logging.WARNING):
        rep = bfs(start_state(), SearchConfig(max_depth=6, max_states=20))
    assert rep.truncated_memory
    assert rep.total_states == 20
    assert "budget" in caplog.text


def test_empty_start_is_goal_at_depth_zero():
    rep = bfs(LSet.empty(4), SearchConfig())
    assert rep.goal_found and rep.goal_depth == 0
    assert rep.witness.steps == ()


def test_goal_reached_beyond_length_bound_still_counts():
    # (1, 4) empties the set at nominal length 5, above max_length
    L = S("abcdab")
    rep = bfs(L, SearchConfig(max_depth=1, max_length=3))
    assert rep.goal_found
    assert [tuple(x) for x in rep.witness.steps] == [(1, 4)]


def test_probe_examples():
    assert check_probe_missing_letter(S("acb"))
    assert not check_probe_missing_letter(S("acbd", "adbc"))
    assert not check_probe_missing_letter(LSet.empty(3))


def test_probe_counts_every_state():
    rep = bfs(start_state(), SearchConfig(max_depth=4, probes=("missing-letter",)))
    res = rep.probes["missing-letter"]
    assert res.checked == rep.total_states
    assert res.violations == 0


def test_probe_violation_reported(caplog):
    never = Probe("never", lambda L: False)
    with caplog.at_level(logging.WARNING):
        rep = bfs(start_state(), SearchConfig(max_depth=1, probes=(never,)))
    assert rep.probes["never"].violations == rep.total_states
    assert rep.probes["never"].first_violation[0] == 0
    assert "violated" in caplog.text


def test_probe_refuses_non_invariant_group():
    with pytest.raises(ValueError, match="not invariant"):
        SearchConfig(group="full", probes=("missing-letter",))


@pytest.mark.parametrize(
    "kwargs", [dict(max_depth=-1), dict(max_length=2), dict(max_states=0), dict(group="x"), dict(workers=0)]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_start_alphabet_must_match():
    with pytest.raises(ValueError):
        bfs(start_state(5), SearchConfig(k=4))


def test_verify_witness_examples():
    assert verify_witness(S("acbd"), [(1, 4)])
    assert not verify_witness(S("acb"), [(1, 3)])
    assert "nonempty" in witness_problem(S("acb"), [(1, 3)])
    assert not verify_witness(S("acb"), [])
    assert "step 1" in witness_problem(S("acb"), [(1, 9)])
    assert verify_witness(S("acbd"), DerivationScript(S("acbd"), ((1, 4), (1, 2))))


def test_state_key_distinguishes_length():
    assert state_key(3, (1, 2)) != state_key(4, (1, 2))
    assert state_key(3, ()) == state_key(5, ())
