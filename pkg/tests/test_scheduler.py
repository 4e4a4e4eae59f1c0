import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soctam.benchmark_io import CoreSpec, SocDesign, bundled_p93791_core6
from soctam.oracle import brute_force_optimal, random_instance, validate
from soctam.rectangles import RectangleSet, build_rectangles
from soctam.scheduler import (
    Limits,
    Schedule,
    ScheduleState,
    SchedulingError,
    UnschedulableCore,
    advance_time,
    makespan,
    no_power_conflict,
    parse_schedule_export,
    schedule,
    select_possible_tam,
    update,
)
from soctam.wrapper import TamTimePoint


def _rset(cid, *points):
    return RectangleSet(cid, tuple(TamTimePoint(w, t, 0) for w, t in points))


def _state_with_active(active_power, w_max=32):
    rects = [_rset(cid, (1, 10)) for cid in active_power]
    state = ScheduleState.start(rects, list(active_power), w_max, active_power)
    for cid in active_power:
        update(state, cid, 1)
    return state


def test_power_conflict_examples():
    assert no_power_conflict(_state_with_active({1: 660}), 823, Limits(32, 1500))
    assert not no_power_conflict(_state_with_active({10: 1144}), 690, Limits(32, 1500))
    assert no_power_conflict(_state_with_active({10: 1144}), 10_000, Limits(32))


def test_possible_tam_core6():
    rset = build_rectangles(bundled_p93791_core6(), 32)[0]
    assert select_possible_tam(rset, 13) == 12
    assert select_possible_tam(rset, 9) is None
    assert select_possible_tam(rset, 0) is None
    assert select_possible_tam(rset, 30) == 24


def test_update_and_double_update():
    state = ScheduleState.start([_rset(1, (2, 100))], [1], 4)
    update(state, 1, 2)
    e = state.entries[1]
    assert (e.start, e.finish, state.w_avail) == (0, 100, 2)
    with pytest.raises(AssertionError):
        update(state, 1, 2)


def test_update_core6_later():
    rset = build_rectangles(bundled_p93791_core6(), 32)[0]
    state = ScheduleState.start([rset], [6], 32)
    state.this_time = 50
    update(state, 6, 24)
    assert state.entries[6].finish == 50 + rset.time_at(24)


def test_advance_time():
    rects = [_rset(1, (1, 100)), _rset(2, (2, 100)), _rset(3, (1, 250))]
    state = ScheduleState.start(rects, [1, 2, 3], 8)
    for cid, w in ((1, 1), (2, 2), (3, 1)):
        update(state, cid, w)
    assert state.w_avail == 4
    advance_time(state)
    assert state.this_time == 100
    assert state.w_avail == 7
    assert state.entries[1].complete and state.entries[2].complete and not state.entries[3].complete

    lone = ScheduleState.start([_rset(1, (1, 100))], [1], 2)
    update(lone, 1, 1)
    advance_time(lone)
    with pytest.raises(SchedulingError, match="no future event"):
        advance_time(lone)


def test_single_core():
    d = SocDesign("one", [CoreSpec(1, 1, 1, 0, (), 100)])
    s = schedule(d, Limits(4))
    assert s.rows == ((1, 0, 100, 2),)
    assert makespan(s) == 100


def test_forced_serial_pair():
    d = SocDesign("pair", [CoreSpec(1, 2, 2, 0, (), 100, 600), CoreSpec(2, 2, 2, 0, (), 70, 600)])
    limits = Limits(4, 1000)
    s = schedule(d, limits)
    assert s.makespan == 170 == brute_force_optimal(d, limits)
    assert validate(s, d, limits) == []


def test_makespan_examples():
    assert Schedule(((1, 0, 100, 1), (2, 0, 250, 1))).makespan == 250
    assert schedule(SocDesign("empty", []), Limits(8)).makespan == 0


def test_power_precondition():
    d = SocDesign("hot", [CoreSpec(1, 2, 2, 0, (), 5, 900)])
    with pytest.raises(UnschedulableCore, match="core 1"):
        schedule(d, Limits(4, 800))


def test_export_round_trip(d695):
    s = schedule(d695, Limits(24))
    again = parse_schedule_export(s.export())
    assert again.rows == s.rows
    with pytest.raises(ValueError, match="declared makespan"):
        parse_schedule_export("1 0 5 1\nmakespan 9\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_schedule_export("1 0 5\n")


def test_d695_tmin_and_order(d695):
    s = schedule(d695, Limits(24))
    assert sorted(s.order) == list(range(1, 11))
    assert s.t_min == min(r.time_at(r.max_tam_u) for r in build_rectangles(d695, 24))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 15), st.integers(1, 64), st.booleans())
def test_schedules_validate_and_repeat(seed, n, w, capped):
    d = random_instance(seed, n_cores=n)
    p_max = max(c.power_mw for c in d.cores) + seed % 700 if capped else None
    limits = Limits(w, p_max)
    s = schedule(d, limits)
    assert validate(s, d, limits) == []
    assert schedule(d, limits).export() == s.export()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 10), st.integers(1, 48))
def test_release_strictly_grows_w_avail(seed, n, w):
    # replay the run, checking every advance
    from soctam.scheduler import _admit_pending, plan

    d = random_instance(seed, n_cores=n)
    limits = Limits(w)
    rects, _, order = plan(d, limits)
    state = ScheduleState.start(rects, order, w)
    while state.unscheduled():
        if state.w_avail > 0 and not state.idle_flag:
            if state.initial:
                c = state.initial.popleft()
                peak = state.entries[c].peak_tam
                if state.w_avail >= peak:
                    update(state, c, peak)
                else:
                    alt = select_possible_tam(state.rects[c], state.w_avail)
                    if alt is None:
                        state.pending.append(c)
                    else:
                        update(state, c, alt)
                _admit_pending(state, limits)
            elif not _admit_pending(state, limits):
                state.idle_flag = True
        else:
            before = state.w_avail
            released = sum(e.width for e in state.entries.values()
                           if e.active and e.finish == min(x.finish for x in state.entries.values() if x.active))
            advance_time(state)
            assert state.w_avail == before + released
            assert state.w_avail > before
    assert {cid: (e.start, e.width) for cid, e in state.entries.items()} == \
        {r[0]: (r[1], r[3]) for r in schedule(d, limits).rows}
