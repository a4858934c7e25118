import pytest

from railresched.constraints import (
    BUSY,
    DELAYED,
    NORMAL,
    Blockage,
    MdpModel,
    MdpState,
    OccupancyState,
    OccupancyTimeline,
    PriorityPolicy,
    Resource,
    assign_platforms,
    build_dcop,
    check_continuity,
    check_platform_capacity,
    check_track_exclusivity,
    compute_delay,
    mdp_enabled_transitions,
    priority_key,
    priority_rank,
    resource_of,
    validate_schedule,
)
from railresched.exceptions import (
    EarlyArrivalViolation,
    MultipleResourcesHeld,
    NonAdjacentStations,
    UnknownState,
)
from railresched.network import Category, ScheduleEntry, Timetable, Train

LEVEL_CATS = {1: Category.PREMIUM, 2: Category.MAIL, 3: Category.FREIGHT, 4: Category.PASSENGER,
              5: Category.LOCAL}
ORDERS = {NORMAL: (1, 2, 4, 5, 3), BUSY: (1, 4, 5, 2, 3), DELAYED: (4, 1, 5, 2, 3)}


def _train(level, tid=1):
    return Train(tid, f"T{tid}", LEVEL_CATS[level])


# ----- priority ------------------------------------------------------------------


@pytest.mark.parametrize("level", range(1, 6))
@pytest.mark.parametrize("mode,t,ctx", [(NORMAL, 300, None), (BUSY, 600, None),
                                        (DELAYED, 300, "late")])
def test_rank_of_every_level(level, mode, t, ctx):
    policy = PriorityPolicy()
    contenders = [(_train(1, 9), 31)] if ctx else None
    assert priority_rank(policy, _train(level), t, 0, contenders) == ORDERS[mode].index(level) + 1


@pytest.mark.parametrize("t,busy", [(539, False), (540, True), (1139, True), (1140, False),
                                    (659, True), (660, False), (1019, False), (1020, True),
                                    (1440 + 540, True)])
def test_busy_window_edges(t, busy):
    policy = PriorityPolicy()
    assert policy.is_busy(t) is busy
    expected = ORDERS[BUSY if busy else NORMAL]
    assert [priority_rank(policy, _train(lv), t) for lv in range(1, 6)] == \
        [expected.index(lv) + 1 for lv in range(1, 6)]


def test_delay_threshold_is_strict():
    policy = PriorityPolicy()
    assert policy.mode(300, False) == NORMAL
    at_threshold = [(_train(2, 9), 30)]
    over = [(_train(2, 9), 31)]
    local_late = [(_train(5, 9), 90)]
    assert priority_rank(policy, _train(4), 300, 0, at_threshold) == 3
    assert priority_rank(policy, _train(4), 300, 0, over) == 1
    assert priority_rank(policy, _train(4), 300, 0, local_late) == 3
    # the train itself being late counts too
    assert priority_rank(policy, _train(1), 300, 45) == 2


def test_priority_key_tie_breaks():
    policy = PriorityPolicy()
    a, b = Train(1, "A", Category.MAIL), Train(2, "B", Category.MAIL)
    assert priority_key(policy, a, 300, 5) > priority_key(policy, b, 300, 0)
    assert priority_key(policy, a, 300, 0) < priority_key(policy, b, 300, 0)
    with pytest.raises(ValueError):
        priority_rank(policy, a, 300, -1)


def test_policy_validation():
    with pytest.raises(ValueError):
        PriorityPolicy(normal_order=(1, 2, 3, 4, 4))
    with pytest.raises(ValueError):
        PriorityPolicy(busy_windows=((500, 600), (550, 700)))
    with pytest.raises(ValueError):
        PriorityPolicy(busy_windows=((600, 500),))


# ----- rule helpers ---------------------------------------------------------------


def test_continuity_and_delay(line_net):
    a = ScheduleEntry("T", "A", 0, 2)
    b = ScheduleEntry("T", "B", 7, 8)
    assert check_continuity(a, b, 5, line_net)
    b.x_AT = 6
    assert not check_continuity(a, b, 5)
    with pytest.raises(NonAdjacentStations):
        check_continuity(a, ScheduleEntry("T", "C", 9, 9), 5, line_net)
    with pytest.raises(ValueError):
        check_continuity(a, ScheduleEntry("U", "B", 7, 8), 5)
    b.x_AT = 10
    assert compute_delay(b) == 3
    b.x_AT = 6
    with pytest.raises(EarlyArrivalViolation):
        compute_delay(b)


def test_capacity_and_exclusivity():
    occ = OccupancyState(frozenset({("T1", "A", 1), ("T2", "A", 2)}),
                         frozenset({("T3", "B", 4), ("T4", "B", 4)}))
    assert check_platform_capacity(occ, "A", 2)
    assert not check_platform_capacity(occ, "A", 1)
    with pytest.raises(ValueError):
        check_platform_capacity(occ, "A", 0)
    assert not check_track_exclusivity(occ, "B", 4)
    assert check_track_exclusivity(occ, "B", 5)


def test_resource_of(two_trains, line_net):
    tl = OccupancyTimeline(line_net, two_trains)
    assert resource_of(tl, "P1", 1) == Resource("platform", "A", 0)
    assert resource_of(tl, "P1", 3) == Resource("track", "B", 1)
    assert resource_of(tl, "P1", 25) is None
    with pytest.raises(ValueError):
        resource_of(tl, "P1")
    both = OccupancyState(frozenset({("T", "A", 1)}), frozenset({("T", "B", 1)}))
    with pytest.raises(MultipleResourcesHeld):
        resource_of(both, "T")


# ----- occupancy ----------------------------------------------------------------------


def test_timeline_snapshots(two_trains, line_net):
    assign_platforms(line_net, two_trains)
    tl = OccupancyTimeline(line_net, two_trains, [Blockage("platform", ("B", 2), 5, 50)])
    s = tl.at(8)
    assert s.P("P1", "B", 1) == 1
    assert s.trains_at("B") == ["P1"]
    assert s.free_platforms("B", 2) == []
    assert tl.at(2).L("P1", "B", 1) == 1  # departure instant starts the track hold
    assert tl.at(7).L("P1", "B", 1) == 0  # arrival instant ends it
    assert tl.at(60).track_free(3)
    assert 50 in tl.event_times()


def test_pass_through_is_left_out_of_snapshots(line_net):
    tt = Timetable([Train(1, "T", Category.MAIL)], [
        ScheduleEntry("T", "A", 0, 1, track=1),
        ScheduleEntry("T", "B", 6, 6, track=3),
        ScheduleEntry("T", "C", 10, 12),
    ])
    tl = OccupancyTimeline(line_net, tt)
    assert tl.at(6).trains_at("B") == []
    assert tl.at(6).L("T", "C", 3) == 1
    assert not validate_schedule(line_net, tt)


def test_assign_lowest_free_platform(line_net):
    trains = [Train(i, f"T{i}", Category.MAIL) for i in (1, 2, 3)]
    tt = Timetable(trains, [ScheduleEntry("T1", "D", 0, 10), ScheduleEntry("T2", "D", 2, 8),
                            ScheduleEntry("T3", "D", 8, 9)])
    assign_platforms(line_net, tt, [Blockage("platform", ("D", 1), 5, 20)])
    assert [e.platform for e in tt.entries] == [1, 2, 2]


# ----- checker ------------------------------------------------------------------------


def test_clean_schedule(two_trains, line_net):
    assert validate_schedule(line_net, two_trains) == []


def _rules(net, tt, **kw):
    return sorted({v.rule for v in validate_schedule(net, tt, **kw)})


def test_each_rule_fires(two_trains, line_net):
    tt = two_trains.copy()
    tt.entries[1].x_AT = 6
    assert _rules(line_net, tt) == ["EQ1", "EQ2"]
    tt = two_trains.copy()
    tt.entries[2].platform = 2
    assert _rules(line_net, tt) == ["EQ3"]
    tt = two_trains.copy()
    tt.entries[6].track = 1
    assert _rules(line_net, tt) == ["EQ7"]
    with pytest.raises(TypeError):
        validate_schedule(line_net, [])


def test_capacity_track_and_single_resource(line_net):
    trains = [Train(i, f"T{i}", Category.MAIL) for i in (1, 2)]
    # both trains at single-platform C at once, and on track 3 at once
    tt = Timetable(trains, [
        ScheduleEntry("T1", "B", 0, 1, track=3), ScheduleEntry("T1", "C", 5, 9),
        ScheduleEntry("T2", "B", 0, 2, track=3), ScheduleEntry("T2", "C", 6, 8),
    ])
    vs = validate_schedule(line_net, tt)
    assert {v.rule for v in vs} == {"EQ4", "EQ5"}
    eq5 = [v for v in vs if v.rule == "EQ5"][0]
    assert (eq5.train, eq5.other, eq5.location) == ("T1", "T2", 3)
    # leaving B before reaching it puts the train on two tracks at once
    tt = Timetable(trains[:1], [ScheduleEntry("T1", "A", 0, 2, track=1),
                                ScheduleEntry("T1", "B", 7, 9, track=3),
                                ScheduleEntry("T1", "C", 13, 15)])
    assert _rules(line_net, tt) == []
    tt.entries[1].x_DT = 5
    tt.entries[2].x_AT = 13
    assert _rules(line_net, tt) == ["EQ6"]


def test_blocked_platforms_count_against_capacity(line_net):
    tt = Timetable([Train(1, "T", Category.MAIL)], [ScheduleEntry("T", "B", 0, 1, track=3),
                                                    ScheduleEntry("T", "C", 5, 9)])
    assert _rules(line_net, tt, blockages=[Blockage("platform", ("C", 1), 0, 10)]) == ["EQ4"]
    assert _rules(line_net, tt, blockages=[Blockage("platform", ("C", 1), 6, 10)]) == []


def test_block_rule(line_net):
    tt = Timetable([Train(1, "T", Category.MAIL)], [ScheduleEntry("T", "B", 0, 1, track=3),
                                                    ScheduleEntry("T", "C", 5, 9)])
    assert _rules(line_net, tt, blockages=[Blockage("track", 3, 0, 3)]) == ["BLOCK"]
    # caught on the track at onset: must not arrive before recovery
    assert _rules(line_net, tt, blockages=[Blockage("track", 3, 3, 8)]) == ["BLOCK"]
    assert _rules(line_net, tt, blockages=[Blockage("track", 3, 3, 5)]) == []
    tl = OccupancyTimeline(line_net, tt, [Blockage("track", 3, 0, 3)])
    assert _rules(line_net, tt, occ_timeline=tl) == ["BLOCK"]


# ----- MDP and DCOP -------------------------------------------------------------------


def test_mdp_states_and_guards():
    m = MdpModel("D", "N", 7, platforms=1, neighbor_platforms=1)
    on_track = OccupancyState(frozenset(), frozenset({("T", "D", 7)}))
    assert m.state_of(on_track, "T") is MdpState.ON_TRACK
    assert mdp_enabled_transitions(m, on_track, "T") == {
        (MdpState.AT_DISASTER, frozenset({"platform_free@disaster"}))}
    blocked = OccupancyState(frozenset(), frozenset({("T", "D", 7)}), frozenset({("D", 1)}))
    assert mdp_enabled_transitions(m, blocked, "T") == set()
    at_d = OccupancyState(frozenset({("T", "D", 1)}))
    assert m.state_of(at_d, "T") is MdpState.AT_DISASTER
    assert len(mdp_enabled_transitions(m, at_d, "T")) == 1
    busy_neighbor = OccupancyState(frozenset({("T", "D", 1), ("U", "N", 1)}))
    assert mdp_enabled_transitions(m, busy_neighbor, "T") == set()
    at_n = OccupancyState(frozenset(), frozenset(), unassigned=frozenset({("T", "N")}))
    assert m.state_of(at_n, "T") is MdpState.AT_NEIGHBOR
    with pytest.raises(UnknownState):
        m.state_of(OccupancyState(), "T")
    assert len(m.states) == 3


def test_dcop_ownership(two_trains, line_net):
    d = build_dcop(line_net, two_trains, 10, 20)
    assert d.q == 4 + 2
    assert d.owner[("x_AT", "P1", "B")] == "train:P1"
    assert d.owner[("P", "P1", "B", 2)] == "station:B"
    assert d.owner[("L", "L1", "B", 3)] == "train:L1"
    assert d.domain(("x_DT", "P1", "A")) == range(10, 31)
    assert d.domain(("P", "P1", "B", 1)) == (0, 1)
    fams = {c.family for c in d.constraints}
    assert fams == {"EQ1", "EQ2", "EQ3", "EQ4", "EQ5", "EQ6", "EQ7"}
    eq5 = [c for c in d.constraints if c.family == "EQ5"]
    assert all(len({v[1] for v in c.scope}) > 1 for c in eq5)
