import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from railresched.io.formats import DATA_DIR, parse_network_file, parse_timetable_file  # noqa: E402
from railresched.network import (  # noqa: E402
    Category,
    Direction,
    ScheduleEntry,
    Station,
    Timetable,
    TrackSegment,
    Train,
    build_network,
)


@pytest.fixture(scope="session")
def bundled():
    net = parse_network_file(DATA_DIR / "network.tsv")
    return net, parse_timetable_file(DATA_DIR / "timetable.tsv", net)


@pytest.fixture
def line_net():
    """A - B - C - D with UP/DOWN pairs and a general B-D shortcut."""
    sts = [Station(1, "A", 2), Station(2, "B", 2), Station(3, "C", 1), Station(4, "D", 3, True)]
    trs = [
        TrackSegment(1, ("A", "B"), Direction.UP, 5),
        TrackSegment(2, ("A", "B"), Direction.DOWN, 5),
        TrackSegment(3, ("B", "C"), Direction.GENERAL, 4),
        TrackSegment(4, ("C", "D"), Direction.UP, 6),
        TrackSegment(5, ("C", "D"), Direction.DOWN, 6),
        TrackSegment(6, ("B", "D"), Direction.GENERAL, 15),
    ]
    return build_network(sts, trs)


@pytest.fixture
def two_trains(line_net):
    """One premium train A->D and one local D->A, clear of each other."""
    trains = [Train(1, "P1", Category.PREMIUM), Train(2, "L1", Category.LOCAL)]
    entries = [
        ScheduleEntry("P1", "A", 0, 2, track=1),
        ScheduleEntry("P1", "B", 7, 9, track=3),
        ScheduleEntry("P1", "C", 13, 14, track=4),
        ScheduleEntry("P1", "D", 20, 23),
        ScheduleEntry("L1", "D", 30, 32, track=5),
        ScheduleEntry("L1", "C", 38, 40, track=3),
        ScheduleEntry("L1", "B", 44, 46, track=2),
        ScheduleEntry("L1", "A", 51, 53),
    ]
    return Timetable(trains, entries)


ACCEPTANCE = []  # (criterion, passed, detail), filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
