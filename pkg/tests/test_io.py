import pytest

from railresched.exceptions import NonMonotoneItinerary, ParseError, UnknownStation
from railresched.io.formats import (
    DATA_DIR,
    bundled_scenarios,
    find_scenario,
    format_hhmm,
    parse_hhmm,
    parse_network_file,
    parse_network_text,
    parse_scenario_file,
    parse_scenario_text,
    parse_timetable_text,
    serialize_network,
    serialize_scenario,
    serialize_timetable,
)
from railresched.io.report import DELIMITED, TABLE, emit_report
from railresched.runner import run_scenario


def test_hhmm():
    assert parse_hhmm("07:05") == 425
    assert parse_hhmm("25:00") == 1500
    assert format_hhmm(1500) == "25:00"
    for t in (0, 59, 60, 539, 1439, 2000):
        assert parse_hhmm(format_hhmm(t)) == t
    for bad in ("7", "7:5", "07:60", "ab:cd", ""):
        with pytest.raises(ParseError):
            parse_hhmm(bad)
    with pytest.raises(ValueError):
        format_hhmm(-1)


def test_network_round_trip(bundled):
    net, _ = bundled
    again = parse_network_text(serialize_network(net))
    assert serialize_network(again) == serialize_network(net)
    assert again.stations == net.stations


def test_timetable_round_trip(bundled):
    net, tt = bundled
    again = parse_timetable_text(serialize_timetable(tt), net)
    assert serialize_timetable(again) == serialize_timetable(tt)
    assert [(e.train, e.station, e.o_AT, e.o_DT, e.track) for e in again.entries] == \
        [(e.train, e.station, e.o_AT, e.o_DT, e.track) for e in tt.entries]


@pytest.mark.parametrize("path", bundled_scenarios(), ids=lambda p: p.stem)
def test_scenario_round_trip(path):
    spec = parse_scenario_file(path)
    again = parse_scenario_text(serialize_scenario(spec))
    assert again == spec
    net, tt = spec.load()
    assert len(net.stations) == 28 and len(tt.trains) == 21


def test_find_scenario():
    assert find_scenario("sc1") == find_scenario("sc1.scn") == DATA_DIR / "scenarios" / "sc1.scn"
    with pytest.raises(ParseError):
        find_scenario("nope")


def test_parse_error_positions():
    with pytest.raises(ParseError) as info:
        parse_network_text("[stations]\n1\tA\t2\tno\n2\tB\tx\tno\n", path="n.tsv")
    assert (info.value.line, info.value.column) == (3, 3)
    assert "n.tsv" in str(info.value) and "line 3" in str(info.value)
    with pytest.raises(ParseError) as info:
        parse_network_text("1\tA\t2\n")
    assert info.value.line == 1
    with pytest.raises(ParseError) as info:
        parse_network_text("[stations]\n1\tA\t2\tmaybe\n")
    assert info.value.column == 4
    with pytest.raises(ParseError):
        parse_network_text("[depots]\n")
    text = "[stations]\n1\tA\t2\tno\n2\tB\t2\tno\n[tracks]\n1\tA\tB\tSIDEWAYS\t5\n"
    with pytest.raises(ParseError) as info:
        parse_network_text(text)
    assert (info.value.line, info.value.column) == (5, 4)


def test_timetable_errors(line_net):
    head = "[trains]\nT\tMail\n[schedule]\n"
    with pytest.raises(ParseError) as info:
        parse_timetable_text(head + "T\tA\t00:00\t00:02\nT\tB\t00:07\t0:9x\n")
    assert (info.value.line, info.value.column) == (5, 4)
    with pytest.raises(NonMonotoneItinerary):
        parse_timetable_text(head + "T\tA\t00:05\t00:02\n")
    with pytest.raises(NonMonotoneItinerary):
        parse_timetable_text(head + "T\tA\t00:00\t00:09\nT\tB\t00:07\t00:10\n")
    with pytest.raises(UnknownStation):
        parse_timetable_text(head + "T\tQ\t00:00\t00:01\n", line_net)
    with pytest.raises(ParseError):
        parse_timetable_text(head + "X\tA\t00:00\t00:01\n")
    with pytest.raises(ParseError):
        parse_timetable_text("[trains]\nT\tCargo\n")


def test_scenario_errors():
    with pytest.raises(ParseError):
        parse_scenario_text("[scenario]\nid\tx\n")
    base = "[scenario]\nid\tx\nnetwork\ta\ntimetable\tb\nseed\t1\n"
    with pytest.raises(ParseError) as info:
        parse_scenario_text(base + "[event]\ntime\t07:00\nplatforms\tHWH\nrecovery\tuniform\t1\t2\n")
    assert (info.value.line, info.value.column) == (8, 2)
    with pytest.raises(ParseError):
        parse_scenario_text(base + "[event]\ntime\t07:00\ntracks\t4\nrecovery\tuniform\t9\t2\n")
    with pytest.raises(ParseError):
        parse_scenario_text(base + "[event]\ntime\t07:00\nrecovery\tuniform\t1\t2\n")
    with pytest.raises(ParseError):
        parse_scenario_text(base + "[policy]\nbusy_window\t11:00\t09:00\n")
    with pytest.raises(ParseError):
        parse_scenario_text(base.replace("seed\t1", "seed\tone"))
    spec = parse_scenario_text(base.replace("network\ta", "network\tmissing.tsv"), path="/tmp/x.scn")
    with pytest.raises(ParseError):
        spec.load()


def test_bundled_data_loads():
    net = parse_network_file(DATA_DIR / "network.tsv")
    assert net.station("HWH").platform_count == 6


def test_report_formats():
    out = run_scenario(parse_scenario_file(find_scenario("sc1")))
    table = emit_report(out.report, TABLE)
    assert table.startswith("scenario sc1")
    assert f"distributed total {out.report.distributed_total} min" in table
    rows = emit_report(out.report, DELIMITED).splitlines()
    assert rows[0].split("\t")[0] == "train"
    assert rows[-1].split("\t")[:3] == ["TOTAL", str(out.report.distributed_total),
                                        str(out.report.baseline_total)]
    with pytest.raises(ValueError):
        emit_report(out.report, "xml")
