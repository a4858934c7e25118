"""Regenerate the bundled network and timetable.

The station codes, train numbers, names and categories follow the Eastern
Railway (Howrah and Asansol divisions) study area; the topology and every
time are synthetic.  Trains are placed one by one, each at the earliest
start (from its preferred time) at which the timetable stays conflict-free.

    python3 scripts/make_dataset.py
"""
from __future__ import annotations

from pathlib import Path

from railresched.constraints import validate_schedule
from railresched.io.formats import serialize_network, serialize_timetable
from railresched.network import (
    Category,
    Direction,
    ScheduleEntry,
    Station,
    Timetable,
    TrackSegment,
    Train,
    build_network,
    validate_timetable,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "railresched" / "data"
JOURNEY = 15

STATIONS = [  # code, platforms, junction
    ("HWH", 6, True), ("BLY", 4, True), ("DKAE", 2, False), ("KQU", 2, False),
    ("SHE", 3, True), ("TAK", 2, False), ("BDC", 4, True), ("KWAE", 2, False),
    ("SKG", 3, True), ("BWN", 6, True), ("KAN", 3, False), ("BMGA", 2, False),
    ("SNT", 3, True), ("RPH", 3, False), ("PAN", 3, False), ("PAW", 2, False),
    ("DGR", 4, False), ("UDL", 3, False), ("RNG", 3, False), ("ASN", 6, True),
    ("STN", 4, True), ("CRJ", 2, False), ("JMT", 3, True), ("MDP", 2, False),
    ("STL", 2, False), ("JAJ", 3, False), ("BRR", 3, False), ("DHN", 6, True),
]

# pairs with their track roles; the first listed station has the lower id
LINKS = [
    ("HWH", "BLY", "UP DOWN UP DOWN"), ("BLY", "SHE", "UP DOWN"), ("SHE", "BDC", "UP DOWN"),
    ("BDC", "SKG", "UP DOWN"), ("SKG", "BWN", "UP DOWN"), ("BWN", "KAN", "UP DOWN GENERAL"),
    ("KAN", "PAN", "UP DOWN"), ("PAN", "DGR", "UP DOWN"), ("DGR", "UDL", "UP DOWN"),
    ("UDL", "RNG", "UP DOWN"), ("RNG", "ASN", "UP DOWN"), ("ASN", "STN", "GENERAL UP DOWN"),
    ("STN", "BRR", "UP DOWN"), ("BRR", "DHN", "UP DOWN"),
    ("BLY", "DKAE", "GENERAL"), ("DKAE", "KQU", "GENERAL"), ("KQU", "SKG", "GENERAL"),
    ("SHE", "TAK", "GENERAL"), ("BDC", "KWAE", "GENERAL"), ("KWAE", "BWN", "GENERAL"),
    ("KAN", "BMGA", "GENERAL"), ("BMGA", "SNT", "GENERAL"), ("SNT", "RPH", "GENERAL"),
    ("RPH", "DGR", "GENERAL"), ("SNT", "PAW", "GENERAL"), ("PAW", "UDL", "GENERAL"),
    ("STN", "CRJ", "GENERAL"), ("CRJ", "JMT", "GENERAL"), ("JMT", "MDP", "GENERAL"),
    ("MDP", "STL", "GENERAL"), ("STL", "JAJ", "GENERAL"),
]

MAIN = "HWH BLY SHE BDC SKG BWN KAN PAN DGR UDL RNG ASN STN BRR DHN".split()
CHORD = "BLY DKAE KQU SKG BWN KAN PAN DGR UDL RNG ASN STN BRR DHN".split()
LOOP = "HWH BLY SHE BDC SKG BWN KAN BMGA SNT RPH".split()
BRANCH = "HWH BLY SHE BDC KWAE BWN KAN PAN DGR UDL RNG ASN STN CRJ JMT MDP STL JAJ".split()


def _rev(path):
    return list(reversed(path))


def _from(path, a, b=None):
    i = path.index(a)
    j = path.index(b) + 1 if b else len(path)
    return path[i:j]


# number, category, name, path, preferred start "HH:MM"
TRAINS = [
    ("12019", "Premium", "Howrah-Ranchi Shatabdi Express", MAIN, "05:40"),
    ("12303", "Mail", "Poorva Express", MAIN, "05:46"),
    ("13051", "Passenger", "Hool Express", LOOP, "05:52"),
    ("37211", "Local", "Howrah-Bandel Jn Local", _from(MAIN, "HWH", "BDC"), "05:30"),
    ("22387", "Passenger", "Black Diamond Express", MAIN, "06:05"),
    ("53131", "Passenger", "Sealdah-Muzaffarpur Fast Passenger", CHORD, "06:20"),
    ("53061", "Local", "Barddhaman Jn-Hatia Passenger", _from(MAIN, "BWN"), "06:35"),
    ("37911", "Local", "Howrah-Katwa Jn Local", ["HWH", "BLY", "SHE", "TAK"], "07:00"),
    ("12329", "Mail", "West Bengal Sampark Kranti Express", LOOP, "11:30"),
    ("12273", "Premium", "Howrah - New Delhi Duronto Express", MAIN, "11:48"),
    ("13017", "Passenger", "Ganadevta Express", BRANCH, "11:55"),
    ("63541", "Local", "Asansol-Gomoh MEMU", _from(MAIN, "ASN"), "12:30"),
    ("12339", "Passenger", "Coalfield Express", MAIN, "16:20"),
    ("12313", "Premium", "Sealdah-New Delhi Rajdhani Express", CHORD, "16:45"),
    ("12301", "Premium", "Howrah - New Delhi Rajdhani Express", MAIN, "16:50"),
    ("63523", "Local", "Barddhaman Jn-Asansol Jn MEMU", _from(MAIN, "BWN", "ASN"), "17:15"),
    ("63525", "Local", "Barddhaman Jn-Asansol Jn MEMU", _from(MAIN, "BWN", "ASN"), "18:20"),
    ("12341", "Passenger", "Agnibina Express", _rev(_from(MAIN, "HWH", "ASN")), "17:10"),
    ("12359", "Premium", "Kolkata - Patna Garib Rath Express", _rev(BRANCH), "17:35"),
    ("13009", "Mail", "Doon Express", _rev(MAIN), "18:30"),
    ("15662", "Mail", "Kamakhya - Ranchi Express", _rev(_from(BRANCH, "BWN")), "17:55"),
]

DWELL = {  # category -> (dwell at stops, stops at: "all" | "major" | "junction")
    "Premium": (4, "junction"),
    "Mail": (3, "major"),
    "Passenger": (2, "major"),
    "Local": (2, "all"),
}


def hhmm(s: str) -> int:
    h, m = s.split(":")
    return int(h) * 60 + int(m)


def build():
    stations = [Station(i, c, p, j) for i, (c, p, j) in enumerate(STATIONS, start=1)]
    tracks, tid = [], 1
    for a, b, roles in LINKS:
        for r in roles.split():
            tracks.append(TrackSegment(tid, (a, b), Direction[r], JOURNEY))
            tid += 1
    return build_network(stations, tracks)


def stops_at(net, cat: str, code: str) -> bool:
    _, rule = DWELL[cat]
    st = net.stations[code]
    if rule == "all":
        return True
    if rule == "major":
        return st.platform_count >= 3
    return st.is_junction and st.platform_count >= 6


def itinerary(net, number, cat, path, start, track_pick):
    entries, t = [], start
    dwell, _ = DWELL[cat]
    for i, code in enumerate(path):
        if i == 0:
            arr, dep = t, t + 5
        elif i == len(path) - 1:
            arr, dep = t, t + 5
        else:
            arr = t
            dep = t + (dwell if stops_at(net, cat, code) else 0)
        track = None
        if i + 1 < len(path):
            track = track_pick[i]
            t = dep + JOURNEY
        entries.append(ScheduleEntry(number, code, arr, dep, track=track))
    return entries


def place(net, trains, entries, number, cat, path, start):
    options = [net.tracks_between(a, b) for a, b in zip(path, path[1:])]
    for offset in range(0, 120):
        for variant in range(2):
            picks = [opts[min(variant, len(opts) - 1)].id for opts in options]
            cand = itinerary(net, number, cat, path, start + offset, picks)
            tt = Timetable(trains, entries + cand)
            if not validate_timetable(net, tt) and not validate_schedule(net, tt):
                return cand
    raise RuntimeError(f"could not place train {number}")


def main():
    net = build()
    trains, entries = [], []
    for i, (number, cat, name, path, start) in enumerate(TRAINS, start=1):
        trains.append(Train(i, number, Category(cat), name))
        entries += place(net, trains, entries, number, cat, path, hhmm(start))
    tt = Timetable(trains, entries)
    assert not validate_schedule(net, tt)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "network.tsv").write_text(serialize_network(net))
    (OUT / "timetable.tsv").write_text(serialize_timetable(tt))
    for n in tt.ordered_trains():
        legs = tt.itinerary(n)
        print(n, tt.trains[n].category.value, " ".join(f"{e.station}@{e.o_AT // 60:02d}:{e.o_AT % 60:02d}" for e in legs))


if __name__ == "__main__":
    main()
