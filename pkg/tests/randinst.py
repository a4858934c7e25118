"""Random small networks and schedules for checker-equivalence tests.

Schedules start from a conflict-free-looking plan and are then perturbed, so
the draws cover clean instances as well as every kind of rule breach.
"""
from __future__ import annotations

from railresched.network import (
    Category,
    Direction,
    ScheduleEntry,
    Station,
    Timetable,
    TrackSegment,
    Train,
    build_network,
)

ROLES = [Direction.UP, Direction.DOWN, Direction.GENERAL]
CATS = list(Category)


def random_network(rng, n_stations=None):
    n = n_stations or int(rng.integers(2, 5))
    codes = [chr(ord("A") + i) for i in range(n)]
    stations = [Station(i + 1, c, int(rng.integers(1, 4)), bool(rng.random() < 0.3))
                for i, c in enumerate(codes)]
    tracks, tid = [], 1
    pairs = [(codes[i], codes[i + 1]) for i in range(n - 1)]
    if n >= 3 and rng.random() < 0.5:
        pairs.append((codes[0], codes[-1]))
    for a, b in pairs:
        for _ in range(int(rng.integers(1, 3))):
            role = ROLES[int(rng.integers(0, 3))]
            tracks.append(TrackSegment(tid, (a, b), role, int(rng.integers(2, 9))))
            tid += 1
    return build_network(stations, tracks)


def _walk(net, rng, length):
    here = list(net.stations)[int(rng.integers(0, len(net.stations)))]
    path = [here]
    for _ in range(length - 1):
        nbrs = [c for c in net.neighbors(path[-1]) if c not in path]
        if not nbrs:
            break
        path.append(nbrs[int(rng.integers(0, len(nbrs)))])
    return path


def random_timetable(net, rng, n_trains=None, perturb=0.6):
    n_trains = n_trains or int(rng.integers(1, 4))
    trains, entries = [], []
    for k in range(n_trains):
        number = f"T{k + 1}"
        trains.append(Train(k + 1, number, CATS[int(rng.integers(0, len(CATS)))]))
        path = _walk(net, rng, int(rng.integers(2, len(net.stations) + 1)))
        t = int(rng.integers(0, 30))
        for i, code in enumerate(path):
            dwell = int(rng.integers(0, 4))
            track = None
            if i + 1 < len(path):
                opts = net.tracks_between(code, path[i + 1], directed=False)
                track = opts[int(rng.integers(0, len(opts)))].id
            e = ScheduleEntry(number, code, t, t + dwell, track=track)
            if rng.random() < 0.5:
                e.platform = int(rng.integers(1, net.platforms(code) + 1))
            entries.append(e)
            if track is not None:
                t = t + dwell + net.tracks[track].journey_time
    if rng.random() < perturb:
        for e in entries:
            r = rng.random()
            if r < 0.15:
                e.x_AT = e.o_AT - int(rng.integers(1, 4))
            elif r < 0.3:
                shift = int(rng.integers(1, 10))
                e.x_AT += shift
                e.x_DT += shift
            elif r < 0.4:
                e.x_DT = max(e.x_AT, e.x_DT - int(rng.integers(1, 4)))
            elif r < 0.45:
                e.platform = net.platforms(e.station) + 1
            elif r < 0.5 and e.track is not None:
                e.track = None
    return Timetable(trains, entries)


def random_instance(rng):
    net = random_network(rng)
    return net, random_timetable(net, rng)
