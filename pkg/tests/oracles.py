"""Independent reference implementations used as test oracles.

Nothing here imports the checking or planning code under test; only the
plain data classes are shared.  Everything is done the slow way: minute by
minute, path by path, state by state.
"""
from __future__ import annotations

import heapq
from collections import defaultdict
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

# ----- brute-force feasibility -------------------------------------------------


def _track_for(net, a, b, track_id):
    """The track a leg uses: the named one if it joins a and b, else the lowest usable id."""
    if track_id is not None:
        tr = net.tracks.get(track_id)
        if tr is not None and set(tr.endpoints) == {a.station, b.station}:
            return tr
        return None
    best = None
    for tr in net.tracks.values():
        if set(tr.endpoints) != {a.station, b.station}:
            continue
        if _usable(net, tr, a.station, b.station) and (best is None or tr.id < best.id):
            best = tr
    return best


def _usable(net, tr, frm, to):
    role = tr.direction_role.name
    if role == "GENERAL":
        return True
    going_up = net.stations[frm].id < net.stations[to].id
    return going_up == (role == "UP")


def brute_force_violations(net, timetable) -> Set[tuple]:
    """Rule findings as comparable keys, checked minute by minute.

    Keys: ("EQ1"|"EQ2"|"EQ3", train, station), ("EQ7", train, (a, b)),
    ("EQ4", station), ("EQ5", track, frozenset of two trains), ("EQ6", train).
    """
    found = set()
    legs_of = defaultdict(list)
    for e in timetable.entries:
        legs_of[e.train].append(e)

    platform_holds = []  # (train, station, minutes)
    track_holds = []  # (train, track id, minutes)
    for number, legs in legs_of.items():
        for e in legs:
            if e.x_AT < e.o_AT:
                found.add(("EQ2", number, e.station))
            if e.platform is not None and not (1 <= e.platform <= net.stations[e.station].platform_count):
                found.add(("EQ3", number, e.station))
            platform_holds.append((number, e.station, e.x_AT, max(e.x_DT, e.x_AT)))
        for a, b in zip(legs, legs[1:]):
            tr = _track_for(net, a, b, a.track)
            if tr is None:
                found.add(("EQ7", number, (a.station, b.station)))
                continue
            if not _usable(net, tr, a.station, b.station):
                # running the wrong way is a breach, but the track is still held
                found.add(("EQ7", number, (a.station, b.station)))
            elif b.x_AT - a.x_DT < tr.journey_time:
                found.add(("EQ1", number, b.station))
            track_holds.append((number, tr.id, set(range(a.x_DT, b.x_AT))))

    # capacity, minute by minute: a pass counts at its instant
    lo = min((s for _, _, s, _ in platform_holds), default=0)
    hi = max((e for _, _, _, e in platform_holds), default=0)
    for st, station in net.stations.items():
        for t in range(lo, hi + 1):
            n = sum(1 for _, s, a, d in platform_holds if s == st and (a <= t < d or a == d == t))
            if n > station.platform_count:
                found.add(("EQ4", st))
                break

    # one train per track per minute
    by_track = defaultdict(list)
    for number, tid, mins in track_holds:
        by_track[tid].append((number, mins))
    for tid, users in by_track.items():
        for i, (n1, m1) in enumerate(users):
            for n2, m2 in users[i + 1:]:
                if n1 != n2 and m1 & m2:
                    found.add(("EQ5", tid, frozenset((n1, n2))))

    # one resource per train per minute; a pass holds its platform for no time
    for number in legs_of:
        held = defaultdict(int)
        for n, _, a, d in platform_holds:
            if n == number and a < d:
                for t in range(a, d):
                    held[t] += 1
        for n, _, mins in track_holds:
            if n == number:
                for t in mins:
                    held[t] += 1
        if any(v > 1 for v in held.values()):
            found.add(("EQ6", number))
    return found


def violation_keys(violations) -> Set[tuple]:
    """Project the package's Violation list onto the oracle's key space."""
    out = set()
    for v in violations:
        if v.rule in ("EQ1", "EQ2", "EQ3"):
            out.add((v.rule, v.train, v.location))
        elif v.rule == "EQ7":
            out.add((v.rule, v.train, tuple(v.location)))
        elif v.rule == "EQ4":
            out.add((v.rule, v.location))
        elif v.rule == "EQ5":
            out.add((v.rule, v.location, frozenset((v.train, v.other))))
        elif v.rule == "EQ6":
            out.add((v.rule, v.train))
    return out


# ----- routes --------------------------------------------------------------------


def dfs_routes(net, origin, dest, avoid_tracks=()) -> List[Tuple[Tuple[str, ...], Tuple[int, ...], int]]:
    """Every loop-free directed route as (stations, tracks, total journey)."""
    avoid_tracks = set(avoid_tracks)
    out = []

    def walk(path, tracks, total):
        here = path[-1]
        if here == dest:
            out.append((tuple(path), tuple(tracks), total))
            return
        for tr in sorted(net.tracks.values(), key=lambda t: t.id):
            if tr.id in avoid_tracks or here not in tr.endpoints:
                continue
            nxt = tr.endpoints[1] if tr.endpoints[0] == here else tr.endpoints[0]
            if nxt in path or not _usable(net, tr, here, nxt):
                continue
            walk(path + [nxt], tracks + [tr.id], total + tr.journey_time)

    walk([origin], [], 0)
    return out


# ----- exhaustive optimum ----------------------------------------------------------


def exhaustive_optimum(net, timetable, t_D, blockages, headway=5, min_dwell=1,
                       span=240) -> Optional[int]:
    """Least total terminal delay over every legal way of finishing the day.

    Same movement rules as the dispatcher is held to (no early arrival or
    departure, minimum dwell at stops, journey times, one train per track,
    headway per track, platform capacity net of blocked platforms, no entry on
    a blocked track, a train caught on a blocked track waits for recovery) but
    every train may wait as long as it likes and take any loop-free way to its
    terminal.  Breadth-first over minutes; states are merged per minute.
    """
    trains = timetable.ordered_trains()
    plans = {n: timetable.itinerary(n) for n in trains}
    terminal = {n: plans[n][-1] for n in trains}
    plat_blocks = [b for b in blockages if b.kind == "platform"]
    track_blocks = [b for b in blockages if b.kind == "track"]

    def blocked_platforms(st, t):
        return sum(1 for b in plat_blocks if b.ref[0] == st and b.start <= t < b.end)

    def track_blocked(tid, t):
        return any(b.ref == tid and b.start <= t < b.end for b in track_blocks)

    def track_block_end(tid, t):
        ends = [b.end for b in track_blocks if b.ref == tid and b.start <= t < b.end]
        return max(ends) if ends else None

    def planned(n, st):
        for e in plans[n]:
            if e.station == st:
                return e
        return None

    def can_reach(frm, dest, seen):
        stack, seen = [frm], set(seen)
        while stack:
            c = stack.pop()
            if c == dest:
                return True
            for tr in net.tracks.values():
                if c in tr.endpoints:
                    o = tr.endpoints[1] if tr.endpoints[0] == c else tr.endpoints[0]
                    if o not in seen and _usable(net, tr, c, o):
                        seen.add(o)
                        stack.append(o)
        return False

    def ready_at(n, st, arrived):
        e = planned(n, st)
        if e is None:
            return arrived
        dwell = min_dwell if e.o_DT > e.o_AT else 0
        return max(e.o_DT, arrived + dwell)

    # initial states at t_D; a movement planned exactly at t_D is still open
    last_dep: Dict[int, int] = {}
    init = {}
    fixed_cost = 0
    for n in trains:
        legs = plans[n]
        if legs[0].x_AT >= t_D:
            init[n] = ("N", legs[0].station, (legs[0].station,), legs[0].o_AT)
            continue
        state = None
        for i, e in enumerate(legs):
            if i + 1 < len(legs):
                tr = _track_for(net, e, legs[i + 1], e.track)
                if e.x_DT < t_D:
                    last_dep[tr.id] = max(last_dep.get(tr.id, e.x_DT), e.x_DT)
            if e.x_AT < t_D <= e.x_DT:
                seen = tuple(x.station for x in legs[:i + 1])
                if i == len(legs) - 1:
                    fixed_cost += e.x_AT - e.o_AT
                    state = ("Z", e.station, max(ready_at(n, e.station, e.x_AT), t_D))
                else:
                    state = ("A", e.station, seen, max(ready_at(n, e.station, e.x_AT), t_D))
                break
            if i + 1 < len(legs) and e.x_DT < t_D <= legs[i + 1].x_AT:
                tr = _track_for(net, e, legs[i + 1], e.track)
                nxt = legs[i + 1]
                arr = max(e.x_DT + tr.journey_time, nxt.o_AT)
                end = track_block_end(tr.id, t_D)
                if end is not None:
                    arr = max(arr, end + max(0, e.x_DT + tr.journey_time - t_D))
                seen = tuple(x.station for x in legs[:i + 2])
                state = ("T", tr.id, nxt.station, seen, arr)
                break
        if state is None:
            fixed_cost += legs[-1].x_AT - legs[-1].o_AT
            state = ("D",)
        init[n] = state

    def norm(t, states, ld):
        # times that no longer constrain anything are clamped to the present
        out = []
        for s in states:
            if s[0] == "N":
                out.append(("N", s[1], s[2], max(s[3], t)))
            elif s[0] == "A":
                out.append(("A", s[1], s[2], max(s[3], t)))
            elif s[0] == "T":
                out.append(("T", s[1], s[2], s[3], max(s[4], t)))
            else:
                out.append(s)
        lds = tuple(sorted((k, v) for k, v in ld.items() if v + headway > t))
        return tuple(out), lds

    # shortest remaining running time to each terminal, for the lower bound
    dist = {}
    for n in trains:
        dest = terminal[n].station
        if dest in dist:
            continue
        d = {st: None for st in net.stations}
        d[dest] = 0
        changed = True
        while changed:
            changed = False
            for tr in net.tracks.values():
                for a, b in (tr.endpoints, tr.endpoints[::-1]):
                    if d[b] is not None and _usable(net, tr, a, b):
                        cand = d[b] + tr.journey_time
                        if d[a] is None or cand < d[a]:
                            d[a] = cand
                            changed = True
        dist[dest] = d

    def bound(t, states):
        lb = 0
        for n, s in zip(trains, states):
            d = dist[terminal[n].station]
            if s[0] in ("N", "A"):
                arr = max(s[3], t) + (d[s[1]] or 0)
            elif s[0] == "T":
                arr = max(s[4], t) + (d[s[2]] or 0)
            else:
                continue
            lb += max(0, arr - terminal[n].o_AT)
        return lb

    start = norm(t_D, [init[n] for n in trains], last_dep)
    heap = [(fixed_cost + bound(t_D, start[0]), t_D, fixed_cost, start)]
    seen = {}
    while heap:
        f, t, cost, (states, lds) = heapq.heappop(heap)
        if all(x[0] == "D" for x in states):
            return cost
        if t > t_D + span or seen.get((t, states, lds), 10 ** 9) <= cost:
            continue
        seen[(t, states, lds)] = cost
        ld = dict(lds)
        opts = []
        for n, s in zip(trains, states):
            o = [(s, None, None, False, 0)]
            kind = s[0]
            if kind == "N" and s[3] <= t:
                st = s[1]
                o.append((("A", st, s[2], ready_at(n, st, t)), st, None, False, 0))
            if kind == "T" and s[4] <= t:
                st, seen_st = s[2], s[3]
                if st == terminal[n].station:
                    e = terminal[n]
                    leave = max(e.o_DT, t + (min_dwell if e.o_DT > e.o_AT else 0))
                    o.append((("Z", st, leave), st, None, False, t - e.o_AT))
                else:
                    o.append((("A", st, seen_st, ready_at(n, st, t)), st, None, False, 0))
                    if ready_at(n, st, t) <= t:
                        for tid, to in _departures(net, n, st, seen_st, terminal[n].station, can_reach):
                            arr_lo = t + net.tracks[tid].journey_time
                            e = planned(n, to)
                            if e is not None:
                                arr_lo = max(arr_lo, e.o_AT)
                            o.append((("T", tid, to, seen_st + (to,), arr_lo), st, tid, True, 0))
            if kind == "A" and s[3] <= t:
                st, seen_st = s[1], s[2]
                for tid, to in _departures(net, n, st, seen_st, terminal[n].station, can_reach):
                    arr_lo = t + net.tracks[tid].journey_time
                    e = planned(n, to)
                    if e is not None:
                        arr_lo = max(arr_lo, e.o_AT)
                    o.append((("T", tid, to, seen_st + (to,), arr_lo), None, tid, False, 0))
            if kind == "Z":
                o = [(("D",), None, None, False, 0)] if s[2] <= t else [(s, None, None, False, 0)]
            opts.append(o)
        for combo in _product(opts):
            new_states = [c[0] for c in combo]
            leaving = [c[2] for c in combo if c[2] is not None]
            if len(set(leaving)) != len(leaving):
                continue
            if any(track_blocked(tid, t) or (tid in ld and t < ld[tid] + headway) for tid in leaving):
                continue
            if not _serializable(net, states, new_states, combo, t, blocked_platforms):
                continue
            new_ld = dict(ld)
            for tid in leaving:
                new_ld[tid] = t
            c_new = cost + sum(c[4] for c in combo)
            key = norm(t + 1, new_states, new_ld)
            heapq.heappush(heap, (c_new + bound(t + 1, key[0]), t + 1, c_new, key))
    return None


def _moves(old, new, combo_entry):
    """The single moves a train makes this minute, in its own order."""
    if new is old:
        return []
    kind = old[0]
    if kind == "N":
        return [("arr", new[1], None)]
    if kind == "Z":
        return [("leave", old[1], None)]
    if kind == "A":
        return [("dep", old[1], new[1])]
    # on a track: arrive, and perhaps pass straight on
    if new[0] == "T":
        return [("arr", old[2], old[1]), ("dep", old[2], new[1])]
    return [("arr", old[2], old[1])]


def _serializable(net, states, new_states, combo, t, blocked_platforms) -> bool:
    """Whether the joint move can be made one train-move at a time.

    Each arrival needs a platform at the moment it happens (a train that
    passed through this minute still counts), and each departure needs its
    track empty at that moment.  Trying every interleaving rules out swaps
    where two trains each wait for the other to go first.
    """
    seqs = [_moves(o, n, c) for o, n, c in zip(states, new_states, combo)]
    if sum(1 for q in seqs if q) == 0:
        return True
    present = defaultdict(int)
    occupied = set()
    for st in states:
        if st[0] in ("A", "Z"):
            present[st[1]] += 1
        elif st[0] == "T":
            occupied.add(st[1])

    def step(idx, present, occupied):
        if all(i == len(q) for i, q in zip(idx, seqs)):
            return True
        for k, q in enumerate(seqs):
            if idx[k] == len(q):
                continue
            op, st, x = q[idx[k]]
            pres, occ = dict(present), set(occupied)
            if op == "arr":
                cap = net.stations[st].platform_count - blocked_platforms(st, t)
                if pres.get(st, 0) + 1 > cap:
                    continue
                pres[st] = pres.get(st, 0) + 1
                if x is not None:
                    occ.discard(x)
            elif op == "dep":
                if x in occ:
                    continue
                occ.add(x)
                if idx[k] == 0:  # standing before this minute; a pass keeps counting
                    pres[st] -= 1
            else:
                pres[st] -= 1
            nxt = list(idx)
            nxt[k] += 1
            if step(nxt, pres, occ):
                return True
        return False

    return step([0] * len(seqs), dict(present), occupied)


def _departures(net, n, st, seen, dest, can_reach):
    out = []
    for tr in sorted(net.tracks.values(), key=lambda x: x.id):
        if st not in tr.endpoints:
            continue
        to = tr.endpoints[1] if tr.endpoints[0] == st else tr.endpoints[0]
        if to in seen or not _usable(net, tr, st, to):
            continue
        if to != dest and not can_reach(to, dest, set(seen) | {to}):
            continue
        out.append((tr.id, to))
    return out


def _product(opts):
    if not opts:
        yield ()
        return
    head, rest = opts[0], opts[1:]
    for r in _product(rest):
        for h in head:
            yield (h,) + r
