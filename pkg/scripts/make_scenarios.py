"""Regenerate the bundled scenario and Petri-net files.

    python3 scripts/make_scenarios.py
"""
from __future__ import annotations

from railresched.io.formats import DATA_DIR, ScenarioSpec, parse_hhmm, serialize_petri, serialize_scenario
from railresched.presets import PRESETS, build_preset
from railresched.rescheduler.recovery import DisasterEvent, RecoveryModel

NET, TT = "bundled:network.tsv", "bundled:timetable.tsv"

# id, note, time, blocked platforms, blocked tracks, recovery window
SCENARIOS = [
    ("sc1", "morning: three of four platforms lost at BLY", "06:00",
     [("BLY", 1), ("BLY", 2), ("BLY", 3)], [], (20, 40)),
    ("sc2", "morning: one KAN platform and the KAN-PAN UP track", "07:10",
     [("KAN", 1)], [16], (20, 40)),
    ("sc3", "morning: one RNG platform and the RNG-ASN UP track", "07:50",
     [("RNG", 1)], [24], (20, 40)),
    ("sc4", "midday: BWN, KAN and the BWN-KAN general track, no train impacted", "13:00",
     [("BWN", 1), ("BWN", 2), ("KAN", 1)], [15], (20, 40)),
    ("sc5", "evening peak: two DGR platforms and the PAN-DGR DOWN track", "18:00",
     [("DGR", 1), ("DGR", 2)], [19], (20, 40)),
    ("sc6", "evening: ASN and STN platforms and the ASN-STN general track", "20:00",
     [("ASN", 1), ("ASN", 2), ("STN", 1)], [26], (20, 40)),
    ("sc7", "evening: two UDL platforms and the DGR-UDL DOWN track", "19:00",
     [("UDL", 1), ("UDL", 2)], [21], (20, 40)),
]


def main():
    out = DATA_DIR / "scenarios"
    out.mkdir(parents=True, exist_ok=True)
    for sid, note, t, plats, tracks, (t1, t2) in SCENARIOS:
        ev = DisasterEvent(parse_hhmm(t), frozenset(plats), frozenset(tracks),
                           RecoveryModel(t1, t2, "uniform"), "E1")
        spec = ScenarioSpec(sid, NET, TT, 7, [ev])
        (out / f"{sid}.scn").write_text(f"# {note}\n" + serialize_scenario(spec))
    quiet = ScenarioSpec("nodisaster", NET, TT, 7)
    (out / "nodisaster.scn").write_text("# a full day without any disaster\n" + serialize_scenario(quiet))

    pdir = DATA_DIR / "petri"
    pdir.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        net, m0 = build_preset(name)
        (pdir / f"{name.lower()}.pn").write_text(serialize_petri(net, m0))


if __name__ == "__main__":
    main()
