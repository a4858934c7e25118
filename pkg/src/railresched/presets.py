"""The four railway nets: the general model and one net per disaster case.

PN2-PN4 reproduce the published incidence matrices exactly; arcs that cancel
out in the matrix (pure decision transitions) carry no agent arcs at all.
PN1 has no published matrix, so its arcs follow the place/transition
descriptions.
"""
from __future__ import annotations

from typing import Tuple

from .petri import COLOUR, FUNCTION, IMMEDIATE, PLAIN, ColourRule, Marking, PetriNet


def _chain(*pairs):
    """Expand ``(transition, [inputs], [outputs])`` triples into arc lists."""
    ins, outs = [], []
    for tr, pre, post in pairs:
        ins += [(p, tr) for p in pre]
        outs += [(tr, p) for p in post]
    return ins, outs


def _pn1() -> Tuple[PetriNet, Tuple[int, ...]]:
    fc = {"P5", "P6", "P7", "P8", "P9"}
    places = [(f"P{i}", FUNCTION if f"P{i}" in fc else PLAIN) for i in range(1, 15)]
    guards = {
        "Tr5": {"ct1"}, "Tr6": {"ct2"}, "Tr7": {"ct3"}, "Tr8": {"ct4"},
        "Tr9": {"ct5"}, "Tr10": {"ct6"}, "Tr11": {"ct8"}, "Tr12": {"ct9"},
        "Tr13": {"ct7"},
    }
    transitions = [(f"Tr{i}", COLOUR if f"Tr{i}" in guards else IMMEDIATE) for i in range(1, 20)]
    ins, outs = _chain(
        ("Tr1", ["P1"], ["P3"]),
        ("Tr2", ["P2"], ["P4"]),
        ("Tr3", ["P3"], ["P5"]),
        ("Tr4", ["P4"], ["P6"]),
        ("Tr5", ["P5"], ["P8"]),
        ("Tr6", ["P5"], ["P7"]),
        ("Tr7", ["P6"], ["P7"]),
        ("Tr8", ["P6"], ["P9"]),
        ("Tr9", ["P8"], ["P13"]),
        ("Tr10", ["P8"], ["P11"]),
        ("Tr11", ["P9"], ["P14"]),
        ("Tr12", ["P9"], ["P12"]),
        ("Tr13", ["P7"], ["P11"]),
        ("Tr14", ["P13"], ["P11"]),
        ("Tr15", ["P12"], ["P14"]),
        ("Tr16", ["P11"], ["P14"]),
        ("Tr17", ["P14"], ["P4"]),
        ("Tr18", ["P14"], ["P10"]),
        ("Tr19", ["P10"], ["P1"]),
    )
    rules = {
        "P5": ColourRule("junction_ahead_j", "ct2", "ct1"),
        "P6": ColourRule("junction_ahead_j2", "ct3", "ct4"),
        # Tr13 couples to train priority, which the net cannot decide itself
        "P7": ColourRule("platform_free_for_top_priority", "ct7", None),
        "P8": ColourRule("platform_free_j", "ct6", "ct5"),
        "P9": ColourRule("platform_free_j2", "ct8", "ct9"),
    }
    net = PetriNet(places, transitions, ins, outs, rules, guards, name="PN1")
    return net, (1, 1) + (0,) * 12


def _pn2():
    places = [("P1", FUNCTION), ("P2", FUNCTION), ("P3", FUNCTION), ("P4", FUNCTION),
              ("P5", PLAIN), ("P6", PLAIN), ("P7", PLAIN)]
    guards = {"Tr1": {"ct1", "ct3"}, "Tr2": {"ct2", "ct4"}, "Tr3": {"ct5"},
              "Tr4": {"ct6"}, "Tr5": {"ct7"}}
    transitions = [(f"Tr{i}", COLOUR if f"Tr{i}" in guards else IMMEDIATE) for i in range(1, 9)]
    ins, outs = _chain(
        ("Tr1", [], []),  # no platform: the train keeps waiting, nothing moves
        ("Tr2", ["P1", "P2"], ["P3"]),
        ("Tr3", ["P3"], ["P2", "P4"]),
        ("Tr4", ["P4"], ["P5"]),
        ("Tr5", ["P4"], ["P7"]),
        ("Tr6", ["P5"], ["P6"]),
        ("Tr7", ["P6"], ["P1"]),
        ("Tr8", ["P7"], ["P4"]),
    )
    rules = {
        "P1": ColourRule("platform_free_j", "ct2", "ct1"),
        "P2": ColourRule("platform_free_j2", "ct4", "ct3"),
        "P3": ColourRule("j_highest_priority", "ct5", None),
        "P4": ColourRule("resources_available", "ct6", "ct7"),
    }
    net = PetriNet(places, transitions, ins, outs, rules, guards, name="PN2")
    return net, (1, 1, 0, 0, 0, 0, 0)


def _pn3():
    places = [("P1", PLAIN), ("P2", PLAIN), ("P3", FUNCTION), ("P4", PLAIN),
              ("P5", FUNCTION), ("P6", PLAIN)]
    guards = {"Tr2": {"ct1"}, "Tr4": {"ct2"}, "Tr5": {"ct3"}}
    transitions = [(f"Tr{i}", COLOUR if f"Tr{i}" in guards else IMMEDIATE) for i in range(1, 6)]
    ins, outs = _chain(
        ("Tr1", ["P1", "P2"], ["P3"]),
        ("Tr2", ["P3"], ["P1", "P4"]),
        ("Tr3", ["P1", "P4"], ["P5"]),
        ("Tr4", [], ["P6"]),
        ("Tr5", [], ["P6"]),
    )
    rules = {
        "P3": ColourRule("j_highest_priority", "ct1", None),
        "P5": ColourRule("reorder_needed", "ct2", "ct3"),
    }
    net = PetriNet(places, transitions, ins, outs, rules, guards, name="PN3")
    return net, (2, 3, 0, 0, 0, 0)


def _pn4():
    places = [("P1", FUNCTION), ("P2", PLAIN), ("P3", PLAIN), ("P4", PLAIN),
              ("P5", PLAIN), ("P6", PLAIN)]
    guards = {"Tr1": {"ct1"}}
    transitions = [("Tr1", COLOUR), ("Tr2", IMMEDIATE), ("Tr3", IMMEDIATE)]
    ins, outs = _chain(
        ("Tr1", ["P1", "P2"], ["P3"]),
        ("Tr2", ["P3", "P5"], ["P4"]),
        ("Tr3", ["P4"], ["P2", "P6"]),
    )
    rules = {"P1": ColourRule("j_highest_priority", "ct1", None)}
    net = PetriNet(places, transitions, ins, outs, rules, guards, name="PN4")
    return net, (2, 1, 0, 0, 1, 0)


_BUILDERS = {"PN1": _pn1, "PN2": _pn2, "PN3": _pn3, "PN4": _pn4}
PRESETS = tuple(_BUILDERS)


def build_preset(which: str, **inputs) -> Tuple[PetriNet, Marking]:
    """Return ``(net, M0)``; sensing inputs default to open (both outcomes)."""
    try:
        builder = _BUILDERS[which.upper()]
    except KeyError:
        raise ValueError(f"unknown preset {which!r}; choose one of {', '.join(PRESETS)}") from None
    net, counts = builder()
    if inputs:
        net = net.with_inputs(**inputs)
    return net, net.marking(counts)
