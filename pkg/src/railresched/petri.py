"""Coloured Petri nets with agent tokens and decision colour tokens.

Agent (resource) tokens are counted per place.  Colour tokens are generated by
function places when an agent token arrives, enable exactly one colour
transition firing, and are then consumed (they never propagate).  A colour
token whose sensing input is left open (``None``) is kept *pending*: it stands
for every colour the function could have produced, and firing resolves it to
the colour the transition needed.  This lets a single marking graph cover both
outcomes of every environmental check.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    InvalidNet,
    MarkingDimensionMismatch,
    NodeBudgetExceeded,
    TransitionNotEnabled,
)

PLAIN = "N"
FUNCTION = "fc"
IMMEDIATE = "I"
COLOUR = "C"


@dataclass(frozen=True)
class ColourRule:
    """Token-generation function of a function place.

    On arrival of an agent token the place emits ``when_true`` or
    ``when_false`` depending on the boolean sensing input ``input``.
    Either colour may be ``None`` (nothing is emitted for that outcome).
    """

    input: str
    when_true: Optional[str]
    when_false: Optional[str] = None

    def options(self, value: Optional[bool]) -> FrozenSet[str]:
        if value is True:
            picked = {self.when_true}
        elif value is False:
            picked = {self.when_false}
        else:
            picked = {self.when_true, self.when_false}
        return frozenset(c for c in picked if c is not None)


@dataclass(frozen=True)
class Marking:
    counts: Tuple[int, ...]
    colours: FrozenSet[Tuple[str, FrozenSet[str]]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative token count in {self.counts}")

    def colour_at(self, place: str) -> FrozenSet[str]:
        for p, opts in self.colours:
            if p == place:
                return opts
        return frozenset()

    def with_colour(self, place: str, colour: str) -> "Marking":
        rest = {(p, o) for p, o in self.colours if p != place}
        return Marking(self.counts, frozenset(rest | {(place, frozenset([colour]))}))

    def without_colours(self) -> "Marking":
        return Marking(self.counts)

    def __str__(self):
        body = ", ".join(str(c) for c in self.counts)
        if not self.colours:
            return f"[{body}]"
        cols = " ".join(f"{p}:{'|'.join(sorted(o))}" for p, o in sorted(self.colours))
        return f"[{body}] {{{cols}}}"


@dataclass
class PetriNet:
    places: List[Tuple[str, str]]
    transitions: List[Tuple[str, str]]
    input_arcs: List[Tuple[str, str]]
    output_arcs: List[Tuple[str, str]]
    colour_rules: Dict[str, ColourRule] = field(default_factory=dict)
    guards: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    inputs: Dict[str, Optional[bool]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.place_ids = [p for p, _ in self.places]
        self.transition_ids = [t for t, _ in self.transitions]
        self._pidx = {p: i for i, p in enumerate(self.place_ids)}
        self._tidx = {t: i for i, t in enumerate(self.transition_ids)}
        if len(self._pidx) != len(self.places) or len(self._tidx) != len(self.transitions):
            raise InvalidNet("duplicate place or transition id")
        self.guards = {t: frozenset(g) for t, g in self.guards.items()}
        self._pre = {t: Counter() for t in self.transition_ids}
        self._post = {t: Counter() for t in self.transition_ids}
        for p, t in self.input_arcs:
            self._check_arc(p, t)
            self._pre[t][p] += 1
        for t, p in self.output_arcs:
            self._check_arc(p, t)
            self._post[t][p] += 1
        kinds = dict(self.transitions)
        for t in self.transition_ids:
            if kinds[t] == COLOUR and not self.guards.get(t):
                raise InvalidNet(f"colour transition {t} has no guard")
            if kinds[t] == IMMEDIATE and t in self.guards:
                raise InvalidNet(f"immediate transition {t} carries a guard")
        pkinds = dict(self.places)
        for p in self.colour_rules:
            if pkinds.get(p) != FUNCTION:
                raise InvalidNet(f"colour rule attached to non-function place {p}")

    def _check_arc(self, p, t):
        if p not in self._pidx:
            raise InvalidNet(f"arc references unknown place {p}")
        if t not in self._tidx:
            raise InvalidNet(f"arc references unknown transition {t}")

    @property
    def colour_tokens(self) -> List[str]:
        seen = []
        for rule in self.colour_rules.values():
            for c in (rule.when_true, rule.when_false):
                if c is not None and c not in seen:
                    seen.append(c)
        return sorted(seen, key=_natural_key)

    def place_index(self, place: str) -> int:
        return self._pidx[place]

    def pre(self, transition: str) -> Counter:
        return self._pre[transition]

    def post(self, transition: str) -> Counter:
        return self._post[transition]

    def is_colour(self, transition: str) -> bool:
        return transition in self.guards

    def with_inputs(self, **values: Optional[bool]) -> "PetriNet":
        merged = dict(self.inputs)
        merged.update(values)
        return PetriNet(self.places, self.transitions, self.input_arcs, self.output_arcs,
                        self.colour_rules, self.guards, merged, self.name)

    def marking(self, counts: Sequence[int], settle: bool = True) -> Marking:
        """Build a marking; ``settle`` runs every function place holding tokens."""
        if len(counts) != len(self.places):
            raise MarkingDimensionMismatch(f"expected {len(self.places)} entries, got {len(counts)}")
        m = Marking(tuple(counts))
        if not settle:
            return m
        cols = {}
        for p, rule in self.colour_rules.items():
            if m.counts[self._pidx[p]] > 0:
                opts = rule.options(self.inputs.get(rule.input))
                if opts:
                    cols[p] = opts
        return Marking(m.counts, frozenset(cols.items()))


def _natural_key(s: str):
    head = s.rstrip("0123456789")
    tail = s[len(head):]
    return (head, int(tail) if tail else -1)


def _check_dim(net: PetriNet, m: Marking):
    if len(m.counts) != len(net.places):
        raise MarkingDimensionMismatch(f"marking has {len(m.counts)} entries, net has {len(net.places)} places")


def incidence_matrix(net: PetriNet) -> np.ndarray:
    """Places x transitions matrix: output arcs minus input arcs."""
    a = np.zeros((len(net.places), len(net.transitions)), dtype=int)
    for v, t in enumerate(net.transition_ids):
        for p, w in net.post(t).items():
            a[net.place_index(p), v] += w
        for p, w in net.pre(t).items():
            a[net.place_index(p), v] -= w
    return a


def _guard_source(net: PetriNet, m: Marking, transition: str) -> Optional[str]:
    guard = net.guards[transition]
    for p in net.place_ids:
        if m.colour_at(p) & guard:
            return p
    return None


def is_enabled(net: PetriNet, m: Marking, transition: str) -> bool:
    for p, w in net.pre(transition).items():
        if m.counts[net.place_index(p)] < w:
            return False
    if net.is_colour(transition):
        return _guard_source(net, m, transition) is not None
    return True


def enabled_transitions(net: PetriNet, m: Marking) -> set:
    _check_dim(net, m)
    return {t for t in net.transition_ids if is_enabled(net, m, t)}


def fire(net: PetriNet, m: Marking, transition: str) -> Marking:
    _check_dim(net, m)
    if transition not in net.transition_ids:
        raise InvalidNet(f"unknown transition {transition}")
    if not is_enabled(net, m, transition):
        raise TransitionNotEnabled(transition)
    counts = list(m.counts)
    cols = dict(m.colours)
    for p, w in net.pre(transition).items():
        counts[net.place_index(p)] -= w
    if net.is_colour(transition):
        del cols[_guard_source(net, m, transition)]
    for p in list(cols):
        if counts[net.place_index(p)] == 0:
            del cols[p]
    for p, w in net.post(transition).items():
        counts[net.place_index(p)] += w
        rule = net.colour_rules.get(p)
        if rule is not None:
            opts = rule.options(net.inputs.get(rule.input))
            if opts:
                cols[p] = opts
            else:
                cols.pop(p, None)
    return Marking(tuple(counts), frozenset(cols.items()))


def occurrence_vector(net: PetriNet, sigma: Sequence[str]) -> np.ndarray:
    x = np.zeros(len(net.transitions), dtype=int)
    for t in sigma:
        if t not in net.transition_ids:
            raise InvalidNet(f"unknown transition {t}")
        x[net.transition_ids.index(t)] += 1
    return x


def fire_sequence(net: PetriNet, m0: Marking, sigma: Sequence[str]) -> Tuple[Marking, np.ndarray]:
    """Fire ``sigma`` in order; returns the final marking and X_sigma."""
    m = m0
    for i, t in enumerate(sigma):
        try:
            m = fire(net, m, t)
        except TransitionNotEnabled:
            raise TransitionNotEnabled(t, i) from None
    return m, occurrence_vector(net, sigma)


def state_equation(net: PetriNet, m0: Marking, sigma: Sequence[str]) -> np.ndarray:
    return np.asarray(m0.counts, dtype=int) + incidence_matrix(net) @ occurrence_vector(net, sigma)


def check_state_equation(net: PetriNet, m0: Marking, sigma: Sequence[str], m_expected) -> bool:
    _check_dim(net, m0)
    expected = m_expected.counts if isinstance(m_expected, Marking) else tuple(m_expected)
    if len(expected) != len(net.places):
        raise MarkingDimensionMismatch("expected marking has the wrong dimension")
    return bool(np.array_equal(state_equation(net, m0, sigma), np.asarray(expected, dtype=int)))


@dataclass
class TreeNode:
    index: int
    marking: Marking
    parent: Optional[int]
    via: Optional[str]
    depth: int
    old: bool = False
    old_counts: bool = False


@dataclass
class ReachabilityTree:
    nodes: List[TreeNode]
    edges: List[Tuple[int, str, int]]

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def markings(self) -> List[Marking]:
        return [n.marking for n in self.nodes]

    def count_vectors(self) -> set:
        return {n.marking.counts for n in self.nodes}


@dataclass
class ReachabilityResult:
    tree: ReachabilityTree
    bound: int
    dead_transitions: set

    def __iter__(self):
        return iter((self.tree, self.bound, self.dead_transitions))


def reachability_analysis(net: PetriNet, m0: Marking, max_nodes: int = 10_000) -> ReachabilityResult:
    """Breadth-first reachability tree with 'old' cutoff.

    A node is *old* when its full marking (counts and colour tokens) was seen
    before; old nodes are kept as leaves.  ``old_counts`` additionally flags
    nodes whose count vector alone repeats, which is how hand-drawn trees
    usually mark them.
    """
    if max_nodes <= 0:
        raise ValueError("max_nodes must be positive")
    _check_dim(net, m0)
    nodes = [TreeNode(0, m0, None, None, 0)]
    edges: List[Tuple[int, str, int]] = []
    seen = {m0}
    seen_counts = {m0.counts}
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            node = nodes[idx]
            for t in net.transition_ids:
                if not is_enabled(net, node.marking, t):
                    continue
                m2 = fire(net, node.marking, t)
                if len(nodes) >= max_nodes:
                    raise NodeBudgetExceeded(f"more than {max_nodes} nodes; finiteness not confirmed")
                child = TreeNode(len(nodes), m2, idx, t, node.depth + 1,
                                 old=m2 in seen, old_counts=m2.counts in seen_counts)
                nodes.append(child)
                edges.append((idx, t, child.index))
                if not child.old:
                    seen.add(m2)
                    seen_counts.add(m2.counts)
                    nxt.append(child.index)
        frontier = nxt
    bound = max(max(n.marking.counts, default=0) for n in nodes)
    fired = {t for _, t, _ in edges}
    dead = {t for t in net.transition_ids if t not in fired}
    return ReachabilityResult(ReachabilityTree(nodes, edges), bound, dead)


def net_summary(net: PetriNet) -> Mapping[str, int]:
    return {
        "places": len(net.places),
        "transitions": len(net.transitions),
        "colour_tokens": len(net.colour_tokens),
    }
