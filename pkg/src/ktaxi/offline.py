"""
Exact offline optima for k-taxi instances.

Event model: each request is an event (s, end) — a simple request ends at
s, a relocation at d.  An offline schedule picks one server per event,
pays the distance from that server to s, and the server then sits at end.
Choosing an occupant of s costs 0; choosing a farther server is the
"voluntary move" the LP permits at the adjacent movement step.  Servers
are interchangeable, so configurations are multisets.

Two independent solvers are provided: a configuration-space dynamic
program for tiny instances and a min-cost-flow reduction (one unit of
flow per server, one mandatory unit through every event) for anything
larger.  They must agree wherever both run; the test suite enforces it.

Cost modes: "full" charges the whole serving path, "up" only its rising
part (towards the root) — the objective of the upward-movement LP used by
the monotone dual certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .flows import FlowNetwork, min_cost_flow
from .potentials import min_assignment
from .trees import WeightedTree


class BudgetExceeded(RuntimeError):
    pass


class OracleError(ValueError):
    pass


@dataclass
class OfflineSchedule:
    """Per-event serving choices plus the optional fixed-final tail."""
    moves: list            # per event: (serving_from_vertex, cost)
    tail: list             # [(from_vertex, to_vertex, cost)] after the last event
    final: tuple           # multiset (sorted) after events, before the tail
    total: int


def _dist_fn(tree: WeightedTree, cost_mode: str):
    if cost_mode == "full":
        return tree.distance
    if cost_mode == "up":
        return tree.upward_distance
    raise OracleError(f"unknown cost mode {cost_mode!r}")


def _events(seq):
    return [(r.s, r.end) for r in seq]


def _final_matching(state, fixed_final, dist):
    if len(fixed_final) != len(state):
        raise OracleError("fixed_final has the wrong number of servers")
    targets = sorted(fixed_final)
    matrix = [[dist(u, v) for v in targets] for u in state]
    cost, assignment = min_assignment(matrix)
    tail = [(state[i], targets[assignment[i]], matrix[i][assignment[i]])
            for i in range(len(state))]
    return cost, tail


def optimal_cost_dp(tree: WeightedTree, init, seq, fixed_final=None,
                    cost_mode="full", budget=10_000_000):
    """Exact optimum by DP over multiset configurations."""
    dist = _dist_fn(tree, cost_mode)
    k = len(init)
    states_bound = comb(tree.n + k - 1, k) * (len(seq) + 1)
    if states_bound > budget:
        raise BudgetExceeded(f"{states_bound} DP states exceed budget {budget}")
    start = tuple(sorted(init))
    layer = {start: (0, None, None)}  # state -> (cost, prev_state, moved_from)
    layers = [layer]
    for (s, end) in _events(seq):
        nxt = {}
        for state, (cost, _, _) in layer.items():
            for i, u in enumerate(state):
                if i > 0 and state[i - 1] == u:
                    continue  # identical choice
                c = cost + dist(u, s)
                new = tuple(sorted(state[:i] + state[i + 1:] + (end,)))
                if new not in nxt or c < nxt[new][0]:
                    nxt[new] = (c, state, u)
        layer = nxt
        layers.append(layer)
    best_state, best_cost, best_tail = None, None, []
    for state, (cost, _, _) in layer.items():
        tail = []
        total = cost
        if fixed_final is not None:
            extra, tail = _final_matching(state, fixed_final, dist)
            total += extra
        if best_cost is None or total < best_cost:
            best_state, best_cost, best_tail = state, total, tail
    # reconstruct serving choices
    moves = []
    state = best_state
    for t in range(len(layers) - 1, 0, -1):
        cost, prev, frm = layers[t][state]
        moves.append((frm, cost - layers[t - 1][prev][0]))
        state = prev
    moves.reverse()
    return best_cost, OfflineSchedule(moves, best_tail, best_state, best_cost)


def optimal_cost_flow(tree: WeightedTree, init, seq, fixed_final=None,
                      cost_mode="full"):
    """Exact optimum by min-cost flow: k source units, a mandatory unit
    arc through every event, free (or final-slot) drains to the sink."""
    dist = _dist_fn(tree, cost_mode)
    events = _events(seq)
    k = len(init)
    net = FlowNetwork()
    source = net.add_node()
    sink = net.add_node()
    init_nodes = net.add_nodes(k)
    arrive = net.add_nodes(len(events))
    depart = net.add_nodes(len(events))
    for i in range(k):
        net.add_arc(source, init_nodes[i], 1, 0)
    serving_arcs = []
    into: dict[int, list] = {a: [] for a in arrive}
    for e, (s, end) in enumerate(events):
        serving_arcs.append(net.add_arc(arrive[e], depart[e], 1, 0, lower=1))
        for i in range(k):
            aid = net.add_arc(init_nodes[i], arrive[e], 1, dist(init[i], s))
            into[arrive[e]].append((aid, init[i]))
        for f in range(e):
            aid = net.add_arc(depart[f], arrive[e], 1, dist(events[f][1], s))
            into[arrive[e]].append((aid, events[f][1]))
    if fixed_final is None:
        for i in range(k):
            net.add_arc(init_nodes[i], sink, 1, 0)
        for e in range(len(events)):
            net.add_arc(depart[e], sink, 1, 0)
        tail_arcs = []
    else:
        if len(fixed_final) != k:
            raise OracleError("fixed_final has the wrong number of servers")
        slots = net.add_nodes(k)
        targets = sorted(fixed_final)
        tail_arcs = []
        for q in range(k):
            net.add_arc(slots[q], sink, 1, 0)
            for i in range(k):
                aid = net.add_arc(init_nodes[i], slots[q], 1, dist(init[i], targets[q]))
                tail_arcs.append((aid, init[i], targets[q]))
            for e in range(len(events)):
                aid = net.add_arc(depart[e], slots[q], 1, dist(events[e][1], targets[q]))
                tail_arcs.append((aid, events[e][1], targets[q]))
    cost, flows = min_cost_flow(net, source, sink, k)
    moves = []
    for e, (s, end) in enumerate(events):
        frm = None
        for aid, pos in into[arrive[e]]:
            if flows[aid]:
                frm = pos
                break
        moves.append((frm, dist(frm, s)))
    tail = [(u, v, dist(u, v)) for aid, u, v in tail_arcs if flows[aid]]
    final = _replay_final(init, seq, moves)
    return cost, OfflineSchedule(moves, tail, final, cost)


def _replay_final(init, seq, moves):
    state = sorted(init)
    for (s, end), (frm, _) in zip(_events(seq), moves):
        state.remove(frm)
        state.append(end)
        state.sort()
    return tuple(state)


def verify_offline_schedule(tree: WeightedTree, init, seq, schedule: OfflineSchedule,
                            cost_mode="full"):
    """Replay a schedule, checking feasibility; returns (full_cost, up_cost)."""
    state = sorted(init)
    full = up = 0
    for (s, end), (frm, _) in zip(_events(seq), schedule.moves):
        if frm is None:
            frm = s
        if frm not in state:
            raise OracleError(f"schedule moves a server from {frm} but none is there")
        state.remove(frm)
        state.append(end)
        state.sort()
        full += tree.distance(frm, s)
        up += tree.upward_distance(frm, s)
    for (u, v, _) in schedule.tail:
        if u not in state:
            raise OracleError(f"tail moves a server from {u} but none is there")
        state.remove(u)
        state.append(v)
        state.sort()
        full += tree.distance(u, v)
        up += tree.upward_distance(u, v)
    return full, up
