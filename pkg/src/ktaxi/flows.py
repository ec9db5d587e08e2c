"""
Exact integral min-cost flow via successive shortest paths with potentials.

Arcs carry (capacity, cost, lower bound), all integers.  Lower bounds are
removed with the standard excess/deficit transformation: each arc (u,v)
with lower bound l ships l units unconditionally (cost accounted as a
constant), creating a deficit at u and an excess at v that a super
source/sink pair must balance.  Costs may be negative only in reduced
form; the solver seeds Dijkstra potentials with one Bellman-Ford pass
when any arc cost is negative.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

INF = 10 ** 18


class FlowInfeasible(RuntimeError):
    pass


@dataclass
class Arc:
    src: int
    dst: int
    cap: int
    cost: int
    lower: int = 0


class FlowNetwork:
    def __init__(self):
        self.n = 0
        self.arcs: list[Arc] = []

    def add_node(self) -> int:
        self.n += 1
        return self.n - 1

    def add_nodes(self, count) -> list[int]:
        return [self.add_node() for _ in range(count)]

    def add_arc(self, src, dst, cap, cost, lower=0) -> int:
        if not (0 <= lower <= cap):
            raise ValueError(f"bad bounds on arc {src}->{dst}: lower={lower} cap={cap}")
        self.arcs.append(Arc(src, dst, cap, cost, lower))
        return len(self.arcs) - 1


class _Residual:
    """Adjacency-list residual graph; arc i and i^1 are a forward/backward pair."""

    def __init__(self, n):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to = []
        self.cap = []
        self.cost = []

    def add(self, u, v, cap, cost):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        self.cost.append(-cost)

    def ssp(self, s, t, want):
        """Push up to `want` units s->t; returns (sent, cost)."""
        n = self.n
        pot = [0] * n
        if any(c < 0 for c in self.cost[::2]):
            # Bellman-Ford over residual arcs with capacity
            dist = [INF] * n
            dist[s] = 0
            for _ in range(n - 1):
                changed = False
                for u in range(n):
                    if dist[u] == INF:
                        continue
                    for e in self.head[u]:
                        if self.cap[e] > 0 and dist[u] + self.cost[e] < dist[self.to[e]]:
                            dist[self.to[e]] = dist[u] + self.cost[e]
                            changed = True
                if not changed:
                    break
            pot = [d if d < INF else 0 for d in dist]
        sent = 0
        total = 0
        while sent < want:
            dist = [INF] * n
            prev = [-1] * n
            dist[s] = 0
            pq = [(0, s)]
            while pq:
                d, u = heapq.heappop(pq)
                if d > dist[u]:
                    continue
                for e in self.head[u]:
                    if self.cap[e] <= 0:
                        continue
                    v = self.to[e]
                    nd = d + self.cost[e] + pot[u] - pot[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        heapq.heappush(pq, (nd, v))
            if dist[t] == INF:
                break
            for v in range(n):
                if dist[v] < INF:
                    pot[v] += dist[v]
            # bottleneck along the path
            push = want - sent
            v = t
            while v != s:
                e = prev[v]
                push = min(push, self.cap[e])
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = prev[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                total += push * self.cost[e]
                v = self.to[e ^ 1]
            sent += push
        return sent, total


def min_cost_flow(net: FlowNetwork, source: int, sink: int, value: int):
    """Ship exactly `value` units source->sink honouring lower bounds.

    Returns (cost, flows) with flows[i] the flow on net.arcs[i].
    Raises FlowInfeasible when the demand or a lower bound cannot be met.
    """
    n = net.n
    res = _Residual(n + 2)
    super_s, super_t = n, n + 1
    excess = [0] * n
    base_cost = 0
    arc_slots = []
    for a in net.arcs:
        arc_slots.append(len(res.to))
        res.add(a.src, a.dst, a.cap - a.lower, a.cost)
        if a.lower:
            excess[a.dst] += a.lower
            excess[a.src] -= a.lower
            base_cost += a.lower * a.cost
    # the requested value is a lower bound on the sink->source return arc
    excess[source] += value
    excess[sink] -= value
    return_slot = len(res.to)
    res.add(sink, source, 0, 0)  # extra headroom not allowed: exact value
    need = 0
    for v in range(n):
        if excess[v] > 0:
            res.add(super_s, v, excess[v], 0)
            need += excess[v]
        elif excess[v] < 0:
            res.add(v, super_t, -excess[v], 0)
    sent, cost = res.ssp(super_s, super_t, need)
    if sent < need:
        raise FlowInfeasible("lower bounds / demand not satisfiable")
    flows = []
    for i, a in enumerate(net.arcs):
        slot = arc_slots[i]
        flows.append(a.lower + res.cap[slot ^ 1])
    return base_cost + cost, flows
