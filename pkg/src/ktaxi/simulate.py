"""
Request sequences and the exact small-step Double Coverage simulator.

A request is either Simple(s) — bring a server to s, paying the distance
travelled — or Relocate(s, d) — teleport one server from s to d for free.
Double Coverage serves a simple request in *small steps*: while no server
is at s, every unobstructed server moves one short edge towards s.  A
server is unobstructed iff no other server lies on its path to s; among
co-located servers only the lowest-indexed one is eligible.

The trace records every small step (the sets U of upward movers and B of
downward movers, |B| <= 1, plus the unit moves) and the server positions
at every step boundary, which is exactly what the dual-certificate and
potential modules consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .trees import SubdividedTree


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Request:
    s: int
    d: int | None = None  # destination; None for a simple request

    @property
    def is_relocation(self):
        return self.d is not None

    @property
    def end(self):
        """Where the serving/relocated server sits after the request."""
        return self.d if self.d is not None else self.s


def simple(s: int) -> Request:
    return Request(s)


def relocate(s: int, d: int) -> Request:
    return Request(s, d)


def validate_sequence(seq) -> list[str]:
    """Check the relocation-occupancy invariant; returns violation messages.

    Every Relocate(s, d) must be immediately preceded by a Simple(s) or a
    Relocate(., s), which guarantees an occupant at s for any algorithm.
    """
    problems = []
    for i, r in enumerate(seq):
        if r.is_relocation:
            if i == 0:
                problems.append(f"request 0: relocation with no preceding event")
            elif seq[i - 1].end != r.s:
                problems.append(
                    f"request {i}: relocation from {r.s} but previous event ends at {seq[i-1].end}")
    return problems


@dataclass(frozen=True)
class SmallStep:
    U: tuple          # server indices moving towards the root
    B: tuple          # server indices moving away from the root (at most one)
    moves: tuple      # ((server, frm, to), ...) sorted by server index


@dataclass(frozen=True)
class RequestEvent:
    request: Request
    steps: tuple            # SmallSteps for a simple request, () if occupied
    reloc_server: int | None = None


@dataclass(frozen=True)
class Transition:
    """One unit of trace time: a small step or a relocation."""
    kind: str               # "step" | "reloc"
    req_index: int
    s: int                  # requested vertex
    step: SmallStep | None
    d: int | None = None
    reloc_server: int | None = None


class Trace:
    """Full small-step history of a Double Coverage run."""

    def __init__(self, tree: SubdividedTree, initial, events, boundary_positions,
                 cost_up, cost_down):
        self.tree = tree
        self.initial = tuple(initial)
        self.events = tuple(events)
        # server positions at transition boundaries 0..S
        self.boundary_positions = tuple(boundary_positions)
        self.cost_up = cost_up
        self.cost_down = cost_down
        self.final = self.boundary_positions[-1]

    @property
    def k(self):
        return len(self.initial)

    @property
    def total_cost(self):
        return self.cost_up + self.cost_down

    def transitions(self):
        out = []
        for ri, ev in enumerate(self.events):
            if ev.request.is_relocation:
                out.append(Transition("reloc", ri, ev.request.s, None,
                                      d=ev.request.d, reloc_server=ev.reloc_server))
            else:
                for st in ev.steps:
                    out.append(Transition("step", ri, ev.request.s, st))
        return out

    def request_spans(self):
        """Per request, the (start, end) slice of transition indices."""
        spans = []
        pos = 0
        for ev in self.events:
            n = 1 if ev.request.is_relocation else len(ev.steps)
            spans.append((pos, pos + n))
            pos += n
        return spans


class Simulator:
    """Incremental Double Coverage; drives one request at a time."""

    def __init__(self, tree: SubdividedTree, initial):
        self.tree = tree
        for v in initial:
            if not (0 <= v < tree.n):
                raise SimulationError(f"initial position {v} is not a short vertex")
        self.positions = list(initial)
        self.events = []
        self.boundaries = [tuple(initial)]
        self.cost_up = 0
        self.cost_down = 0

    @property
    def k(self):
        return len(self.positions)

    def _movers(self, s):
        """Indices of unobstructed servers, given the request at s."""
        tree = self.tree
        movers = []
        for i, v in enumerate(self.positions):
            if v == s:
                return []  # somebody already there; caller stops the loop
            # co-location: only the lowest index at v is eligible
            if any(j < i and self.positions[j] == v for j in range(i)):
                continue
            blocked = False
            a = tree.lca(v, s)
            for j, w in enumerate(self.positions):
                if j == i or w == v:
                    continue
                # w lies on the v..s path iff it is on v..a or on a..s
                if (tree.is_ancestor(w, v) and tree.depth[w] >= tree.depth[a]) or \
                   (tree.is_ancestor(a, w) and tree.is_ancestor(w, s)):
                    blocked = True
                    break
            if not blocked:
                movers.append(i)
        return movers

    def apply(self, req: Request):
        tree = self.tree
        if not tree.is_original(req.s) or (req.d is not None and not tree.is_original(req.d)):
            raise SimulationError(f"request at synthetic vertex: {req}")
        if req.is_relocation:
            candidates = [i for i, v in enumerate(self.positions) if v == req.s]
            if not candidates:
                raise SimulationError(
                    f"relocation from {req.s} but no server there (invalid sequence)")
            i = min(candidates)
            self.positions[i] = req.d
            self.events.append(RequestEvent(req, (), reloc_server=i))
            self.boundaries.append(tuple(self.positions))
            return
        steps = []
        guard = tree.n + 1  # progress: min distance to s drops every step
        while req.s not in self.positions:
            guard -= 1
            if guard < 0:
                raise SimulationError("small-step loop failed to make progress")
            movers = self._movers(req.s)
            U, B, moves = [], [], []
            for i in movers:
                frm = self.positions[i]
                to = tree.step_towards(frm, req.s)
                if to == tree.parent[frm]:
                    U.append(i)
                else:
                    B.append(i)
                moves.append((i, frm, to))
            if len(B) > 1:
                raise SimulationError(f"more than one downward mover: {B}")
            for i, frm, to in moves:
                self.positions[i] = to
            self.cost_up += len(U)
            self.cost_down += len(B)
            steps.append(SmallStep(tuple(U), tuple(B), tuple(sorted(moves))))
            self.boundaries.append(tuple(self.positions))
        self.events.append(RequestEvent(req, tuple(steps)))

    def trace(self) -> Trace:
        return Trace(self.tree, self.boundaries[0], self.events, self.boundaries,
                     self.cost_up, self.cost_down)


def run_double_coverage(tree: SubdividedTree, initial, seq) -> Trace:
    """Serve the whole sequence with Double Coverage and return the trace."""
    problems = validate_sequence(seq)
    if problems:
        raise SimulationError("; ".join(problems))
    sim = Simulator(tree, initial)
    for req in seq:
        sim.apply(req)
    return sim.trace()


@dataclass
class TraceReport:
    ok: bool
    violations: list

    def first(self):
        return self.violations[0] if self.violations else None


def verify_trace(trace: Trace) -> TraceReport:
    """Independently re-derive every small step and check all invariants.

    Checks, per step: the recorded movers equal the freshly computed
    unobstructed set; |B| <= 1; U-subtrees (at pre-move positions) are
    pairwise disjoint and avoid s_t; with B={j} they and s_t lie inside
    j's subtree; every move is one short edge towards s_t.  Then the cost
    tallies and the final configuration.
    """
    tree = trace.tree
    bad = []
    sim = Simulator(tree, trace.initial)
    ti = 0
    transitions = trace.transitions()
    for ri, ev in enumerate(trace.events):
        if ev.request.is_relocation:
            ti += 1
            continue
        s = ev.request.s
        for si, st in enumerate(ev.steps):
            pre = trace.boundary_positions[ti]
            sim.positions = list(pre)
            movers = set(sim._movers(s))
            recorded = set(st.U) | set(st.B)
            where = f"request {ri} step {si}"
            if movers != recorded:
                bad.append(f"{where}: movers {sorted(recorded)} != derived {sorted(movers)}")
            if len(st.B) > 1:
                bad.append(f"{where}: B not a singleton: {st.B}")
            for (i, frm, to) in st.moves:
                if pre[i] != frm:
                    bad.append(f"{where}: server {i} recorded at {frm}, trace says {pre[i]}")
                if to != tree.step_towards(frm, s):
                    bad.append(f"{where}: move {frm}->{to} is not one edge towards {s}")
            for a_i, i in enumerate(st.U):
                vi = pre[i]
                if tree.is_ancestor(vi, s):
                    bad.append(f"{where}: U-server {i} subtree contains the request")
                for j in st.U[a_i + 1:]:
                    vj = pre[j]
                    if tree.is_ancestor(vi, vj) or tree.is_ancestor(vj, vi):
                        bad.append(f"{where}: U-subtrees of {i} and {j} intersect")
            if st.B:
                vj = pre[st.B[0]]
                if not tree.is_ancestor(vj, s):
                    bad.append(f"{where}: request outside the B-server subtree")
                for i in st.U:
                    if not tree.is_ancestor(vj, pre[i]):
                        bad.append(f"{where}: U-server {i} outside the B-server subtree")
            ti += 1
    # replay for cost and boundary consistency
    sim = Simulator(tree, trace.initial)
    for ev in trace.events:
        sim.apply(ev.request)
    if tuple(sim.boundaries) != trace.boundary_positions:
        bad.append("boundary positions differ from replay")
    if (sim.cost_up, sim.cost_down) != (trace.cost_up, trace.cost_down):
        bad.append(f"cost tally ({trace.cost_up},{trace.cost_down}) != "
                   f"replayed ({sim.cost_up},{sim.cost_down})")
    if sim.boundaries[-1] != trace.final:
        bad.append("final configuration differs from replay")
    if len(transitions) + 1 != len(trace.boundary_positions):
        bad.append("boundary count does not match transition count")
    return TraceReport(not bad, bad)


@dataclass
class CostSummary:
    total: int
    up: int
    down: int
    per_request: list


def cost_summary(trace: Trace) -> CostSummary:
    per = []
    for ev in trace.events:
        if ev.request.is_relocation:
            per.append(0)
        else:
            per.append(sum(len(st.U) + len(st.B) for st in ev.steps))
    return CostSummary(trace.cost_up + trace.cost_down, trace.cost_up, trace.cost_down, per)
