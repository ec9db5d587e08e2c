"""
Rooted weighted trees, their unit-length subdivision, and metric queries.

Every tree here is rooted, with positive integral edge weights.  Distances
are path sums and therefore exact integers throughout.  The *subdivision*
of a tree splits each edge of weight w into w edges of length 1 ("short
edges"), inserting w-1 synthetic vertices; all simulation and dual
bookkeeping happens on the subdivided tree, while requests and offline
oracles live on the original vertices.

Vertex identity: dense integer ids assigned at build time (root = 0,
remaining vertices in first-appearance order of the edge list).  Synthetic
subdivision vertices get ids above the original range, so ids are stable
and serializable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class TreeError(ValueError):
    """Malformed tree description (cycle, disconnected vertex, bad weight)."""


class WeightedTree:
    """A rooted tree with positive integer edge weights.

    Attributes
    ----------
    n          : number of vertices
    root       : root id (always 0)
    parent     : list, parent[v] is the parent id, None for the root
    weight     : list, weight[v] is the weight of the edge v--parent[v] (0 at root)
    children   : list of sorted child-id lists
    labels     : list of original labels (arbitrary hashables given at build time)
    depth_w    : weighted depth (distance from root)
    depth_c    : combinatorial depth (number of edges from root)
    """

    def __init__(self, parent, weight, labels):
        self.n = len(parent)
        self.root = 0
        self.parent = parent
        self.weight = weight
        self.labels = labels
        self.children = [[] for _ in range(self.n)]
        for v in range(1, self.n):
            self.children[parent[v]].append(v)
        for c in self.children:
            c.sort()
        self.depth_w = [0] * self.n
        self.depth_c = [0] * self.n
        for v in self._topo_order()[1:]:
            p = parent[v]
            self.depth_w[v] = self.depth_w[p] + weight[v]
            self.depth_c[v] = self.depth_c[p] + 1
        self.depth = max(self.depth_c) if self.n else 0
        self._label_to_id = {lab: v for v, lab in enumerate(labels)}

    def _topo_order(self):
        order = [self.root]
        i = 0
        while i < len(order):
            order.extend(self.children[order[i]])
            i += 1
        return order

    def id_of(self, label):
        return self._label_to_id[label]

    def leaves(self):
        return [v for v in range(self.n) if not self.children[v]]

    def check_vertex(self, v):
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise TreeError(f"unknown vertex id {v!r}")

    def lca(self, u, v):
        self.check_vertex(u)
        self.check_vertex(v)
        while self.depth_c[u] > self.depth_c[v]:
            u = self.parent[u]
        while self.depth_c[v] > self.depth_c[u]:
            v = self.parent[v]
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def distance(self, u, v):
        a = self.lca(u, v)
        return self.depth_w[u] + self.depth_w[v] - 2 * self.depth_w[a]

    def upward_distance(self, u, v):
        """Length of the rising part of the path u -> v (u up to lca(u,v))."""
        return self.depth_w[u] - self.depth_w[self.lca(u, v)]

    def diameter(self):
        best = 0
        for u in range(self.n):
            for v in range(u + 1, self.n):
                d = self.distance(u, v)
                if d > best:
                    best = d
        return best

    def uniform_leaf_depth(self):
        """The common weighted depth of all leaves, or None if they differ."""
        depths = {self.depth_w[v] for v in self.leaves()}
        return depths.pop() if len(depths) == 1 else None

    def edge_list(self):
        """[(child_label, parent_label, weight)] in child-id order."""
        return [(self.labels[v], self.labels[self.parent[v]], self.weight[v])
                for v in range(1, self.n)]


def build_tree(edges, root=None):
    """Build a validated WeightedTree from (child, parent, weight) triples.

    Labels may be any hashables.  The root is inferred (the unique parent
    that never appears as a child) unless given explicitly.  Raises
    TreeError on repeated children, cycles, disconnected parts or
    non-positive / non-integer weights.
    """
    if not edges and root is None:
        raise TreeError("empty edge list and no explicit root")
    children_seen = set()
    parents = {}
    weights = {}
    order = []
    for child, parent, w in edges:
        if not isinstance(w, int) or isinstance(w, bool) or w < 1:
            raise TreeError(f"edge ({child!r},{parent!r}) has non-positive weight {w!r}")
        if child in children_seen:
            raise TreeError(f"repeated child {child!r}")
        children_seen.add(child)
        parents[child] = parent
        weights[child] = w
        if parent not in parents and parent not in [o for o in order]:
            order.append(parent)
        order.append(child)
    # deduplicate, preserving first appearance
    seen = set()
    labels_in_order = [x for x in order if not (x in seen or seen.add(x))]
    roots = [lab for lab in labels_in_order if lab not in children_seen]
    if root is not None:
        if root in children_seen:
            raise TreeError(f"declared root {root!r} has a parent")
        roots = [root] + [r for r in roots if r != root]
    if len(roots) != 1:
        raise TreeError(f"expected a single root, found {roots!r} (disconnected or cyclic)")
    root_label = roots[0]
    labels = [root_label] + [lab for lab in labels_in_order if lab != root_label]
    ids = {lab: i for i, lab in enumerate(labels)}
    parent = [None] * len(labels)
    weight = [0] * len(labels)
    for child, par in parents.items():
        if par not in ids:
            raise TreeError(f"parent {par!r} of {child!r} is not a vertex")
        parent[ids[child]] = ids[par]
        weight[ids[child]] = weights[child]
    # reachability from the root proves acyclicity + connectivity
    t = WeightedTree(parent, weight, labels)
    reached = set(t._topo_order())
    if len(reached) != t.n:
        raise TreeError("cycle detected: some vertices unreachable from the root")
    return t


class SubdividedTree:
    """Unit-length refinement of a WeightedTree.

    Short vertices 0..base.n-1 are the original vertices; synthetic vertices
    follow.  ``origin[v]`` maps a synthetic vertex to ``(edge_child,
    offset_below_parent)`` on its long edge; originals map to themselves.

    ``long_depth[v]`` is the combinatorial depth of the long edge a short
    vertex belongs to (the minimal number of long edges on a root path that
    includes v): for an original vertex its own combinatorial depth, for a
    mid-edge vertex the combinatorial depth of the edge's lower endpoint.
    This indexes the per-depth slope bands of the weighted-tree dual.
    """

    def __init__(self, base: WeightedTree):
        self.base = base
        parent = list(base.parent)
        depth = list(base.depth_w)
        long_depth = list(base.depth_c)
        origin = {v: (v, 0) for v in range(base.n)}
        for v in range(1, base.n):
            w = base.weight[v]
            if w == 1:
                continue
            # chain parent = s_0, s_1, ..., s_{w-1}, then v; all unit edges
            prev = base.parent[v]
            for off in range(1, w):
                s = len(parent)
                parent.append(prev)
                depth.append(depth[prev] + 1)
                long_depth.append(base.depth_c[v])
                origin[s] = (v, off)
                prev = s
            parent[v] = prev
            depth[v] = depth[prev] + 1
        self.n = len(parent)
        self.parent = parent
        self.depth = depth
        self.long_depth = long_depth
        self.origin = origin
        self.children = [[] for _ in range(self.n)]
        for v in range(self.n):
            if parent[v] is not None:
                self.children[parent[v]].append(v)
        # Euler intervals for O(1) ancestor tests and subtree enumeration.
        self.tin = [0] * self.n
        self.tout = [0] * self.n
        self._order = []
        stack = [(0, False)]
        clock = 0
        while stack:
            v, done = stack.pop()
            if done:
                self.tout[v] = clock
                continue
            self.tin[v] = clock
            clock += 1
            self._order.append(v)
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))

    @property
    def root(self):
        return 0

    def is_original(self, v):
        return v < self.base.n

    def is_ancestor(self, a, u):
        """True iff a is a (weak) ancestor of u."""
        return self.tin[a] <= self.tin[u] < self.tout[a]

    def subtree(self, v):
        """All short vertices in the subtree rooted at v, preorder."""
        return self._order[self.tin[v]:self.tout[v]]

    def leaves(self):
        return [v for v in range(self.n) if not self.children[v]]

    def distance(self, u, v):
        a = self.lca(u, v)
        return self.depth[u] + self.depth[v] - 2 * self.depth[a]

    def lca(self, u, v):
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def ancestor_at_depth(self, u, d):
        while self.depth[u] > d:
            u = self.parent[u]
        return u

    def step_towards(self, v, target):
        """The neighbour of v on the path to target (one short edge)."""
        if v == target:
            return v
        if self.is_ancestor(v, target):
            return self.ancestor_at_depth(target, self.depth[v] + 1)
        return self.parent[v]

    def uniform_leaf_depth(self):
        depths = {self.depth[v] for v in self.leaves()}
        return depths.pop() if len(depths) == 1 else None

    def height(self, v):
        """Weighted height; defined only on uniform-leaf-depth trees."""
        w = self.uniform_leaf_depth()
        if w is None:
            raise TreeError("weighted height requested on a non-uniform-depth tree")
        return w - self.depth[v]


def subdivide(t: WeightedTree) -> SubdividedTree:
    return SubdividedTree(t)


def vertex_measures(sub: SubdividedTree, u):
    """(weighted_depth, combinatorial_depth, weighted_height or None) of u."""
    if not (0 <= u < sub.n):
        raise TreeError(f"unknown short vertex {u}")
    wd = sub.depth[u]
    cd = sub.long_depth[u]
    uniform = sub.uniform_leaf_depth()
    height = uniform - wd if uniform is not None else None
    return wd, cd, height


@dataclass(frozen=True)
class HstSpec:
    """Uniform-depth tree blueprint: d levels of given lengths, fixed branching."""
    depth: int
    level_lengths: tuple
    branching: int

    def __post_init__(self):
        if self.depth < 1 or self.branching < 1:
            raise TreeError("HstSpec needs depth >= 1 and branching >= 1")
        if len(self.level_lengths) != self.depth:
            raise TreeError("level_lengths must have one entry per level")
        if any(not isinstance(x, int) or x < 1 for x in self.level_lengths):
            raise TreeError("level lengths must be positive integers")


def alpha_hst_spec(alpha: int, depth: int, branching: int) -> HstSpec:
    """Spec of the alpha-HST T: edge lengths alpha^(d-1), ..., alpha^0 root-down."""
    return HstSpec(depth, tuple(alpha ** (depth - 1 - i) for i in range(depth)), branching)


def build_hst(spec: HstSpec):
    """Materialize an HstSpec.  Returns (WeightedTree, leaf ids).

    Labels are dotted child-index paths ("r", "r.0", "r.0.1", ...); the
    associated metric of the tree is its leaf set.
    """
    edges = []
    frontier = ["r"]
    for level in range(spec.depth):
        length = spec.level_lengths[level]
        nxt = []
        for node in frontier:
            for j in range(spec.branching):
                child = f"{node}.{j}"
                edges.append((child, node, length))
                nxt.append(child)
        frontier = nxt
    t = build_tree(edges, root="r")
    return t, [t.id_of(lab) for lab in frontier]


def is_hst(t: WeightedTree, alpha=None):
    """Uniform combinatorial+weighted leaf depth; geometric lengths if alpha given."""
    leaves = t.leaves()
    if len({t.depth_c[v] for v in leaves}) != 1 or len({t.depth_w[v] for v in leaves}) != 1:
        return False
    by_level = {}
    for v in range(1, t.n):
        by_level.setdefault(t.depth_c[v], set()).add(t.weight[v])
    if any(len(ws) != 1 for ws in by_level.values()):
        return False
    if alpha is not None:
        lengths = [by_level[lvl].pop() for lvl in sorted(by_level)]
        for a, b in zip(lengths, lengths[1:]):
            if a != alpha * b:
                return False
    return True


def layer_heights(sub: SubdividedTree):
    """Weighted heights alpha_0 < ... < alpha_d of the node layers of an HST.

    alpha_l is the distance from any vertex at combinatorial height l to the
    leaf layer.  Requires uniform leaf depth.
    """
    base = sub.base
    w = base.uniform_leaf_depth()
    if w is None:
        raise TreeError("layer heights need uniform leaf depth")
    d = base.depth
    alphas = [None] * (d + 1)
    for v in range(base.n):
        lvl = d - base.depth_c[v]
        h = w - base.depth_w[v]
        if alphas[lvl] is None:
            alphas[lvl] = h
        elif alphas[lvl] != h:
            raise TreeError("node layers do not have uniform heights")
    return alphas


class MetricSpace:
    """A finite metric given by an explicit symmetric distance matrix.

    Entries may be ints, Fractions or strings "p/q"; they are normalized to
    Fractions and the metric axioms are verified exactly.
    """

    def __init__(self, dist, points=None):
        n = len(dist)
        self.n = n
        self.points = list(points) if points is not None else list(range(n))
        self.dist = [[Fraction(x) for x in row] for row in dist]
        for i in range(n):
            if self.dist[i][i] != 0:
                raise TreeError("nonzero diagonal in metric")
            for j in range(n):
                if self.dist[i][j] != self.dist[j][i]:
                    raise TreeError("asymmetric metric")
                if i != j and self.dist[i][j] <= 0:
                    raise TreeError("non-positive off-diagonal distance")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.dist[i][j] > self.dist[i][k] + self.dist[k][j]:
                        raise TreeError("triangle inequality violated")

    def index_of(self, point):
        return self.points.index(point)

    def min_positive(self):
        vals = [self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)]
        return min(vals) if vals else None

    def aspect_ratio(self):
        vals = [self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)]
        if not vals:
            return Fraction(1)
        return max(vals) / min(vals)
