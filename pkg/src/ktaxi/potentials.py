"""
Closed-form competitive-ratio tables, potential functions, and the
per-step inequality checker.

c(k, d) = sum_{h=1}^{min(k,d)} binom(k, h) is the number of non-empty
server sets of size at most d; it satisfies the recurrence
c(k, d) = k + sum_{i<k} c(i, d-1) and equals 2^k - 1 once d >= k.

The band table (m_i, M_i) gives the per-depth slope bounds of the
weighted-tree dual; its defining inequalities are verified exactly at
construction time.  Everything here is exact big-integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb

from .trees import SubdividedTree, WeightedTree, layer_heights


def c_kd(k: int, d: int) -> int:
    if k < 0 or d < 0:
        raise ValueError("c_kd needs k, d >= 0")
    return sum(comb(k, h) for h in range(1, min(k, d) + 1))


def c_kd_recurrence(k: int, d: int) -> int:
    """k + sum_{i=0}^{k-1} c(i, d-1); equals c_kd for d >= 1 (tested identity)."""
    if d < 1:
        raise ValueError("recurrence defined for d >= 1")
    return k + sum(c_kd(i, d - 1) for i in range(k))


@dataclass(frozen=True)
class BandTable:
    """Slope bands m_1..m_d, M_1..M_d for the weighted-tree dual; c = M_d."""
    k: int
    d: int
    m: tuple
    M: tuple

    @property
    def c(self):
        return self.M[-1]

    def m_at(self, i):
        return self.m[i - 1]

    def M_at(self, i):
        return self.M[i - 1]

    def check(self):
        """The four defining properties; raises AssertionError on failure."""
        m, M, k, d = self.m, self.M, self.k, self.d
        assert all(m[i] < m[i + 1] for i in range(d - 1)), "m not increasing"
        assert m[-1] == -1, "m_d != -1"
        assert all(M[i] < M[i + 1] for i in range(d - 1)), "M not increasing"
        assert m[-1] < M[0], "m_d >= M_1"
        diffs = {M[i] - m[i] for i in range(d)}
        assert len(diffs) == 1, "M_i - m_i not constant"
        for j in range(1, k + 1):
            assert M[0] + (j - 1) * m[0] >= j, f"M_1+(j-1)m_1 < j at j={j}"
            for i in range(d - 1):
                assert (j - 1) * m[i + 1] - m[i] >= j, f"(j-1)m_{i+2}-m_{i+1} < j at j={j}"


def bands(k: int, d: int) -> BandTable:
    if k < 2:
        raise ValueError("band table needs k >= 2")
    if d < 1:
        raise ValueError("band table needs d >= 1")
    if k == 2:
        m = tuple(-2 * (d - i) - 1 for i in range(1, d + 1))
        M = tuple(2 * (d + i) - 1 for i in range(1, d + 1))
    else:
        def exact_div(num):
            q, r = divmod(num, k - 2)
            assert r == 0
            return q
        m = tuple(exact_div(-2 * (k - 1) ** (d - i + 1) + k) for i in range(1, d + 1))
        M = tuple(exact_div(2 * k * (k - 1) ** d - 2 * (k - 1) ** (d - i + 1) - k)
                  for i in range(1, d + 1))
    table = BandTable(k, d, m, M)
    table.check()
    return table


def psi_kserver(sub: SubdividedTree, cfg) -> int:
    """-(sum over server pairs of the weighted depth of their LCA)."""
    total = 0
    for i in range(len(cfg)):
        for j in range(i + 1, len(cfg)):
            total += sub.depth[sub.lca(cfg[i], cfg[j])]
    return -total


def psi_ktaxi_hst(sub: SubdividedTree, cfg, alphas=None) -> int:
    """Layered k-taxi potential on a uniform-leaf-depth tree.

    With servers renumbered so their weighted heights h_0 <= ... <= h_{k-1}
    are non-decreasing, and alpha_l the height of the node layer at
    combinatorial height l:

        Psi = sum_i sum_{l=0}^{d-1} c(i, l) * max(alpha_l, min(h_i, alpha_{l+1}))
    """
    if alphas is None:
        alphas = layer_heights(sub)
    heights = sorted(sub.height(v) for v in cfg)
    return _psi_from_heights(heights, alphas)


def _psi_from_heights(heights_ascending, alphas):
    d = len(alphas) - 1
    total = 0
    for i, h in enumerate(heights_ascending):
        for level in range(d):
            total += c_kd(i, level) * max(alphas[level], min(h, alphas[level + 1]))
    return total


@dataclass
class StepCheckReport:
    ok: bool
    violations: list
    steps_checked: int
    relocations_checked: int


def check_step_inequalities(trace, potential: str, c: int, alphas=None) -> StepCheckReport:
    """Per-step potential inequalities behind c-competitiveness.

    For every relocation: Psi unchanged.  For every small step:
    |U| + dPsi <= c when B is empty, |U| + dPsi <= 0 when B = {j}.

    potential: "kserver" (pairwise-LCA potential, any tree, no relocations
    allowed) or "ktaxi-hst" (layered potential, uniform leaf depth).
    """
    sub = trace.tree
    bad = []
    steps = relocs = 0
    if potential == "ktaxi-hst" and alphas is None:
        alphas = layer_heights(sub)

    def psi_pair(pre, post):
        if potential == "kserver":
            return psi_kserver(sub, pre), psi_kserver(sub, post)
        hb = [sub.height(v) for v in pre]
        ha = [sub.height(v) for v in post]
        order = sorted(range(len(pre)), key=lambda i: (hb[i], ha[i], i))
        sb = [hb[i] for i in order]
        sa = [ha[i] for i in order]
        if any(sa[i] > sa[i + 1] for i in range(len(sa) - 1)):
            bad.append("height ordering not preserved across a step")
        return _psi_from_heights(sb, alphas), _psi_from_heights(sa, alphas)

    for ti, tr in enumerate(trace.transitions()):
        pre = trace.boundary_positions[ti]
        post = trace.boundary_positions[ti + 1]
        if tr.kind == "reloc":
            relocs += 1
            if potential == "kserver":
                bad.append(f"transition {ti}: relocation under the k-server potential")
                continue
            before, after = psi_pair(pre, post)
            if before != after:
                bad.append(f"transition {ti}: relocation changed Psi by {after - before}")
            continue
        steps += 1
        before, after = psi_pair(pre, post)
        lhs = len(tr.step.U) + (after - before)
        bound = 0 if tr.step.B else c
        if lhs > bound:
            bad.append(f"transition {ti}: |U|+dPsi = {lhs} > {bound} "
                       f"(|U|={len(tr.step.U)}, B={tr.step.B})")
    return StepCheckReport(not bad, bad, steps, relocs)


def min_assignment(matrix):
    """Min-cost perfect assignment of a square integer matrix.

    Exhaustive for n <= 6, Hungarian beyond.  Returns (cost, columns) with
    columns[i] the column matched to row i.
    """
    n = len(matrix)
    if n == 0:
        return 0, []
    if n <= 6:
        best_cost, best = None, None
        for perm in permutations(range(n)):
            cost = sum(matrix[i][perm[i]] for i in range(n))
            if best_cost is None or cost < best_cost:
                best_cost, best = cost, list(perm)
        return best_cost, best
    return _hungarian(matrix)


def _hungarian(a):
    n = len(a)
    INF = max(max(row) for row in a) * n + 1
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta, j1 = INF, -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = a[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    cols = [0] * n
    for j in range(1, n + 1):
        cols[p[j] - 1] = j - 1
    return sum(a[i][cols[i]] for i in range(n)), cols


def matching_potential(t: WeightedTree, online, offline) -> int:
    """Min-cost perfect matching between two equal-size configurations."""
    if len(online) != len(offline):
        raise ValueError("configurations must have equal server counts")
    matrix = [[t.distance(u, v) for v in offline] for u in online]
    cost, _ = min_assignment(matrix)
    return cost
