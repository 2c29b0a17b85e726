"""Counting invariants of handlebody-link diagrams.

Everything here reduces to one engine: counting homomorphisms from a diagram
complement's fundamental group into a small finite group.  The class count
(orbits under conjugation) comes from Burnside's identity

    #classes * |G| = sum over a in G of #homs with image inside C(a),

so the engine only ever counts homomorphisms whose images lie in prescribed
subgroups.  Crossing relators determine most generator images from a few
branched ones, which keeps the search tiny even over A5.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .diagram import Diagram, dart_components, orient_edges
from .groups import GroupTable
from .wirtinger import Presentation, inverse_word, presentation_from_diagram

_CHUNK_ROWS = 1 << 20


class KsValue(NamedTuple):
    group: str
    count: int


class HomPlan:
    """Execution plan for homomorphism search over one presentation.

    Steps:
        ("branch", gen)                enumerate candidates for gen
        ("derive", gen, sign, prefix)  gen^sign = eval(prefix)^-1
        ("check", word)                eval(word) must be the identity
    """

    __slots__ = ("n_gens", "steps", "n_branch")

    def __init__(self, p: Presentation):
        known = set()
        steps = []
        relators = [r for r in p.relators if r]
        used = [False] * len(relators)
        n_branch = 0
        while True:
            progressed = False
            for i, r in enumerate(relators):
                if used[i]:
                    continue
                unknown = [t for t in r if abs(t) not in known]
                if not unknown:
                    used[i] = True
                    steps.append(("check", r))
                    progressed = True
                elif len(unknown) == 1:
                    t = unknown[0]
                    k = r.index(t)
                    rotated = r[k + 1:] + r[:k]  # relator with t removed, in order
                    used[i] = True
                    known.add(abs(t))
                    steps.append(("derive", abs(t), 1 if t > 0 else -1, rotated))
                    progressed = True
            if progressed:
                continue
            remaining = [g for g in range(1, p.n_gens + 1) if g not in known]
            if not remaining:
                break
            occurrence = {g: 0 for g in remaining}
            for i, r in enumerate(relators):
                if used[i]:
                    continue
                for t in r:
                    if abs(t) in occurrence:
                        occurrence[abs(t)] += 1
            gen = max(remaining, key=lambda g: (occurrence[g], -g))
            known.add(gen)
            n_branch += 1
            steps.append(("branch", gen))
        self.n_gens = p.n_gens
        self.steps = tuple(steps)
        self.n_branch = n_branch


def _eval_word(word, assign, table):
    mul, inv = table.mul, table.inv
    acc = None
    for t in word:
        val = assign[abs(t)]
        if t < 0:
            val = inv[val]
        acc = val.copy() if acc is None else mul[acc, val]
    return acc


def _count_chunk(plan, table, candidates, first_value, extra_checks):
    """Homomorphisms with branched gens in `candidates`, first branch pinned."""
    mul, inv = table.mul, table.inv
    assign = {}
    n_rows = 1
    seen_branch = False
    for step in plan.steps:
        if n_rows == 0:
            return 0
        if step[0] == "branch":
            _, gen = step
            if not seen_branch:
                seen_branch = True
                for g in assign:
                    assign[g] = np.broadcast_to(assign[g], (1,)).copy()
                assign[gen] = np.array([first_value], dtype=np.int16)
                n_rows = 1
            else:
                k = len(candidates)
                for g in assign:
                    assign[g] = np.repeat(assign[g], k)
                assign[gen] = np.tile(candidates, n_rows)
                n_rows *= k
        elif step[0] == "derive":
            _, gen, sign, prefix = step
            if not prefix:
                val = np.zeros(n_rows if seen_branch else 1, dtype=np.int16)
            else:
                val = inv[_eval_word(prefix, assign, table)]
            assign[gen] = val if sign > 0 else inv[val]
        else:
            _, word = step
            ok = _eval_word(word, assign, table) == 0
            if not seen_branch:
                if not bool(ok.all() if hasattr(ok, "all") else ok):
                    return 0
            else:
                for g in assign:
                    assign[g] = assign[g][ok]
                n_rows = int(ok.sum())
    for word in extra_checks:
        if n_rows == 0:
            return 0
        ok = _eval_word(word, assign, table) == 0
        if not seen_branch:
            if not bool(ok.all() if hasattr(ok, "all") else ok):
                return 0
        else:
            for g in assign:
                assign[g] = assign[g][ok]
            n_rows = int(ok.sum())
    return n_rows if seen_branch else 1


def _count_homs_into(plan, table, subgroup, extra_checks):
    """Number of homomorphisms with every generator image in `subgroup`."""
    if plan.n_branch == 0:
        return _count_chunk(plan, table, subgroup, 0, extra_checks)
    candidates = np.asarray(subgroup, dtype=np.int16)
    total = 0
    for v in subgroup:
        total += _count_chunk(plan, table, candidates, int(v), extra_checks)
    return total


def _count_homs_full(plan, table, extra_checks):
    """Homomorphism count into the whole group, stratified by the conjugacy
    class of the first branched generator."""
    if plan.n_branch == 0:
        return _count_chunk(plan, table, np.arange(table.order, dtype=np.int16),
                            0, extra_checks)
    candidates = np.arange(table.order, dtype=np.int16)
    total = 0
    for rep in table.class_reps:
        cnt = _count_chunk(plan, table, candidates, int(rep), extra_checks)
        total += int(table.class_sizes[table.class_id[rep]]) * cnt
    return total


def _class_count(p: Presentation, table: GroupTable, extra_checks=()):
    plan = HomPlan(p)
    total = _count_homs_full(plan, table, extra_checks)
    for rep in table.class_reps:
        if rep == 0:
            continue
        cent = table.centralizer[table.class_id[rep]]
        size = int(table.class_sizes[table.class_id[rep]])
        total += size * _count_homs_into(plan, table, cent, extra_checks)
    assert total % table.order == 0, "Burnside sum not divisible by |G|"
    return total // table.order


def count_hom_classes(p: Presentation, g: GroupTable) -> KsValue:
    """Conjugacy classes of homomorphisms from the presented group into g."""
    return KsValue(g.name, _class_count(p, g))


def count_hom_classes_direct(p: Presentation, g: GroupTable) -> KsValue:
    """Oracle variant: enumerate all homomorphisms, dedup orbits explicitly.

    Exponential in generators; meant for |G| = 12 cross-checks only.
    """
    plan = HomPlan(p)
    order = g.order
    mul, inv = g.mul, g.inv

    homs = []

    def run(assign, steps):
        if not steps:
            homs.append(tuple(int(assign[i]) for i in range(1, p.n_gens + 1)))
            return
        step, rest = steps[0], steps[1:]
        if step[0] == "branch":
            for v in range(order):
                assign[step[1]] = v
                run(assign, rest)
            del assign[step[1]]
        elif step[0] == "derive":
            _, gen, sign, prefix = step
            acc = 0
            for t in prefix:
                val = assign[abs(t)]
                if t < 0:
                    val = int(inv[val])
                acc = int(mul[acc, val])
            val = int(inv[acc])
            assign[gen] = val if sign > 0 else int(inv[val])
            run(assign, rest)
            del assign[gen]
        else:
            acc = 0
            for t in step[1]:
                val = assign[abs(t)]
                if t < 0:
                    val = int(inv[val])
                acc = int(mul[acc, val])
            if acc == 0:
                run(assign, rest)

    run({}, list(plan.steps))
    orbits = set()
    for h in homs:
        orbit_min = min(
            tuple(int(mul[int(mul[a, x]), int(inv[a])]) for x in h)
            for a in range(order)
        )
        orbits.add(orbit_min)
    return KsValue(g.name, len(orbits))


def hom_count_profile(p: Presentation, g: GroupTable) -> tuple:
    """Hom counts into the centralizer of one representative per conjugacy
    class (the whole group for the identity); all a free product needs."""
    plan = HomPlan(p)
    out = []
    for rep in g.class_reps:
        if rep == 0:
            out.append(_count_homs_full(plan, g, ()))
        else:
            cent = g.centralizer[g.class_id[rep]]
            out.append(_count_homs_into(plan, g, cent, ()))
    return tuple(out)


def free_product_classes_from_profiles(profiles, g: GroupTable) -> int:
    """Class count of a free product, from the factors' hom profiles."""
    total = 0
    for i, rep in enumerate(g.class_reps):
        term = int(g.class_sizes[g.class_id[rep]])
        for prof in profiles:
            term *= prof[i]
        total += term
    assert total % g.order == 0, "Burnside sum not divisible by |G|"
    return total // g.order


def free_product_hom_classes(factors, g: GroupTable) -> KsValue:
    """Class count of a free product, computed from the factors alone.

    Splitting a handlebody link along a sphere, or cutting it along a
    reducing disk, splits the complement group into a free product of the
    factors' complement groups, and conjugation classes of homomorphisms
    obey Burnside just as for a single group:

        #classes * |G| = sum over a in G of prod_i #Hom(pi_i, C(a)).

    So the class count of any split union or order-1 composite is already
    determined by its factors; comparing this prediction against the count
    measured on a diagram certifies (or refutes) such a decomposition.
    """
    profiles = [hom_count_profile(p, g) for p in factors]
    return KsValue(g.name, free_product_classes_from_profiles(profiles, g))


def count_constrained_classes(p: Presentation, g: GroupTable, kill) -> int:
    """Class count restricted to homomorphisms sending `kill` to the identity."""
    kill = tuple(kill)
    if not kill:
        return _class_count(p, g)
    return _class_count(p, g, extra_checks=(kill,))


class ChiralityVerdict(NamedTuple):
    verdict: str  # "Chiral" | "Inconclusive"
    count: int  # classes killing m*l
    mirror_count: int  # classes killing m*l^-1


def chirality_test(d: Diagram, comp, g: GroupTable) -> ChiralityVerdict:
    """Peripheral obstruction to amphichirality on one circle component.

    A mirror-symmetric link admits a symmetry swapping the two constraint
    counts; inequality certifies chirality.
    """
    p = presentation_from_diagram(d)
    m, l = p.peripheral(comp)
    n = count_constrained_classes(p, g, m + l)
    rn = count_constrained_classes(p, g, m + inverse_word(l))
    return ChiralityVerdict("Chiral" if n != rn else "Inconclusive", n, rn)


# ---------------------------------------------------------------------------
# linking matrices


class LinkingMatrix(NamedTuple):
    matrix: tuple  # rows indexed by compA cycles, columns by compB cycles
    divisors: tuple  # nonzero elementary divisors, gcd first


def _component_cycles(d, comp, labels, fwd):
    """Cycle basis of one spatial-graph component, as {edge: +-1} maps.

    Nodes are the component's trivalent and marker vertices; strands between
    nodes pass straight through crossings.  Non-tree strands of a spanning
    tree close the basis cycles.
    """
    sk = d.skeleton
    alpha = sk.alpha

    def eid(x):
        return min(x, alpha[x])

    node_legs = []
    for v, rot in enumerate(sk.vertices):
        if len(rot) != 4 and labels[rot[0]] == comp:
            node_legs.extend(rot)
    if not node_legs:
        # circle through crossings only: one cycle, the full traversal
        start = min(x for x in range(len(alpha)) if labels[x] == comp)
        start = fwd[eid(start)]
        cycle = {}
        cur = start
        while True:
            cycle[eid(cur)] = 1 if fwd[eid(cur)] == cur else -1
            nxt = alpha[cur]
            rot = sk.vertices[sk.vertex_of[nxt]]
            cur = rot[(rot.index(nxt) + 2) % 4]
            if cur == start:
                break
        return [cycle]

    strands = []  # (from_node, to_node, [(edge, dir-vs-fwd), ...])
    seen = set()
    for leg in sorted(node_legs):
        if leg in seen:
            continue
        run = []
        cur = leg
        while True:
            seen.add(cur)
            run.append((eid(cur), 1 if fwd[eid(cur)] == cur else -1))
            nxt = alpha[cur]
            rot = sk.vertices[sk.vertex_of[nxt]]
            if len(rot) != 4:
                seen.add(nxt)
                break
            cur = rot[(rot.index(nxt) + 2) % 4]
        strands.append((sk.vertex_of[leg], sk.vertex_of[nxt], run))

    nodes = sorted({s[0] for s in strands} | {s[1] for s in strands})
    tree = {nodes[0]: (None, None, None)}  # node -> (parent, strand idx, dir)
    frontier = [nodes[0]]
    in_tree = set()
    while frontier:
        nd = frontier.pop(0)
        for i, (u, v, _) in enumerate(strands):
            if i in in_tree:
                continue
            if u == nd and v not in tree:
                tree[v] = (nd, i, 1)
                in_tree.add(i)
                frontier.append(v)
            elif v == nd and u not in tree:
                tree[u] = (nd, i, -1)
                in_tree.add(i)
                frontier.append(u)

    def path_to_root(nd):
        out = []
        while tree[nd][0] is not None:
            parent, i, direction = tree[nd]
            out.append((i, -direction))  # walk against the tree edge, nd->parent
            nd = parent
        return out

    cycles = []
    for i, (u, v, run) in enumerate(strands):
        if i in in_tree:
            continue
        cycle = {}

        def add(idx, direction):
            for edge, rel in strands[idx][2]:
                cycle[edge] = cycle.get(edge, 0) + direction * rel

        add(i, 1)
        up_v = path_to_root(v)
        up_u = path_to_root(u)
        # cancel the common tail toward the root
        while up_v and up_u and up_v[-1][0] == up_u[-1][0]:
            up_v.pop()
            up_u.pop()
        for idx, direction in up_v:
            add(idx, direction)
        for idx, direction in reversed(up_u):
            add(idx, -direction)
        cycles.append({e: c for e, c in cycle.items() if c})
    return cycles


def linking_matrix(d: Diagram, comp_a, comp_b) -> LinkingMatrix:
    """Gauss pairing of cycle bases of two distinct components.

    Entry (i, j) is half the signed sum over crossings between cycle i of
    comp_a and cycle j of comp_b; only the elementary divisors are basis-free.
    """
    if comp_a == comp_b:
        raise ValueError("linking requires two distinct components")
    sk = d.skeleton
    alpha = sk.alpha
    labels, n_comp = dart_components(d)
    for c in (comp_a, comp_b):
        if not (0 <= c < n_comp):
            raise ValueError("no component %r" % (c,))
    fwd = orient_edges(d)
    cyc_a = _component_cycles(d, comp_a, labels, fwd)
    cyc_b = _component_cycles(d, comp_b, labels, fwd)

    def eid(x):
        return min(x, alpha[x])

    sums = [[0] * len(cyc_b) for _ in cyc_a]
    for v, rot in enumerate(sk.vertices):
        if len(rot) != 4:
            continue
        pair = {labels[rot[0]], labels[rot[1]]}
        if pair != {comp_a, comp_b}:
            continue
        over = d.over_pair(v)
        under = tuple(x for x in rot if x not in over)
        o_out = over[0] if fwd[eid(over[0])] == over[0] else over[1]
        u_out = under[0] if fwd[eid(under[0])] == under[0] else under[1]
        base = 1 if rot.index(u_out) == (rot.index(o_out) - 1) % 4 else -1
        s_a = rot[0] if labels[rot[0]] == comp_a else rot[1]
        s_b = rot[1] if s_a == rot[0] else rot[0]
        for i, ca in enumerate(cyc_a):
            fa = ca.get(eid(s_a), 0)
            if not fa:
                continue
            for j, cb in enumerate(cyc_b):
                fb = cb.get(eid(s_b), 0)
                if fb:
                    sums[i][j] += base * fa * fb
    mat = []
    for row in sums:
        assert all(x % 2 == 0 for x in row), "odd Gauss sum"
        mat.append(tuple(x // 2 for x in row))
    m = Matrix(mat)
    if m.rows and m.cols and any(x != 0 for row in mat for x in row):
        snf = smith_normal_form(m)
        divisors = tuple(
            int(abs(snf[i, i]))
            for i in range(min(snf.rows, snf.cols))
            if snf[i, i] != 0
        )
    else:
        divisors = ()
    return LinkingMatrix(tuple(mat), divisors)


# ---------------------------------------------------------------------------
# divisibility-based irreducibility


class IrreducibilityVerdict(NamedTuple):
    conclusion: str  # "Irreducible" | "Inconclusive"
    conditions: tuple  # ((name, divisible), ...)
    reason: str


def _trivial_knot_conditions(ks_a4, ks_a5, n):
    conds = [("trivial-knot-a4", (ks_a4 + 6 * 3 ** n + 2 * 4 ** n) % 12 == 0)]
    if ks_a5 is not None:
        conds.append(
            ("trivial-knot-a5",
             (ks_a5 + 14 * 4 ** n + 19 * 3 ** n + 22 * 5 ** n) % 60 == 0)
        )
    return conds


def irreducibility_test(ks_a4, ks_a5, n, rank_bound) -> IrreducibilityVerdict:
    """Certify irreducibility by refuting every possible factorization.

    A factorization of the given shape forces a divisibility on the counting
    invariants; when every divisibility in the applicable family fails, no
    factor exists and the link is irreducible.  Divisible conditions, or a
    shape outside the covered (rank, components) table, give Inconclusive.
    """
    if n < 2:
        raise ValueError("needs a link with at least two components")
    conds = []

    def trivial_knot_refuted():
        tk = _trivial_knot_conditions(ks_a4, ks_a5, n)
        conds.extend(tk)
        if any(not divisible for _, divisible in tk):
            return True, ""
        if ks_a5 is None and len(tk) == 1:
            return False, "trivial-knot condition needs ks_a5"
        return False, ""

    if rank_bound <= 3 and n == 2:
        refuted, reason = trivial_knot_refuted()
        if refuted:
            return IrreducibilityVerdict("Irreducible", tuple(conds), "")
        return IrreducibilityVerdict(
            "Inconclusive", tuple(conds), reason or "divisible")

    if rank_bound == 4 and n == 2:
        all_fail = True
        for p in (0, 1):
            div = (ks_a4 + (6 + 16 * p) * 3 ** n + (2 + 6 * p) * 4 ** n) \
                % (12 + 24 * p) == 0
            conds.append(("2gen-knot-p%d" % p, div))
            all_fail = all_fail and not div
        if all_fail:
            return IrreducibilityVerdict("Irreducible", tuple(conds), "")
        return IrreducibilityVerdict("Inconclusive", tuple(conds), "divisible")

    if (rank_bound == 4 and n == 3) or (rank_bound == 5 and n == 4):
        refuted, reason = trivial_knot_refuted()
        link_fail = True
        for p in range(5):
            div = (ks_a4 + (26 + 16 * p) * 3 ** (n - 1)
                   + (8 + 6 * p) * 4 ** (n - 1)) % (48 + 24 * p) == 0
            conds.append(("2gen-link-p%d" % p, div))
            link_fail = link_fail and not div
        if refuted and link_fail:
            return IrreducibilityVerdict("Irreducible", tuple(conds), "")
        return IrreducibilityVerdict(
            "Inconclusive", tuple(conds), reason or "divisible")

    return IrreducibilityVerdict(
        "Inconclusive", tuple(conds),
        "no divisibility rule for rank %s with %d components" % (rank_bound, n))
