"""Finite group machinery: dense multiplication tables, conjugacy data, Burnside counts.

Groups are stored as explicit tables because every group used by the census is
tiny (|G| <= 60) and table lookups dominate the homomorphism-search hot path.
Element 0 is always the identity.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np


class GroupTable:
    """A finite group as a dense multiplication table over elements 0..n-1.

    Attributes:
        name: human-readable label ("A4", "A5", or a file name).
        order: number of elements.
        mul: (order, order) array, mul[a, b] = a*b.
        inv: inverse of each element.
        class_id: conjugacy class index of each element (class 0 = identity's).
        class_reps: one representative element per class.
        class_sizes: size of each class.
        centralizer: tuple of sorted element tuples, one per *class representative*.
    """

    def __init__(self, mul, name="group", elements=None):
        mul = np.asarray(mul, dtype=np.int16)
        n = mul.shape[0]
        if mul.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.name = name
        self.order = n
        self.mul = mul
        self.elements = elements  # optional underlying element names
        self._check_axioms()
        self.inv = self._build_inverses()
        self.class_id, self.class_reps, self.class_sizes = self._build_classes()
        self.centralizer = tuple(
            tuple(int(h) for h in range(n) if mul[int(g), h] == mul[h, int(g)])
            for g in self.class_reps
        )
        for rep, cent in zip(self.class_reps, self.centralizer):
            if len(cent) * int(self.class_sizes[self.class_id[rep]]) != n:
                raise ValueError("class/centralizer size mismatch")

    def _check_axioms(self):
        n, mul = self.order, self.mul
        if not (mul[0] == np.arange(n)).all() or not (mul[:, 0] == np.arange(n)).all():
            raise ValueError("element 0 is not an identity")
        # Each row/column a permutation (Latin square) and associativity.
        ar = np.arange(n)
        for a in range(n):
            if sorted(mul[a]) != list(ar) or sorted(mul[:, a]) != list(ar):
                raise ValueError("table rows/columns are not permutations")
        if n <= 60:
            # (a*b)*c == a*(b*c), vectorized over b, c for each a.
            for a in range(n):
                if not (mul[mul[a]][:, :] == mul[a][mul]).all():
                    raise ValueError("table is not associative")

    def _build_inverses(self):
        n, mul = self.order, self.mul
        inv = np.full(n, -1, dtype=np.int16)
        for a in range(n):
            hits = np.nonzero(mul[a] == 0)[0]
            if len(hits) != 1:
                raise ValueError("element without unique inverse")
            inv[a] = hits[0]
        return inv

    def _build_classes(self):
        n, mul, inv = self.order, self.mul, self.inv
        class_id = np.full(n, -1, dtype=np.int16)
        reps = []
        sizes = []
        for a in range(n):
            if class_id[a] >= 0:
                continue
            cid = len(reps)
            orbit = {a}
            for g in range(n):
                orbit.add(int(mul[mul[g, a], inv[g]]))
            for b in orbit:
                class_id[b] = cid
            reps.append(a)
            sizes.append(len(orbit))
        return class_id, tuple(reps), np.array(sizes, dtype=np.int64)

    def conj(self, g, a):
        """g * a * g^-1."""
        return int(self.mul[self.mul[g, a], self.inv[g]])

    def __repr__(self):
        return "GroupTable(%s, order=%d, classes=%d)" % (
            self.name, self.order, len(self.class_reps))


def _perm_mul(p, q):
    # apply q first, then p
    return tuple(p[q[i]] for i in range(len(p)))


def _perm_sign(p):
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def alternating_group(k):
    """The alternating group on k letters as a GroupTable (k in {4, 5}).

    Elements are the even permutations of range(k) in lexicographic order, so
    element 0 is the identity.
    """
    if k not in (4, 5):
        raise ValueError("census groups are A4 and A5 only")
    elems = sorted(p for p in permutations(range(k)) if _perm_sign(p) == 1)
    index = {p: i for i, p in enumerate(elems)}
    n = len(elems)
    mul = np.zeros((n, n), dtype=np.int16)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            mul[i, j] = index[_perm_mul(p, q)]
    return GroupTable(mul, name="A%d" % k, elements=tuple(elems))


def burnside_free_hom_classes(table, rank):
    """Conjugacy classes of homomorphisms from the free group of given rank.

    By Burnside's lemma this is (1/|G|) * sum_g |C(g)|^rank; used as the oracle
    for split handlebody links, whose complement groups are free.
    """
    if rank < 0:
        raise ValueError("rank must be non-negative")
    n = table.order
    total = 0
    for rep, size in zip(table.class_reps, table.class_sizes):
        cent_order = n // int(size)
        total += int(size) * cent_order ** rank
    if total % n:
        raise AssertionError("Burnside sum not divisible by |G|")
    return total // n


def save_group(table, path):
    """Write a group file: line 1 `order N`, then N rows of the product table."""
    with open(path, "w") as fh:
        fh.write("order %d\n" % table.order)
        for row in table.mul:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def load_group(path):
    """Read a group file produced by save_group (or user-supplied)."""
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 2 or head[0] != "order":
            raise ValueError("group file must start with 'order N'")
        n = int(head[1])
        rows = []
        for _ in range(n):
            rows.append([int(x) for x in fh.readline().split()])
    import os
    return GroupTable(np.array(rows), name=os.path.basename(path))


def group_by_name(name):
    """Resolve a --group style argument: a4, a5, or file:PATH."""
    low = name.lower()
    if low == "a4":
        return alternating_group(4)
    if low == "a5":
        return alternating_group(5)
    if low.startswith("file:"):
        return load_group(name[5:])
    raise ValueError("unknown group %r (expected a4, a5 or file:PATH)" % name)
