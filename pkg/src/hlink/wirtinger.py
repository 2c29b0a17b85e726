"""Fundamental-group presentations of diagram complements.

The construction is the classical Wirtinger one, extended to trivalent
vertices: one generator per arc, a conjugation relator per crossing, and a
product relator per trivalent vertex.  Generators are 1-based signed integers
so that -g denotes the inverse of g; a word is a tuple of such letters.

Orientation conventions follow ``diagram.orient_edges``.  The crossing sign is
+1 when the under strand exits one rotation step clockwise of the over exit.
Any consistent convention yields isomorphic groups; nothing downstream depends
on more than that.
"""

from __future__ import annotations

import re

from sympy import Matrix

from .diagram import Diagram, arcs, dart_components, orient_edges


def inverse_word(word):
    return tuple(-t for t in reversed(word))


def free_reduce(word):
    out = []
    for t in word:
        if out and out[-1] == -t:
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def cyclic_reduce(word):
    word = list(free_reduce(word))
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    return tuple(word)


class Presentation:
    """A finite presentation with optional peripheral annotations.

    Attributes:
        n_gens: number of generators, named 1..n_gens.
        relators: tuple of words.
        peripherals: tuple of (component id, meridian word, longitude word),
            one entry per solid-torus component of the source diagram.
    """

    __slots__ = ("n_gens", "relators", "peripherals")

    def __init__(self, n_gens, relators, peripherals=()):
        self.n_gens = int(n_gens)
        self.relators = tuple(tuple(r) for r in relators)
        self.peripherals = tuple(
            (int(c), tuple(m), tuple(l)) for c, m, l in peripherals
        )
        for word in self.relators + tuple(
            w for _, m, l in self.peripherals for w in (m, l)
        ):
            for t in word:
                if not (0 < abs(t) <= self.n_gens):
                    raise ValueError("word letter %d out of range" % t)

    def peripheral(self, comp):
        for c, m, l in self.peripherals:
            if c == comp:
                return m, l
        raise KeyError(comp)

    def __repr__(self):
        return "Presentation(gens=%d, relators=%d)" % (
            self.n_gens,
            len(self.relators),
        )


def _crossing_data(d, fwd, arc_of):
    """Per-crossing (out-arc, in-arc, over-arc, sign), keyed by vertex id."""
    sk = d.skeleton
    alpha = sk.alpha
    out = {}
    for v, rot in enumerate(sk.vertices):
        if len(rot) != 4:
            continue
        over = d.over_pair(v)
        under = tuple(x for x in rot if x not in over)
        o_out = over[0] if fwd[min(over[0], alpha[over[0]])] == over[0] else over[1]
        u_out = under[0] if fwd[min(under[0], alpha[under[0]])] == under[0] else under[1]
        u_in = under[1] if u_out == under[0] else under[0]
        sign = 1 if rot.index(u_out) == (rot.index(o_out) - 1) % 4 else -1
        a_out = arc_of[min(u_out, alpha[u_out])]
        a_in = arc_of[min(u_in, alpha[u_in])]
        a_over = arc_of[min(o_out, alpha[o_out])]
        out[v] = (a_out, a_in, a_over, sign)
    return out


def presentation_from_diagram(d: Diagram) -> Presentation:
    """Wirtinger presentation of the complement of d's handlebody link.

    One generator per arc.  Crossing relator: x_out (x_over^s x_in x_over^-s)^-1.
    Vertex relator: the three incident arc generators in counterclockwise
    rotation order, outward arcs with exponent +1, inward with -1.
    """
    sk = d.skeleton
    alpha = sk.alpha
    fwd = orient_edges(d)
    arclist, arc_of = arcs(d)
    labels, n_comp = dart_components(d)

    relators = []
    xdata = _crossing_data(d, fwd, arc_of)
    for v in sorted(xdata):
        a_out, a_in, a_over, sign = xdata[v]
        g_out, g_in, g_over = a_out + 1, a_in + 1, a_over + 1
        relators.append((g_out, sign * g_over, -g_in, -sign * g_over))

    n_trivalent = 0
    for v, rot in enumerate(sk.vertices):
        if len(rot) != 3:
            continue
        n_trivalent += 1
        word = []
        for leg in rot:
            g = arc_of[min(leg, alpha[leg])] + 1
            word.append(g if fwd[min(leg, alpha[leg])] == leg else -g)
        relators.append(tuple(word))

    peripherals = []
    trivalent_comps = {
        labels[rot[0]]
        for rot in sk.vertices
        if len(rot) == 3
    }
    for comp in range(n_comp):
        if comp not in trivalent_comps:
            m, l = peripheral_words(d, comp)
            peripherals.append((comp, m, l))

    pres = Presentation(len(arclist), relators, peripherals)

    # abelianization sanity: H1 of the complement is free of rank equal to
    # the total genus, one per circle plus two per spine
    mat = [[0] * pres.n_gens for _ in pres.relators]
    for i, r in enumerate(pres.relators):
        for t in r:
            mat[i][abs(t) - 1] += 1 if t > 0 else -1
    rank = pres.n_gens - (Matrix(mat).rank() if pres.relators else 0)
    assert rank == n_comp + n_trivalent // 2, (rank, n_comp, n_trivalent)
    return pres


def peripheral_words(d: Diagram, comp):
    """Meridian and preferred (zero-framed) longitude of a circle component.

    The meridian is the generator of the component's first arc.  The
    longitude multiplies the over-arc generators met while traversing the
    component, signed by crossing sign, and closes with m^-w to cancel the
    self-writhe w.

    The over-arc letters compose right-to-left in traversal order: with the
    crossing relator written as x_out = x_over^s x_in x_over^-s, carrying the
    base arc's generator once around the component conjugates it by exactly
    that reversed product, which is what makes the result commute with the
    meridian (both lie on the boundary torus).
    """
    sk = d.skeleton
    alpha = sk.alpha
    labels, n_comp = dart_components(d)
    if not (0 <= comp < n_comp):
        raise ValueError("no component %r" % (comp,))
    for rot in sk.vertices:
        if len(rot) == 3 and labels[rot[0]] == comp:
            raise ValueError("component %d has a trivalent vertex" % comp)

    fwd = orient_edges(d)
    arclist, arc_of = arcs(d)
    xdata = _crossing_data(d, fwd, arc_of)
    comp_arcs = [i for i, a in enumerate(arclist) if labels[a.darts[0]] == comp]
    start = comp_arcs[0]
    m_gen = start + 1

    letters = []
    writhe = 0
    cur = start
    while True:
        arc = arclist[cur]
        if arc.closed:
            break
        tail = alpha[arc.darts[-1]]  # under-arrival closing this arc
        v = sk.vertex_of[tail]
        a_out, a_in, a_over, sign = xdata[v]
        assert a_in == cur
        letters.append(sign * (a_over + 1))
        if labels[arclist[a_over].darts[0]] == comp:
            writhe += sign
        cur = a_out
        if cur == start:
            break
    letters.reverse()
    letters.extend([-m_gen if writhe > 0 else m_gen] * abs(writhe))
    return (m_gen,), free_reduce(tuple(letters))


# ---------------------------------------------------------------------------
# Tietze simplification


def _rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))]


def _substitute(word, gen, repl):
    out = []
    for t in word:
        if t == gen:
            out.extend(repl)
        elif t == -gen:
            out.extend(inverse_word(repl))
        else:
            out.append(t)
    return free_reduce(tuple(out))


def _replace_subword(word, piece, repl):
    """First cyclic occurrence of piece in word replaced by repl, or None."""
    n, k = len(word), len(piece)
    if n < k:
        return None
    doubled = word + word
    for i in range(n):
        if doubled[i:i + k] == piece:
            rest = doubled[i + k:i + n]
            return cyclic_reduce(tuple(repl) + rest)
    return None


def tietze_simplify(p: Presentation, effort=20000) -> Presentation:
    """Shrink a presentation by generator elimination and relator overlap.

    Each elimination removes a generator that occurs exactly once in some
    relator; overlapping relators rewrite each other when a majority piece of
    a shorter relator appears in a longer one.  The search stops when stable
    or when the step budget runs out; the result presents the same group.
    """
    relators = [cyclic_reduce(r) for r in p.relators]
    periph = [[c, list(m), list(l)] for c, m, l in p.peripherals]
    alive = set(range(1, p.n_gens + 1))
    budget = int(effort)

    def substitute_everywhere(gen, repl):
        for i, r in enumerate(relators):
            relators[i] = cyclic_reduce(_substitute(r, gen, repl))
        for entry in periph:
            entry[1] = list(_substitute(tuple(entry[1]), gen, repl))
            entry[2] = list(_substitute(tuple(entry[2]), gen, repl))

    changed = True
    while changed and budget > 0:
        changed = False
        relators = sorted((r for r in relators if r), key=len)

        # eliminate a generator with a unique occurrence in some relator
        for r in relators:
            counts = {}
            for t in r:
                counts[abs(t)] = counts.get(abs(t), 0) + 1
            once = [t for t in r if counts[abs(t)] == 1]
            if not once:
                continue
            # prefer eliminating via the shortest substitution
            t = once[0]
            rot = _rotations(r)[r.index(t)]
            repl = inverse_word(rot[1:]) if rot[0] > 0 else tuple(rot[1:])
            gen = abs(t)
            relators.remove(r)
            substitute_everywhere(gen, repl)
            alive.discard(gen)
            budget -= 1
            changed = True
            break
        if changed:
            continue

        # rewrite a long relator by a majority piece of a shorter one
        for i, small in enumerate(relators):
            if budget <= 0:
                break
            variants = _rotations(small) + _rotations(inverse_word(small))
            for j, big in enumerate(relators):
                if i == j or len(big) < len(small):
                    continue
                done = False
                for var in variants:
                    h = len(var) // 2 + 1
                    piece, tail = var[:h], inverse_word(var[h:])
                    budget -= 1
                    new = _replace_subword(big, piece, tail)
                    if new is not None and len(new) < len(big):
                        relators[j] = new
                        changed = done = True
                        break
                if done or budget <= 0:
                    break
            if changed:
                break

    relators = sorted({r for r in relators if r}, key=lambda r: (len(r), r))
    remap = {g: i + 1 for i, g in enumerate(sorted(alive))}

    def renum(word):
        return tuple(remap[t] if t > 0 else -remap[-t] for t in word)

    return Presentation(
        len(alive),
        [renum(r) for r in relators],
        [(c, renum(tuple(m)), renum(tuple(l))) for c, m, l in periph],
    )


# ---------------------------------------------------------------------------
# file format

_PERIPH_RE = re.compile(r"^peripheral\s+comp=(\d+)\s+m=([-0-9,]*)\s+l=([-0-9,]*)$")


def _word_str(word):
    return ",".join(str(t) for t in word)


def _parse_word(s):
    return tuple(int(t) for t in s.split(",") if t)


def save_presentation(p: Presentation, path):
    with open(path, "w") as fh:
        fh.write("gens %d\n" % p.n_gens)
        for r in p.relators:
            fh.write(" ".join(str(t) for t in r) + "\n")
        for c, m, l in p.peripherals:
            fh.write("peripheral comp=%d m=%s l=%s\n" % (c, _word_str(m), _word_str(l)))


def load_presentation(path) -> Presentation:
    relators = []
    peripherals = []
    n_gens = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("gens "):
                n_gens = int(line.split()[1])
            elif line.startswith("peripheral"):
                m = _PERIPH_RE.match(line)
                if not m:
                    raise ValueError("bad peripheral line: %r" % line)
                peripherals.append(
                    (int(m.group(1)), _parse_word(m.group(2)), _parse_word(m.group(3)))
                )
            else:
                relators.append(tuple(int(t) for t in line.split()))
    if n_gens is None:
        raise ValueError("missing 'gens N' header")
    return Presentation(n_gens, relators, peripherals)
