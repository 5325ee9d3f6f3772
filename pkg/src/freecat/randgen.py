"""Random well-typed terms for a given boundary.

Generation is top-down: pick a constructor whose result type can be the
requested boundary, choose the intermediate types, recurse.  The signature
must be strongly connected so that every pair of objects has a path.
"""
from __future__ import annotations

import random
from collections import deque

from .engine import compose_terms, level_at_least, permutation_term, tensor_terms
from .errors import SignatureError
from .freecc import UNIT, PolarObject, cc_dual
from .permkit import Perm
from .signature import Signature
from .syntax import (
    Coname,
    Compose,
    Dagger,
    Dual,
    Eps,
    Eta,
    Gen,
    Id,
    Name,
    ObjAtom,
    ObjDual,
    ObjTensor,
    Sym,
    Tensor,
    Term,
    Trace,
    obj_of_list,
)


def polar_obj(a: PolarObject):
    """Object expression for ``a``: positives, then the dual of the negatives."""
    pos, neg = obj_of_list(a.pos), obj_of_list(a.neg)
    if not a.neg:
        return pos
    if not a.pos:
        return ObjDual(neg)
    return ObjTensor(pos, ObjDual(neg))


class TermGenerator:
    """Random terms over ``sig`` using only constructors legal at ``level``.

    ``max_strands`` bounds the width of every intermediate boundary.
    """

    def __init__(self, sig: Signature, level: str, rng: random.Random, max_strands: int = 4, max_word: int = 3):
        self.sig, self.level, self.rng = sig, level, rng
        self.max_strands, self.max_word = max_strands, max_word
        self.polar = level_at_least(level, "cc")
        self._next = self._shortest_steps()
        # positive-only boundaries for the strand core of bent morphisms
        self._core = TermGenerator(sig, "tr" if level_at_least(level, "tr") else "sm", rng, max_strands, max_word) if self.polar else None

    def _shortest_steps(self) -> dict[tuple[str, str], str]:
        """First arrow of a shortest path for every (source, target) pair."""
        step = {}
        for tgt in self.sig.objects:
            # BFS backwards from tgt
            seen = {tgt}
            queue = deque([tgt])
            while queue:
                y = queue.popleft()
                for name, s, t in self.sig.arrows:
                    if t == y and s not in seen:
                        seen.add(s)
                        step[(s, tgt)] = name
                        queue.append(s)
            missing = set(self.sig.objects) - seen
            if missing:
                raise SignatureError(f"random terms need a strongly connected signature; no path to {tgt!r}")
        return step

    # --- base paths -------------------------------------------------------

    def word(self, src: str, tgt: str) -> list[str]:
        out = []
        here = src
        for _ in range(self.rng.randint(0, self.max_word)):
            choices = self.sig.out_arrows[here]
            if not choices:
                break
            a = self.rng.choice(choices)
            out.append(a)
            here = self.sig.arrow_ends[a][1]
        while here != tgt:
            a = self._next[(here, tgt)]
            out.append(a)
            here = self.sig.arrow_ends[a][1]
        return out

    def path(self, src: str, tgt: str) -> Term:
        w = self.word(src, tgt)
        return compose_terms([Gen(a) for a in w], ObjAtom(src))

    # --- boundaries -------------------------------------------------------

    def objects(self, k: int) -> tuple[str, ...]:
        return tuple(self.rng.choice(self.sig.objects) for _ in range(k))

    def boundary(self):
        """A random (dom, cod) pair that has morphisms at this level."""
        if not self.polar:
            k = self.rng.randint(0, min(3, self.max_strands))
            return self.objects(k), self.objects(k)
        total = self.rng.randint(0, self.max_strands)
        n = self.rng.randint(0, total)
        m = total - n
        dom = PolarObject(self.objects(n), self.objects(m))
        # cod with p - q = n - m
        q = self.rng.randint(0, max(0, min(total, self.max_strands - (n - m)) // 2))
        p = n - m + q
        if p < 0:
            q, p = q - p, 0
        return dom, PolarObject(self.objects(p), self.objects(q))

    def _size(self, a) -> int:
        return a.size if self.polar else len(a)

    # --- terms --------------------------------------------------------------

    def term(self, dom, cod, depth: int = 3) -> Term:
        if depth <= 0:
            return self.base(dom, cod)
        options = ["base", "compose", "compose", "tensor"]
        if level_at_least(self.level, "sm"):
            options.append("sym")
        if level_at_least(self.level, "tr"):
            options += ["trace", "trace"]
        if self.polar:
            options += ["dual", "fallback"]
            if dom == UNIT:
                options.append("name")
            if cod == UNIT:
                options.append("coname")
        if level_at_least(self.level, "scc") and self.sig.has_dagger:
            options.append("dagger")
        kind = self.rng.choice(options)
        return getattr(self, "_" + kind)(dom, cod, depth - 1)

    def _base(self, dom, cod, depth):
        return self.base(dom, cod)

    def base(self, dom, cod) -> Term:
        if self.polar:
            return self._fallback(dom, cod, 0)
        if self.level == "m":
            return tensor_terms([self.path(a, b) for a, b in zip(dom, cod)])
        k = len(dom)
        images = list(range(k))
        self.rng.shuffle(images)
        perm = Perm(tuple(images))
        mid = [cod[perm(i)] for i in range(k)]
        body = tensor_terms([self.path(dom[i], mid[i]) for i in range(k)])
        if k < 2:
            return body
        return Compose(permutation_term(mid, perm), body)

    def _compose(self, dom, cod, depth):
        if self.polar:
            bal = len(dom.pos) - len(dom.neg)
            room = self.max_strands
            m0 = self.rng.randint(0, 1)
            p0 = bal + m0
            if p0 < 0:
                m0, p0 = m0 - p0, 0
            if p0 + m0 > room:
                return self.base(dom, cod)
            mid = PolarObject(self.objects(p0), self.objects(m0))
        else:
            mid = self.objects(len(dom))
        return Compose(self.term(mid, cod, depth), self.term(dom, mid, depth))

    def _tensor(self, dom, cod, depth):
        if self.polar:
            i = self.rng.randint(0, len(dom.pos))
            j = self.rng.randint(0, len(dom.neg))
            k = self.rng.randint(0, len(cod.pos))
            el = j + k - i
            if not 0 <= el <= len(cod.neg):
                return self.base(dom, cod)
            d1, d2 = PolarObject(dom.pos[:i], dom.neg[:j]), PolarObject(dom.pos[i:], dom.neg[j:])
            c1, c2 = PolarObject(cod.pos[:k], cod.neg[:el]), PolarObject(cod.pos[k:], cod.neg[el:])
            return Tensor(self.term(d1, c1, depth), self.term(d2, c2, depth))
        i = self.rng.randint(0, len(dom))
        return Tensor(self.term(dom[:i], cod[:i], depth), self.term(dom[i:], cod[i:], depth))

    def _sym(self, dom, cod, depth):
        if self.polar:
            i = self.rng.randint(0, len(dom.pos))
            j = self.rng.randint(0, len(dom.neg))
            x, y = PolarObject(dom.pos[:i], dom.neg[:j]), PolarObject(dom.pos[i:], dom.neg[j:])
            swapped = PolarObject(y.pos + x.pos, y.neg + x.neg)
            return Compose(self.term(swapped, cod, depth), Sym(polar_obj(x), polar_obj(y)))
        i = self.rng.randint(0, len(dom))
        x, y = dom[:i], dom[i:]
        return Compose(self.term(y + x, cod, depth), Sym(obj_of_list(x), obj_of_list(y)))

    def _trace(self, dom, cod, depth):
        room = self.max_strands - max(self._size(dom), self._size(cod))
        if room <= 0:
            return self.base(dom, cod)
        k = self.rng.randint(1, min(2, room))
        if self.polar:
            n = self.rng.randint(0, k)
            u = PolarObject(self.objects(n), self.objects(k - n))
            body = self.term(
                PolarObject(dom.pos + u.pos, dom.neg + u.neg), PolarObject(cod.pos + u.pos, cod.neg + u.neg), depth
            )
            return Trace(polar_obj(u), body)
        u = self.objects(k)
        return Trace(obj_of_list(u), self.term(dom + u, cod + u, depth))

    def _dual(self, dom, cod, depth):
        return Dual(self.term(cc_dual(cod), cc_dual(dom), depth))

    def _dagger(self, dom, cod, depth):
        return Dagger(self.term(cod, dom, depth))

    def _name(self, dom, cod, depth):
        i = self.rng.randint(0, len(cod.pos))
        j = self.rng.randint(0, len(cod.neg))
        a = PolarObject(cod.neg[:j], cod.pos[:i])
        b = PolarObject(cod.pos[i:], cod.neg[j:])
        return Name(self.term(a, b, depth))

    def _coname(self, dom, cod, depth):
        i = self.rng.randint(0, len(dom.pos))
        j = self.rng.randint(0, len(dom.neg))
        a = PolarObject(dom.pos[:i], dom.neg[:j])
        b = PolarObject(dom.neg[j:], dom.pos[i:])
        return Coname(self.term(a, b, depth))

    def _fallback(self, dom, cod, depth):
        """Bend the negative strands round with eta/eps around a positive core."""
        p, n = dom.pos, dom.neg
        p2, n2 = cod.pos, cod.neg
        g = self._core.term(p + n2, p2 + n, depth)
        if not n and not n2:
            return g
        P, N, P2, N2 = (obj_of_list(x) for x in (p, n, p2, n2))
        steps = [
            tensor_terms([Id(P), Id(ObjDual(N)), Eta(ObjDual(N2))]),
            tensor_terms([g, Id(ObjDual(N)), Id(ObjDual(N2))]),
            tensor_terms([Id(P2), Eps(N), Id(ObjDual(N2))]),
        ]
        return compose_terms(steps, P)


def random_terms(sig: Signature, level: str, seed: int, count: int, depth: int = 3, max_strands: int = 4):
    """Yield ``count`` random well-typed terms."""
    rng = random.Random(seed)
    gen = TermGenerator(sig, level, rng, max_strands=max_strands)
    for _ in range(count):
        dom, cod = gen.boundary()
        yield gen.term(dom, cod, depth)
