"""Shared builders for the test suite: signatures, random normal forms and terms."""
from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

from freecat.engine import Engine, reify
from freecat.freecc import CCMorphism, PolarObject
from freecat.freetraced import TracedMorphism
from freecat.permkit import Perm
from freecat.signature import LoopMultiset, Signature, loop_class, parse_signature, paths_between
from freecat.syntax import obj_of_list

DATA = Path(__file__).parent / "data"


def load_sig(name: str) -> Signature:
    return parse_signature((DATA / name).read_text())


LOOPS = load_sig("loops.sig")


@lru_cache(maxsize=None)
def _paths(sig: Signature, src: str, tgt: str, max_len: int):
    return tuple(paths_between(sig, src, tgt, max_len))


def random_path(sig, rng: random.Random, src: str, tgt: str, max_len: int = 4):
    return rng.choice(_paths(sig, src, tgt, max_len))


def random_objs(sig, rng, k: int) -> tuple[str, ...]:
    return tuple(rng.choice(sig.objects) for _ in range(k))


def random_scalars(sig, rng, max_loops: int = 2, max_len: int = 4) -> LoopMultiset:
    loops = []
    for _ in range(rng.randint(0, max_loops)):
        q = rng.choice(sig.objects)
        loops.append(loop_class(random_path(sig, rng, q, q, max_len)))
    return LoopMultiset.of(loops)


def random_traced(sig, rng, dom, cod=None, max_len: int = 4, scalars: bool = True) -> TracedMorphism:
    """A random free traced morphism dom -> cod (cod drawn at random when omitted)."""
    dom = tuple(dom)
    k = len(dom)
    cod = random_objs(sig, rng, k) if cod is None else tuple(cod)
    images = list(range(k))
    rng.shuffle(images)
    perm = Perm(tuple(images))
    labels = tuple(random_path(sig, rng, dom[i], cod[perm(i)], max_len) for i in range(k))
    s = random_scalars(sig, rng, 1, max_len) if scalars else LoopMultiset()
    return TracedMorphism(s, perm, labels, dom, cod)


def random_cc(sig, rng, dom: PolarObject, cod: PolarObject, max_len: int = 3) -> CCMorphism:
    """A random free compact closed morphism; needs |dom+| + |cod-| == |cod+| + |dom-|."""
    t = random_traced(sig, rng, dom.pos + cod.neg, cod.pos + dom.neg, max_len)
    return CCMorphism(t.scalars, t.perm, t.labels, dom, cod)


def random_polar(sig, rng, max_strands: int) -> PolarObject:
    k = rng.randint(0, max_strands)
    n = rng.randint(0, k)
    return PolarObject(random_objs(sig, rng, n), random_objs(sig, rng, k - n))


def term_of(nf):
    return reify(nf)


def ob(objs):
    return obj_of_list(list(objs))


def nf(term, level: str, sig=LOOPS, monoid=None):
    return Engine(sig, level, monoid).normalize(term)
