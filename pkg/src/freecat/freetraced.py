"""The free traced symmetric monoidal category.

A morphism is ``(scalars, perm, labels)``: a symmetric morphism decorated
with a multiset of loop classes.  The trace hides a suffix of the boundary
and is computed in closed form by chasing paths through the hidden part;
cycles that never reach the visible part become new loop scalars.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product

from .errors import TypeMismatch
from .freesmc import ObjList, SymMorphism, block_swap, check_labels, format_objs
from .permkit import Perm, analyze, perm_compose, perm_tensor
from .signature import (
    EMPTY,
    BasePath,
    LoopClass,
    LoopMultiset,
    Signature,
    compose_base,
    compose_paths,
    loop_class,
    mset_union,
    paths_between,
)


@dataclass(frozen=True)
class TracedMorphism:
    scalars: LoopMultiset
    perm: Perm
    labels: tuple[BasePath, ...]
    dom: ObjList
    cod: ObjList

    def __post_init__(self):
        check_labels(self.dom, self.cod, self.perm, self.labels)

    @property
    def width(self) -> int:
        return len(self.dom)


def from_sym(f: SymMorphism, scalars: LoopMultiset = EMPTY) -> TracedMorphism:
    return TracedMorphism(scalars, f.perm, f.labels, f.dom, f.cod)


def tr_identity(sig: Signature, objs: ObjList) -> TracedMorphism:
    objs = tuple(objs)
    return TracedMorphism(EMPTY, Perm.identity(len(objs)), tuple(sig.identity(o) for o in objs), objs, objs)


def tr_permutation(sig: Signature, objs: ObjList, perm: Perm) -> TracedMorphism:
    """Structural isomorphism moving strand ``i`` to position ``perm(i)``."""
    objs = tuple(objs)
    cod = [None] * len(objs)
    for i, o in enumerate(objs):
        cod[perm(i)] = o
    return TracedMorphism(EMPTY, perm, tuple(sig.identity(o) for o in objs), objs, tuple(cod))


def tr_symmetry(sig: Signature, a: ObjList, b: ObjList) -> TracedMorphism:
    return tr_permutation(sig, tuple(a) + tuple(b), block_swap(len(a), len(b)))


def tr_generator(label: BasePath) -> TracedMorphism:
    return TracedMorphism(EMPTY, Perm.identity(1), (label,), (label.source,), (label.target,))


def tr_compose(g: TracedMorphism, f: TracedMorphism) -> TracedMorphism:
    if f.cod != g.dom:
        raise TypeMismatch(f"cannot compose: codomain {format_objs(f.cod)} != domain {format_objs(g.dom)}")
    labels = tuple(compose_base(g.labels[f.perm(i)], f.labels[i]) for i in range(f.width))
    return TracedMorphism(mset_union(f.scalars, g.scalars), perm_compose(g.perm, f.perm), labels, f.dom, g.cod)


def tr_tensor(f: TracedMorphism, g: TracedMorphism) -> TracedMorphism:
    return TracedMorphism(
        mset_union(f.scalars, g.scalars),
        perm_tensor(f.perm, g.perm),
        f.labels + g.labels,
        f.dom + g.dom,
        f.cod + g.cod,
    )


def scalar_mul(s: LoopMultiset, f: TracedMorphism) -> TracedMorphism:
    return TracedMorphism(mset_union(s, f.scalars), f.perm, f.labels, f.dom, f.cod)


def trace(f: TracedMorphism, hidden: int) -> TracedMorphism:
    """Feed back the last ``hidden`` strands of ``f : A @ U -> B @ U``."""
    n = f.width - hidden
    if hidden < 0 or n < 0:
        raise TypeMismatch(f"cannot hide {hidden} of {f.width} strands")
    if f.dom[n:] != f.cod[n:]:
        raise TypeMismatch(
            f"hidden parts differ: {format_objs(f.dom[n:])} vs {format_objs(f.cod[n:])}"
        )
    if hidden == 0:
        return f
    geo = analyze(f.perm, n)
    labels = tuple(compose_paths(f.labels[j] for j in path[:-1]) for path in geo.io_paths)
    harvested = LoopMultiset.of(loop_class(compose_paths(f.labels[j] for j in cyc)) for cyc in geo.loops)
    return TracedMorphism(mset_union(f.scalars, harvested), geo.io_perm, labels, f.dom[:n], f.cod[:n])


def full_trace(e: TracedMorphism) -> LoopMultiset:
    """Trace out every strand of an endomorphism, leaving a scalar."""
    if e.dom != e.cod:
        raise TypeMismatch(f"full trace needs an endomorphism, got {format_objs(e.dom)} -> {format_objs(e.cod)}")
    return trace(e, e.width).scalars


def scalar_morphism(s: LoopMultiset) -> TracedMorphism:
    """The scalar ``s`` as a morphism I -> I."""
    return TracedMorphism(s, Perm.identity(0), (), (), ())


def traced_homset(
    sig: Signature, dom: ObjList, cod: ObjList, max_len: int, scalars: list[LoopMultiset]
) -> list[TracedMorphism]:
    """Morphisms dom -> cod with labels of at most ``max_len`` arrows and scalars from ``scalars``."""
    if len(dom) != len(cod):
        return []
    out = []
    for images in permutations(range(len(dom))):
        perm = Perm(images)
        choices = [paths_between(sig, dom[i], cod[perm(i)], max_len) for i in range(len(dom))]
        for ls in product(*choices):
            out.extend(TracedMorphism(s, perm, tuple(ls), tuple(dom), tuple(cod)) for s in scalars)
    return out


def multisets_upto(loops: list[LoopClass], max_size: int) -> list[LoopMultiset]:
    """Every multiset over ``loops`` with at most ``max_size`` elements."""
    return [LoopMultiset.of(c) for size in range(max_size + 1) for c in combinations_with_replacement(loops, size)]
