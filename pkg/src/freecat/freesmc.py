"""Free strict monoidal and free symmetric monoidal categories.

Objects are tuples of object names (the empty tuple is the unit).  A
symmetric morphism ``(perm, labels)`` sends strand ``i`` from ``dom[i]`` to
``cod[perm(i)]`` along the base path ``labels[i]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .errors import TypeMismatch
from .permkit import Perm, perm_compose, perm_tensor
from .signature import BasePath, Signature, compose_base, paths_between

ObjList = tuple[str, ...]


def format_objs(objs: ObjList) -> str:
    return " @ ".join(objs) if objs else "I"


def check_labels(dom: ObjList, cod: ObjList, perm: Perm, labels: tuple[BasePath, ...]):
    if not (len(dom) == len(cod) == len(perm) == len(labels)):
        raise TypeMismatch(
            f"strand counts disagree: dom {len(dom)}, cod {len(cod)}, perm {len(perm)}, labels {len(labels)}"
        )
    for i, lab in enumerate(labels):
        want = (dom[i], cod[perm(i)])
        if (lab.source, lab.target) != want:
            raise TypeMismatch(f"label {i + 1} is {lab.source} -> {lab.target}, expected {want[0]} -> {want[1]}")


@dataclass(frozen=True)
class MonMorphism:
    dom: ObjList
    cod: ObjList
    labels: tuple[BasePath, ...]

    def __post_init__(self):
        check_labels(self.dom, self.cod, Perm.identity(len(self.labels)), self.labels)


def mon_identity(sig: Signature, objs: ObjList) -> MonMorphism:
    objs = tuple(objs)
    return MonMorphism(objs, objs, tuple(sig.identity(o) for o in objs))


def mon_compose(g: MonMorphism, f: MonMorphism) -> MonMorphism:
    if f.cod != g.dom:
        raise TypeMismatch(f"cannot compose: {format_objs(f.cod)} != {format_objs(g.dom)}")
    labels = []
    for i, (gl, fl) in enumerate(zip(g.labels, f.labels)):
        try:
            labels.append(compose_base(gl, fl))
        except TypeMismatch as exc:
            raise TypeMismatch(f"position {i + 1}: {exc}") from None
    return MonMorphism(f.dom, g.cod, tuple(labels))


def mon_tensor(f: MonMorphism, g: MonMorphism) -> MonMorphism:
    return MonMorphism(f.dom + g.dom, f.cod + g.cod, f.labels + g.labels)


def mon_homset(sig: Signature, dom: ObjList, cod: ObjList, max_len: int) -> list[MonMorphism]:
    """All morphisms dom -> cod whose labels have at most ``max_len`` arrows."""
    if len(dom) != len(cod):
        return []
    choices = [paths_between(sig, a, b, max_len) for a, b in zip(dom, cod)]
    return [MonMorphism(tuple(dom), tuple(cod), tuple(ls)) for ls in product(*choices)]


@dataclass(frozen=True)
class SymMorphism:
    dom: ObjList
    cod: ObjList
    perm: Perm
    labels: tuple[BasePath, ...]

    def __post_init__(self):
        check_labels(self.dom, self.cod, self.perm, self.labels)


def sym_identity(sig: Signature, objs: ObjList) -> SymMorphism:
    objs = tuple(objs)
    return SymMorphism(objs, objs, Perm.identity(len(objs)), tuple(sig.identity(o) for o in objs))


def sym_from_mon(f: MonMorphism) -> SymMorphism:
    return SymMorphism(f.dom, f.cod, Perm.identity(len(f.labels)), f.labels)


def sym_compose(g: SymMorphism, f: SymMorphism) -> SymMorphism:
    if f.cod != g.dom:
        raise TypeMismatch(f"cannot compose: {format_objs(f.cod)} != {format_objs(g.dom)}")
    labels = tuple(compose_base(g.labels[f.perm(i)], f.labels[i]) for i in range(len(f.labels)))
    return SymMorphism(f.dom, g.cod, perm_compose(g.perm, f.perm), labels)


def sym_tensor(f: SymMorphism, g: SymMorphism) -> SymMorphism:
    return SymMorphism(f.dom + g.dom, f.cod + g.cod, perm_tensor(f.perm, g.perm), f.labels + g.labels)


def permutation_iso(sig: Signature, objs: ObjList, perm: Perm) -> SymMorphism:
    """The structural isomorphism moving strand ``i`` of ``objs`` to position ``perm(i)``."""
    objs = tuple(objs)
    cod = [None] * len(objs)
    for i, o in enumerate(objs):
        cod[perm(i)] = o
    return SymMorphism(objs, tuple(cod), perm, tuple(sig.identity(o) for o in objs))


def block_swap(n: int, m: int) -> Perm:
    """Permutation sending the first n points after the last m."""
    return Perm(tuple(m + i for i in range(n)) + tuple(range(m)))


def symmetry(sig: Signature, a: ObjList, b: ObjList) -> SymMorphism:
    """The twist a @ b -> b @ a."""
    return permutation_iso(sig, tuple(a) + tuple(b), block_swap(len(a), len(b)))


def sym_homset(sig: Signature, dom: ObjList, cod: ObjList, max_len: int) -> list[SymMorphism]:
    if len(dom) != len(cod):
        return []
    out = []
    for images in permutations(range(len(dom))):
        perm = Perm(images)
        choices = [paths_between(sig, dom[i], cod[perm(i)], max_len) for i in range(len(dom))]
        out.extend(SymMorphism(tuple(dom), tuple(cod), perm, tuple(ls)) for ls in product(*choices))
    return out
