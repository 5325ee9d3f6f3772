"""Typechecking and normalization of terms at a chosen level.

Levels, weakest first: ``m`` (monoidal), ``sm`` (symmetric), ``tr``
(traced), ``cc`` (compact closed), ``scc`` (with dagger) and
``scc-scalars`` (with a prescribed scalar monoid).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import freecc as cc
from . import freesmc as smc
from . import freetraced as ftr
from .errors import LevelError, TypeMismatch
from .freecc import PolarObject
from .freesmc import format_objs
from .models import scalar_monoid_for
from .permkit import Perm
from .scalars import FREE, ScalarMonoid
from .signature import BasePath, LoopMultiset, Signature
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
    ObjUnit,
    Sym,
    Tensor,
    Term,
    Trace,
    obj_of_list,
    show,
    show_obj,
)

LEVELS = ("m", "sm", "tr", "cc", "scc", "scc-scalars")
_RANK = {lv: i for i, lv in enumerate(LEVELS)}
_NEEDS = {
    Sym: "sm",
    Trace: "tr",
    Eta: "cc",
    Eps: "cc",
    Name: "cc",
    Coname: "cc",
    Dual: "cc",
    Dagger: "scc",
}
_LEAVES = (Gen, Id, Sym, Eta, Eps)
_CONSTRUCTOR = {Sym: "sym", Trace: "Tr", Eta: "eta", Eps: "eps", Name: "name", Coname: "coname", Dual: "^", Dagger: "!"}


def level_at_least(level: str, floor: str) -> bool:
    return _RANK[level] >= _RANK[floor]


def _fmt(o) -> str:
    return str(o) if isinstance(o, PolarObject) else format_objs(o)


class Engine:
    """Typechecker and normalizer bound to a signature and a level."""

    def __init__(self, sig: Signature, level: str, monoid: ScalarMonoid | None = None):
        if level not in _RANK:
            raise ValueError(f"unknown level {level!r}; expected one of {', '.join(LEVELS)}")
        self.sig = sig
        self.level = level
        self.polar = level_at_least(level, "cc")
        if monoid is None:
            monoid = scalar_monoid_for(sig) if level == "scc-scalars" else FREE
        self.monoid = monoid
        # normal forms are immutable, so leaves and objects can be shared between terms
        self._objs: dict = {}
        self._leaves: dict = {}
        self._types: dict = {}

    # --- objects --------------------------------------------------------

    def obj(self, o):
        hit = self._objs.get(o)
        if hit is None:
            hit = self._objs[o] = self._obj(o)
        return hit

    def _obj(self, o):
        if isinstance(o, ObjUnit):
            return cc.UNIT if self.polar else ()
        if isinstance(o, ObjAtom):
            if o.name not in self.sig.object_index:
                raise TypeMismatch(f"unknown object {o.name!r}")
            return cc.atom(o.name) if self.polar else (o.name,)
        if isinstance(o, ObjTensor):
            return self._tensor_obj(self.obj(o.left), self.obj(o.right))
        if not self.polar:
            raise LevelError(f"dual object {show_obj(o)} needs level cc or above (level is {self.level})")
        return cc.cc_dual(self.obj(o.obj))

    def _tensor_obj(self, a, b):
        return cc.cc_tensor_obj(a, b) if self.polar else a + b

    def _split(self, whole, u, what: str):
        if self.polar:
            try:
                return cc.split_suffix(whole, u)
            except TypeMismatch:
                raise TypeMismatch(f"{what} {_fmt(whole)} does not end in {_fmt(u)}") from None
        if len(u) > len(whole) or tuple(whole[len(whole) - len(u):]) != u:
            raise TypeMismatch(f"{what} {_fmt(whole)} does not end in {_fmt(u)}")
        return whole[: len(whole) - len(u)]

    # --- typing ---------------------------------------------------------

    def _check_level(self, t: Term):
        need = _NEEDS.get(type(t))
        if need and not level_at_least(self.level, need):
            raise LevelError(
                f"position {t.pos}: '{_CONSTRUCTOR[type(t)]}' needs level {need} or above (level is {self.level})"
            )
        if isinstance(t, Dagger) and not self.sig.has_dagger:
            raise LevelError(f"position {t.pos}: '!' needs a dagger pairing in the signature")

    def typecheck(self, t: Term):
        """Return ``(dom, cod)`` of ``t`` or raise TypeMismatch / LevelError."""
        if isinstance(t, _LEAVES):
            hit = self._types.get(t)
            if hit is None:
                hit = self._types[t] = self._typecheck(t)
            return hit
        return self._typecheck(t)

    def _typecheck(self, t: Term):
        self._check_level(t)
        if isinstance(t, Gen):
            ends = self.sig.arrow_ends.get(t.name)
            if ends is None:
                raise TypeMismatch(f"position {t.pos}: unknown generator {t.name!r}")
            return self.obj(ObjAtom(ends[0])), self.obj(ObjAtom(ends[1]))
        if isinstance(t, Id):
            a = self.obj(t.obj)
            return a, a
        if isinstance(t, Compose):
            fd, fc = self.typecheck(t.before)
            gd, gc = self.typecheck(t.after)
            if fc != gd:
                raise TypeMismatch(
                    f"position {t.pos}: cannot compose {show(t.after)} : {_fmt(gd)} -> {_fmt(gc)} "
                    f"after {show(t.before)} : {_fmt(fd)} -> {_fmt(fc)}"
                )
            return fd, gc
        if isinstance(t, Tensor):
            fd, fc = self.typecheck(t.left)
            gd, gc = self.typecheck(t.right)
            return self._tensor_obj(fd, gd), self._tensor_obj(fc, gc)
        if isinstance(t, Trace):
            u = self.obj(t.obj)
            d, c = self.typecheck(t.body)
            return self._split(d, u, "trace domain"), self._split(c, u, "trace codomain")
        if isinstance(t, Sym):
            a, b = self.obj(t.left), self.obj(t.right)
            return self._tensor_obj(a, b), self._tensor_obj(b, a)
        if isinstance(t, Eta):
            a = self.obj(t.obj)
            return cc.UNIT, cc.cc_tensor_obj(cc.cc_dual(a), a)
        if isinstance(t, Eps):
            a = self.obj(t.obj)
            return cc.cc_tensor_obj(a, cc.cc_dual(a)), cc.UNIT
        if isinstance(t, Name):
            a, b = self.typecheck(t.body)
            return cc.UNIT, cc.cc_tensor_obj(cc.cc_dual(a), b)
        if isinstance(t, Coname):
            a, b = self.typecheck(t.body)
            return cc.cc_tensor_obj(a, cc.cc_dual(b)), cc.UNIT
        if isinstance(t, Dual):
            a, b = self.typecheck(t.body)
            return cc.cc_dual(b), cc.cc_dual(a)
        if isinstance(t, Dagger):
            a, b = self.typecheck(t.body)
            return b, a
        raise TypeError(f"not a term: {t!r}")

    # --- normalization --------------------------------------------------

    def normalize(self, t: Term):
        self.typecheck(t)
        return self._nf(t)

    def _nf(self, t: Term):
        if isinstance(t, _LEAVES):
            hit = self._leaves.get(t)
            if hit is None:
                hit = self._leaves[t] = self._nf_node(t)
            return hit
        return self._nf_node(t)

    def _nf_node(self, t: Term):
        lv, sig, mo = self.level, self.sig, self.monoid
        if isinstance(t, Gen):
            label = sig.path(t.name)
            if lv == "m":
                return smc.MonMorphism((label.source,), (label.target,), (label,))
            if lv == "sm":
                return smc.SymMorphism((label.source,), (label.target,), Perm.identity(1), (label,))
            if lv == "tr":
                return ftr.tr_generator(label)
            return cc.cc_generator(label, mo)
        if isinstance(t, Id):
            return self.identity(self.obj(t.obj))
        if isinstance(t, Compose):
            return self.compose(self._nf(t.after), self._nf(t.before))
        if isinstance(t, Tensor):
            return self.tensor(self._nf(t.left), self._nf(t.right))
        if isinstance(t, Sym):
            a, b = self.obj(t.left), self.obj(t.right)
            if lv == "sm":
                return smc.symmetry(sig, a, b)
            if lv == "tr":
                return ftr.tr_symmetry(sig, a, b)
            return cc.cc_symmetry(sig, a, b, mo)
        if isinstance(t, Trace):
            u = self.obj(t.obj)
            body = self._nf(t.body)
            if lv == "tr":
                return ftr.trace(body, len(u))
            return cc.cc_trace(sig, body, u, mo)
        if isinstance(t, Eta):
            return cc.unit(sig, self.obj(t.obj), mo)
        if isinstance(t, Eps):
            return cc.counit(sig, self.obj(t.obj), mo)
        if isinstance(t, Name):
            f = self._nf(t.body)
            expanded = self.compose(self.tensor(self.identity(cc.cc_dual(f.dom)), f), cc.unit(sig, f.dom, mo))
            _agree(expanded, cc.name(f), "name")
            return expanded
        if isinstance(t, Coname):
            f = self._nf(t.body)
            expanded = self.compose(cc.counit(sig, f.cod, mo), self.tensor(f, self.identity(cc.cc_dual(f.cod))))
            _agree(expanded, cc.coname(f), "coname")
            return expanded
        if isinstance(t, Dual):
            return cc.dual_morphism(self._nf(t.body))
        if isinstance(t, Dagger):
            return cc.cc_dagger(self._nf(t.body), mo)
        raise TypeError(f"not a term: {t!r}")

    def identity(self, a):
        if self.level == "m":
            return smc.mon_identity(self.sig, a)
        if self.level == "sm":
            return smc.sym_identity(self.sig, a)
        if self.level == "tr":
            return ftr.tr_identity(self.sig, a)
        return cc.cc_identity(self.sig, a, self.monoid)

    def compose(self, g, f):
        if self.level == "m":
            return smc.mon_compose(g, f)
        if self.level == "sm":
            return smc.sym_compose(g, f)
        if self.level == "tr":
            return ftr.tr_compose(g, f)
        return cc.cc_compose(g, f, self.monoid)

    def tensor(self, f, g):
        if self.level == "m":
            return smc.mon_tensor(f, g)
        if self.level == "sm":
            return smc.sym_tensor(f, g)
        if self.level == "tr":
            return ftr.tr_tensor(f, g)
        return cc.cc_tensor(f, g, self.monoid)


def _agree(expanded, fast, what: str):
    if expanded != fast:
        raise AssertionError(f"{what}: definitional expansion and repolarization disagree")


def typecheck(t: Term, level: str, sig: Signature):
    return Engine(sig, level).typecheck(t)


def normalize(t: Term, level: str, sig: Signature, monoid: ScalarMonoid | None = None):
    return Engine(sig, level, monoid).normalize(t)


@dataclass(frozen=True)
class Verdict:
    equal: bool
    left: Any
    right: Any


def decide_eq(t1: Term, t2: Term, level: str, sig: Signature, monoid: ScalarMonoid | None = None) -> Verdict:
    """Compare normal forms; both normal forms are returned as the certificate."""
    eng = Engine(sig, level, monoid)
    b1, b2 = eng.typecheck(t1), eng.typecheck(t2)
    if b1 != b2:
        raise TypeMismatch(
            f"boundaries differ: {_fmt(b1[0])} -> {_fmt(b1[1])} vs {_fmt(b2[0])} -> {_fmt(b2[1])}"
        )
    # both sides are already typechecked
    n1, n2 = eng._nf(t1), eng._nf(t2)
    return Verdict(n1 == n2, n1, n2)


# --- reification ------------------------------------------------------------


def path_term(p: BasePath) -> Term:
    if p.is_identity:
        return Id(ObjAtom(p.source))
    t: Term = Gen(p.arrows[0])
    for a in p.arrows[1:]:
        t = Compose(Gen(a), t)
    return t


def tensor_terms(terms: list[Term]) -> Term:
    if not terms:
        return Id(ObjUnit())
    out = terms[0]
    for t in terms[1:]:
        out = Tensor(out, t)
    return out


def compose_terms(terms: list[Term], obj) -> Term:
    """Compose in application order; the empty list is ``id(obj)``."""
    if not terms:
        return Id(obj)
    out = terms[0]
    for t in terms[1:]:
        out = Compose(t, out)
    return out


def permutation_term(objs, perm) -> Term:
    """Term of the structural iso moving strand i of ``objs`` to ``perm(i)``, built from adjacent swaps."""
    cur = list(range(len(objs)))
    steps = []
    swapped = True
    while swapped:
        swapped = False
        for j in range(len(cur) - 1):
            if perm(cur[j]) > perm(cur[j + 1]):
                here = [objs[s] for s in cur]
                steps.append(
                    tensor_terms(
                        [Id(obj_of_list(here[:j])), Sym(ObjAtom(here[j]), ObjAtom(here[j + 1])), Id(obj_of_list(here[j + 2:]))]
                    )
                )
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                swapped = True
    return compose_terms(steps, obj_of_list(objs))


def _scalar_terms(s: LoopMultiset) -> list[Term]:
    out = []
    for loop in s:
        q = ObjAtom(loop.obj)
        body = path_term(BasePath(loop.obj, loop.obj, loop.word, loop.sig))
        out.append(Trace(q, body))
    return out


def reify(nf) -> Term:
    """A term whose normal form is ``nf`` (free scalars only)."""
    if isinstance(nf, smc.MonMorphism):
        return tensor_terms([path_term(lab) for lab in nf.labels])
    if isinstance(nf, smc.SymMorphism):
        mid = [nf.cod[nf.perm(i)] for i in range(len(nf.dom))]
        body = tensor_terms([path_term(lab) for lab in nf.labels])
        iso = permutation_term(mid, nf.perm)
        return Compose(iso, body) if len(nf.dom) > 1 else body
    if isinstance(nf, ftr.TracedMorphism):
        core = reify(smc.SymMorphism(nf.dom, nf.cod, nf.perm, nf.labels))
        return tensor_terms(_scalar_terms(nf.scalars) + [core])
    if isinstance(nf, cc.CCMorphism):
        if not isinstance(nf.scalars, LoopMultiset):
            raise ValueError("only free scalars can be reified")
        g = reify(cc.to_traced(nf))
        p, n = obj_of_list(nf.dom.pos), obj_of_list(nf.dom.neg)
        p2, n2 = obj_of_list(nf.cod.pos), obj_of_list(nf.cod.neg)
        step1 = tensor_terms([Id(p), Id(ObjDual(n)), Eta(ObjDual(n2))])
        swap = tensor_terms([Id(p), Sym(ObjDual(n), n2), Id(ObjDual(n2))])
        step2 = tensor_terms([g, Id(ObjDual(n)), Id(ObjDual(n2))])
        step3 = tensor_terms([Id(p2), Eps(n), Id(ObjDual(n2))])
        return compose_terms([step1, swap, step2, step3], ObjUnit())
    raise TypeError(f"not a normal form: {type(nf).__name__}")

