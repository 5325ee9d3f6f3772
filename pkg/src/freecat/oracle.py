"""Soundness oracle: evaluate terms in a matrix model directly and via normal forms.

The direct evaluator interprets every constructor by its textbook matrix
meaning (composition is a product, tensor a Kronecker product with legs
regrouped, trace a partial trace, units and counits delta tensors).  It never
looks at normal forms, so agreement with ``evaluate(normalize(t))`` is an
independent check of the normalizer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from . import freecc as cc
from .engine import Engine, level_at_least
from .freecc import PolarObject
from .models import Interpretation, SemiringMatrix, evaluate, identity, phi_of
from .randgen import random_terms
from .scalars import FREE, PhiScalars
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
    ObjUnit,
    Sym,
    Tensor,
    Term,
    Trace,
    show,
)


class DirectEvaluator:
    def __init__(self, interp: Interpretation):
        self.interp = interp
        self.kind = interp.kind
        self._memo: dict = {}

    def _cached(self, key, build):
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = build()
        return hit

    def obj(self, o) -> PolarObject:
        return self._cached(("obj", o), lambda: self._obj(o))

    def _obj(self, o) -> PolarObject:
        if isinstance(o, ObjUnit):
            return cc.UNIT
        if isinstance(o, ObjAtom):
            return cc.atom(o.name)
        if isinstance(o, ObjTensor):
            return cc.cc_tensor_obj(self.obj(o.left), self.obj(o.right))
        if isinstance(o, ObjDual):
            return cc.cc_dual(self.obj(o.obj))
        raise TypeError(o)

    def dims(self, objs) -> list[int]:
        return [self.interp.dim(o) for o in objs]

    def size(self, a: PolarObject) -> int:
        return prod(self.dims(a.pos + a.neg))

    def ident(self, a: PolarObject) -> SemiringMatrix:
        return self._cached(("id", a), lambda: identity(self.kind, self.size(a)))

    def _from_identity(self, a: PolarObject, rows, cols) -> SemiringMatrix:
        """Regroup the legs of id_a: legs R+ R- then C+ C-, given as lists of named blocks."""
        n, m = len(a.pos), len(a.neg)
        blocks = {
            "R+": list(range(n)),
            "R-": list(range(n, n + m)),
            "C+": list(range(n + m, 2 * n + m)),
            "C-": list(range(2 * n + m, 2 * n + 2 * m)),
        }
        d = self.dims(a.pos + a.neg)
        return self.ident(a).permute_legs(d, d, sum((blocks[b] for b in rows), []), sum((blocks[b] for b in cols), []))

    def eta(self, a: PolarObject) -> SemiringMatrix:
        # I -> A* @ A; legs (A-, A+ | A+, A-), each strand paired with its copy
        return self._cached(("eta", a), lambda: self._from_identity(a, ["R-", "R+", "C+", "C-"], []))

    def eps(self, a: PolarObject) -> SemiringMatrix:
        # A @ A* -> I; legs (A+, A- | A-, A+)
        return self._cached(("eps", a), lambda: self._from_identity(a, [], ["R+", "R-", "C-", "C+"]))

    def sym(self, a: PolarObject, b: PolarObject) -> SemiringMatrix:
        ab = cc.cc_tensor_obj(a, b)
        d = self.dims(ab.pos + ab.neg)
        # legs [a+ b+ a- b-] -> rows [b+ a+ b- a-]
        ap, bp, an, bn = len(a.pos), len(b.pos), len(a.neg), len(b.neg)
        order = (
            list(range(ap, ap + bp))
            + list(range(ap))
            + list(range(ap + bp + an, ap + bp + an + bn))
            + list(range(ap + bp, ap + bp + an))
        )
        return self.ident(ab).permute_legs(d, d, order, list(range(len(d), 2 * len(d))))

    def tensor(self, f, fd, fc, g, gd, gc) -> SemiringMatrix:
        rows_f, rows_g = self.dims(fc.pos + fc.neg), self.dims(gc.pos + gc.neg)
        cols_f, cols_g = self.dims(fd.pos + fd.neg), self.dims(gd.pos + gd.neg)
        k = f.kron(g)
        r = len(rows_f) + len(rows_g)
        bp, bn, dp = len(fc.pos), len(fc.neg), len(gc.pos)
        ap, an, cp = len(fd.pos), len(fd.neg), len(gd.pos)
        # kron legs: rows [B+ B- D+ D-], cols [A+ A- C+ C-]
        rows = _regroup(bp, bn, dp, len(gc.neg), 0)
        cols = _regroup(ap, an, cp, len(gd.neg), r)
        return k.permute_legs(rows_f + rows_g, cols_f + cols_g, rows, cols)

    def eval(self, t: Term):
        """Return (matrix, dom, cod)."""
        if isinstance(t, (Gen, Id, Sym, Eta, Eps)):
            return self._cached(("leaf", t), lambda: self._eval(t))
        return self._eval(t)

    def _eval(self, t: Term):
        if isinstance(t, Gen):
            s, g = self.interp.sig.arrow_ends[t.name]
            return self.interp.matrices[t.name], cc.atom(s), cc.atom(g)
        if isinstance(t, Id):
            a = self.obj(t.obj)
            return self.ident(a), a, a
        if isinstance(t, Compose):
            f, fd, _ = self.eval(t.before)
            g, _, gc = self.eval(t.after)
            return g @ f, fd, gc
        if isinstance(t, Tensor):
            f, fd, fc = self.eval(t.left)
            g, gd, gc = self.eval(t.right)
            return self.tensor(f, fd, fc, g, gd, gc), cc.cc_tensor_obj(fd, gd), cc.cc_tensor_obj(fc, gc)
        if isinstance(t, Sym):
            a, b = self.obj(t.left), self.obj(t.right)
            ab = cc.cc_tensor_obj(a, b)
            return self.sym(a, b), ab, cc.cc_tensor_obj(b, a)
        if isinstance(t, Eta):
            a = self.obj(t.obj)
            return self.eta(a), cc.UNIT, cc.cc_tensor_obj(cc.cc_dual(a), a)
        if isinstance(t, Eps):
            a = self.obj(t.obj)
            return self.eps(a), cc.cc_tensor_obj(a, cc.cc_dual(a)), cc.UNIT
        if isinstance(t, Trace):
            u = self.obj(t.obj)
            f, fd, fc = self.eval(t.body)
            a, b = cc.split_suffix(fd, u), cc.split_suffix(fc, u)
            # rows [B+ U+ B- U-] -> [B+ B- U+ U-], likewise columns
            rows = _trailing(len(b.pos), len(u.pos), len(b.neg), len(u.neg), 0)
            cols = _trailing(len(a.pos), len(u.pos), len(a.neg), len(u.neg), fc.size)
            g = f.permute_legs(self.dims(fc.pos + fc.neg), self.dims(fd.pos + fd.neg), rows, cols)
            return g.partial_trace(self.size(b), self.size(a), self.size(u)), a, b
        if isinstance(t, Name):
            f, a, b = self.eval(t.body)
            da = cc.cc_dual(a)
            lhs = self.tensor(self.ident(da), da, da, f, a, b)
            return lhs @ self.eta(a), cc.UNIT, cc.cc_tensor_obj(da, b)
        if isinstance(t, Coname):
            f, a, b = self.eval(t.body)
            db = cc.cc_dual(b)
            rhs = self.tensor(f, a, b, self.ident(db), db, db)
            return self.eps(b) @ rhs, cc.cc_tensor_obj(a, db), cc.UNIT
        if isinstance(t, Dual):
            f, a, b = self.eval(t.body)
            return self.dual(f, a, b), cc.cc_dual(b), cc.cc_dual(a)
        if isinstance(t, Dagger):
            f, a, b = self.eval(t.body)
            return f.dagger(), b, a
        raise TypeError(f"not a term: {t!r}")

    def dual(self, f: SemiringMatrix, a: PolarObject, b: PolarObject) -> SemiringMatrix:
        """Matrix of f* : B* -> A*: the plain transpose, with each side's legs re-listed as (neg, pos)."""
        ft = f.transpose()
        ap, an, bp, bn = len(a.pos), len(a.neg), len(b.pos), len(b.neg)
        rows = list(range(ap, ap + an)) + list(range(ap))
        cols = [ap + an + i for i in list(range(bp, bp + bn)) + list(range(bp))]
        return ft.permute_legs(self.dims(a.pos + a.neg), self.dims(b.pos + b.neg), rows, cols)


def _regroup(xp: int, xn: int, yp: int, yn: int, base: int) -> list[int]:
    # legs [X+ X- Y+ Y-] -> [X+ Y+ X- Y-]
    xs = list(range(base, base + xp))
    xm = list(range(base + xp, base + xp + xn))
    ys = list(range(base + xp + xn, base + xp + xn + yp))
    ym = list(range(base + xp + xn + yp, base + xp + xn + yp + yn))
    return xs + ys + xm + ym


def _trailing(xp: int, up: int, xn: int, un: int, base: int) -> list[int]:
    # legs [X+ U+ X- U-] -> [X+ X- U+ U-]
    xs = list(range(base, base + xp))
    us = list(range(base + xp, base + xp + up))
    xm = list(range(base + xp + up, base + xp + up + xn))
    um = list(range(base + xp + up + xn, base + xp + up + xn + un))
    return xs + xm + us + um


@dataclass
class FunctorReport:
    level: str
    kind: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        head = f"{self.level}/{self.kind}: {self.cases} terms, {len(self.failures)} failures"
        return "\n".join([head] + self.failures[:5])


def check_term(
    t: Term, level: str, sig: Signature, interp: Interpretation, nf=None, monoid=FREE, direct=None
) -> str | None:
    """Compare the two evaluation routes for ``t``; return a description of any disagreement.

    ``nf`` may be passed in when the caller already normalized ``t`` with ``monoid``;
    ``direct`` is a DirectEvaluator to reuse across calls.
    """
    if nf is None:
        if level == "scc-scalars":
            monoid = PhiScalars(interp.kind, phi_of(interp))
        nf = Engine(sig, level, monoid).normalize(t)
    direct = direct or DirectEvaluator(interp)
    m, a, b = direct.eval(t)
    via_nf = evaluate(nf, interp, monoid)
    if via_nf != m:
        return f"{show(t)}: normal form evaluates to {via_nf}, direct evaluation gives {m}"
    if level_at_least(level, "cc"):
        if evaluate(cc.dual_morphism(nf), interp, monoid) != direct.dual(m, a, b):
            return f"{show(t)}: dual is not the transpose"
    if level_at_least(level, "scc") and sig.has_dagger:
        if evaluate(cc.cc_dagger(nf, monoid), interp, monoid) != m.dagger():
            return f"{show(t)}: dagger is not the conjugate transpose"
    return None


def functor_check(
    sig: Signature,
    interps: Interpretation | list[Interpretation],
    level: str,
    seed: int,
    cases: int,
    depth: int = 3,
    max_strands: int = 4,
) -> list[FunctorReport]:
    """Random terms at ``level``, each checked in every model; one report per model."""
    if isinstance(interps, Interpretation):
        interps = [interps]
    reports = [FunctorReport(level, i.kind) for i in interps]
    if level == "scc-scalars":
        engines = [Engine(sig, level, PhiScalars(i.kind, phi_of(i))) for i in interps]
    else:
        engines = [Engine(sig, level, FREE)] * len(interps)
    evaluators = [DirectEvaluator(i) for i in interps]
    for t in random_terms(sig, level, seed, cases, depth=depth, max_strands=max_strands):
        nfs = {}
        for report, interp, eng, direct in zip(reports, interps, engines, evaluators):
            report.cases += 1
            if id(eng) not in nfs:
                nfs[id(eng)] = eng.normalize(t)
            problem = check_term(t, level, sig, interp, nfs[id(eng)], eng.monoid, direct)
            if problem:
                report.failures.append(problem)
    return reports
