"""Free compact closed and strongly compact closed categories.

Objects are polarized pairs ``(pos, neg)`` read as ``pos @ neg^``.  A
morphism ``f : A -> B`` has strands running from the index list
``A.pos + B.neg`` (its *inputs*) to ``B.pos + A.neg`` (its *outputs*);
strand ``i`` lands on output ``perm(i)`` with base label ``labels[i]``.
Composition feeds outputs of each side into inputs of the other and chases
tokens until they leave; closed circuits become scalars.

Every operation takes an optional scalar monoid; the default keeps loops as
free multisets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .errors import ScalarMonoidError, TypeMismatch
from .freesmc import ObjList, check_labels
from .freetraced import TracedMorphism
from .permkit import Flow, Perm, execution_walk
from .scalars import FREE, PhiScalars, ScalarMonoid
from .signature import (
    BasePath,
    LoopClass,
    Signature,
    compose_paths,
    dagger_base,
    dagger_loop,
    loop_class,
    loop_classes_upto,
)


@dataclass(frozen=True)
class PolarObject:
    pos: ObjList = ()
    neg: ObjList = ()

    def __str__(self) -> str:
        parts = list(self.pos) + [f"{o}^" for o in self.neg]
        return " @ ".join(parts) if parts else "I"

    def signed(self) -> tuple[tuple[str, str], ...]:
        """Signed-set display: each entry tagged '+' or '-'."""
        return tuple((o, "+") for o in self.pos) + tuple((o, "-") for o in self.neg)

    @classmethod
    def from_signed(cls, entries) -> PolarObject:
        return cls(tuple(o for o, s in entries if s == "+"), tuple(o for o, s in entries if s == "-"))

    @property
    def size(self) -> int:
        return len(self.pos) + len(self.neg)


UNIT = PolarObject()


def atom(obj: str) -> PolarObject:
    return PolarObject((obj,), ())


def cc_tensor_obj(a: PolarObject, b: PolarObject) -> PolarObject:
    return PolarObject(a.pos + b.pos, a.neg + b.neg)


def cc_dual(a: PolarObject) -> PolarObject:
    return PolarObject(a.neg, a.pos)


@dataclass(frozen=True)
class CCMorphism:
    scalars: Any
    perm: Perm
    labels: tuple[BasePath, ...]
    dom: PolarObject
    cod: PolarObject

    def __post_init__(self):
        check_labels(self.inputs, self.outputs, self.perm, self.labels)

    @property
    def inputs(self) -> ObjList:
        return self.dom.pos + self.cod.neg

    @property
    def outputs(self) -> ObjList:
        return self.cod.pos + self.dom.neg


def cc_identity(sig: Signature, a: PolarObject, monoid: ScalarMonoid = FREE) -> CCMorphism:
    k = a.size
    return CCMorphism(monoid.unit, Perm.identity(k), tuple(sig.identity(o) for o in a.pos + a.neg), a, a)


def cc_generator(label: BasePath, monoid: ScalarMonoid = FREE) -> CCMorphism:
    return CCMorphism(monoid.unit, Perm.identity(1), (label,), atom(label.source), atom(label.target))


def _reindex(f: CCMorphism, dom: PolarObject, cod: PolarObject, in_map, out_map, scalars=None) -> CCMorphism:
    k = len(f.labels)
    images = [0] * k
    labels: list = [None] * k
    for i in range(k):
        images[in_map(i)] = out_map(f.perm(i))
        labels[in_map(i)] = f.labels[i]
    return CCMorphism(f.scalars if scalars is None else scalars, Perm(tuple(images)), tuple(labels), dom, cod)


def _swap(first: int, second: int):
    """Index map taking a list split [X (first), Y (second)] to [Y, X]."""
    return lambda i: second + i if i < first else i - first


def cc_compose(g: CCMorphism, f: CCMorphism, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """``g`` after ``f`` by the execution formula."""
    if f.cod != g.dom:
        raise TypeMismatch(f"cannot compose: codomain {f.cod} != domain {g.dom}")
    n, p, r = len(f.dom.pos), len(f.cod.pos), len(g.cod.pos)
    flow: Flow = execution_walk(f.perm, g.perm, n=n, p=p, r=r)

    def hop_label(hop):
        side, idx = hop
        return f.labels[idx] if side == "pi" else g.labels[idx]

    labels = tuple(compose_paths(hop_label(h) for h in path) for path in flow.paths)
    scalars = monoid.mul(f.scalars, g.scalars)
    for cyc in flow.loops:
        scalars = monoid.mul(scalars, monoid.harvest(loop_class(compose_paths(hop_label(h) for h in cyc))))
    return CCMorphism(scalars, flow.theta, labels, f.dom, g.cod)


def cc_tensor(f: CCMorphism, g: CCMorphism, monoid: ScalarMonoid = FREE) -> CCMorphism:
    a_pos, b_neg = len(f.dom.pos), len(f.cod.neg)
    c_pos, d_neg = len(g.dom.pos), len(g.cod.neg)
    b_pos, a_neg = len(f.cod.pos), len(f.dom.neg)
    d_pos, c_neg = len(g.cod.pos), len(g.dom.neg)
    # inputs [A+, C+, B-, D-]; outputs [B+, D+, A-, C-]

    def f_in(i):
        return i if i < a_pos else a_pos + c_pos + (i - a_pos)

    def g_in(i):
        return a_pos + i if i < c_pos else a_pos + c_pos + b_neg + (i - c_pos)

    def f_out(j):
        return j if j < b_pos else b_pos + d_pos + (j - b_pos)

    def g_out(j):
        return b_pos + j if j < d_pos else b_pos + d_pos + a_neg + (j - d_pos)

    k = len(f.labels) + len(g.labels)
    images = [0] * k
    labels: list = [None] * k
    for i in range(len(f.labels)):
        images[f_in(i)] = f_out(f.perm(i))
        labels[f_in(i)] = f.labels[i]
    for i in range(len(g.labels)):
        images[g_in(i)] = g_out(g.perm(i))
        labels[g_in(i)] = g.labels[i]
    assert k == a_pos + c_pos + b_neg + d_neg == b_pos + d_pos + a_neg + c_neg
    return CCMorphism(
        monoid.mul(f.scalars, g.scalars),
        Perm(tuple(images)),
        tuple(labels),
        cc_tensor_obj(f.dom, g.dom),
        cc_tensor_obj(f.cod, g.cod),
    )


def cc_permutation(
    sig: Signature, a: PolarObject, pos_order: tuple[int, ...], neg_order: tuple[int, ...], monoid: ScalarMonoid = FREE
) -> CCMorphism:
    """Structural iso ``a -> b`` with ``b.pos[j] = a.pos[pos_order[j]]`` and likewise for neg."""
    b = PolarObject(tuple(a.pos[i] for i in pos_order), tuple(a.neg[i] for i in neg_order))
    np_, nn = len(a.pos), len(a.neg)
    pos_inv = {src: j for j, src in enumerate(pos_order)}
    images = [0] * (np_ + nn)
    # inputs [a.pos, b.neg]; outputs [b.pos, a.neg]
    for i in range(np_):
        images[i] = pos_inv[i]
    for j in range(nn):
        images[np_ + j] = np_ + neg_order[j]
    labels = tuple(sig.identity(o) for o in a.pos + b.neg)
    return CCMorphism(monoid.unit, Perm(tuple(images)), labels, a, b)


def cc_symmetry(sig: Signature, a: PolarObject, b: PolarObject, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """The twist a @ b -> b @ a."""
    ap, bp, an, bn = len(a.pos), len(b.pos), len(a.neg), len(b.neg)
    pos_order = tuple(range(ap, ap + bp)) + tuple(range(ap))
    neg_order = tuple(range(an, an + bn)) + tuple(range(an))
    return cc_permutation(sig, cc_tensor_obj(a, b), pos_order, neg_order, monoid)


def _cup_perm(n: int, m: int) -> Perm:
    # [X+ (n), X- (m)] -> [X- (m), X+ (n)]
    return Perm(tuple(m + i for i in range(n)) + tuple(range(m)))


def unit(sig: Signature, a: PolarObject, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """eta_A : I -> A^ @ A."""
    labels = tuple(sig.identity(o) for o in a.pos + a.neg)
    return CCMorphism(monoid.unit, _cup_perm(len(a.pos), len(a.neg)), labels, UNIT, cc_tensor_obj(cc_dual(a), a))


def counit(sig: Signature, a: PolarObject, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """eps_A : A @ A^ -> I."""
    labels = tuple(sig.identity(o) for o in a.pos + a.neg)
    return CCMorphism(monoid.unit, _cup_perm(len(a.pos), len(a.neg)), labels, cc_tensor_obj(a, cc_dual(a)), UNIT)


def name(f: CCMorphism) -> CCMorphism:
    """The name I -> A^ @ B of f : A -> B, by repolarization."""
    a, b = f.dom, f.cod
    bp, an = len(b.pos), len(a.neg)
    return _reindex(f, UNIT, cc_tensor_obj(cc_dual(a), b), lambda i: i, _swap(bp, an))


def coname(f: CCMorphism) -> CCMorphism:
    """The coname A @ B^ -> I of f : A -> B, by repolarization."""
    a, b = f.dom, f.cod
    bp, an = len(b.pos), len(a.neg)
    return _reindex(f, cc_tensor_obj(a, cc_dual(b)), UNIT, lambda i: i, _swap(bp, an))


def dual_morphism(f: CCMorphism) -> CCMorphism:
    """f^ : B^ -> A^; the same strands with inputs and outputs re-marked."""
    a, b = f.dom, f.cod
    ap, bn, bp, an = len(a.pos), len(b.neg), len(b.pos), len(a.neg)
    return _reindex(f, cc_dual(b), cc_dual(a), _swap(ap, bn), _swap(bp, an))


def cc_dagger(f: CCMorphism, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """Reverse every strand and loop, relabelling with daggered paths."""
    inv = f.perm.inverse()
    labels = tuple(dagger_base(f.labels[inv(j)]) for j in range(len(f.labels)))
    return CCMorphism(monoid.dagger(f.scalars), inv, labels, f.cod, f.dom)


def cc_scalar_mul(s: Any, f: CCMorphism, monoid: ScalarMonoid = FREE) -> CCMorphism:
    return CCMorphism(monoid.mul(s, f.scalars), f.perm, f.labels, f.dom, f.cod)


def split_suffix(obj: PolarObject, u: PolarObject) -> PolarObject:
    """The object X with X @ u == obj."""
    rest = PolarObject(obj.pos[: len(obj.pos) - len(u.pos)], obj.neg[: len(obj.neg) - len(u.neg)])
    if cc_tensor_obj(rest, u) != obj:
        raise TypeMismatch(f"{obj} does not end in {u}")
    return rest


def cc_trace(sig: Signature, f: CCMorphism, u: PolarObject, monoid: ScalarMonoid = FREE) -> CCMorphism:
    """Canonical trace Tr^U(f) = (1_B @ eps_U) . (f @ 1_U^) . (1_A @ eta_U^)."""
    try:
        a = split_suffix(f.dom, u)
        b = split_suffix(f.cod, u)
    except TypeMismatch:
        raise TypeMismatch(f"trace over {u} needs {f.dom} -> {f.cod} to end in {u} on both sides") from None
    step1 = cc_tensor(cc_identity(sig, a, monoid), unit(sig, cc_dual(u), monoid), monoid)
    step2 = cc_tensor(f, cc_identity(sig, cc_dual(u), monoid), monoid)
    step3 = cc_tensor(cc_identity(sig, b, monoid), counit(sig, u, monoid), monoid)
    return cc_compose(step3, cc_compose(step2, step1, monoid), monoid)


def is_unitary(sig: Signature, f: CCMorphism, monoid: ScalarMonoid = FREE) -> bool:
    fd = cc_dagger(f, monoid)
    return cc_compose(fd, f, monoid) == cc_identity(sig, f.dom, monoid) and cc_compose(
        f, fd, monoid
    ) == cc_identity(sig, f.cod, monoid)


def to_traced(f: CCMorphism) -> TracedMorphism:
    """Read f : A -> B as the traced-category morphism A+ @ B- -> B+ @ A-."""
    return TracedMorphism(f.scalars, f.perm, f.labels, f.inputs, f.outputs)


def from_traced(t: TracedMorphism, dom: PolarObject, cod: PolarObject) -> CCMorphism:
    if t.dom != dom.pos + cod.neg or t.cod != cod.pos + dom.neg:
        raise TypeMismatch(f"{t.dom} -> {t.cod} is not a transpose of {dom} -> {cod}")
    return CCMorphism(t.scalars, t.perm, t.labels, dom, cod)


def strong_axiom_check(sig: Signature, a: PolarObject, monoid: ScalarMonoid = FREE) -> tuple[bool, str]:
    """Build both sides of the strong compact closure axioms for ``a`` and compare.

    Returns ``(ok, report)``; the report lists every failing identity with
    both normal forms.
    """
    from .render import format_normal_form

    c = lambda g, f: cc_compose(g, f, monoid)  # noqa: E731
    t = lambda f, g: cc_tensor(f, g, monoid)  # noqa: E731
    ident = cc_identity(sig, a, monoid)
    da = cc_dual(a)
    eta = unit(sig, a, monoid)
    eta_dag = cc_dagger(eta, monoid)
    checks = {
        "eta_{A^} = tau . eta_A": (unit(sig, da, monoid), c(cc_symmetry(sig, da, a, monoid), eta)),
        "sccc1": (
            c(t(c(eta_dag, cc_symmetry(sig, a, da, monoid)), ident), t(ident, eta)),
            ident,
        ),
        "sccc2 / yanking": (
            c(c(t(eta_dag, ident), t(cc_identity(sig, da, monoid), cc_symmetry(sig, a, a, monoid))), t(eta, ident)),
            ident,
        ),
    }
    failures = []
    for label, (lhs, rhs) in checks.items():
        if lhs != rhs:
            failures.append(f"{label}:\n  lhs {format_normal_form(lhs, monoid)}\n  rhs {format_normal_form(rhs, monoid)}")
    return not failures, "\n".join(failures)


class ScalarCategory:
    """Handle on the strongly compact closed category over ``sig`` with scalars in ``monoid``.

    Methods mirror the module-level operations with the monoid bound.
    """

    def __init__(self, sig: Signature, monoid: ScalarMonoid):
        self.sig = sig
        self.monoid = monoid

    def identity(self, a):
        return cc_identity(self.sig, a, self.monoid)

    def generator(self, label):
        return cc_generator(label, self.monoid)

    def compose(self, g, f):
        return cc_compose(g, f, self.monoid)

    def tensor(self, f, g):
        return cc_tensor(f, g, self.monoid)

    def symmetry(self, a, b):
        return cc_symmetry(self.sig, a, b, self.monoid)

    def unit(self, a):
        return unit(self.sig, a, self.monoid)

    def counit(self, a):
        return counit(self.sig, a, self.monoid)

    def dagger(self, f):
        return cc_dagger(f, self.monoid)

    def trace(self, f, u):
        return cc_trace(self.sig, f, u, self.monoid)

    def scalar_mul(self, s, f):
        return cc_scalar_mul(s, f, self.monoid)

    name = staticmethod(name)
    coname = staticmethod(coname)
    dual = staticmethod(dual_morphism)


def with_scalar_monoid(
    sig: Signature, monoid: ScalarMonoid | str, phi: Callable[[LoopClass], Any] | None = None, check_len: int = 3
) -> ScalarCategory:
    """The free strongly compact closed category over ``sig`` with prescribed scalars.

    ``monoid`` is a ScalarMonoid or one of 'free', 'bool', 'int',
    'gaussian-int' (the latter three need ``phi``).  The monoid laws are
    self-tested and ``phi`` is checked to commute with the involution on all
    loops of length at most ``check_len``.
    """
    if isinstance(monoid, str):
        if monoid == "free":
            monoid = FREE
        else:
            if phi is None:
                raise ScalarMonoidError(f"scalar monoid {monoid!r} needs a loop evaluation")
            monoid = PhiScalars(monoid, phi)
    if isinstance(monoid, PhiScalars):
        monoid.self_test(monoid.sample_elements())
        if sig.has_dagger:
            for loop in loop_classes_upto(sig, check_len):
                if monoid.harvest(dagger_loop(loop)) != monoid.dagger(monoid.harvest(loop)):
                    raise ScalarMonoidError(f"loop evaluation does not respect the involution at {loop}")
    return ScalarCategory(sig, monoid)
