"""Matrix models: relations as Boolean matrices, and integer / Gaussian-integer matrices.

A polarized object ``(pos, neg)`` is interpreted as the tensor of the
dimensions of its strands, positive strands first.  Each strand is a *leg*
of a matrix; most structural maps are pure leg permutations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import ModelError
from .freecc import CCMorphism, PolarObject, to_traced
from .freesmc import MonMorphism, SymMorphism
from .freetraced import TracedMorphism
from .scalars import FREE, Gaussian, PhiScalars, ScalarMonoid
from .signature import BasePath, LoopClass, LoopMultiset, Signature

KINDS = ("bool", "int", "gaussian-int")
_LIMIT = 2**62
# below this every partial sum is an exactly representable double
_FLOAT_EXACT = 2**53


@dataclass(frozen=True, eq=False)
class SemiringMatrix:
    """Dense exact matrix; ``im`` is present only for Gaussian integers.

    Entries are int64.  ``bound`` is a cheap upper bound on entry sizes,
    propagated through every operation so that overflow is refused, never
    silently wrapped.  A negative bound means "not yet measured".
    """

    kind: str
    re: np.ndarray
    im: np.ndarray | None = None
    bound: int = field(default=-1, compare=False, repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.re.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemiringMatrix) or self.kind != other.kind or self.shape != other.shape:
            return False
        if not np.array_equal(self.re, other.re):
            return False
        return self.im is None or np.array_equal(self.im, other.im)

    __hash__ = None

    def measured(self) -> int:
        if self.kind == "bool" or self.re.size == 0:
            return 1
        top = max(int(self.re.max()), -int(self.re.min()))
        if self.im is not None:
            top = max(top, int(self.im.max()), -int(self.im.min()))
        return top

    def _bound(self) -> int:
        return self.bound if self.bound >= 0 else self.measured()

    def _make(self, re, im=None, bound: int = -1) -> SemiringMatrix:
        if self.kind == "bool":
            return SemiringMatrix(self.kind, (re != 0).astype(np.int64), None, 1)
        return SemiringMatrix(self.kind, re, im if self.kind == "gaussian-int" else None, bound)

    def _product_bound(self, other: SemiringMatrix, inner: int) -> int:
        factor = max(inner, 1) * (2 if self.kind == "gaussian-int" else 1)
        b = self._bound() * other._bound() * factor
        if b >= _LIMIT:
            b = self.measured() * other.measured() * factor
            if b >= _LIMIT:
                raise ModelError("matrix entries too large for exact 64-bit evaluation")
        return b

    def __matmul__(self, other: SemiringMatrix) -> SemiringMatrix:
        if self.shape[1] != other.shape[0]:
            raise ModelError(f"cannot multiply {self.shape} by {other.shape}")
        b = self._product_bound(other, self.shape[1])
        big = self.re.size * other.shape[1] > 4096
        mul = _exact_matmul if big and b < _FLOAT_EXACT else np.matmul
        if self.kind == "gaussian-int":
            re = mul(self.re, other.re) - mul(self.im, other.im)
            im = mul(self.re, other.im) + mul(self.im, other.re)
            return self._make(re, im, b)
        return self._make(mul(self.re, other.re), None, b)

    def is_one(self) -> bool:
        return self.re.shape == (1, 1) and self.re[0, 0] == 1 and (self.im is None or self.im[0, 0] == 0)

    def kron(self, other: SemiringMatrix) -> SemiringMatrix:
        if self.is_one():
            return other
        if other.is_one():
            return self
        b = self._product_bound(other, 1)
        if self.kind == "gaussian-int":
            re = _kron(self.re, other.re) - _kron(self.im, other.im)
            im = _kron(self.re, other.im) + _kron(self.im, other.re)
            return self._make(re, im, b)
        return self._make(_kron(self.re, other.re), None, b)

    def transpose(self) -> SemiringMatrix:
        return self._make(self.re.T.copy(), None if self.im is None else self.im.T.copy(), self.bound)

    def dagger(self) -> SemiringMatrix:
        """Conjugate transpose."""
        return self._make(self.re.T.copy(), None if self.im is None else -self.im.T, self.bound)

    def trace(self) -> SemiringMatrix:
        re = np.array([[np.trace(self.re)]], dtype=np.int64)
        im = None if self.im is None else np.array([[np.trace(self.im)]], dtype=np.int64)
        return self._make(re, im, self._bound() * max(1, min(self.shape)))

    def permute_legs(self, row_dims, col_dims, new_rows, new_cols) -> SemiringMatrix:
        """Regroup legs: legs 0.. are rows then columns; ``new_rows``/``new_cols`` list leg numbers."""
        shape = tuple(row_dims) + tuple(col_dims)
        dims = [*row_dims, *col_dims]
        axes = list(new_rows) + list(new_cols)
        if axes == sorted(axes) and len(new_rows) == len(row_dims):
            return self
        r = prod(dims[a] for a in new_rows)
        c = prod(dims[a] for a in new_cols)

        def go(a):
            return a.reshape(shape).transpose(axes).reshape(r, c).copy()

        return self._make(go(self.re), None if self.im is None else go(self.im), self.bound)

    def partial_trace(self, keep_rows: int, keep_cols: int, traced: int) -> SemiringMatrix:
        """Trace out a trailing factor of size ``traced`` from rows and columns."""

        def go(a):
            return np.einsum("iuju->ij", a.reshape(keep_rows, traced, keep_cols, traced))

        return self._make(go(self.re), None if self.im is None else go(self.im), self._bound() * traced)

    def to_scalar(self):
        if self.shape != (1, 1):
            raise ModelError(f"not a scalar: shape {self.shape}")
        v = int(self.re[0, 0])
        if self.kind == "bool":
            return bool(v)
        if self.kind == "int":
            return v
        return Gaussian(v, int(self.im[0, 0]))

    def entries(self) -> list[list]:
        """Rows of plain Python values (bool as 0/1, Gaussian as ``Gaussian``)."""
        if self.kind == "gaussian-int":
            return [[Gaussian(int(a), int(b)) for a, b in zip(r, i)] for r, i in zip(self.re, self.im)]
        return [[int(a) for a in r] for r in self.re]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries()) + "]"


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # integer matmul has no BLAS path; floats are exact while the entry bound stays small
    return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.kron is general but slow for the tiny matrices used here
    ra, ca = a.shape
    rb, cb = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def matrix(kind: str, rows) -> SemiringMatrix:
    """Build from rows of ints, (re, im) pairs or Gaussians."""
    if kind not in KINDS:
        raise ModelError(f"unknown matrix kind {kind!r}")
    re = np.array([[_re(x) for x in r] for r in rows], dtype=np.int64).reshape(len(rows), -1)
    im = np.array([[_im(x) for x in r] for r in rows], dtype=np.int64).reshape(len(rows), -1)
    if kind != "gaussian-int" and im.any():
        raise ModelError(f"imaginary entries in a {kind} matrix")
    m = SemiringMatrix(kind, re)._make(re, im)
    return m._make(m.re, m.im, m.measured())


def _re(x) -> int:
    if isinstance(x, Gaussian):
        return x.re
    if isinstance(x, tuple):
        return x[0]
    return int(x)


def _im(x) -> int:
    if isinstance(x, Gaussian):
        return x.im
    if isinstance(x, tuple):
        return x[1]
    return 0


def identity(kind: str, n: int) -> SemiringMatrix:
    im = np.zeros((n, n), dtype=np.int64) if kind == "gaussian-int" else None
    return SemiringMatrix(kind, np.eye(n, dtype=np.int64), im, 1)


def scalar(kind: str, value) -> SemiringMatrix:
    re, im = _re(value), _im(value)
    if kind == "bool":
        re = int(re != 0)
    elif kind == "int" and im:
        raise ModelError(f"imaginary entries in a {kind} matrix")
    im_arr = np.array([[im]], dtype=np.int64) if kind == "gaussian-int" else None
    return SemiringMatrix(kind, np.array([[re]], dtype=np.int64), im_arr, max(abs(re), abs(im)))


class Interpretation:
    """Dimensions for objects and matrices for generators, over one semiring.

    Paired generators must be sent to conjugate transposes of each other.
    """

    def __init__(self, sig: Signature, kind: str, dims: dict[str, int], matrices: dict[str, SemiringMatrix]):
        if kind not in KINDS:
            raise ModelError(f"unknown matrix kind {kind!r}")
        self.sig, self.kind, self.dims, self.matrices = sig, kind, dict(dims), dict(matrices)
        self._paths: dict[tuple[str, tuple[str, ...]], SemiringMatrix] = {}
        self._one = scalar(kind, 1)
        for obj in sig.objects:
            if obj not in self.dims:
                raise ModelError(f"object {obj!r} has no dimension")
            if self.dims[obj] < 1:
                raise ModelError(f"object {obj!r} needs a positive dimension")
        for name, src, tgt in sig.arrows:
            m = self.matrices.get(name)
            if m is None:
                raise ModelError(f"generator {name!r} has no matrix")
            want = (self.dims[tgt], self.dims[src])
            if m.shape != want:
                raise ModelError(f"generator {name!r} : {src} -> {tgt} needs a {want[0]}x{want[1]} matrix, got {m.shape}")
            if m.kind != kind:
                raise ModelError(f"generator {name!r} has a {m.kind} matrix in a {kind} model")
        if sig.dagger_pairing:
            for a, b in sig.dagger_pairing.items():
                if self.matrices[b] != self.matrices[a].dagger():
                    raise ModelError(f"paired generators {a!r} and {b!r} are not conjugate transposes")

    @classmethod
    def from_tables(cls, sig: Signature, kind: str, dims: dict[str, int], tables: dict[str, list]) -> Interpretation:
        return cls(sig, kind, dims, {k: matrix(kind, v) for k, v in tables.items()})

    @classmethod
    def from_signature(cls, sig: Signature, kind: str | None = None) -> Interpretation:
        """Use the signature's ``interpret`` lines; the kind defaults from its ``scalar`` line."""
        if kind is None:
            kind = sig.scalar_kind
            if kind == "free":
                has_im = any(im for rows in sig.matrices.values() for r in rows for _, im in r)
                kind = "gaussian-int" if has_im else "int"
        return cls.from_tables(sig, kind, sig.dims, sig.matrices)

    def dim(self, obj: str) -> int:
        return self.dims[obj]

    def path(self, p: BasePath) -> SemiringMatrix:
        key = (p.source, p.arrows)
        hit = self._paths.get(key)
        if hit is None:
            hit = identity(self.kind, self.dims[p.source])
            for a in p.arrows:
                hit = self.matrices[a] @ hit
            self._paths[key] = hit
        return hit

    def loop(self, loop: LoopClass) -> SemiringMatrix:
        """phi(loop): trace of the product around the loop (an identity loop gives the dimension)."""
        return self.path(BasePath(loop.obj, loop.obj, loop.word, loop.sig)).trace()

    def scalars(self, s, monoid: ScalarMonoid = FREE) -> SemiringMatrix:
        if isinstance(s, LoopMultiset):
            acc = self._one
            for loop in s:
                acc = acc.kron(self.loop(loop))
            return acc
        return scalar(self.kind, s)


def phi_of(interp: Interpretation):
    """Loop evaluation into the interpretation's scalars."""
    seen = {}

    def phi(loop):
        if loop not in seen:
            seen[loop] = interp.loop(loop).to_scalar()
        return seen[loop]

    return phi


def scalar_monoid_for(sig: Signature) -> ScalarMonoid:
    """The monoid requested by the signature's ``scalar`` line, with phi from its matrices."""
    if sig.scalar_kind == "free":
        return FREE
    interp = Interpretation.from_signature(sig)
    return PhiScalars(sig.scalar_kind, phi_of(interp))


def _strands(interp: Interpretation, labels, perm, ins, outs) -> SemiringMatrix:
    """The matrix of ``perm^-1 . (x) labels`` from the strand list ``ins`` to ``outs``."""
    k = len(labels)
    acc = scalar(interp.kind, 1)
    for lab in labels:
        acc = acc.kron(interp.path(lab))
    row_dims = [interp.dim(outs[perm(i)]) for i in range(k)]
    col_dims = [interp.dim(o) for o in ins]
    inv = perm.inverse()
    return acc.permute_legs(row_dims, col_dims, [inv(j) for j in range(k)], list(range(k, 2 * k)))


def evaluate(nf, interp: Interpretation, monoid: ScalarMonoid = FREE) -> SemiringMatrix:
    """Matrix of a normal form; rows are codomain legs, columns domain legs."""
    if isinstance(nf, MonMorphism):
        acc = scalar(interp.kind, 1)
        for lab in nf.labels:
            acc = acc.kron(interp.path(lab))
        return acc
    if isinstance(nf, SymMorphism):
        return _strands(interp, nf.labels, nf.perm, nf.dom, nf.cod)
    if isinstance(nf, TracedMorphism):
        return interp.scalars(nf.scalars, monoid).kron(_strands(interp, nf.labels, nf.perm, nf.dom, nf.cod))
    if isinstance(nf, CCMorphism):
        t = to_traced(nf)
        g = _strands(interp, t.labels, t.perm, t.dom, t.cod)
        n, m = len(nf.dom.pos), len(nf.dom.neg)
        p, q = len(nf.cod.pos), len(nf.cod.neg)
        # g: rows [B+ (p), A- (m)], columns [A+ (n), B- (q)]
        row_dims = [interp.dim(o) for o in t.cod]
        col_dims = [interp.dim(o) for o in t.dom]
        rows = list(range(p)) + list(range(p + m + n, p + m + n + q))
        cols = list(range(p + m, p + m + n)) + list(range(p, p + m))
        f = g.permute_legs(row_dims, col_dims, rows, cols)
        return interp.scalars(nf.scalars, monoid).kron(f)
    raise TypeError(f"not a normal form: {type(nf).__name__}")


def random_interpretation(sig: Signature, kind: str, rng, dims: dict[str, int] | None = None, spread: int = 1) -> Interpretation:
    """Random matrices with entries in [-spread, spread] (0/1 for bool), respecting the dagger pairing."""
    dims = dict(dims) if dims else {o: rng.randint(1, 2) for o in sig.objects}

    def entry():
        if kind == "bool":
            return rng.randint(0, 1)
        if kind == "int":
            return rng.randint(-spread, spread)
        return Gaussian(rng.randint(-spread, spread), rng.randint(-spread, spread))

    mats: dict[str, SemiringMatrix] = {}
    pairing = sig.dagger_pairing or {}
    for name, src, tgt in sig.arrows:
        if name in mats:
            continue
        m = matrix(kind, [[entry() for _ in range(dims[src])] for _ in range(dims[tgt])])
        partner = pairing.get(name)
        if partner == name:
            # self-adjoint: keep the upper triangle, mirror it
            upper = np.triu(m.re)
            re = upper + np.triu(m.re, 1).T
            im = None
            if m.im is not None:
                iu = np.triu(m.im, 1)
                im = iu - iu.T
            m = m._make(re, im)
        mats[name] = m
        if partner is not None and partner != name:
            mats[partner] = m.dagger()
    return Interpretation(sig, kind, dims, mats)
