"""Generating categories given as finite presentations.

The base category is the free path category on a directed graph: objects are
declared names, morphisms are composable arrow words.  Loops are endomorphisms
up to rotation; multisets of loops are the free scalars.
"""
from __future__ import annotations

import ast
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import NoDaggerError, SignatureError, TypeMismatch

SCALAR_KINDS = ("free", "bool", "int", "gaussian-int")

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_NAME_RE = re.compile(rf"^{_NAME}$")
RESERVED = frozenset({"I", "id", "Tr", "sym", "eta", "eps", "name", "coname"})


@dataclass(eq=False)
class Signature:
    objects: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]
    dagger_pairing: dict[str, str] | None = None
    scalar_kind: str = "free"
    dims: dict[str, int] = field(default_factory=dict)
    matrices: dict[str, list[list[tuple[int, int]]]] = field(default_factory=dict)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.arrows = tuple(tuple(a) for a in self.arrows)
        if len(set(self.objects)) != len(self.objects):
            raise SignatureError("duplicate object name")
        seen = set()
        for name, src, tgt in self.arrows:
            if name in seen:
                raise SignatureError(f"duplicate arrow name {name!r}")
            seen.add(name)
            for obj in (src, tgt):
                if obj not in self.objects:
                    raise SignatureError(f"arrow {name!r} uses undeclared object {obj!r}")
        if seen & set(self.objects):
            raise SignatureError("arrow and object names must be distinct")
        if self.dagger_pairing is not None:
            self._check_pairing()
        if self.scalar_kind not in SCALAR_KINDS:
            raise SignatureError(f"unknown scalar kind {self.scalar_kind!r}")

    def _check_pairing(self):
        pairing = self.dagger_pairing
        ends = self.arrow_ends
        for name in ends:
            if name not in pairing:
                raise SignatureError(f"dagger pairing is not total: {name!r} unpaired")
        for a, b in pairing.items():
            if a not in ends or b not in ends:
                raise SignatureError(f"dagger pairs unknown arrow in {a!r} = {b!r}")
            if pairing.get(b) != a:
                raise SignatureError(f"dagger pairing is not an involution at {a!r}")
            sa, ta = ends[a]
            sb, tb = ends[b]
            if (sa, ta) != (tb, sb):
                raise SignatureError(f"dagger of {a!r} must reverse its endpoints")

    @cached_property
    def arrow_ends(self) -> dict[str, tuple[str, str]]:
        return {name: (src, tgt) for name, src, tgt in self.arrows}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {name: i for i, (name, _, _) in enumerate(self.arrows)}

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.objects)}

    @cached_property
    def out_arrows(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {obj: [] for obj in self.objects}
        for name, src, _ in self.arrows:
            out[src].append(name)
        return {k: tuple(v) for k, v in out.items()}

    @property
    def has_dagger(self) -> bool:
        return self.dagger_pairing is not None

    def check_object(self, obj: str) -> str:
        if obj not in self.object_index:
            raise SignatureError(f"undeclared object {obj!r}")
        return obj

    def path(self, *names: str) -> BasePath:
        """The path that traverses ``names`` in order (first arrow first)."""
        if not names:
            raise SignatureError("use identity() for empty paths")
        for n in names:
            if n not in self.arrow_ends:
                raise SignatureError(f"undeclared arrow {n!r}")
        p = BasePath(self.arrow_ends[names[0]][0], self.arrow_ends[names[0]][0], (), self)
        for n in names:
            p = compose_base(BasePath(*self.arrow_ends[n], (n,), self), p)
        return p

    def identity(self, obj: str) -> BasePath:
        self.check_object(obj)
        return BasePath(obj, obj, (), self)


@dataclass(frozen=True)
class BasePath:
    """A morphism of the path category; ``arrows`` is in traversal order."""

    source: str
    target: str
    arrows: tuple[str, ...]
    sig: Signature = field(compare=False, repr=False)

    @property
    def is_identity(self) -> bool:
        return not self.arrows

    def __str__(self) -> str:
        if not self.arrows:
            return f"id({self.source})"
        return ".".join(reversed(self.arrows))


def compose_base(g: BasePath, f: BasePath) -> BasePath:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise TypeMismatch(
            f"cannot compose {g} : {g.source} -> {g.target} after "
            f"{f} : {f.source} -> {f.target} ({f.target} != {g.source})"
        )
    return BasePath(f.source, g.target, f.arrows + g.arrows, f.sig)


def compose_paths(paths: Iterable[BasePath]) -> BasePath:
    """Compose paths given in traversal order (first applied first)."""
    it = iter(paths)
    acc = next(it)
    for p in it:
        acc = compose_base(p, acc)
    return acc


def dagger_base(f: BasePath) -> BasePath:
    pairing = f.sig.dagger_pairing
    if pairing is None:
        raise NoDaggerError("signature declares no dagger pairing")
    return BasePath(f.target, f.source, tuple(pairing[a] for a in reversed(f.arrows)), f.sig)


@dataclass(frozen=True)
class LoopClass:
    """A cyclic class of endomorphisms.

    ``word`` is the least rotation of a composable cycle under declaration
    order; the empty word marks the identity loop at ``obj``.
    """

    word: tuple[str, ...]
    obj: str
    sig: Signature = field(compare=False, repr=False)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def sort_key(self) -> tuple:
        idx = self.sig.arrow_index
        return (len(self.word), tuple(idx[a] for a in self.word), self.sig.object_index[self.obj])

    def __str__(self) -> str:
        if not self.word:
            return f"[id({self.obj})]"
        return "[" + ".".join(reversed(self.word)) + "]"


def _least_rotation(word: tuple[str, ...], sig: Signature) -> tuple[str, ...]:
    idx = sig.arrow_index
    keyed = [idx[a] for a in word]
    best = min(range(len(word)), key=lambda r: keyed[r:] + keyed[:r])
    return word[best:] + word[:best]


def loop_class(e: BasePath) -> LoopClass:
    if e.source != e.target:
        raise TypeMismatch(f"{e} : {e.source} -> {e.target} is not an endomorphism")
    if not e.arrows:
        return LoopClass((), e.source, e.sig)
    word = _least_rotation(e.arrows, e.sig)
    return LoopClass(word, e.sig.arrow_ends[word[0]][0], e.sig)


def dagger_loop(loop: LoopClass) -> LoopClass:
    if not loop.word:
        return loop
    return loop_class(dagger_base(BasePath(loop.obj, loop.obj, loop.word, loop.sig)))


@dataclass(frozen=True)
class LoopMultiset:
    """Finite multiset of loop classes; the free commutative monoid on loops."""

    items: tuple[tuple[LoopClass, int], ...] = ()

    @classmethod
    def of(cls, loops: Iterable[LoopClass] | Counter) -> LoopMultiset:
        counts = loops if isinstance(loops, Counter) else Counter(loops)
        kept = [(k, v) for k, v in counts.items() if v > 0]
        kept.sort(key=lambda kv: kv[0].sort_key())
        return cls(tuple(kept))

    def counter(self) -> Counter:
        return Counter(dict(self.items))

    def __add__(self, other: LoopMultiset) -> LoopMultiset:
        return mset_union(self, other)

    def __iter__(self) -> Iterator[LoopClass]:
        for loop, count in self.items:
            for _ in range(count):
                yield loop

    def __len__(self) -> int:
        return sum(c for _, c in self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        parts = [str(k) if v == 1 else f"{k}^{v}" for k, v in self.items]
        return "{" + ", ".join(parts) + "}"


EMPTY = LoopMultiset()


def mset_union(s: LoopMultiset, t: LoopMultiset) -> LoopMultiset:
    if not t.items:
        return s
    if not s.items:
        return t
    return LoopMultiset.of(s.counter() + t.counter())


def paths_between(sig: Signature, src: str, tgt: str, max_len: int) -> list[BasePath]:
    """All paths src -> tgt with at most ``max_len`` arrows, shortest first."""
    found = []
    frontier = [BasePath(src, src, (), sig)]
    for length in range(max_len + 1):
        found.extend(p for p in frontier if p.target == tgt)
        if length == max_len:
            break
        frontier = [
            BasePath(src, sig.arrow_ends[a][1], p.arrows + (a,), sig)
            for p in frontier
            for a in sig.out_arrows[p.target]
        ]
    return found


def loop_classes_upto(sig: Signature, max_len: int) -> list[LoopClass]:
    """Every loop class whose canonical word has at most ``max_len`` arrows."""
    classes = {LoopClass((), obj, sig) for obj in sig.objects}
    for obj in sig.objects:
        for p in paths_between(sig, obj, obj, max_len):
            classes.add(loop_class(p))
    return sorted(classes, key=LoopClass.sort_key)


# --- text format ----------------------------------------------------------

_GAUSS_TOKEN = re.compile(r"(?<![A-Za-z0-9_.])(\d*)i(?![A-Za-z0-9_])")


def parse_matrix_literal(text: str) -> list[list[tuple[int, int]]]:
    """Parse ``[[1, 2+i], [-i, 0]]`` into rows of (real, imag) integer pairs."""
    pyish = _GAUSS_TOKEN.sub(lambda m: (m.group(1) or "1") + "j", text)
    try:
        rows = ast.literal_eval(pyish)
    except (ValueError, SyntaxError) as exc:
        raise SignatureError(f"bad matrix literal {text!r}") from exc
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SignatureError(f"matrix must be a nonempty list of rows: {text!r}")
    width = len(rows[0])
    out = []
    for r in rows:
        if len(r) != width:
            raise SignatureError(f"ragged matrix {text!r}")
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, complex)):
                raise SignatureError(f"matrix entries must be Gaussian integers: {x!r}")
            z = complex(x)
            if z.real != int(z.real) or z.imag != int(z.imag):
                raise SignatureError(f"non-integral entry {x!r}")
            row.append((int(z.real), int(z.imag)))
        out.append(row)
    return out


def _parse_lines(text: str, allow: set[str]):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        if keyword not in allow:
            raise SignatureError(f"unknown directive {keyword!r}", lineno)
        yield lineno, keyword, line[len(keyword):].strip()


def _check_name(name: str, lineno: int) -> str:
    if not _NAME_RE.match(name) or name in RESERVED:
        raise SignatureError(f"invalid name {name!r}", lineno)
    return name


def _parse_interpret(rest: str, lineno: int, dims: dict, matrices: dict):
    m = re.match(rf"^({_NAME})\s+dim\s+(\d+)$", rest)
    if m:
        dims[m.group(1)] = int(m.group(2))
        return m.group(1)
    m = re.match(rf"^({_NAME})\s+matrix\s+(.+)$", rest)
    if m:
        try:
            matrices[m.group(1)] = parse_matrix_literal(m.group(2))
        except SignatureError as exc:
            raise SignatureError(str(exc), lineno) from None
        return m.group(1)
    raise SignatureError("expected 'interpret <obj> dim <n>' or 'interpret <arrow> matrix [[..]]'", lineno)


def parse_signature(text: str) -> Signature:
    objects: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    pairing: dict[str, str] | None = None
    scalar = "free"
    dims: dict[str, int] = {}
    matrices: dict[str, list] = {}
    lines = {}
    allow = {"object", "arrow", "dagger", "scalar", "interpret"}
    for lineno, kw, rest in _parse_lines(text, allow):
        if kw == "object":
            name = _check_name(rest, lineno)
            if name in objects:
                raise SignatureError(f"duplicate object {name!r}", lineno)
            objects.append(name)
        elif kw == "arrow":
            m = re.match(rf"^({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})$", rest)
            if not m:
                raise SignatureError("expected 'arrow <name> : <obj> -> <obj>'", lineno)
            name, src, tgt = m.groups()
            _check_name(name, lineno)
            for obj in (src, tgt):
                if obj not in objects:
                    raise SignatureError(f"undeclared object {obj!r}", lineno)
            if any(a[0] == name for a in arrows) or name in objects:
                raise SignatureError(f"duplicate name {name!r}", lineno)
            arrows.append((name, src, tgt))
        elif kw == "dagger":
            m = re.match(rf"^({_NAME})\s*=\s*({_NAME})$", rest)
            if not m:
                raise SignatureError("expected 'dagger <arrow> = <arrow>'", lineno)
            a, b = m.groups()
            pairing = pairing if pairing is not None else {}
            for x, y in ((a, b), (b, a)):
                if pairing.get(x, y) != y:
                    raise SignatureError(f"conflicting dagger for {x!r}", lineno)
                pairing[x] = y
            lines[a] = lines[b] = lineno
        elif kw == "scalar":
            if rest not in SCALAR_KINDS:
                raise SignatureError(f"scalar must be one of {', '.join(SCALAR_KINDS)}", lineno)
            scalar = rest
        else:
            _parse_interpret(rest, lineno, dims, matrices)
    try:
        return Signature(tuple(objects), tuple(arrows), pairing, scalar, dims, matrices)
    except SignatureError as exc:
        culprit = next((ln for name, ln in lines.items() if repr(name) in str(exc)), None)
        raise SignatureError(str(exc), culprit) from None


def parse_model(text: str) -> tuple[dict[str, int], dict[str, list]]:
    """Parse a file containing only ``interpret`` (and ignorable) lines."""
    dims: dict[str, int] = {}
    matrices: dict[str, list] = {}
    allow = {"object", "arrow", "dagger", "scalar", "interpret"}
    for lineno, kw, rest in _parse_lines(text, allow):
        if kw == "interpret":
            _parse_interpret(rest, lineno, dims, matrices)
    return dims, matrices


def format_signature(sig: Signature) -> str:
    out = [f"object {o}" for o in sig.objects]
    out += [f"arrow {n} : {s} -> {t}" for n, s, t in sig.arrows]
    if sig.dagger_pairing:
        done = set()
        for n, _, _ in sig.arrows:
            if n not in done:
                m = sig.dagger_pairing[n]
                out.append(f"dagger {n} = {m}")
                done |= {n, m}
    return "\n".join(out) + "\n"
