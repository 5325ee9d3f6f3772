"""Surface syntax for morphism terms.

Grammar (loosest binding first)::

    term    := tensor ('.' tensor)*          g . f  is g after f
    tensor  := postfix ('@' postfix)*
    postfix := atom ('^' | '!')*             dual, dagger
    atom    := NAME | 'id' '(' obj ')' | 'sym' '(' obj ',' obj ')'
             | 'eta' '(' obj ')' | 'eps' '(' obj ')'
             | 'name' '(' term ')' | 'coname' '(' term ')'
             | 'Tr' '[' obj ']' '(' term ')' | '(' term ')'
    obj     := objpost ('@' objpost)*
    objpost := objatom ('^')*
    objatom := 'I' | NAME | '(' obj ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

# --- object expressions ---------------------------------------------------


@dataclass(frozen=True)
class ObjUnit:
    pass


@dataclass(frozen=True)
class ObjAtom:
    name: str


@dataclass(frozen=True)
class ObjDual:
    obj: "Obj"


@dataclass(frozen=True)
class ObjTensor:
    left: "Obj"
    right: "Obj"


Obj = ObjUnit | ObjAtom | ObjDual | ObjTensor

# --- terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    name: str
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Id:
    obj: Obj
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Compose:
    after: "Term"
    before: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Tensor:
    left: "Term"
    right: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Trace:
    obj: Obj
    body: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Sym:
    left: Obj
    right: Obj
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Eta:
    obj: Obj
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Eps:
    obj: Obj
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Name:
    body: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Coname:
    body: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Dual:
    body: "Term"
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Dagger:
    body: "Term"
    pos: int = field(default=-1, compare=False)


Term = Gen | Id | Compose | Tensor | Trace | Sym | Eta | Eps | Name | Coname | Dual | Dagger


def obj_of_list(names) -> Obj:
    """Right-nested tensor of atoms, or I for the empty list."""
    names = list(names)
    if not names:
        return ObjUnit()
    out: Obj = ObjAtom(names[-1])
    for n in reversed(names[:-1]):
        out = ObjTensor(ObjAtom(n), out)
    return out


def show_obj(o: Obj, prec: int = 0) -> str:
    if isinstance(o, ObjUnit):
        return "I"
    if isinstance(o, ObjAtom):
        return o.name
    if isinstance(o, ObjDual):
        return show_obj(o.obj, 1) + "^"
    s = f"{show_obj(o.left, 0)} @ {show_obj(o.right, 1)}"
    return f"({s})" if prec > 0 else s


def show(t: Term, prec: int = 0) -> str:
    """Print a term so that ``parse(show(t)) == t``."""
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, Id):
        return f"id({show_obj(t.obj)})"
    if isinstance(t, Sym):
        return f"sym({show_obj(t.left)}, {show_obj(t.right)})"
    if isinstance(t, Eta):
        return f"eta({show_obj(t.obj)})"
    if isinstance(t, Eps):
        return f"eps({show_obj(t.obj)})"
    if isinstance(t, Name):
        return f"name({show(t.body)})"
    if isinstance(t, Coname):
        return f"coname({show(t.body)})"
    if isinstance(t, Trace):
        return f"Tr[{show_obj(t.obj)}]({show(t.body)})"
    if isinstance(t, Dual):
        return show(t.body, 2) + "^"
    if isinstance(t, Dagger):
        return show(t.body, 2) + "!"
    if isinstance(t, Tensor):
        s = f"{show(t.left, 1)} @ {show(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    s = f"{show(t.after, 0)} . {show(t.before, 1)}"
    return f"({s})" if prec > 0 else s


# --- parser ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[.@^!()\[\],]))")
KEYWORDS = {"id", "sym", "eta", "eps", "name", "coname", "Tr", "I"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            break
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        start = m.start("name") if m.group("name") else m.start("punct")
        if m.group("name"):
            kind = "kw" if m.group("name") in KEYWORDS else "name"
            out.append((kind, m.group("name"), start))
        else:
            out.append(("punct", m.group("punct"), start))
        i = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def at(self, value: str) -> bool:
        return self.tok[1] == value and self.tok[0] in ("punct", "kw")

    def expect(self, value: str):
        if not self.at(value):
            found = self.tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", self.tok[2])
        self.i += 1

    def term(self) -> Term:
        t = self.tensor()
        while self.at("."):
            pos = self.tok[2]
            self.i += 1
            t = Compose(t, self.tensor(), pos)
        return t

    def tensor(self) -> Term:
        t = self.postfix()
        while self.at("@"):
            pos = self.tok[2]
            self.i += 1
            t = Tensor(t, self.postfix(), pos)
        return t

    def postfix(self) -> Term:
        t = self.atom()
        while self.at("^") or self.at("!"):
            pos = self.tok[2]
            t = Dual(t, pos) if self.tok[1] == "^" else Dagger(t, pos)
            self.i += 1
        return t

    def atom(self) -> Term:
        kind, value, pos = self.tok
        if kind == "name":
            self.i += 1
            return Gen(value, pos)
        if kind == "kw" and value in ("id", "eta", "eps"):
            self.i += 1
            self.expect("(")
            o = self.obj()
            self.expect(")")
            return {"id": Id, "eta": Eta, "eps": Eps}[value](o, pos)
        if kind == "kw" and value == "sym":
            self.i += 1
            self.expect("(")
            a = self.obj()
            self.expect(",")
            b = self.obj()
            self.expect(")")
            return Sym(a, b, pos)
        if kind == "kw" and value in ("name", "coname"):
            self.i += 1
            self.expect("(")
            body = self.term()
            self.expect(")")
            return (Name if value == "name" else Coname)(body, pos)
        if kind == "kw" and value == "Tr":
            self.i += 1
            self.expect("[")
            o = self.obj()
            self.expect("]")
            self.expect("(")
            body = self.term()
            self.expect(")")
            return Trace(o, body, pos)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise ParseError(f"expected a term, found {value or 'end of input'!r}", pos)

    def obj(self) -> Obj:
        o = self.objpost()
        while self.at("@"):
            self.i += 1
            o = ObjTensor(o, self.objpost())
        return o

    def objpost(self) -> Obj:
        o = self.objatom()
        while self.at("^"):
            self.i += 1
            o = ObjDual(o)
        return o

    def objatom(self) -> Obj:
        kind, value, pos = self.tok
        if kind == "kw" and value == "I":
            self.i += 1
            return ObjUnit()
        if kind == "name":
            self.i += 1
            return ObjAtom(value)
        if self.at("("):
            self.i += 1
            o = self.obj()
            self.expect(")")
            return o
        raise ParseError(f"expected an object, found {value or 'end of input'!r}", pos)


def parse(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok[0] != "eof":
        raise ParseError(f"unexpected {p.tok[1]!r}", p.tok[2])
    return t


def parse_obj(text: str) -> Obj:
    p = _Parser(text)
    o = p.obj()
    if p.tok[0] != "eof":
        raise ParseError(f"unexpected {p.tok[1]!r}", p.tok[2])
    return o
