"""Stable text and DOT output for normal forms."""
from __future__ import annotations

from .freecc import CCMorphism
from .freesmc import MonMorphism, SymMorphism, format_objs
from .freetraced import TracedMorphism
from .permkit import Perm
from .scalars import FREE, ScalarMonoid
from .signature import EMPTY, LoopMultiset


def _parts(nf):
    """(scalars, perm, labels, dom text, cod text, inputs, outputs) of any normal form.

    ``inputs``/``outputs`` are (object, polarity, side) triples for the
    boundary dots, in strand index order.
    """
    if isinstance(nf, MonMorphism):
        nf = SymMorphism(nf.dom, nf.cod, Perm.identity(len(nf.labels)), nf.labels)
    if isinstance(nf, SymMorphism):
        nf = TracedMorphism(EMPTY, nf.perm, nf.labels, nf.dom, nf.cod)
    if isinstance(nf, TracedMorphism):
        ins = [(o, "+", "dom", i) for i, o in enumerate(nf.dom)]
        outs = [(o, "+", "cod", j) for j, o in enumerate(nf.cod)]
        return nf.scalars, nf.perm, nf.labels, format_objs(nf.dom), format_objs(nf.cod), ins, outs
    if isinstance(nf, CCMorphism):
        d, c = nf.dom, nf.cod
        ins = [(o, "+", "dom", i) for i, o in enumerate(d.pos)]
        ins += [(o, "-", "cod", len(c.pos) + j) for j, o in enumerate(c.neg)]
        outs = [(o, "+", "cod", j) for j, o in enumerate(c.pos)]
        outs += [(o, "-", "dom", len(d.pos) + j) for j, o in enumerate(d.neg)]
        return nf.scalars, nf.perm, nf.labels, str(d), str(c), ins, outs
    raise TypeError(f"not a normal form: {type(nf).__name__}")


def format_scalars(s, monoid: ScalarMonoid = FREE) -> str:
    if isinstance(s, LoopMultiset):
        return str(s)
    return monoid.fmt(s)


def format_normal_form(nf, monoid: ScalarMonoid = FREE) -> str:
    """``scalars {..} ; perm (..) ; labels [1: word, ..] ; dom .. ; cod ..``"""
    scalars, perm, labels, dom, cod, _, _ = _parts(nf)
    labs = ", ".join(f"{i + 1}: {lab}" for i, lab in enumerate(labels))
    return f"scalars {format_scalars(scalars, monoid)} ; perm {perm} ; labels [{labs}] ; dom {dom} ; cod {cod}"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(nf, monoid: ScalarMonoid = FREE) -> str:
    """Graphviz source: a node per boundary dot, an edge per strand, detached loops."""
    scalars, perm, labels, dom, cod, ins, outs = _parts(nf)

    def node_id(side, k):
        return f"{side}{k + 1}"

    lines = ["digraph normal_form {", "  rankdir=TB;", "  node [shape=circle, fontsize=10];"]
    dom_dots = sorted({(k, o, pol) for o, pol, side, k in ins + outs if side == "dom"})
    cod_dots = sorted({(k, o, pol) for o, pol, side, k in ins + outs if side == "cod"})
    for side, dots in (("dom", dom_dots), ("cod", cod_dots)):
        lines.append(f"  subgraph cluster_{side} {{")
        lines.append(f"    label={_quote(dom if side == 'dom' else cod)};")
        lines.append("    rank=same;")
        for k, o, pol in dots:
            lines.append(f"    {node_id(side, k)} [label={_quote(o + pol)}];")
        lines.append("  }")
    for i, lab in enumerate(labels):
        _, _, s_side, s_k = ins[i]
        _, _, t_side, t_k = outs[perm(i)]
        lines.append(f"  {node_id(s_side, s_k)} -> {node_id(t_side, t_k)} [label={_quote(str(lab))}];")
    if isinstance(scalars, LoopMultiset):
        loops = [str(loop) for loop in scalars]
    else:
        loops = [] if scalars == monoid.unit else [monoid.fmt(scalars)]
    for n, text in enumerate(loops, start=1):
        lines.append(f"  loop{n} [shape=point];")
        lines.append(f"  loop{n} -> loop{n} [label={_quote(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
