"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Everything is exact; a single disagreement fails the criterion.
"""
from __future__ import annotations

import itertools
import random
from math import factorial

import numpy as np

from freecat.engine import Engine, decide_eq
from freecat.freecc import CCMorphism, PolarObject, cc_compose, cc_dagger, cc_tensor, with_scalar_monoid
from freecat.freesmc import mon_homset, mon_identity, mon_tensor, sym_homset
from freecat.freetraced import full_trace, multisets_upto, scalar_morphism, traced_homset
from freecat.models import random_interpretation
from freecat.oracle import functor_check
from freecat.permkit import (
    Perm,
    Profile,
    analyze,
    execution,
    execution_walk,
    flow_loop_points,
    io_perm_relational,
    loop_membership,
)
from freecat.randgen import polar_obj, random_terms
from freecat.render import format_normal_form
from freecat.scalars import FREE, PhiScalars
from freecat.signature import EMPTY, LoopClass, Signature, loop_classes_upto
from freecat.syntax import Compose, Dagger, Eps, Eta, Id, ObjDual, ObjTensor, ObjUnit, Sym, Tensor, Trace, parse
from helpers import (
    DATA,
    LOOPS,
    load_sig,
    ob,
    random_cc,
    random_objs,
    random_polar,
    random_scalars,
    random_traced,
    term_of,
)

WORKED = "Tr[U1 @ U2 @ U3]((id(A @ U1) @ sym(U3, U2)) . sym(U1 @ U3 @ U2, A) . (f1 @ f2 @ f3 @ f4))"


def verdict(n: int, failures: list, detail: str):
    ok = not failures
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, "\n".join(str(f) for f in failures[:10])


def same(t1, t2, level: str, sig=LOOPS) -> bool:
    return decide_eq(t1, t2, level, sig).equal


# --- 1 --------------------------------------------------------------------


def test_01_worked_example_regression():
    sig = load_sig("worked_example.sig")
    expected = (DATA / "worked_example.nf").read_bytes()
    got = (format_normal_form(Engine(sig, "tr").normalize(parse(WORKED))) + "\n").encode()
    failures = [] if got == expected else [f"got {got!r}, expected {expected!r}"]
    verdict(1, failures, "worked traced example, byte-exact normal form")


# --- 2 --------------------------------------------------------------------


def _chase(pi: Perm, n: int):
    """Plain iteration: visible image and hidden interior of each n-path."""
    images, interiors = [], []
    for i in range(n):
        j, seen = pi(i), []
        while j >= n:
            seen.append(j)
            j = pi(j)
        images.append(j)
        interiors.append(frozenset(seen))
    return images, interiors


def test_02_permutation_geometry_exhaustive():
    failures, cases = [], 0
    for k in range(7):
        for images in itertools.permutations(range(k)):
            pi = Perm(images)
            for n in range(k + 1):
                cases += 1
                geo = analyze(pi, n)
                chased, interiors = _chase(pi, n)
                hidden = set(range(n, k))
                # part 1: every visible point reaches a visible point
                if list(geo.io_perm.images) != chased or list(geo.hidden_visits) != interiors:
                    failures.append((images, n, "path"))
                # part 2: the visible map is a permutation
                if sorted(chased) != list(range(n)):
                    failures.append((images, n, "not a permutation"))
                # part 3: interiors and loops partition the hidden points
                blocks = [set(v) for v in interiors] + [set(c) for c in geo.loops]
                if sum(len(b) for b in blocks) != len(hidden) or set().union(*blocks, set()) != hidden:
                    failures.append((images, n, "partition"))
                if io_perm_relational(pi, n) != geo.io_perm:
                    failures.append((images, n, "relational visible map"))
                on_loops = frozenset(x for c in geo.loops for x in c)
                if loop_membership(pi, n) != on_loops:
                    failures.append((images, n, "relational loop membership"))
    assert cases == sum(factorial(k) * (k + 1) for k in range(7))
    verdict(2, failures, f"{cases} (permutation, visible count) pairs, sizes up to 6")


# --- 3 --------------------------------------------------------------------


def _exec_agrees(pi: Perm, sigma: Perm, n: int, p: int, r: int) -> bool:
    theta, loops = execution(pi, sigma, n=n, p=p, r=r)
    flow = execution_walk(pi, sigma, n=n, p=p, r=r)
    pr = Profile.infer(pi, sigma, n, p, r)
    walked = tuple(sorted(flow_loop_points(lp, pr) for lp in flow.loops))
    return theta == flow.theta and loops == walked


def _random_perm(rng, k):
    images = list(range(k))
    rng.shuffle(images)
    return Perm(tuple(images))


def test_03_execution_formula_against_token_walk():
    failures, exhaustive = [], 0
    # composite boundary n + s <= 4, feedback zone p + q <= 3
    for n, s, p, q in itertools.product(range(5), range(5), range(4), range(4)):
        if n + s > 4 or p + q > 3:
            continue
        m, r = n + q - p, p + s - q
        if m < 0 or r < 0:
            continue
        for a in itertools.permutations(range(n + q)):
            for b in itertools.permutations(range(p + s)):
                exhaustive += 1
                if not _exec_agrees(Perm(a), Perm(b), n, p, r):
                    failures.append((a, b, n, p, r))
    rng = random.Random(3)
    randomized = 0
    while randomized < 10_000:
        n, s, p, q = (rng.randint(0, 5) for _ in range(4))
        m, r = n + q - p, p + s - q
        if m < 0 or r < 0 or n + s + p + q < 5:
            continue
        randomized += 1
        pi, sigma = _random_perm(rng, n + q), _random_perm(rng, p + s)
        if not _exec_agrees(pi, sigma, n, p, r):
            failures.append((pi, sigma, n, p, r))
    verdict(3, failures, f"{exhaustive} exhaustive + {randomized} random compositions")


# --- 4 --------------------------------------------------------------------


def _split_widths(rng, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _trace_axiom_instance(axiom: str, rng):
    sig = LOOPS
    obj = lambda k: random_objs(sig, rng, k)  # noqa: E731
    if axiom == "input naturality":
        a, u = _split_widths(rng, rng.randint(1, 6), 2)
        A, U, A2, B = obj(a), obj(u), obj(a), obj(a)
        f, g = term_of(random_traced(sig, rng, A + U, B + U)), term_of(random_traced(sig, rng, A2, A))
        return Compose(Trace(ob(U), f), g), Trace(ob(U), Compose(f, Tensor(g, Id(ob(U)))))
    if axiom == "output naturality":
        a, u = _split_widths(rng, rng.randint(1, 6), 2)
        A, U, B, B2 = obj(a), obj(u), obj(a), obj(a)
        f, g = term_of(random_traced(sig, rng, A + U, B + U)), term_of(random_traced(sig, rng, B, B2))
        return Compose(g, Trace(ob(U), f)), Trace(ob(U), Compose(Tensor(g, Id(ob(U))), f))
    if axiom == "feedback dinaturality":
        a, u = _split_widths(rng, rng.randint(1, 6), 2)
        A, B, U, U2 = obj(a), obj(a), obj(u), obj(u)
        f, g = term_of(random_traced(sig, rng, A + U, B + U2)), term_of(random_traced(sig, rng, U2, U))
        lhs = Trace(ob(U), Compose(Tensor(Id(ob(B)), g), f))
        return lhs, Trace(ob(U2), Compose(f, Tensor(Id(ob(A)), g)))
    if axiom == "vanishing I":
        A = obj(rng.randint(0, 6))
        f = term_of(random_traced(sig, rng, A))
        return Trace(ObjUnit(), f), f
    if axiom == "vanishing II":
        a, u, v = _split_widths(rng, rng.randint(1, 6), 3)
        A, B, U, V = obj(a), obj(a), obj(u), obj(v)
        g = term_of(random_traced(sig, rng, A + U + V, B + U + V))
        return Trace(ob(U + V), g), Trace(ob(U), Trace(ob(V), g))
    if axiom == "superposing":
        c, a, u = _split_widths(rng, rng.randint(1, 6), 3)
        C, D, A, B, U = obj(c), obj(c), obj(a), obj(a), obj(u)
        f, g = term_of(random_traced(sig, rng, A + U, B + U)), term_of(random_traced(sig, rng, C, D))
        return Tensor(g, Trace(ob(U), f)), Trace(ob(U), Tensor(g, f))
    if axiom == "yanking":
        U = ob(obj(rng.randint(1, 3)))
        return Trace(U, Sym(U, U)), Id(U)
    raise ValueError(axiom)


TRACE_AXIOMS = (
    "input naturality",
    "output naturality",
    "feedback dinaturality",
    "vanishing I",
    "vanishing II",
    "superposing",
    "yanking",
)


def test_04_trace_axioms():
    rng = random.Random(4)
    failures, per_axiom = [], 1000
    for axiom in TRACE_AXIOMS:
        for _ in range(per_axiom):
            lhs, rhs = _trace_axiom_instance(axiom, rng)
            if not same(lhs, rhs, "tr"):
                failures.append(axiom)
    verdict(4, failures, f"{len(TRACE_AXIOMS)} axioms x {per_axiom} instances")


# --- 5 --------------------------------------------------------------------


def cyclic_shift(objs: tuple[str, ...]):
    """Term for the shift sending the last strand to the front, built by the recursion
    shift_{k+1} = (swap @ 1) . (1 @ shift_k)."""
    if len(objs) <= 1:
        return Id(ob(objs))
    first, rest = objs[0], objs[1:]
    inner = Tensor(Id(ob((first,))), cyclic_shift(rest))
    last, middle = rest[-1], rest[:-1]
    swap = Tensor(Sym(ob((first,)), ob((last,))), Id(ob(middle)))
    return Compose(swap, inner)


def path_lemma_instance(rng, k: int, chain=None):
    """Both sides of the feedback-around-a-cycle identity for a chain of k + 1 arrows."""
    sig = LOOPS
    objs = chain or random_objs(sig, rng, k + 2)
    fs = [term_of(random_traced(sig, rng, (objs[i],), (objs[i + 1],), scalars=False)) for i in range(k + 1)]
    body = fs[0]
    for f in fs[1:]:
        body = Tensor(body, f)
    lhs = Trace(ob(objs[1 : k + 1]), Compose(cyclic_shift(objs[1:]), body))
    rhs = fs[0]
    for f in fs[1:]:
        rhs = Compose(f, rhs)
    return lhs, rhs, fs


def test_05_trace_lemmas():
    rng = random.Random(5)
    sig = LOOPS
    failures, count = [], 0
    # trace of a tensor is a single trace after swapping the hidden parts together
    for _ in range(300):
        a, u, c, v = _split_widths(rng, rng.randint(0, 6), 4)
        A, B, U, C, D, V = (random_objs(sig, rng, x) for x in (a, a, u, c, c, v))
        f = term_of(random_traced(sig, rng, A + U, B + U))
        g = term_of(random_traced(sig, rng, C + V, D + V))
        lhs = Tensor(Trace(ob(U), f), Trace(ob(V), g))
        pre = Tensor(Id(ob(A)), Sym(ob(C + V), ob(U)))
        post = Tensor(Id(ob(B)), Sym(ob(U), ob(D + V)))
        rhs = Trace(ob(V + U), Compose(post, Compose(Tensor(f, g), pre)))
        count += 1
        if not same(lhs, rhs, "tr"):
            failures.append(("tensor lemma", lhs))
    for k in range(6):
        for _ in range(100):
            lhs, rhs, _ = path_lemma_instance(rng, k)
            count += 1
            if not same(lhs, rhs, "tr"):
                failures.append(("cycle lemma", k))
    # k = 0 is Vanishing I
    lhs, rhs, fs = path_lemma_instance(rng, 0)
    eng = Engine(sig, "tr")
    if eng.normalize(lhs) != eng.normalize(Trace(ObjUnit(), fs[0])):
        failures.append("k=0 differs from Vanishing I")
    # k = 1 with identities on a single object is Yanking
    for q in sig.objects:
        u = ob((q,))
        lhs = Trace(u, Compose(cyclic_shift((q, q)), Tensor(Id(u), Id(u))))
        yank = Trace(u, Sym(u, u))
        if not (eng.normalize(lhs) == eng.normalize(yank) == eng.normalize(Id(u))):
            failures.append(f"k=1 differs from Yanking at {q}")
    verdict(5, failures, f"{count} lemma instances, k = 0..5, plus the two degenerate cases")


# --- 6 --------------------------------------------------------------------


def test_06_compact_and_strong_axioms():
    rng = random.Random(6)
    sig = LOOPS
    failures, count = [], 0
    for _ in range(150):
        a = random_polar(sig, rng, 5)
        b = random_polar(sig, rng, 5 - a.size)
        A, B = polar_obj(a), polar_obj(b)
        dA = ObjDual(A)
        idA = Id(A)
        checks = {
            "triangle 1": (Compose(Tensor(Eps(A), idA), Tensor(idA, Eta(A))), idA),
            "triangle 2": (Compose(Tensor(Id(dA), Eps(A)), Tensor(Eta(A), Id(dA))), Id(dA)),
            "unit of the dual": (Eta(dA), Compose(Sym(dA, A), Eta(A))),
            "sccc1": (
                Compose(Tensor(Compose(Dagger(Eta(A)), Sym(A, dA)), idA), Tensor(idA, Eta(A))),
                idA,
            ),
            "sccc2 (diagrammatic yanking)": (
                Compose(Tensor(Dagger(Eta(A)), idA), Compose(Tensor(Id(dA), Sym(A, A)), Tensor(Eta(A), idA))),
                idA,
            ),
            "canonical trace yanking": (Trace(A, Sym(A, A)), idA),
            "counit dagger": (Dagger(Eps(A)), Eta(dA)),
            "symmetry unitary (left)": (Compose(Dagger(Sym(A, B)), Sym(A, B)), Id(ObjTensor(A, B))),
            "symmetry unitary (right)": (Compose(Sym(A, B), Dagger(Sym(A, B))), Id(ObjTensor(B, A))),
        }
        f = term_of(random_cc(sig, rng, a, _balanced_partner(rng, a)))
        checks["dagger involutive"] = (Dagger(Dagger(f)), f)
        for label, (lhs, rhs) in checks.items():
            count += 1
            if not same(lhs, rhs, "scc"):
                failures.append((label, a, b))
    verdict(6, failures, f"{count} instances over random objects of at most 5 strands")


def _balanced_partner(rng, a):
    """A random codomain for a morphism out of ``a``."""
    q = rng.randint(0, 2)
    p = len(a.pos) - len(a.neg) + q
    if p < 0:
        q, p = q - p, 0
    return PolarObject(random_objs(LOOPS, rng, p), random_objs(LOOPS, rng, q))


# --- 7 --------------------------------------------------------------------


def test_07_free_structures_on_one_object():
    one = Signature(("O",), ())
    failures = []
    strands = lambda n: ("O",) * n  # noqa: E731
    # monoidal: hom(n, m) is a singleton exactly when n = m; tensor adds
    for n, m in itertools.product(range(6), repeat=2):
        if len(mon_homset(one, strands(n), strands(m), 3)) != (1 if n == m else 0):
            failures.append(("monoidal", n, m))
        if mon_tensor(mon_identity(one, strands(n)), mon_identity(one, strands(m))) != mon_identity(one, strands(n + m)):
            failures.append(("monoidal tensor", n, m))
    # symmetric: hom(n, n) is the symmetric group
    for n in range(6):
        homs = sym_homset(one, strands(n), strands(n), 3)
        if len(homs) != factorial(n) or len({h.perm for h in homs}) != factorial(n):
            failures.append(("symmetric", n))
    # traced: morphisms are (permutation, number of loops)
    id_loop = LoopClass((), "O", one)
    for n in range(5):
        homs = traced_homset(one, strands(n), strands(n), 3, multisets_upto([id_loop], 3))
        pairs = {(h.perm, len(h.scalars)) for h in homs}
        want = {(Perm(p), c) for p in itertools.permutations(range(n)) for c in range(4)}
        if len(homs) != len(want) or pairs != want:
            failures.append(("traced", n))
    # and random traced terms over the one-object signature land there
    eng = Engine(one, "tr")
    for t in random_terms(one, "tr", 7, 300, depth=3, max_strands=4):
        f = eng.normalize(t)
        if any(loop != id_loop for loop in f.scalars) or any(not lab.is_identity for lab in f.labels):
            failures.append(("traced term", t))
    verdict(7, failures, "monoidal n,m <= 5; symmetric n <= 5; traced n <= 4 with up to 3 loops")


# --- 8 --------------------------------------------------------------------


def _scalar_term(rng):
    return term_of(scalar_morphism(random_scalars(LOOPS, rng, 2, 3)))


def test_08_scalars():
    sig = LOOPS
    failures = []
    # hom(I, I) at bounded loop length: every full trace of a width <= 2 endomorphism
    bound = 2
    found = set()
    for width in range(3):
        for objs in itertools.product(sig.objects, repeat=width):
            for e in traced_homset(sig, objs, objs, bound, [EMPTY]):
                s = full_trace(e)
                if all(len(loop.word) <= bound for loop in s):
                    found.add(s)
    expected = set(multisets_upto(loop_classes_upto(sig, bound), 2))
    if found != expected:
        failures.append(("hom(I,I)", len(found), len(expected)))

    rng = random.Random(8)
    for _ in range(200):
        s, t = _scalar_term(rng), _scalar_term(rng)
        a = random_objs(sig, rng, rng.randint(0, 3))
        b, c = random_objs(sig, rng, len(a)), random_objs(sig, rng, len(a))
        f = term_of(random_traced(sig, rng, a, b))
        g = term_of(random_traced(sig, rng, b, c))
        u = random_objs(sig, rng, rng.randint(1, 2))
        h = term_of(random_traced(sig, rng, a + u, b + u))
        st = Compose(s, t)
        laws = {
            "unit action": (Tensor(Id(ObjUnit()), f), f),
            "action": (Tensor(s, Tensor(t, f)), Tensor(st, f)),
            "composition": (Compose(Tensor(s, g), Tensor(t, f)), Tensor(st, Compose(g, f))),
            "tensor": (Tensor(Tensor(s, f), Tensor(t, g)), Tensor(st, Tensor(f, g))),
            "trace": (Trace(ob(u), Tensor(s, h)), Tensor(s, Trace(ob(u), h))),
            "naturality": (Compose(Tensor(s, Id(ob(b))), f), Compose(f, Tensor(s, Id(ob(a))))),
            "commutativity": (Compose(s, t), Compose(t, s)),
            "composite is tensor": (Compose(s, t), Tensor(t, s)),
        }
        for level in ("tr", "scc"):
            for label, (lhs, rhs) in laws.items():
                if not same(lhs, rhs, level):
                    failures.append((label, level))
    verdict(8, failures, f"hom(I,I) = {len(expected)} multisets at loop length <= {bound}; 200 x 8 action laws at two levels")


# --- 9 --------------------------------------------------------------------


def test_09_functor_oracle():
    sig = LOOPS
    rng = random.Random(9)
    interps = [random_interpretation(sig, kind, rng, dims={"Q": 2, "R": 1}) for kind in ("bool", "gaussian-int")]
    failures, summary = [], []
    for level in ("m", "sm", "tr", "cc", "scc", "scc-scalars"):
        wide = functor_check(sig, interps, level, seed=90, cases=5000, depth=2, max_strands=3)
        deep = functor_check(sig, interps, level, seed=91, cases=100, depth=3, max_strands=4)
        for report in wide + deep:
            failures += report.failures
        summary.append(f"{level}:{wide[0].cases}+{deep[0].cases}")
    verdict(9, failures, "terms per level, each in both models: " + " ".join(summary))


# --- 10 -------------------------------------------------------------------


def _loop_trace(interp, loop) -> int:
    """Trace of the loop's matrix product, computed with plain numpy integers."""
    n = interp.dims[loop.obj]
    m = np.eye(n, dtype=np.int64)
    for a in loop.word:
        m = np.asarray(interp.matrices[a].re, dtype=np.int64) @ m
    return int(np.trace(m))


def test_10_parameterized_scalars():
    sig = LOOPS
    rng = random.Random(10)
    interp = random_interpretation(sig, "int", rng, dims={"Q": 2, "R": 2}, spread=2)
    phi = lambda loop: _loop_trace(interp, loop)  # noqa: E731
    failures, with_loops = [], 0
    corpus = list(random_terms(sig, "scc", 100, 600, depth=3, max_strands=4))
    free_eng = Engine(sig, "scc")
    int_eng = Engine(sig, "scc-scalars", PhiScalars("int", phi))
    for t in corpus:
        free, counted = free_eng.normalize(t), int_eng.normalize(t)
        want = 1
        for loop in free.scalars:
            want *= phi(loop)
        with_loops += bool(free.scalars)
        if counted.scalars != want or (counted.perm, counted.labels) != (free.perm, free.labels):
            failures.append(("harvest", t))
    # composing normal forms directly: loops closed in the feedback zone
    counted_monoid = PhiScalars("int", phi)
    harvests = 0
    for _ in range(20_000):
        if harvests >= 500:
            break
        a = random_polar(sig, rng, 3)
        f = random_cc(sig, rng, a, _balanced_partner(rng, a))
        g = random_cc(sig, rng, f.cod, _balanced_partner(rng, f.cod))
        plain = cc_compose(_unscaled(g), _unscaled(f))
        if not plain.scalars:
            continue
        harvests += 1
        want = 1
        for loop in plain.scalars:
            want *= _loop_trace(interp, loop)
        got = cc_compose(_unscaled(g, 1), _unscaled(f, 1), counted_monoid)
        if got.scalars != want or got.labels != plain.labels:
            failures.append(("composition harvest", f, g))
    if harvests < 500 or with_loops == 0:
        failures.append(f"too few loops: {harvests} compositions, {with_loops} terms")
    # the free instance of the prescribed-scalar category is the strongly compact closed one
    cat = with_scalar_monoid(sig, "free")
    free_param = Engine(sig, "scc-scalars", cat.monoid)
    for t in corpus:
        if free_param.normalize(t) != free_eng.normalize(t):
            failures.append(("free instance", t))
    for _ in range(300):
        a, b = random_polar(sig, rng, 3), random_polar(sig, rng, 3)
        f = random_cc(sig, rng, a, _balanced_partner(rng, a))
        g = random_cc(sig, rng, f.cod, _balanced_partner(rng, f.cod))
        h = random_cc(sig, rng, b, _balanced_partner(rng, b))
        if cat.compose(g, f) != cc_compose(g, f) or cat.tensor(f, h) != cc_tensor(f, h):
            failures.append("handle composition")
        if cat.dagger(f) != cc_dagger(f, FREE):
            failures.append("handle dagger")
    verdict(
        10,
        failures,
        f"{harvests} loop-closing compositions, {len(corpus)} terms ({with_loops} with loops); free instance identical",
    )


def _unscaled(f, unit=EMPTY):
    return CCMorphism(unit, f.perm, f.labels, f.dom, f.cod)
