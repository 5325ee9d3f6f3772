import random

import numpy as np
import pytest

from freecat.engine import normalize
from freecat.errors import ModelError
from freecat.models import (
    Interpretation,
    evaluate,
    identity,
    matrix,
    random_interpretation,
    scalar,
)
from freecat.oracle import DirectEvaluator, functor_check
from freecat.randgen import random_terms
from freecat.scalars import Gaussian
from freecat.signature import Signature, parse_signature
from freecat.syntax import Dagger, Dual, parse
from helpers import LOOPS, load_sig

ONE_OBJ = parse_signature("object A\narrow f : A -> A\ninterpret A dim 2\ninterpret f matrix [[1, 2], [3, 4]]\n")


def test_bool_arithmetic_saturates():
    m = matrix("bool", [[1, 1], [1, 1]])
    assert (m @ m).entries() == [[1, 1], [1, 1]]
    assert matrix("bool", [[5, 0]]).entries() == [[1, 0]]
    assert scalar("bool", 7).to_scalar() is True


def test_gaussian_product_and_dagger():
    m = matrix("gaussian-int", [[Gaussian(0, 1), 1]])
    assert (m @ m.dagger()).to_scalar() == Gaussian(2, 0)
    # transpose keeps the imaginary part, the dagger negates it
    assert m.transpose() != m.dagger()
    assert m.transpose().entries() == [[Gaussian(0, 1)], [Gaussian(1, 0)]]


def test_int_rejects_imaginary_entries():
    with pytest.raises(ModelError):
        matrix("int", [[(1, 1)]])
    with pytest.raises(ModelError):
        scalar("int", Gaussian(0, 1))


def test_overflow_is_refused():
    big = matrix("int", [[2**40]])
    with pytest.raises(ModelError, match="too large"):
        big @ big


def test_large_products_stay_exact():
    rng = np.random.default_rng(0)
    a = rng.integers(-10**5, 10**5, size=(70, 90))
    b = rng.integers(-10**5, 10**5, size=(90, 60))
    want = (a.astype(object) @ b.astype(object)).tolist()
    assert (matrix("int", a.tolist()) @ matrix("int", b.tolist())).entries() == want


def test_shape_mismatch():
    with pytest.raises(ModelError):
        identity("int", 2) @ identity("int", 3)


def test_kron_unit_and_trace():
    m = matrix("int", [[1, 2], [3, 4]])
    assert scalar("int", 1).kron(m) == m
    assert m.kron(identity("int", 2)).trace().to_scalar() == 10
    assert m.partial_trace(1, 1, 2).to_scalar() == 5


def test_permute_legs_swaps_factors():
    a = matrix("int", [[1], [2]])
    b = matrix("int", [[3], [4], [5]])
    ab = a.kron(b)
    # rows are legs 0 (dim 2) and 1 (dim 3); the single column is a unit leg
    ba = ab.permute_legs([2, 3], [], [1, 0], [])
    assert ba == b.kron(a)


def test_interpretation_validation():
    sig = Signature(("A",), (("f", "A", "A"),))
    with pytest.raises(ModelError, match="dimension"):
        Interpretation(sig, "int", {}, {"f": identity("int", 1)})
    with pytest.raises(ModelError, match="no matrix"):
        Interpretation(sig, "int", {"A": 1}, {})
    with pytest.raises(ModelError, match="2x2"):
        Interpretation(sig, "int", {"A": 2}, {"f": identity("int", 1)})
    with pytest.raises(ModelError, match="kind"):
        Interpretation(sig, "quaternion", {"A": 1}, {"f": identity("int", 1)})
    paired = Signature(("A",), (("f", "A", "A"), ("g", "A", "A")), {"f": "g", "g": "f"})
    m = matrix("int", [[1, 2], [3, 4]])
    with pytest.raises(ModelError, match="conjugate"):
        Interpretation(paired, "int", {"A": 2}, {"f": m, "g": m})
    Interpretation(paired, "int", {"A": 2}, {"f": m, "g": m.dagger()})


def test_identity_and_circle():
    interp = Interpretation.from_signature(ONE_OBJ)
    assert evaluate(normalize(parse("id(A)"), "cc", ONE_OBJ), interp) == identity("int", 2)
    circle = normalize(parse("eps(A) . sym(A^, A) . eta(A)"), "cc", ONE_OBJ)
    assert evaluate(circle, interp).to_scalar() == 2


def test_snake_on_three_dimensions():
    sig = parse_signature("object A\narrow f : A -> A\n")
    rng = random.Random(0)
    interp = random_interpretation(sig, "int", rng, dims={"A": 3})
    term = parse("(eps(A) @ id(A)) . (id(A) @ eta(A))")
    assert evaluate(normalize(term, "cc", sig), interp) == identity("int", 3)
    direct, _, _ = DirectEvaluator(interp).eval(term)
    assert direct == identity("int", 3)


def test_worked_example_evaluates_to_trace_times_product():
    sig = load_sig("worked_example.sig")
    term = parse("Tr[U1 @ U2 @ U3]((id(A @ U1) @ sym(U3, U2)) . sym(U1 @ U3 @ U2, A) . (f1 @ f2 @ f3 @ f4))")
    rng = random.Random(4)
    for _ in range(10):
        interp = random_interpretation(sig, "int", rng, dims={o: rng.randint(1, 3) for o in sig.objects}, spread=3)
        m = {k: np.array(v.entries()) for k, v in interp.matrices.items()}
        expected = np.trace(m["f3"]) * (m["f4"] @ m["f2"] @ m["f1"])
        got = evaluate(normalize(term, "tr", sig), interp)
        assert got.entries() == expected.tolist()
        assert DirectEvaluator(interp).eval(term)[0] == got


def test_relational_scalars_are_booleans():
    interp = random_interpretation(LOOPS, "bool", random.Random(1))
    for t in random_terms(LOOPS, "scc", seed=3, count=60, depth=2, max_strands=2):
        nf = normalize(t, "scc", LOOPS)
        if not nf.dom.pos and not nf.dom.neg and not nf.cod.pos and not nf.cod.neg:
            assert evaluate(nf, interp).to_scalar() in (True, False)


def test_dagger_is_conjugate_transpose_and_dual_is_transpose():
    interp = random_interpretation(LOOPS, "gaussian-int", random.Random(2), dims={"Q": 2, "R": 2})
    seen_difference = False
    for t in random_terms(LOOPS, "scc", seed=4, count=80, depth=2, max_strands=3):
        m = evaluate(normalize(t, "scc", LOOPS), interp)
        dag = evaluate(normalize(Dagger(t), "scc", LOOPS), interp)
        dual = evaluate(normalize(Dual(t), "scc", LOOPS), interp)
        assert dag == m.dagger()
        seen_difference = seen_difference or dag != dual
    assert seen_difference
    for gen in ("a", "c", "d"):
        m = evaluate(normalize(parse(gen), "scc", LOOPS), interp)
        assert evaluate(normalize(parse(gen + "^"), "scc", LOOPS), interp) == m.transpose()


def test_functor_check_degenerate_and_random():
    rng = random.Random(5)
    interps = [random_interpretation(LOOPS, kind, rng) for kind in ("bool", "int", "gaussian-int")]
    interp = interps[0]
    m, _, _ = DirectEvaluator(interp).eval(parse("id(I)"))
    assert m == identity("bool", 1)
    for level in ("m", "sm", "tr", "cc", "scc"):
        for report in functor_check(LOOPS, interps, level, seed=6, cases=30, depth=2, max_strands=3):
            assert report.ok, str(report)
            assert report.cases == 30

