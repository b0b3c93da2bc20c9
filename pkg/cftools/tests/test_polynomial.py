import os
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from cftools.circuit import CircuitBuilder, NEG_INFINITY, iter_parse_trees
from cftools.errors import AssignmentError, TermBudgetExceededError
from cftools.generators import GeneratorSpec, gen_comb, gen_perm, gen_random
from cftools.io import read
from cftools.polynomial import (Monomial, MonomialSet, SparsePolynomial,
                                add, expand, expand_all, expand_outputs,
                                homogeneous_part, mul, parse_tree_monomial,
                                support)

RESOURCES_PATH = os.path.join(os.path.dirname(__file__), 'resources/io_tests')

X0 = SparsePolynomial.variable(0)
X1 = SparsePolynomial.variable(1)
X2 = SparsePolynomial.variable(2)

monomials = st.dictionaries(st.integers(0, 3), st.integers(0, 3),
                            max_size=3).map(Monomial)
polynomials = st.dictionaries(monomials, st.integers(-5, 5),
                              max_size=5).map(SparsePolynomial)


@pytest.mark.parametrize("p,text", [
    (X0 * X0 + (X0 * X1).scale(2), "x0^2 + 2*x0*x1"),
    (X0 - X1, "x0 - x1"),
    (SparsePolynomial.zero(), "0"),
    (SparsePolynomial.constant(-3) + X2, "x2 - 3"),
    (-(X1 * X1 * X2), "-x1^2*x2"),
    (X2 * X2 + X0, "x2^2 + x0")])
def test_str(p, text):
    assert str(p) == text


def test_monomial():
    m = Monomial({0: 2, 3: 1, 5: 0})
    assert m.degree == 3
    assert m.items == ((0, 2), (3, 1))
    assert m.variables == (0, 3)
    assert m.exponent(3) == 1
    assert m.exponent(1) == 0
    assert str(m) == "x0^2*x3"
    assert str(Monomial()) == "1"
    assert m * Monomial.variable(3) == Monomial({0: 2, 3: 2})
    assert m.evaluate({0: 3, 3: 2}) == 18
    assert m.evaluate({0: 3, 3: 2}, 7) == 4
    with pytest.raises(AssignmentError):
        m.evaluate({0: 1})
    with pytest.raises(ValueError):
        Monomial({0: -1})


def test_graded_lex_order():
    ordered = [Monomial(), Monomial({2: 1}), Monomial({1: 1}),
               Monomial({0: 1}), Monomial({1: 1, 2: 1}), Monomial({1: 2}),
               Monomial({0: 1, 2: 1}), Monomial({0: 1, 1: 1}),
               Monomial({0: 2})]
    assert sorted(reversed(ordered)) == ordered
    assert list(MonomialSet(ordered[::-1])) == ordered


def test_polynomial_basics():
    p = (X0 + X1) * (X0 - X1)
    assert p == X0 * X0 - X1 * X1
    assert len(p) == 2
    assert p.degree == 2
    assert p.is_homogeneous()
    assert p.coefficient(Monomial({1: 2})) == -1
    assert (p + SparsePolynomial.constant(1)).degree == 2
    assert not (p + X0).is_homogeneous()
    assert SparsePolynomial.zero().degree == NEG_INFINITY
    assert (p - p).is_zero()
    assert p.evaluate({0: 5, 1: 3}) == 16
    assert p.evaluate({0: 5, 1: 3}, 7) == 2
    assert add(X0, X1) == X0 + X1
    assert mul(X0, X1) == X0 * X1


def test_homogeneous_part():
    p = X0 * X1 + X0 + SparsePolynomial.constant(4)
    assert homogeneous_part(p, 2) == X0 * X1
    assert homogeneous_part(p, 1) == X0
    assert homogeneous_part(p, 0) == SparsePolynomial.constant(4)
    assert homogeneous_part(p, 3).is_zero()
    with pytest.raises(ValueError):
        homogeneous_part(p, -1)


def test_support():
    p = X0 * X1 + X0.scale(3)
    assert support(p) == MonomialSet([Monomial({0: 1, 1: 1}),
                                      Monomial({0: 1})])
    assert MonomialSet([Monomial({0: 1})]) <= support(p)


@settings(max_examples=100, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == SparsePolynomial.zero()


@settings(max_examples=100, deadline=None)
@given(polynomials, polynomials)
def test_degree_and_support_laws(p, q):
    product = p * q
    if not p.is_zero() and not q.is_zero():
        assert product.degree == p.degree + q.degree
    assert support(product) <= support(p).products(support(q))
    assert support(p + q) <= support(p).union(support(q))


def test_expand_example():
    c = read(os.path.join(RESOURCES_PATH, 'example.ckt'))
    assert str(expand(c)) == "x0^2 + 2*x0*x1 + x0*x2 + x1^2 + x1*x2"


def test_expand_det2():
    c = read(os.path.join(RESOURCES_PATH, 'det2.ckt'))
    assert str(expand(c)) == "x0*x3 - x1*x2"


def test_parse_trees_sum_to_expansion_example():
    c = read(os.path.join(RESOURCES_PATH, 'example.ckt'))
    total = SparsePolynomial.zero()
    for tree in iter_parse_trees(c):
        total = total + parse_tree_monomial(c, tree)
    assert total == expand(c)


@pytest.mark.parametrize("seed", list(range(500)))
def test_parse_trees_sum_to_expansion_random(seed):
    c = gen_random(GeneratorSpec('random', 1 + seed % 4, seed=seed, gates=12,
                                 max_degree=6, negative=seed % 5 == 4))
    total = SparsePolynomial.zero()
    for tree in iter_parse_trees(c):
        total = total + parse_tree_monomial(c, tree)
    assert total == expand(c)


def test_expand_all_and_outputs():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    s = b.add([x, y])
    p = b.mul([s, s])
    c = b.build([p, s])
    polys = expand_all(c)
    assert polys[s] == X0 + X1
    assert expand_outputs(c) == [(X0 + X1) * (X0 + X1), X0 + X1]
    assert expand_all(c, gates=[s])[p] is None


def test_expand_substitute():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    s = b.add([x, y])
    p = b.mul([s, x])
    c = b.build([p])
    fresh = {s: SparsePolynomial.variable(7)}
    polys = expand_all(c, gates=[p], substitute=fresh)
    assert polys[p] == SparsePolynomial.variable(7) * X0


def test_term_budget():
    with pytest.raises(TermBudgetExceededError) as e:
        expand(gen_perm(4), term_budget=10)
    assert e.value.budget == 10
    assert e.value.terms > 10


def test_comb_expansion():
    assert str(expand(gen_comb(4))) == "x0*x1*x2*x3"
