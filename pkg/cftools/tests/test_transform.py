import os
import pytest
from cftools.circuit import CircuitBuilder, GateKind, is_homogeneous
from cftools.errors import ContractError
from cftools.field import find_zero_gates
from cftools.generators import GeneratorSpec, gen_det, gen_perm, \
    gen_random
from cftools.io import read
from cftools.polynomial import (SparsePolynomial, expand, expand_outputs,
                                homogeneous_part)
from cftools.transform import (binarize_mul, eliminate_zeros, homogenize,
                               normalize)

RESOURCES_PATH = os.path.join(os.path.dirname(__file__), 'resources/io_tests')

X0 = SparsePolynomial.variable(0)
X1 = SparsePolynomial.variable(1)


def max_mul_fanin(c):
    return max((len(g.children) for g in c.gates if g.kind is GateKind.MUL),
               default=0)


def test_binarize_perm3():
    c = gen_perm(3)
    out = binarize_mul(c)
    assert max_mul_fanin(out) == 2
    assert out.size == 22
    assert expand(out) == expand(c)


@pytest.mark.parametrize("name", ['example.ckt', 'perm2.ckt', 'det2.ckt'])
def test_binarize_binary(name):
    c = read(os.path.join(RESOURCES_PATH, name))
    assert binarize_mul(c) == c


def test_binarize_idempotent():
    once = binarize_mul(gen_det(3))
    assert binarize_mul(once) == once


def test_homogenize_mixed():
    c = read(os.path.join(RESOURCES_PATH, 'mixed.ckt'))
    out = homogenize(c)
    assert len(out.outputs) == 3
    assert is_homogeneous(out)
    assert out.gates[out.outputs[0]].kind is GateKind.CONST
    assert out.gates[out.outputs[0]].value == 0
    assert expand_outputs(out) == [SparsePolynomial.zero(), X0, X0 * X1]


def test_homogenize_size_bound():
    c = binarize_mul(gen_perm(3))
    out = homogenize(c)
    assert out.size <= c.size * (int(c.degree) + 1) ** 2
    polys = expand_outputs(out)
    assert polys[:3] == [SparsePolynomial.zero()] * 3
    assert polys[3] == expand(c)


def test_homogenize_constant_term():
    b = CircuitBuilder()
    x = b.input(0)
    c = b.build([b.mul([b.add([x, b.const(2)]), x])])
    assert expand_outputs(homogenize(c)) == [SparsePolynomial.zero(),
                                             X0.scale(2), X0 * X0]


def test_homogenize_rejects():
    b = CircuitBuilder()
    x = b.input(0)
    zero = b.build([b.mul([b.const(0), x])])
    with pytest.raises(ContractError):
        homogenize(zero)
    with pytest.raises(ContractError):
        homogenize(gen_perm(3))
    two = read(os.path.join(RESOURCES_PATH, 'perm2.ckt')).with_outputs([4, 5])
    with pytest.raises(ContractError):
        homogenize(two)


def test_normalize_scalar_product():
    b = CircuitBuilder()
    x = b.input(0)
    c = b.build([b.mul([b.const(3), x])])
    out = normalize(c)
    top = out.gates[out.output]
    assert top.kind is GateKind.SCAL
    assert out.gates[top.children[0]].kind is GateKind.CONST
    assert out.gates[top.children[0]].value == 3
    assert out.size == 3
    assert expand(out) == X0.scale(3)


def test_normalize_orders_by_degree():
    b = CircuitBuilder()
    x, y, z = b.input(0), b.input(1), b.input(2)
    c = b.build([b.mul([b.mul([x, y]), z])])
    out = normalize(c)
    top = out.gates[out.output]
    degs = [out.degrees[ch] for ch in top.children]
    assert degs == [1, 2]
    assert expand(out) == expand(c)


def test_normalize_folds_constants():
    b = CircuitBuilder()
    x = b.input(0)
    k = b.add([b.const(2), b.const(3)])
    c = b.build([b.add([b.mul([k, x, b.const(2)])])])
    out = normalize(c)
    assert out.size == 3
    assert expand(out) == X0.scale(10)


@pytest.mark.parametrize("c", [gen_det(3), gen_perm(3),
                               read(os.path.join(RESOURCES_PATH,
                                                 'example.ckt'))])
def test_normalize_idempotent(c):
    once = normalize(c)
    assert normalize(once) == once
    assert expand(once) == expand(c)


def test_normalize_rejects_inhomogeneous():
    with pytest.raises(ContractError):
        normalize(read(os.path.join(RESOURCES_PATH, 'mixed.ckt')))


def test_eliminate_zeros():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    d = b.add([x, b.scal(b.const(-1), x)])
    p = b.mul([d, y])
    q = b.mul([x, y])
    c = b.build([b.add([p, q, b.const(0)])])
    out = eliminate_zeros(c)
    assert expand(out) == X0 * X1
    assert out.size == 4
    assert not find_zero_gates(out)


def test_eliminate_zero_output():
    b = CircuitBuilder()
    x = b.input(0)
    c = b.build([b.add([x, b.scal(b.const(-1), x)]), x])
    out = eliminate_zeros(c, exact_limit=0)
    assert out.gates[out.outputs[0]].kind is GateKind.CONST
    assert expand_outputs(out) == [SparsePolynomial.zero(), X0]


@pytest.mark.parametrize("seed", list(range(500)))
def test_homogenize_random(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=15, max_degree=5,
                         negative=seed % 2 == 1)
    c = binarize_mul(gen_random(spec))
    d = int(c.degree)
    out = homogenize(c)
    assert out.size <= c.size * (d + 1) ** 2
    assert is_homogeneous(out)
    p = expand(c)
    assert expand_outputs(out) == [homogeneous_part(p, i)
                                   for i in range(d + 1)]


@pytest.mark.parametrize("seed", list(range(20)))
def test_normalize_random_with_cancellation(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=12, max_degree=4,
                         homogeneous=True, negative=True)
    c = gen_random(spec)
    out = normalize(binarize_mul(c))
    assert expand(out) == expand(c)
    assert not find_zero_gates(out) or out.size == 1
