import pytest
from cftools.balance import (MAX_MUL_FANIN, Balancer, balance,
                             is_mul_balanced, mul_balance_violations)
from cftools.circuit import CircuitBuilder, GateKind, is_homogeneous
from cftools.errors import ContractError
from cftools.generators import GeneratorSpec, gen_comb, gen_det, gen_perm, \
    gen_random
from cftools.polynomial import expand
from cftools.transform import binarize_mul, normalize


def prepared(c):
    return normalize(binarize_mul(c))


def check_balanced(c, out):
    assert is_mul_balanced(out)
    assert is_homogeneous(out)
    assert expand(out) == expand(c)
    s = c.size
    assert out.size <= s**6 + s**4 + 1
    for gate in out.gates:
        if gate.kind is GateKind.MUL:
            assert len(gate.children) <= MAX_MUL_FANIN


@pytest.mark.parametrize("n", [2, 3, 6, 9])
def test_comb(n):
    c = gen_comb(n)
    out = balance(c)
    check_balanced(c, out)


def test_comb_is_unbalanced():
    codes = {v.code for v in mul_balance_violations(gen_comb(6))}
    assert codes == {'mul-child-degree'}
    assert not is_mul_balanced(gen_comb(6))
    assert is_mul_balanced(gen_comb(2))


@pytest.mark.parametrize("c", [gen_perm(2), gen_perm(3), gen_det(3)])
def test_matrix_forms(c):
    c = prepared(c)
    check_balanced(c, balance(c))


@pytest.mark.parametrize("seed", list(range(200)))
def test_random_homogeneous(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=20, max_degree=8,
                         homogeneous=True, negative=seed % 4 == 3)
    c = prepared(gen_random(spec))
    out = balance(c)
    check_balanced(c, out)
    for gate in out.gates:
        if gate.kind is GateKind.SCAL:
            assert len(gate.children) == 2


def test_single_input():
    b = CircuitBuilder()
    c = b.build([b.input(3)])
    out = balance(c)
    assert out.size == 1
    assert expand(out) == expand(c)


def test_splits():
    balancer = Balancer(gen_comb(8))
    balancer.run()
    assert balancer.materialized_pairs > 0
    assert balancer.splits
    for split in balancer.splits:
        assert split.case in (1, 2)
        assert split.leaf2 is None
        if split.case == 1:
            assert split.leaf == split.beta


def test_rejects_unnormalized():
    with pytest.raises(ContractError):
        Balancer(gen_perm(3))
    b = CircuitBuilder()
    x, y, z = b.input(0), b.input(1), b.input(2)
    with pytest.raises(ContractError):
        Balancer(b.build([b.mul([b.mul([x, y]), z])]))
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    with pytest.raises(ContractError):
        Balancer(b.build([b.add([b.mul([x, y]), x])]))
    b = CircuitBuilder()
    x = b.input(0)
    with pytest.raises(ContractError):
        Balancer(b.build([b.mul([b.const(2), x])]))
