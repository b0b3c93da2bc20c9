import pytest
from cftools.circuit import GateKind, depth, is_homogeneous, validate
from cftools.errors import GenerationError, ParameterError
from cftools.generators import (FAMILIES, GeneratorSpec, gen_comb, gen_det,
                                gen_perm, gen_random, generate)
from cftools.polynomial import expand


@pytest.mark.parametrize("gen,n,size", [
    (gen_perm, 1, 3),
    (gen_perm, 2, 7),
    (gen_perm, 3, 16),
    (gen_det, 2, 9),
    (gen_det, 3, 20),
    (gen_comb, 2, 3),
    (gen_comb, 5, 9)])
def test_sizes(gen, n, size):
    c = gen(n)
    assert c.size == size
    assert validate(c).ok
    assert is_homogeneous(c)
    assert c.degree == n


def test_perm_det_expansion():
    assert str(expand(gen_perm(2))) == "x0*x3 + x1*x2"
    assert str(expand(gen_det(2))) == "x0*x3 - x1*x2"


def test_det3_signs():
    p = expand(gen_det(3))
    assert len(p) == 6
    # x0*x4*x8 is the identity, x0*x5*x7 a transposition
    assert p.evaluate({0: 1, 4: 1, 8: 1, 1: 0, 2: 0, 3: 0, 5: 0, 6: 0,
                       7: 0}) == 1
    assert p.evaluate({0: 1, 5: 1, 7: 1, 1: 0, 2: 0, 3: 0, 4: 0, 6: 0,
                       8: 0}) == -1


def test_perm3_coefficients():
    p = expand(gen_perm(3))
    assert len(p) == 6
    assert all(coef == 1 for coef in p.terms.values())


def test_comb():
    c = gen_comb(6)
    assert depth(c) == 5
    assert str(expand(c)) == "x0*x1*x2*x3*x4*x5"


@pytest.mark.parametrize("gen,n", [
    (gen_perm, 0),
    (gen_perm, 6),
    (gen_det, -1),
    (gen_comb, 1)])
def test_bad_size(gen, n):
    with pytest.raises(ParameterError):
        gen(n)


@pytest.mark.parametrize("seed", list(range(20)))
def test_random_caps(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=10, max_degree=5,
                         min_degree=2)
    c = gen_random(spec)
    assert validate(c).ok
    assert c.size <= 10
    assert 2 <= c.degree <= 5
    assert max(len(g.children) for g in c.gates) <= 3


@pytest.mark.parametrize("seed", list(range(20)))
def test_random_homogeneous(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=14, max_degree=4,
                         homogeneous=True)
    c = gen_random(spec)
    assert is_homogeneous(c)
    assert c.size <= 14


def test_random_is_deterministic():
    spec = GeneratorSpec('random', 4, seed=7)
    assert gen_random(spec) == gen_random(spec)
    assert generate(spec) == gen_random(spec)


def test_random_errors():
    with pytest.raises(ParameterError):
        gen_random(GeneratorSpec('random', 3, max_fanin=1))
    with pytest.raises(ParameterError):
        gen_random(GeneratorSpec('random', 0))
    # three inputs already use the only gate
    with pytest.raises(GenerationError):
        gen_random(GeneratorSpec('random', 3, gates=1))


@pytest.mark.parametrize("family", FAMILIES)
def test_generate(family):
    c = generate(GeneratorSpec(family, 3))
    assert validate(c).ok


def test_generate_unknown_family():
    with pytest.raises(ParameterError):
        generate(GeneratorSpec('wheel', 3))


@pytest.mark.parametrize("seed", list(range(20)))
def test_random_negative(seed):
    spec = GeneratorSpec('random', 3, seed=seed, gates=12, negative=True,
                         homogeneous=seed % 2 == 0)
    c = gen_random(spec)
    assert validate(c).ok
    assert c.size <= 12
    assert gen_random(spec) == c


def test_random_negative_constants():
    values = set()
    for seed in range(40):
        c = gen_random(GeneratorSpec('random', 3, seed=seed, negative=True))
        values |= {g.value for g in c.gates if g.kind is GateKind.CONST}
    assert -1 in values
    assert any(v < -1 for v in values)
