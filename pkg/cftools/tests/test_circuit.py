import os
import pytest
from cftools.circuit import (Circuit, CircuitBuilder, Gate, GateDegree,
                             GateKind, NEG_INFINITY, count_parse_trees,
                             degree, depth, enumerate_parse_trees,
                             is_homogeneous, iter_parse_trees, stats,
                             validate)
from cftools.errors import (ContractError, EnumerationOverflowError,
                            StructuralError)
from cftools.io import read

RESOURCES_PATH = os.path.join(os.path.dirname(__file__), 'resources/io_tests')


def example():
    return read(os.path.join(RESOURCES_PATH, 'example.ckt'))


def perm2():
    return read(os.path.join(RESOURCES_PATH, 'perm2.ckt'))


def test_gate_degree_arithmetic():
    assert GateDegree(2) + GateDegree(3) == 5
    assert NEG_INFINITY + GateDegree(3) == NEG_INFINITY
    assert 4 + NEG_INFINITY == NEG_INFINITY
    assert NEG_INFINITY < 0
    assert max(NEG_INFINITY, GateDegree(0)) == 0
    assert str(NEG_INFINITY) == '-inf'
    assert NEG_INFINITY.to_json() == '-inf'
    assert int(GateDegree(7)) == 7
    with pytest.raises(StructuralError):
        int(NEG_INFINITY)


def test_degrees():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    zero, three = b.const(0), b.const(3)
    s = b.add([x, y])
    p = b.mul([s, s, x])
    q = b.mul([zero, x])
    r = b.scal(three, p)
    c = b.build([r, q], prune=False)
    assert degree(c, x) == 1
    assert degree(c, zero) == NEG_INFINITY
    assert degree(c, three) == 0
    assert degree(c, p) == 3
    assert degree(c, q) == NEG_INFINITY
    assert degree(c, r) == 3
    assert c.degree == 3
    with pytest.raises(StructuralError):
        degree(c, 100)


def test_builder_dedupe():
    b = CircuitBuilder()
    assert b.input(0) == b.input(0)
    assert b.add([0]) == b.add([0])
    b = CircuitBuilder(dedupe=False)
    assert b.input(0) != b.input(0)


@pytest.mark.parametrize("method,args", [
    ('add', ([],)),
    ('mul', ([],)),
    ('input', (-1,))])
def test_builder_rejects(method, args):
    b = CircuitBuilder()
    with pytest.raises(StructuralError):
        getattr(b, method)(*args)


def test_builder_rejects_unknown_child():
    b = CircuitBuilder()
    x = b.input(0)
    with pytest.raises(StructuralError):
        b.add([x, x + 1])


def test_build_prunes_unused_gates():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    b.mul([x, y])
    s = b.add([x, x])
    c = b.build([s])
    assert c.size == 2
    assert c.variables == (0,)
    assert b.build([s], prune=False).size == 4


def test_single_output():
    c = perm2()
    assert c.output == 6
    two = c.with_outputs([4, 5])
    with pytest.raises(ContractError):
        two.output
    part = two.restrict(two.outputs[1])
    assert part.size == 3
    assert part.variables == (1, 2)


@pytest.mark.parametrize("name,homogeneous", [
    ('example.ckt', True),
    ('perm2.ckt', True),
    ('det2.ckt', True),
    ('mixed.ckt', False)])
def test_is_homogeneous(name, homogeneous):
    c = read(os.path.join(RESOURCES_PATH, name))
    assert is_homogeneous(c) == homogeneous


def test_is_homogeneous_ignores_zero():
    b = CircuitBuilder()
    x = b.input(0)
    c = b.build([b.add([x, b.const(0)])])
    assert is_homogeneous(c)


def test_stats():
    s = stats(perm2())
    assert s.size == 7
    assert s.degree == 2
    assert s.n == 4
    assert s.depth == 2
    assert s.counts == {'input': 4, 'const': 0, 'add': 1, 'mul': 2,
                        'smul': 0}
    assert s.max_fanin == {'add': 2, 'mul': 2, 'smul': 0}
    assert s.homogeneous
    assert s.to_dict()['degree'] == 2


def test_depth():
    b = CircuitBuilder()
    g = b.input(0)
    for _ in range(5):
        g = b.mul([g, b.input(1)])
    assert depth(b.build([g])) == 5


def test_count_parse_trees():
    assert count_parse_trees(example()) == 6
    assert count_parse_trees(perm2()) == 2


def test_parse_tree_shape():
    c = example()
    trees = enumerate_parse_trees(c)
    assert len(trees) == 6
    for tree in trees:
        # a mul of two adds, each with one chosen input
        assert len(tree.leaves()) == 2
        assert len(list(tree.nodes())) == 5
        assert tree.output == c.output


def test_parse_tree_overflow():
    with pytest.raises(EnumerationOverflowError) as e:
        enumerate_parse_trees(example(), limit=5)
    assert e.value.count == 6
    assert len(list(iter_parse_trees(example()))) == 6


def test_validate_ok():
    report = validate(perm2())
    assert report.ok
    assert report.output_stats.size == 7
    assert report.notes['compound_scalars'] == 0


def test_validate_cycle():
    gates = [Gate(0, GateKind.INPUT, var=0),
             Gate(1, GateKind.ADD, (0, 2)),
             Gate(2, GateKind.MUL, (1, 0))]
    report = validate(Circuit(gates, [2]))
    assert report.codes() == ['acyclicity']
    assert not report.ok
    assert report.output_stats is None


@pytest.mark.parametrize("gates,outputs,code", [
    ([Gate(0, GateKind.ADD, (1,)), Gate(1, GateKind.INPUT, var=0)], [0],
     'topological-order'),
    ([Gate(0, GateKind.INPUT, var=0), Gate(1, GateKind.SCAL, (0,))], [1],
     'scal-arity'),
    ([Gate(0, GateKind.INPUT, var=0), Gate(1, GateKind.MUL, ())], [1],
     'arity'),
    ([Gate(0, GateKind.INPUT, (0,), var=0)], [0], 'leaf-arity'),
    ([Gate(0, GateKind.CONST)], [0], 'leaf-label'),
    ([Gate(0, GateKind.INPUT, var=0), Gate(1, GateKind.ADD, (0, 5))], [1],
     'dangling-child'),
    ([Gate(0, GateKind.INPUT, var=0)], [3], 'output-exists'),
    ([Gate(0, GateKind.INPUT, var=0)], [], 'outputs'),
    ([Gate(1, GateKind.INPUT, var=0)], [0], 'gate-id')])
def test_validate_violations(gates, outputs, code):
    assert code in validate(Circuit(gates, outputs)).codes()


def test_validate_scal_degree():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    report = validate(b.build([b.scal(x, y)]))
    assert report.codes() == ['scal-child-degree']

    b = CircuitBuilder()
    x = b.input(0)
    scalar = b.add([b.const(2), b.const(3)])
    report = validate(b.build([b.scal(scalar, x)]))
    assert report.ok
    assert report.notes['compound_scalars'] == 1


def test_circuit_equality_ignores_names():
    b = CircuitBuilder()
    x = b.input(0, 'x')
    c1 = b.build([b.mul([x, x], 'sq')])
    b = CircuitBuilder()
    x = b.input(0)
    c2 = b.build([b.mul([x, x])])
    assert c1 == c2
    assert hash(c1) == hash(c2)
    assert c1.name_of(1) == 'sq'
    assert c2.name_of(1) == 'g1'
