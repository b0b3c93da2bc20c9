import json
import os
import mock
import pytest
from cftools.circuit import CircuitBuilder
from cftools.cli import (EXIT_ERROR, EXIT_FAILED, EXIT_OK, PipelineConfig,
                         _seed, main)
from cftools.errors import ParameterError
from cftools.field import DEFAULT_SEED
from cftools.generators import GeneratorSpec, gen_perm, gen_random
from cftools.io import format_circuit, read, write_circuit
from cftools.polynomial import expand

RESOURCES_PATH = os.path.join(os.path.dirname(__file__), 'resources/io_tests')

EXAMPLE = os.path.join(RESOURCES_PATH, 'example.ckt')
PERM2 = os.path.join(RESOURCES_PATH, 'perm2.ckt')
DET2 = os.path.join(RESOURCES_PATH, 'det2.ckt')
MIXED = os.path.join(RESOURCES_PATH, 'mixed.ckt')
MALFORMED = os.path.join(RESOURCES_PATH, 'malformed.ckt')
BAD_SCAL = os.path.join(RESOURCES_PATH, 'bad_scal.ckt')


def records(capsys):
    out = capsys.readouterr().out
    return [json.loads(line) for line in out.splitlines()]


def test_stats(capsys):
    assert main(['stats', EXAMPLE]) == EXIT_OK
    [record] = records(capsys)
    assert record['pass'] == 'stats'
    assert record['ok']
    assert record['notes']['parse_trees'] == 6
    assert record['output']['size'] == 6
    assert record['notes']['config']['inputs'] == [EXAMPLE]


def test_stats_limit(capsys):
    assert main(['stats', EXAMPLE, '--limit', '5']) == EXIT_OK
    [record] = records(capsys)
    assert record['notes']['parse_trees'] is None


@pytest.mark.parametrize("argv", [
    ['stats', MALFORMED],
    ['stats', 'missing.ckt'],
    ['transform', PERM2, '--a', '0'],
    ['transform', PERM2, '--pass', 'flatten'],
    ['verify', PERM2, DET2, '--trials', '0'],
    ['verify', PERM2, DET2, '--prime', '4'],
    ['bounds', PERM2]])
def test_rejected_input(argv):
    assert main(argv) == EXIT_ERROR


def test_missing_argument():
    with pytest.raises(SystemExit):
        main(['stats'])


def test_verify(capsys):
    assert main(['verify', PERM2, DET2]) == EXIT_FAILED
    [record] = records(capsys)
    assert not record['equivalence']['equal']
    assert record['equivalence']['method'] == 'exact'

    assert main(['verify', PERM2, PERM2, '--term-budget', '1']) == EXIT_OK
    [record] = records(capsys)
    assert record['equivalence']['equal']
    assert record['equivalence']['method'] == 'randomized'


def test_transform(capsys):
    assert main(['transform', PERM2, '--out', 'reduced']) == EXIT_OK
    [record] = records(capsys)
    c = read('reduced.ckt')
    os.remove('reduced.ckt')
    assert record['ok']
    assert [s['pass'] for s in record['stages']] == \
        ['binarize', 'homogenize', 'normalize', 'balance', 'depth4']
    assert record['notes']['path'] == 'reduced.ckt'
    assert expand(c) == expand(read(PERM2))


def test_transform_stage_error(capsys):
    assert main(['transform', MIXED, '--pass', 'normalize']) == EXIT_ERROR
    [record] = records(capsys)
    [stage] = record['stages']
    assert stage['pass'] == 'normalize'
    assert [v['code'] for v in stage['violations']] == ['error']


def test_transform_invalid_input(capsys):
    assert main(['transform', BAD_SCAL, '--out', 'bad']) == EXIT_FAILED
    [record] = records(capsys)
    assert [v['code'] for v in record['violations']] == \
        ['scal-child-degree']
    assert record['stages'] == []
    assert not os.path.exists('bad.ckt')


def test_verify_large_prime(capsys):
    argv = ['verify', PERM2, DET2, '--prime', str(2**89 - 1),
            '--term-budget', '1']
    assert main(argv) == EXIT_FAILED
    [record] = records(capsys)
    assert record['equivalence']['method'] == 'randomized'
    assert record['equivalence']['modulus'] == 2**89 - 1


def test_gen_negative(capsys):
    argv = ['gen', 'random', '3', '--negative', '--seed', '2']
    assert main(argv) == EXIT_OK
    spec = GeneratorSpec('random', 3, seed=2, negative=True)
    assert capsys.readouterr().out == format_circuit(gen_random(spec))


def test_gen_prints_circuit(capsys):
    assert main(['gen', 'perm', '2']) == EXIT_OK
    assert capsys.readouterr().out == format_circuit(gen_perm(2))


def test_gen_report():
    argv = ['gen', 'det', '2', '--out', 'det', '--report', 'det.jsonl']
    assert main(argv) == EXIT_OK
    with open('det.jsonl') as f:
        [record] = [json.loads(line) for line in f]
    c = read('det.ckt')
    os.remove('det.jsonl')
    os.remove('det.ckt')
    assert record['pass'] == 'gen'
    assert record['notes']['spec']['family'] == 'det'
    assert str(expand(c)) == "x0*x3 - x1*x2"


def test_gen_seed_from_environment(capsys):
    with mock.patch.dict(os.environ, {'CF_SEED': '4'}):
        assert main(['gen', 'random', '3']) == EXIT_OK
    from_env = capsys.readouterr().out
    assert main(['gen', 'random', '3', '--seed', '4']) == EXIT_OK
    assert capsys.readouterr().out == from_env


def test_bad_seed_in_environment():
    with mock.patch.dict(os.environ, {'CF_SEED': 'four'}):
        assert main(['gen', 'random', '3']) == EXIT_ERROR


def test_bounds(capsys):
    b = CircuitBuilder()
    level3 = []
    for i, j in [(0, 3), (1, 2)]:
        level3.append(b.mul([b.add([b.mul([b.input(i)])]),
                             b.add([b.mul([b.input(j)])])]))
    path = write_circuit(b.build([b.add(level3)]), 'layered')
    code = main(['bounds', path, '--target', 'perm', '--n', '2'])
    os.remove(path)
    assert code == EXIT_OK
    certs = records(capsys)
    assert [c['claim'] for c in certs] == \
        ['level1-size', 'level1-size', 'homogeneous-bottom-fanin']
    assert all(c['satisfied'] for c in certs)
    assert certs[0]['profile']['s'] == [4, 4, 2, 1]


def test_parse_trees(capsys):
    assert main(['parse-trees', EXAMPLE]) == EXIT_OK
    [record] = records(capsys)
    notes = record['notes']
    assert notes['count'] == 6
    assert len(notes['monomials']) == 6
    assert notes['sum'] == notes['expansion']


def test_seed():
    assert _seed(3, {'CF_SEED': '9'}) == 3
    assert _seed(None, {'CF_SEED': '9'}) == 9
    assert _seed(None, {}) == DEFAULT_SEED


def test_config():
    config = PipelineConfig(inputs=['a.ckt'], a=2)
    assert config.to_dict()['passes'] == list(config.passes)
    assert config.field.modulus == config.prime
    with pytest.raises(ParameterError):
        PipelineConfig(inputs=[], trials=0)
    with pytest.raises(ParameterError):
        PipelineConfig(inputs=[], a=-1)
