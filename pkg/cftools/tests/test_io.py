import os
import pytest
from cftools.circuit import CircuitBuilder, GateKind
from cftools.errors import CircuitParseError
from cftools.generators import gen_det, gen_perm
from cftools.io import (Metadata, format_circuit, get_next_version,
                        parse_circuit, read, read_circuit, write_circuit)
from cftools.polynomial import expand

RESOURCES_PATH = os.path.join(os.path.dirname(__file__), 'resources/io_tests')


def test_get_next_version():
    c = gen_perm(2)
    for i in range(1, 5):
        assert f"perm_{i:04}" == get_next_version("perm")
        write_circuit(c, "perm", versioning=True)

    for i in range(1, 5):
        os.remove(f"perm_{i:04}.ckt")


@pytest.mark.parametrize("name,size,outputs", [
    ('example.ckt', 6, 1),
    ('perm2.ckt', 7, 1),
    ('det2.ckt', 9, 1),
    ('mixed.ckt', 4, 1)])
def test_read(name, size, outputs):
    c = read(os.path.join(RESOURCES_PATH, name))
    assert c.size == size
    assert len(c.outputs) == outputs


def test_read_names():
    c = read(os.path.join(RESOURCES_PATH, 'example.ckt'))
    assert [c.name_of(g) for g in range(c.size)] == \
        ['x', 'y', 'z', 'a', 'b', 'f']
    assert c.gates[3].kind is GateKind.ADD
    assert c.gates[3].children == (0, 1)


@pytest.mark.parametrize("name", [
    ('example.ckt'),
    ('perm2.ckt'),
    ('det2.ckt')])
def test_write_read(name):
    src = read(os.path.join(RESOURCES_PATH, name))

    file_name = 'test.ckt'
    write_circuit(src, file_name, metadata=Metadata(title=name))
    c = read(file_name)
    os.remove(file_name)

    assert c == src
    assert format_circuit(c) == format_circuit(src)


def test_write_appends_extension():
    path = write_circuit(gen_det(2), 'det')
    assert path == 'det.ckt'
    with open(path) as f:
        text = f.read()
    os.remove(path)
    assert text.startswith("# Software: cftools\n")
    assert "smul" in text


def test_metadata_header():
    metadata = Metadata(title="perm(2)", description="first line\nsecond",
                        source="cftools gen perm 2")
    assert metadata._to_comment_string() == (
        "# Title: perm(2)\n"
        "# Description: first line\n"
        "# second\n"
        "# Software: cftools\n"
        "# Source: cftools gen perm 2\n")


def test_format_unnamed():
    b = CircuitBuilder()
    x, y = b.input(0), b.input(1)
    c = b.build([b.scal(b.const(-2), b.mul([x, y]))])
    assert format_circuit(c) == ("input g0 0\n"
                                 "input g1 1\n"
                                 "const g2 -2\n"
                                 "mul g3 g0 g1\n"
                                 "smul g4 g2 g3\n"
                                 "output g4\n")


def test_parse_keeps_unreachable_gates():
    c = parse_circuit(["input x 0", "input y 1", "mul p x x", "output p"])
    assert c.size == 3
    assert str(expand(c)) == "x0^2"


def test_malformed_file():
    with pytest.raises(CircuitParseError) as e:
        read_circuit(os.path.join(RESOURCES_PATH, 'malformed.ckt'))
    assert e.value.line == 4
    assert "line 4" in str(e.value)


@pytest.mark.parametrize("lines,line", [
    (["input x 0", "frob y x", "output x"], 2),
    (["input x 0", "input x 1", "output x"], 2),
    (["input x 0", "smul s x", "output s"], 2),
    (["input x zero", "output x"], 1),
    (["input x -1", "output x"], 1),
    (["input x 0", "add s", "output s"], 2),
    (["input x 0", "output y"], 2),
    (["input x 0", "", "# nothing"], 1),
    (["input x-1 0", "output x-1"], 1)])
def test_parse_errors(lines, line):
    with pytest.raises(CircuitParseError) as e:
        parse_circuit(lines)
    assert e.value.line == line


def test_read_unsupported_extension():
    with pytest.raises(ValueError):
        read('circuit.json')
