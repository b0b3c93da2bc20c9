import os
import re
import logging
from typing import Dict, Iterable, List, Optional
from ._log import _log_msg
from .circuit import Circuit, CircuitBuilder, GateKind
from .errors import CircuitError, CircuitParseError

_ID = re.compile(r'^[A-Za-z0-9_]+$')
_INT = re.compile(r'^[+-]?[0-9]+$')


class Metadata:
    """Maintain metadata for a circuit file, written as a '#' header."""

    def __init__(self,
                 title: str = None,
                 description: str = None,
                 software: str = None,
                 creation_time: str = None,
                 source: str = None,
                 comment: str = None):
        """Initialize metadata.

        Args:
            title (str): Short (one line) title of the circuit. \
                Defaults to None
            description (str): Description of the circuit (possibly long). \
                Defaults to None
            software (str): Software that produced the circuit. \
                Defaults to "cftools".
            creation_time (str): Time of creation. Defaults to None so that \
                identical circuits give identical files.
            source (str): Command or generator that produced the circuit. \
                Defaults to None.
            comment (str): Miscellaneous comment. Defaults to None.
        """
        self.title = title
        self.description = description
        self.software = "cftools" if software is None else software
        self.creation_time = creation_time
        self.source = source
        self.comment = comment

    def _to_comment_string(self) -> str:
        """Return a string representation of this metadata.

        Returns:
            str: String representation of metadata.
        """
        fields = [("Title", self.title),
                  ("Description", self.description),
                  ("Software", self.software),
                  ("Creation Time", self.creation_time),
                  ("Source", self.source),
                  ("Comment", self.comment)]
        lines = []
        for name, value in fields:
            if value is None:
                continue
            for i, line in enumerate(str(value).split("\n")):
                lines.append("# %s: %s" % (name, line) if i == 0
                             else "# %s" % line)
        return "".join("%s\n" % line for line in lines)


def get_next_version(path: str) -> str:
    """Return the name with the next highest version number.

    Args:
        path (str): String file path without extension.

    Returns:
        str: String file path with version number.
    """
    directory, base = os.path.split(path)
    filenames = next(os.walk(directory or '.'), (None, None, []))[2]
    r = re.compile(r"%s_([0-9]+)\.ckt$" % re.escape(base))
    prev = [int(m.group(1)) for m in map(r.match, filenames) if m]
    i = 1 if len(prev) == 0 else max(prev) + 1
    return f"{path}_{i:04}"


def _tokens(lines: Iterable[str]):
    for number, line in enumerate(lines, start=1):
        tokens = line.split('#')[0].split()
        if tokens:
            yield number, tokens


def parse_circuit(lines: Iterable[str]) -> Circuit:
    """Parse a circuit from the lines of the text format.

    Each non-comment line declares one gate or one output::

        input <id> <var-index>
        const <id> <integer>
        add <id> <child>+
        mul <id> <child>+
        smul <id> <child> <child>
        output <id>

    Args:
        lines (Iterable[str]): Lines of the file.

    Returns:
        Circuit: The parsed circuit, gates kept in file order.

    Raises:
        CircuitParseError: With the line number of the first bad line.
    """
    builder = CircuitBuilder(dedupe=False)
    ids: Dict[str, int] = {}
    outputs: List[int] = []
    last = 0
    for number, tokens in _tokens(lines):
        last = number
        keyword, args = tokens[0], tokens[1:]
        if keyword == 'output':
            if len(args) != 1:
                raise CircuitParseError(number, "output takes one gate id")
            if args[0] not in ids:
                raise CircuitParseError(number, "unknown gate '%s'" % args[0])
            outputs.append(ids[args[0]])
            continue
        try:
            kind = GateKind(keyword)
        except ValueError:
            raise CircuitParseError(number, "unknown keyword '%s'" % keyword)
        if not args:
            raise CircuitParseError(number, "missing gate id")
        name, operands = args[0], args[1:]
        if not _ID.match(name):
            raise CircuitParseError(number, "bad gate id '%s'" % name)
        if name in ids:
            raise CircuitParseError(number, "gate '%s' declared twice" % name)
        if kind.is_leaf:
            if len(operands) != 1 or not _INT.match(operands[0]):
                raise CircuitParseError(number, "%s takes one integer"
                                        % keyword)
            value = int(operands[0])
            try:
                if kind is GateKind.INPUT:
                    g = builder.input(value, name)
                else:
                    g = builder.const(value, name)
            except CircuitError as e:
                raise CircuitParseError(number, str(e))
        else:
            if kind is GateKind.SCAL and len(operands) != 2:
                raise CircuitParseError(number, "smul takes two children")
            if not operands:
                raise CircuitParseError(number, "%s needs children" % keyword)
            missing = [op for op in operands if op not in ids]
            if missing:
                raise CircuitParseError(number, "unknown gate '%s'"
                                        % missing[0])
            children = [ids[op] for op in operands]
            if kind is GateKind.ADD:
                g = builder.add(children, name)
            elif kind is GateKind.MUL:
                g = builder.mul(children, name)
            else:
                g = builder.scal(children[0], children[1], name)
        ids[name] = g
    if not outputs:
        raise CircuitParseError(last, "no output declared")
    return builder.build(outputs, prune=False)


def read_circuit(path: str) -> Circuit:
    """Read a circuit file.

    Args:
        path (str): String file path.

    Returns:
        Circuit: The parsed circuit.
    """
    with open(path, "r") as f:
        return parse_circuit(f.read().split("\n"))


def _labels(c: Circuit) -> List[str]:
    labels = [c.name_of(g) for g in range(c.size)]
    if len(set(labels)) != len(labels):
        labels = ['g%d' % g for g in range(c.size)]
    return labels


def format_circuit(c: Circuit) -> str:
    """Return the canonical text form of a circuit.

    Tokens are separated by single spaces and every line ends with a newline,
    so parsing and printing again gives the same bytes.

    Args:
        c (Circuit): Circuit to print.

    Returns:
        str: Text form of the circuit.
    """
    labels = _labels(c)
    lines = []
    for gate in c.gates:
        if gate.kind is GateKind.INPUT:
            operands = [str(gate.var)]
        elif gate.kind is GateKind.CONST:
            operands = [str(gate.value)]
        else:
            operands = [labels[ch] for ch in gate.children]
        lines.append(" ".join([gate.kind.value, labels[gate.id]] + operands))
    lines.extend("output %s" % labels[o] for o in c.outputs)
    return "".join("%s\n" % line for line in lines)


def write_circuit(c: Circuit, path: str,
                  versioning=False, metadata=None) -> str:
    """Write a circuit to a .ckt file.

    Args:
        c (Circuit): Circuit to write.
        path (str): String file path.
        versioning (bool): Version files (rather than overwrite).
        metadata (Metadata): Metadata for the header. Defaults to Metadata().

    Returns:
        str: The path actually written.
    """
    if versioning:
        path = get_next_version(path)
    if path.split('.')[-1] != 'ckt':
        path += '.ckt'
    metadata = Metadata() if metadata is None else metadata
    with open(path, "w") as f:
        f.write(metadata._to_comment_string())
        f.write(format_circuit(c))
    logging.info(_log_msg(path, os.stat(path).st_size))
    return path


def read(path: str) -> Circuit:
    """Read a circuit file into a Circuit.

    Args:
        path (str): String file path with extention in {ckt, txt}.

    Returns:
        Circuit: The circuit.
    """
    _, ext = os.path.splitext(path)
    read_f = {'.ckt': read_circuit,
              '.txt': read_circuit}
    if ext not in read_f.keys():
        raise ValueError("File extension not supported.")
    else:
        return read_f[ext](path)
