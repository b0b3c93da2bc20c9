"""Arithmetic circuits, their degrees and their parse trees.

A :class:`Circuit` is an immutable DAG of gates stored in topological order.
Gate ids are dense integers equal to the gate's position, so child lookup is
an index into :attr:`Circuit.gates`. Circuits are built with a
:class:`CircuitBuilder`, which hash-conses identical gates and drops gates
that no output depends on.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, reduce, total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import (ContractError, EnumerationOverflowError,
                     StructuralError)
from .report import CircuitStats, PassReport

DEFAULT_PARSE_TREE_LIMIT = 10**9


class GateKind(Enum):
    """Kind of a gate. The value is the keyword of the text format."""

    INPUT = 'input'
    CONST = 'const'
    ADD = 'add'
    MUL = 'mul'
    SCAL = 'smul'

    @property
    def is_leaf(self) -> bool:
        return self in (GateKind.INPUT, GateKind.CONST)


@total_ordering
class GateDegree:
    """Degree of a gate: a non-negative integer or minus infinity.

    Minus infinity is the degree of the constant 0. It absorbs under sum and
    is the minimum under max. Degrees compare with plain integers.

    Args:
        value (Optional[int]): Integer degree, or None for minus infinity.
    """

    __slots__ = ('_value',)

    def __init__(self, value: Optional[int]):
        self._value = value

    @staticmethod
    def _coerce(other) -> Optional['GateDegree']:
        if isinstance(other, GateDegree):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return GateDegree(other)
        return None

    @property
    def is_neg_infinity(self) -> bool:
        return self._value is None

    @property
    def value(self) -> Optional[int]:
        """Integer degree, or None for minus infinity."""
        return self._value

    def __add__(self, other):
        other = GateDegree._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_neg_infinity or other.is_neg_infinity:
            return NEG_INFINITY
        return GateDegree(self._value + other._value)

    __radd__ = __add__

    def __eq__(self, other) -> bool:
        other = GateDegree._coerce(other)
        if other is None:
            return NotImplemented
        return self._value == other._value

    def __lt__(self, other) -> bool:
        other = GateDegree._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_neg_infinity:
            return not other.is_neg_infinity
        if other.is_neg_infinity:
            return False
        return self._value < other._value

    def __hash__(self) -> int:
        return hash(('degree', self._value))

    def __int__(self) -> int:
        if self.is_neg_infinity:
            raise StructuralError("degree is minus infinity")
        return self._value

    def __repr__(self) -> str:
        return 'GateDegree(%s)' % str(self)

    def __str__(self) -> str:
        return '-inf' if self.is_neg_infinity else str(self._value)

    def to_json(self):
        return '-inf' if self.is_neg_infinity else self._value


NEG_INFINITY = GateDegree(None)


@dataclass(frozen=True)
class Gate:
    """A single gate.

    Args:
        id (int): Position of the gate in its circuit.
        kind (GateKind): Kind of the gate.
        children (Tuple[int, ...]): Ordered child gate ids.
        var (Optional[int]): Variable index of an Input gate.
        value (Optional[int]): Ring element of a Const gate.
    """

    id: int
    kind: GateKind
    children: Tuple[int, ...] = ()
    var: Optional[int] = None
    value: Optional[int] = None


def _reachable(gates: Sequence[Gate], roots: Iterable[int]) -> List[bool]:
    keep = [False] * len(gates)
    stack = list(roots)
    while stack:
        g = stack.pop()
        if not keep[g]:
            keep[g] = True
            stack.extend(gates[g].children)
    return keep


def _prune(gates: Sequence[Gate],
           names: Optional[Sequence[Optional[str]]],
           outputs: Sequence[int]) -> 'Circuit':
    keep = _reachable(gates, outputs)
    remap: Dict[int, int] = {}
    new_gates = []
    new_names = []
    for gate in gates:
        if not keep[gate.id]:
            continue
        remap[gate.id] = len(new_gates)
        children = tuple(remap[ch] for ch in gate.children)
        new_gates.append(Gate(len(new_gates), gate.kind, children,
                              gate.var, gate.value))
        new_names.append(names[gate.id] if names else None)
    if not any(name is not None for name in new_names):
        new_names = None
    return Circuit(new_gates, [remap[o] for o in outputs], new_names)


class Circuit:
    """Immutable arithmetic circuit.

    The constructor stores the gates as given and does not check them; use
    :func:`validate` on circuits that were not produced by a
    :class:`CircuitBuilder` or a parser.

    Args:
        gates (Sequence[Gate]): Gates in topological order, gate i at index i.
        outputs (Sequence[int]): Designated output gate ids.
        names (Optional[Sequence[Optional[str]]]): Display names of gates.
    """

    def __init__(self,
                 gates: Sequence[Gate],
                 outputs: Sequence[int],
                 names: Optional[Sequence[Optional[str]]] = None):
        self._gates = tuple(gates)
        self._outputs = tuple(outputs)
        self._names = tuple(names) if names is not None else None

    @property
    def gates(self) -> Tuple[Gate, ...]:
        return self._gates

    @property
    def outputs(self) -> Tuple[int, ...]:
        return self._outputs

    @property
    def names(self) -> Optional[Tuple[Optional[str], ...]]:
        return self._names

    @property
    def size(self) -> int:
        """Number of gates (s)."""
        return len(self._gates)

    @property
    def output(self) -> int:
        """The single output gate id."""
        if len(self._outputs) != 1:
            raise ContractError("circuit has %d outputs, expected one"
                                % len(self._outputs))
        return self._outputs[0]

    @cached_property
    def variables(self) -> Tuple[int, ...]:
        """Sorted distinct variable indices of the Input gates."""
        return tuple(sorted({g.var for g in self._gates
                             if g.kind is GateKind.INPUT}))

    @property
    def n(self) -> int:
        """Number of distinct variables."""
        return len(self.variables)

    @cached_property
    def degrees(self) -> Tuple[GateDegree, ...]:
        """Degree of every gate, computed in one topological sweep."""
        out: List[GateDegree] = []
        for gate in self._gates:
            for ch in gate.children:
                if not 0 <= ch < len(out):
                    raise StructuralError(
                        "gate %d uses gate %d before it is defined"
                        % (gate.id, ch))
            if gate.kind is GateKind.INPUT:
                out.append(ONE)
            elif gate.kind is GateKind.CONST:
                out.append(NEG_INFINITY if gate.value == 0 else ZERO)
            elif gate.kind is GateKind.ADD:
                out.append(max(out[ch] for ch in gate.children))
            else:
                out.append(reduce(lambda a, b: a + b,
                                  (out[ch] for ch in gate.children), ZERO))
        return tuple(out)

    @property
    def degree(self) -> GateDegree:
        """Maximum degree over the outputs (d)."""
        return max(self.degrees[o] for o in self._outputs)

    def name_of(self, g: int) -> str:
        """Display name of gate ``g``, ``g<id>`` if it has none."""
        if self._names is not None and self._names[g] is not None:
            return self._names[g]
        return 'g%d' % g

    def parents(self) -> List[List[int]]:
        """Parent gate ids of every gate, each list in increasing order."""
        out: List[List[int]] = [[] for _ in self._gates]
        for gate in self._gates:
            for ch in sorted(set(gate.children)):
                out[ch].append(gate.id)
        return out

    def restrict(self, output: int) -> 'Circuit':
        """Return the single-output subcircuit rooted at ``output``."""
        _check_gate(self, output)
        return _prune(self._gates, self._names, [output])

    def with_outputs(self, outputs: Sequence[int]) -> 'Circuit':
        """Return the circuit with new outputs, pruned to what they use."""
        for o in outputs:
            _check_gate(self, o)
        return _prune(self._gates, self._names, outputs)

    def __len__(self) -> int:
        return len(self._gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self._gates == other._gates
                and self._outputs == other._outputs)

    def __hash__(self) -> int:
        return hash((self._gates, self._outputs))

    def __repr__(self) -> str:
        return 'Circuit(size=%d, outputs=%s)' % (self.size,
                                                 list(self._outputs))


ZERO = GateDegree(0)
ONE = GateDegree(1)


class CircuitBuilder:
    """Incremental construction of a :class:`Circuit`.

    Every method appends a gate (or, with ``dedupe``, returns an existing
    identical one) and returns its id.

    Args:
        dedupe (bool): Share structurally identical gates. Defaults to True.
    """

    def __init__(self, dedupe: bool = True):
        self._dedupe = dedupe
        self._gates: List[Gate] = []
        self._names: List[Optional[str]] = []
        self._index: Dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self._gates)

    def gate(self, g: int) -> Gate:
        return self._gates[g]

    def _push(self, kind: GateKind, children: Tuple[int, ...] = (),
              var: Optional[int] = None, value: Optional[int] = None,
              name: Optional[str] = None) -> int:
        for ch in children:
            if not 0 <= ch < len(self._gates):
                raise StructuralError("child %d is not a gate" % ch)
        key = (kind, children, var, value)
        if self._dedupe and key in self._index:
            return self._index[key]
        g = len(self._gates)
        self._gates.append(Gate(g, kind, children, var, value))
        self._names.append(name)
        self._index.setdefault(key, g)
        return g

    def input(self, var: int, name: Optional[str] = None) -> int:
        if var < 0:
            raise StructuralError("variable index must be non-negative")
        return self._push(GateKind.INPUT, var=var, name=name)

    def const(self, value: int, name: Optional[str] = None) -> int:
        return self._push(GateKind.CONST, value=int(value), name=name)

    def add(self, children: Iterable[int], name: Optional[str] = None) -> int:
        children = tuple(children)
        if not children:
            raise StructuralError("add gate needs at least one child")
        return self._push(GateKind.ADD, children, name=name)

    def mul(self, children: Iterable[int], name: Optional[str] = None) -> int:
        children = tuple(children)
        if not children:
            raise StructuralError("mul gate needs at least one child")
        return self._push(GateKind.MUL, children, name=name)

    def scal(self, scalar: int, child: int, name: Optional[str] = None) -> int:
        return self._push(GateKind.SCAL, (scalar, child), name=name)

    def extend(self, c: Circuit) -> List[int]:
        """Copy every gate of ``c`` and return the new id of each gate."""
        m: List[int] = []
        for gate in c.gates:
            children = tuple(m[ch] for ch in gate.children)
            m.append(self._push(gate.kind, children, gate.var, gate.value))
        return m

    def build(self, outputs: Sequence[int], prune: bool = True) -> Circuit:
        """Return the circuit with the given outputs.

        Args:
            outputs (Sequence[int]): Output gate ids.
            prune (bool): Drop gates no output depends on. Defaults to True.

        Returns:
            Circuit: The finished circuit.
        """
        outputs = list(outputs)
        if not outputs:
            raise StructuralError("a circuit needs at least one output")
        for o in outputs:
            if not 0 <= o < len(self._gates):
                raise StructuralError("output %d is not a gate" % o)
        if prune:
            return _prune(self._gates, self._names, outputs)
        names = self._names if any(self._names) else None
        return Circuit(self._gates, outputs, names)


def _check_gate(c: Circuit, g: int):
    if not isinstance(g, int) or not 0 <= g < c.size:
        raise StructuralError("unknown gate %r" % (g,))


def degree(c: Circuit, g: int) -> GateDegree:
    """Return the degree of gate ``g``.

    Inputs have degree 1, the constant 0 has degree minus infinity and other
    constants degree 0. Add takes the max of its children, Mul and Scal the
    sum.

    Args:
        c (Circuit): Circuit.
        g (int): Gate id.

    Returns:
        GateDegree: Degree of the gate.
    """
    _check_gate(c, g)
    return c.degrees[g]


def is_homogeneous(c: Circuit) -> bool:
    """Return True if all children of every Add gate share one degree.

    Children of degree minus infinity are ignored.
    """
    degs = c.degrees
    for gate in c.gates:
        if gate.kind is GateKind.ADD:
            finite = {degs[ch] for ch in gate.children
                      if not degs[ch].is_neg_infinity}
            if len(finite) > 1:
                return False
    return True


def gate_depths(c: Circuit) -> List[int]:
    """Return the depth of every gate; leaves have depth 0."""
    out: List[int] = []
    for gate in c.gates:
        if gate.kind.is_leaf:
            out.append(0)
        else:
            out.append(1 + max(out[ch] for ch in gate.children))
    return out


def depth(c: Circuit) -> int:
    """Return the length of the longest path from a leaf to an output."""
    depths = gate_depths(c)
    return max(depths[o] for o in c.outputs)


def stats(c: Circuit) -> CircuitStats:
    """Return structural statistics of a valid circuit."""
    counts = {kind.value: 0 for kind in GateKind}
    max_fanin = {kind.value: 0 for kind in
                 (GateKind.ADD, GateKind.MUL, GateKind.SCAL)}
    for gate in c.gates:
        counts[gate.kind.value] += 1
        if not gate.kind.is_leaf:
            max_fanin[gate.kind.value] = max(max_fanin[gate.kind.value],
                                             len(gate.children))
    return CircuitStats(size=c.size,
                        degree=c.degree,
                        n=c.n,
                        depth=depth(c),
                        counts=counts,
                        max_fanin=max_fanin,
                        homogeneous=is_homogeneous(c),
                        outputs=len(c.outputs))


# PARSE TREES

@dataclass(frozen=True)
class ParseNode:
    """A copy of a gate inside a parse tree.

    Args:
        gate (int): Id of the original gate.
        children (Tuple[ParseNode, ...]): One node for an Add gate, one copy
            per child for Mul and Scal gates, none for leaves.
    """

    gate: int
    children: Tuple['ParseNode', ...] = ()


@dataclass(frozen=True)
class ParseTree:
    """A parse tree of a circuit output.

    Args:
        root (ParseNode): Copy of the output gate.
        output (int): Id of the output gate.
    """

    root: ParseNode
    output: int

    def leaves(self) -> List[int]:
        """Return the leaf gate ids from left to right."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.children:
                stack.extend(reversed(node.children))
            else:
                out.append(node.gate)
        return out

    def nodes(self) -> Iterator[ParseNode]:
        """Iterate over all nodes in preorder."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def _tree_counts(c: Circuit) -> List[int]:
    counts: List[int] = []
    for gate in c.gates:
        if gate.kind.is_leaf:
            counts.append(1)
        elif gate.kind is GateKind.ADD:
            counts.append(sum(counts[ch] for ch in gate.children))
        else:
            product = 1
            for ch in gate.children:
                product *= counts[ch]
            counts.append(product)
    return counts


def count_parse_trees(c: Circuit, output: Optional[int] = None) -> int:
    """Return the exact number of parse trees.

    Args:
        c (Circuit): Circuit.
        output (Optional[int]): Output gate; all outputs if None.

    Returns:
        int: Number of parse trees (summed over outputs if output is None).
    """
    counts = _tree_counts(c)
    if output is not None:
        _check_gate(c, output)
        return counts[output]
    return sum(counts[o] for o in c.outputs)


def _iter_nodes(c: Circuit, g: int) -> Iterator[ParseNode]:
    gate = c.gates[g]
    if gate.kind.is_leaf:
        yield ParseNode(g)
    elif gate.kind is GateKind.ADD:
        for ch in gate.children:
            for node in _iter_nodes(c, ch):
                yield ParseNode(g, (node,))
    else:
        pools = [list(_iter_nodes(c, ch)) for ch in gate.children]
        for combo in itertools.product(*pools):
            yield ParseNode(g, combo)


def iter_parse_trees(c: Circuit,
                     output: Optional[int] = None) -> Iterator[ParseTree]:
    """Lazily yield the parse trees of one output (or all outputs)."""
    outputs = c.outputs if output is None else (output,)
    for o in outputs:
        _check_gate(c, o)
        for node in _iter_nodes(c, o):
            yield ParseTree(node, o)


def enumerate_parse_trees(c: Circuit,
                          limit: int = DEFAULT_PARSE_TREE_LIMIT,
                          output: Optional[int] = None) -> List[ParseTree]:
    """Return all parse trees, refusing when there are more than ``limit``.

    Args:
        c (Circuit): Circuit.
        limit (int): Maximum number of trees to materialize.
        output (Optional[int]): Output gate; all outputs if None.

    Returns:
        List[ParseTree]: The parse trees.

    Raises:
        EnumerationOverflowError: With the exact count, if it exceeds limit.
    """
    count = count_parse_trees(c, output)
    if count > limit:
        raise EnumerationOverflowError(count, limit)
    return list(iter_parse_trees(c, output))


# VALIDATION

def _find_cycle_gate(c: Circuit) -> Optional[int]:
    """Return a gate on a cycle of the child relation, or None."""
    size = c.size
    state = [0] * size  # 0 new, 1 on stack, 2 done
    for start in range(size):
        if state[start]:
            continue
        stack = [(start, iter(c.gates[start].children))]
        state[start] = 1
        while stack:
            g, it = stack[-1]
            advanced = False
            for ch in it:
                if not 0 <= ch < size:
                    continue
                if state[ch] == 1:
                    return ch
                if state[ch] == 0:
                    state[ch] = 1
                    stack.append((ch, iter(c.gates[ch].children)))
                    advanced = True
                    break
            if not advanced:
                state[g] = 2
                stack.pop()
    return None


def validate(c: Circuit) -> PassReport:
    """Check the structural invariants of a circuit.

    Reported violation codes: ``outputs``, ``output-exists``, ``gate-id``,
    ``dangling-child``, ``acyclicity``, ``topological-order``,
    ``leaf-arity``, ``arity``, ``scal-arity``, ``leaf-label`` and
    ``scal-child-degree``. Statistics are attached when the circuit is
    structurally sound.

    Args:
        c (Circuit): Circuit to check.

    Returns:
        PassReport: Report named ``validate``.
    """
    report = PassReport('validate')
    if not c.outputs:
        report.add_violation('outputs', None, "circuit has no outputs")
    forward = False
    for i, gate in enumerate(c.gates):
        if gate.id != i:
            report.add_violation('gate-id', i, "gate at position %d has id %d"
                                 % (i, gate.id))
        for ch in gate.children:
            if not 0 <= ch < c.size:
                report.add_violation('dangling-child', i,
                                     "child %d does not exist" % ch)
            elif ch >= i:
                forward = True
        n_children = len(gate.children)
        if gate.kind.is_leaf:
            if n_children:
                report.add_violation('leaf-arity', i,
                                     "%s gate has children" % gate.kind.value)
            if gate.kind is GateKind.INPUT and (gate.var is None
                                                or gate.var < 0):
                report.add_violation('leaf-label', i,
                                     "input gate without a variable")
            if gate.kind is GateKind.CONST and gate.value is None:
                report.add_violation('leaf-label', i,
                                     "const gate without a value")
        elif gate.kind is GateKind.SCAL:
            if n_children != 2:
                report.add_violation('scal-arity', i,
                                     "smul gate has %d children" % n_children)
        elif n_children == 0:
            report.add_violation('arity', i,
                                 "%s gate has no children" % gate.kind.value)
    if forward:
        cycle = _find_cycle_gate(c)
        if cycle is not None:
            report.add_violation('acyclicity', cycle,
                                 "gate %d lies on a cycle" % cycle)
        else:
            report.add_violation('topological-order', None,
                                 "a gate uses a later gate")
    for o in c.outputs:
        if not 0 <= o < c.size:
            report.add_violation('output-exists', o,
                                 "output %d is not a gate" % o)
    if report.violations:
        return report

    degs = c.degrees
    compound = 0
    for gate in c.gates:
        if gate.kind is not GateKind.SCAL:
            continue
        scalars = [ch for ch in gate.children if degs[ch] <= 0]
        if not scalars:
            report.add_violation('scal-child-degree', gate.id,
                                 "no child of smul gate %d has degree 0"
                                 % gate.id)
        elif all(c.gates[ch].kind is not GateKind.CONST for ch in scalars):
            compound += 1
    report.notes['compound_scalars'] = compound
    report.output_stats = stats(c)
    return report
