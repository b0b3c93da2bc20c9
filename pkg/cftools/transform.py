"""Structural passes: binarization, homogenization and normalization."""

import logging
from typing import Dict, List, Optional

from ._log import _pass_msg
from .circuit import Circuit, CircuitBuilder, GateKind, is_homogeneous
from .errors import ContractError
from .field import (DEFAULT_SEED, DEFAULT_TRIALS, EXACT_ZERO_LIMIT,
                    PrimeField, find_zero_gates)


def binarize_mul(c: Circuit) -> Circuit:
    """Replace every Mul gate of fan-in k > 2 by a left-leaning chain.

    mul(a, b, c) becomes mul(mul(a, b), c). Other gates are copied.

    Args:
        c (Circuit): Circuit.

    Returns:
        Circuit: Equivalent circuit whose Mul gates have fan-in at most 2.
    """
    b = CircuitBuilder(dedupe=False)
    m: List[int] = []
    for gate in c.gates:
        name = c.names[gate.id] if c.names else None
        children = [m[ch] for ch in gate.children]
        if gate.kind is GateKind.INPUT:
            g = b.input(gate.var, name)
        elif gate.kind is GateKind.CONST:
            g = b.const(gate.value, name)
        elif gate.kind is GateKind.ADD:
            g = b.add(children, name)
        elif gate.kind is GateKind.SCAL:
            g = b.scal(children[0], children[1], name)
        elif len(children) <= 2:
            g = b.mul(children, name)
        else:
            g = b.mul(children[:2])
            for ch in children[2:-1]:
                g = b.mul([g, ch])
            g = b.mul([g, children[-1]], name)
        m.append(g)
    out = b.build([m[o] for o in c.outputs])
    logging.info(_pass_msg('binarize', c.size, out.size))
    return out


def _mul_parts(b: CircuitBuilder, kind: GateKind,
               left: Dict[int, int], right: Dict[int, int],
               top: int) -> Dict[int, int]:
    parts: Dict[int, int] = {}
    for i in range(top + 1):
        products = []
        for j in sorted(left):
            if i - j in right:
                if kind is GateKind.MUL:
                    products.append(b.mul([left[j], right[i - j]]))
                else:
                    products.append(b.scal(left[j], right[i - j]))
        if len(products) == 1:
            parts[i] = products[0]
        elif products:
            parts[i] = b.add(products)
    return parts


def homogenize(c: Circuit) -> Circuit:
    """Split a circuit into its homogeneous parts.

    Every gate g is replaced by gates g_0, ..., g_k computing the
    homogeneous parts of g of degree i <= k = min(d, deg g). Parts that are
    structurally zero are not created.

    Args:
        c (Circuit): Single-output circuit of finite degree d whose Mul
            gates have fan-in at most 2.

    Returns:
        Circuit: Homogeneous circuit with d + 1 outputs; output i computes
        the homogeneous part of degree i (Const(0) if it is empty).

    Raises:
        ContractError: If the input has several outputs, a Mul of fan-in
            above 2 or degree minus infinity.
    """
    output = c.output
    d = c.degree
    if d.is_neg_infinity:
        raise ContractError("cannot homogenize the zero circuit")
    d = int(d)
    for gate in c.gates:
        if gate.kind is GateKind.MUL and len(gate.children) > 2:
            raise ContractError("mul gate %d has fan-in %d, binarize first"
                                % (gate.id, len(gate.children)))
    b = CircuitBuilder()
    parts: List[Dict[int, int]] = []
    for gate in c.gates:
        deg = c.degrees[gate.id]
        top = -1 if deg.is_neg_infinity else min(d, int(deg))
        if gate.kind is GateKind.INPUT:
            p = {1: b.input(gate.var)} if top >= 1 else {}
        elif gate.kind is GateKind.CONST:
            p = {0: b.const(gate.value)} if gate.value != 0 else {}
        elif gate.kind is GateKind.ADD:
            p = {}
            for i in range(top + 1):
                summands = [parts[ch][i] for ch in gate.children
                            if i in parts[ch]]
                if len(summands) == 1:
                    p[i] = summands[0]
                elif summands:
                    p[i] = b.add(summands)
        elif len(gate.children) == 1:
            p = {i: g for i, g in parts[gate.children[0]].items() if i <= top}
        else:
            left, right = (parts[ch] for ch in gate.children)
            p = _mul_parts(b, gate.kind, left, right, top)
        parts.append(p)
    zero: Optional[int] = None
    outputs = []
    for i in range(d + 1):
        if i in parts[output]:
            outputs.append(parts[output][i])
        else:
            zero = b.const(0) if zero is None else zero
            outputs.append(zero)
    out = b.build(outputs)
    logging.info(_pass_msg('homogenize', c.size, out.size))
    return out


def eliminate_zeros(c: Circuit,
                    exact_limit: int = EXACT_ZERO_LIMIT,
                    trials: int = DEFAULT_TRIALS,
                    field: Optional[PrimeField] = None,
                    seed: int = DEFAULT_SEED) -> Circuit:
    """Replace every gate computing the zero polynomial by Const(0).

    Zero children are dropped from Add gates, so no computation gate of the
    result computes zero. Zero outputs become Const(0).

    Args:
        c (Circuit): Circuit.
        exact_limit (int): Largest size checked with the exact oracle.
        trials (int): Random points used above ``exact_limit``.
        field (Optional[PrimeField]): Field of the random points.
        seed (int): Seed of the random points.

    Returns:
        Circuit: Equivalent circuit without zero computation gates.
    """
    zeros = find_zero_gates(c, exact_limit, trials=trials, field=field,
                            seed=seed)
    b = CircuitBuilder()
    m: List[int] = []
    for gate in c.gates:
        if gate.id in zeros:
            m.append(b.const(0))
        elif gate.kind is GateKind.INPUT:
            m.append(b.input(gate.var))
        elif gate.kind is GateKind.CONST:
            m.append(b.const(gate.value))
        elif gate.kind is GateKind.ADD:
            kept = [m[ch] for ch in gate.children if ch not in zeros]
            m.append(b.add(kept) if kept else b.const(0))
        elif gate.kind is GateKind.MUL:
            m.append(b.mul(m[ch] for ch in gate.children))
        else:
            m.append(b.scal(m[gate.children[0]], m[gate.children[1]]))
    out = b.build([m[o] for o in c.outputs])
    logging.info(_pass_msg('eliminate-zeros', c.size, out.size))
    return out


def _constant_values(c: Circuit) -> Dict[int, int]:
    """Exact value of every gate of degree at most 0."""
    values: Dict[int, int] = {}
    for gate in c.gates:
        if c.degrees[gate.id] > 0:
            continue
        if gate.kind is GateKind.CONST:
            values[gate.id] = gate.value
        elif gate.kind is GateKind.ADD:
            values[gate.id] = sum(values[ch] for ch in gate.children)
        else:
            product = 1
            for ch in gate.children:
                product *= values[ch]
            values[gate.id] = product
    return values


def normalize(c: Circuit,
              exact_limit: int = EXACT_ZERO_LIMIT,
              trials: int = DEFAULT_TRIALS,
              field: Optional[PrimeField] = None,
              seed: int = DEFAULT_SEED) -> Circuit:
    """Bring a homogeneous circuit into the form balancing expects.

    After zero elimination, gates of degree 0 are folded into constants,
    unary Add and Mul gates are bypassed, constant factors of a product are
    collected into one Scal gate ``smul(Const(c), g)`` and the remaining
    factors are ordered by increasing degree, so the rightmost child of
    every Mul and Scal gate has maximal degree.

    Args:
        c (Circuit): Homogeneous circuit.

    Returns:
        Circuit: Equivalent normalized circuit.

    Raises:
        ContractError: If the input is not homogeneous.
    """
    if not is_homogeneous(c):
        raise ContractError("normalize needs a homogeneous circuit")
    c = eliminate_zeros(c, exact_limit, trials, field, seed)
    values = _constant_values(c)
    degs = c.degrees
    b = CircuitBuilder()
    m: List[int] = []
    for gate in c.gates:
        if gate.id in values:
            m.append(b.const(values[gate.id]))
        elif gate.kind is GateKind.INPUT:
            m.append(b.input(gate.var))
        elif gate.kind is GateKind.ADD:
            children = [m[ch] for ch in gate.children]
            m.append(children[0] if len(children) == 1 else b.add(children))
        else:
            scalar = 1
            factors = []
            for ch in gate.children:
                if ch in values:
                    scalar *= values[ch]
                else:
                    factors.append(ch)
            factors.sort(key=lambda ch: degs[ch])
            if len(factors) == 1:
                g = m[factors[0]]
            else:
                g = b.mul(m[ch] for ch in factors)
            m.append(g if scalar == 1 else b.scal(b.const(scalar), g))
    out = b.build([m[o] for o in c.outputs])
    logging.info(_pass_msg('normalize', c.size, out.size))
    return out
