"""Multiplicative balancing of homogeneous circuits.

For gates alpha and beta of a normalized circuit, the pair gate
(alpha; beta) computes the sum of the parse trees of alpha whose rightmost
path goes through beta. When beta is internal, beta's own subtree is cut
off. When beta is an input, the subtree is kept. Every parse tree of a gate
has exactly one rightmost leaf, so a gate equals the sum of its pairs with
the inputs it reaches.

A pair is computed by cutting its rightmost path at the unique Mul gate
gamma where the degree drops below half of the pair's degree. The resulting
products have at most five factors and each factor has at most half the
degree of the product. Pairs whose second gate is not on a rightmost path
of the first are zero and are never materialized.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence

from ._log import _pass_msg
from .circuit import Circuit, CircuitBuilder, GateKind, is_homogeneous
from .errors import ContractError
from .report import Violation
from .transform import eliminate_zeros

MAX_MUL_FANIN = 5


class GatePair(NamedTuple):
    """Identifier of the balanced gate (alpha; beta)."""

    alpha: int
    beta: int


@dataclass(frozen=True)
class BalanceSplit:
    """One way a pair gate was split at a Mul gate gamma.

    Args:
        alpha (int): First gate of the pair.
        beta (int): Second gate of the pair.
        gamma (int): Mul gate where the rightmost path is cut.
        gamma_l (int): Left child of gamma.
        gamma_r (int): Right child of gamma.
        mu (Optional[int]): Mul gate cutting gamma_l, if its degree is at
            least 2 and beta is internal.
        mu_l (Optional[int]): Left child of mu.
        mu_r (Optional[int]): Right child of mu.
        leaf (Optional[int]): beta, when beta is an input.
        leaf2 (Optional[int]): Always None; the sums over the leaves below
            gamma_l and mu are folded into full gate values.
    """

    alpha: int
    beta: int
    gamma: int
    gamma_l: int
    gamma_r: int
    mu: Optional[int] = None
    mu_l: Optional[int] = None
    mu_r: Optional[int] = None
    leaf: Optional[int] = None
    leaf2: Optional[int] = None

    @property
    def case(self) -> int:
        return 1 if self.leaf is not None else 2


class _Term(NamedTuple):
    # scalar * [gate]; gate None stands for the constant 1
    gate: Optional[int]
    scalar: int


def _check_normalized(c: Circuit):
    output = c.output
    if not is_homogeneous(c):
        raise ContractError("balance needs a homogeneous circuit")
    degs = c.degrees
    for gate in c.gates:
        kids = gate.children
        if gate.kind is GateKind.MUL:
            if len(kids) != 2:
                raise ContractError("mul gate %d has fan-in %d, normalize "
                                    "first" % (gate.id, len(kids)))
            if degs[kids[0]] < 1 or degs[kids[1]] < 1:
                raise ContractError("mul gate %d has a constant child"
                                    % gate.id)
            if degs[kids[0]] > degs[kids[1]]:
                raise ContractError("mul gate %d has its larger child on "
                                    "the left" % gate.id)
        elif gate.kind is GateKind.SCAL:
            if c.gates[kids[0]].kind is not GateKind.CONST \
                    or degs[kids[1]] < 1:
                raise ContractError("smul gate %d is not smul(const, g)"
                                    % gate.id)
        elif gate.kind is GateKind.ADD:
            if any(degs[ch] < 1 for ch in kids):
                raise ContractError("add gate %d has a constant child"
                                    % gate.id)
        elif gate.kind is GateKind.CONST and gate.id != output:
            if not any(gate.id == p.children[0] for p in c.gates
                       if p.kind is GateKind.SCAL):
                raise ContractError("constant gate %d is not a scalar"
                                    % gate.id)


def _right_reach(c: Circuit) -> List[FrozenSet[int]]:
    reach: List[FrozenSet[int]] = []
    for gate in c.gates:
        r = {gate.id}
        if gate.kind is GateKind.ADD:
            for ch in gate.children:
                r |= reach[ch]
        elif not gate.kind.is_leaf:
            r |= reach[gate.children[-1]]
        reach.append(frozenset(r))
    return reach


class Balancer:
    """Builds the balanced circuit of one normalized circuit.

    Args:
        c (Circuit): Normalized homogeneous single-output circuit: Mul gates
            have two non-constant children with the larger on the right,
            Scal gates are ``smul(Const, g)``.

    Raises:
        ContractError: If ``c`` is not normalized.
    """

    def __init__(self, c: Circuit):
        _check_normalized(c)
        self.circuit = c
        self.builder = CircuitBuilder()
        self.splits: List[BalanceSplit] = []
        self._deg = [d.value for d in c.degrees]
        self._reach = _right_reach(c)
        self._muls = [g.id for g in c.gates if g.kind is GateKind.MUL]
        self._inputs: Dict[int, int] = {}
        self._pairs: Dict[GatePair, Optional[_Term]] = {}
        self._full: Dict[int, Optional[_Term]] = {}

    @property
    def materialized_pairs(self) -> int:
        """Number of nonzero pair gates that were computed."""
        return sum(1 for v in self._pairs.values() if v is not None)

    def _input(self, g: int) -> int:
        if g not in self._inputs:
            self._inputs[g] = self.builder.input(self.circuit.gates[g].var)
        return self._inputs[g]

    def _materialize(self, t: Optional[_Term]) -> int:
        b = self.builder
        if t is None:
            return b.const(0)
        if t.gate is None:
            return b.const(t.scalar)
        if t.scalar == 1:
            return t.gate
        return b.scal(b.const(t.scalar), t.gate)

    def _sum(self, terms: Sequence[Optional[_Term]]) -> Optional[_Term]:
        terms = [t for t in terms if t is not None]
        if not terms:
            return None
        if all(t.gate is None for t in terms):
            total = sum(t.scalar for t in terms)
            return _Term(None, total) if total else None
        coefficients: Dict[int, int] = {}
        for t in terms:
            coefficients[t.gate] = coefficients.get(t.gate, 0) + t.scalar
        kept = [_Term(g, s) for g, s in coefficients.items() if s]
        if not kept:
            return None
        if len(kept) == 1:
            return kept[0]
        return _Term(self.builder.add(self._materialize(t) for t in kept), 1)

    def _product(self, factors: Sequence[Optional[_Term]]) -> Optional[_Term]:
        scalar = 1
        gates = []
        for f in factors:
            if f is None:
                return None
            scalar *= f.scalar
            if f.gate is not None:
                gates.append(f.gate)
        if scalar == 0:
            return None
        if not gates:
            return _Term(None, scalar)
        if len(gates) == 1:
            return _Term(gates[0], scalar)
        return _Term(self.builder.mul(gates), scalar)

    def pair(self, alpha: int, beta: int) -> Optional[_Term]:
        """Return the value of (alpha; beta), None if it is zero."""
        key = GatePair(alpha, beta)
        if key in self._pairs:
            return self._pairs[key]
        c = self.circuit
        gate = c.gates[alpha]
        if beta not in self._reach[alpha]:
            value = None
        elif alpha == beta:
            if gate.kind is GateKind.INPUT:
                value = _Term(self._input(alpha), 1)
            elif gate.kind is GateKind.CONST:
                value = _Term(None, gate.value) if gate.value else None
            else:
                value = _Term(None, 1)
        elif gate.kind is GateKind.ADD:
            value = self._sum([self.pair(ch, beta) for ch in gate.children])
        elif gate.kind is GateKind.SCAL:
            scalar = c.gates[gate.children[0]].value
            inner = self.pair(gate.children[1], beta)
            value = self._product([_Term(None, scalar), inner])
        elif c.gates[beta].kind.is_leaf:
            value = self._sum(self._leaf_terms(alpha, beta))
        else:
            value = self._sum(self._internal_terms(alpha, beta))
        self._pairs[key] = value
        return value

    def _leaf_terms(self, alpha: int, leaf: int) -> List[Optional[_Term]]:
        # 2 deg(gamma) > deg(alpha) >= 2 deg(gamma_r)
        deg = self._deg
        terms = []
        for gamma in self._muls:
            if gamma not in self._reach[alpha]:
                continue
            gamma_l, gamma_r = self.circuit.gates[gamma].children
            if leaf not in self._reach[gamma_r]:
                continue
            if not 2*deg[gamma] > deg[alpha] >= 2*deg[gamma_r]:
                continue
            self.splits.append(BalanceSplit(alpha, leaf, gamma, gamma_l,
                                            gamma_r, leaf=leaf))
            terms.append(self._product([self.pair(alpha, gamma),
                                        self.full(gamma_l),
                                        self.pair(gamma_r, leaf)]))
        return terms

    def _internal_terms(self, alpha: int, beta: int) -> List[Optional[_Term]]:
        # 2 deg(gamma) >= deg(alpha) + deg(beta) > 2 deg(gamma_r)
        deg = self._deg
        total = deg[alpha] + deg[beta]
        terms = []
        for gamma in self._muls:
            if gamma not in self._reach[alpha]:
                continue
            gamma_l, gamma_r = self.circuit.gates[gamma].children
            if beta not in self._reach[gamma_r]:
                continue
            if not 2*deg[gamma] >= total > 2*deg[gamma_r]:
                continue
            top = self.pair(alpha, gamma)
            bottom = self.pair(gamma_r, beta)
            if deg[gamma_l] < 2:
                self.splits.append(BalanceSplit(alpha, beta, gamma, gamma_l,
                                                gamma_r))
                terms.append(self._product([top, self.full(gamma_l),
                                            bottom]))
                continue
            for mu in self._left_cuts(gamma_l):
                mu_l, mu_r = self.circuit.gates[mu].children
                self.splits.append(BalanceSplit(alpha, beta, gamma, gamma_l,
                                                gamma_r, mu, mu_l, mu_r))
                terms.append(self._product([top, bottom,
                                            self.pair(gamma_l, mu),
                                            self.full(mu_l),
                                            self.full(mu_r)]))
        return terms

    def _left_cuts(self, g: int) -> List[int]:
        # 2 deg(mu) > deg(g) >= 2 deg(mu_r)
        deg = self._deg
        cuts = []
        for mu in self._muls:
            if mu not in self._reach[g]:
                continue
            mu_r = self.circuit.gates[mu].children[1]
            if 2*deg[mu] > deg[g] >= 2*deg[mu_r]:
                cuts.append(mu)
        return cuts

    def full(self, g: int) -> Optional[_Term]:
        """Return the value of gate g as the sum of its pairs with inputs."""
        if g not in self._full:
            c = self.circuit
            if c.gates[g].kind is GateKind.CONST:
                value = self.pair(g, g)
            else:
                leaves = sorted(l for l in self._reach[g]
                                if c.gates[l].kind is GateKind.INPUT)
                value = self._sum([self.pair(g, l) for l in leaves])
            self._full[g] = value
        return self._full[g]

    def run(self) -> Circuit:
        """Return the balanced circuit, before zero elimination."""
        root = self._materialize(self.full(self.circuit.output))
        return self.builder.build([root])


def balance(c: Circuit) -> Circuit:
    """Return an equivalent homogeneous multiplicatively balanced circuit.

    Every Mul gate of the result has fan-in at most 5 and children of at
    most half its degree; Scal gates have fan-in 2.

    Args:
        c (Circuit): Normalized homogeneous single-output circuit.

    Returns:
        Circuit: The balanced circuit.

    Raises:
        ContractError: If ``c`` is not normalized.
    """
    balancer = Balancer(c)
    out = eliminate_zeros(balancer.run())
    logging.info(_pass_msg('balance', c.size, out.size))
    return out


def mul_balance_violations(c: Circuit) -> List[Violation]:
    """Return the gates breaking multiplicative balance.

    Codes: ``mul-fanin`` (Mul fan-in above 5), ``mul-child-degree`` (a Mul
    child of more than half the gate's degree) and ``scal-fanin``.
    """
    degs = c.degrees
    out = []
    for gate in c.gates:
        if gate.kind is GateKind.MUL:
            if len(gate.children) > MAX_MUL_FANIN:
                out.append(Violation('mul-fanin', gate.id,
                                     "mul gate %d has fan-in %d"
                                     % (gate.id, len(gate.children))))
            if degs[gate.id].is_neg_infinity:
                continue
            for ch in gate.children:
                if not degs[ch].is_neg_infinity \
                        and 2*int(degs[ch]) > int(degs[gate.id]):
                    out.append(Violation(
                        'mul-child-degree', gate.id,
                        "child %d of mul gate %d has degree %s of %s"
                        % (ch, gate.id, degs[ch], degs[gate.id])))
        elif gate.kind is GateKind.SCAL and len(gate.children) != 2:
            out.append(Violation('scal-fanin', gate.id,
                                 "smul gate %d has fan-in %d"
                                 % (gate.id, len(gate.children))))
    return out


def is_mul_balanced(c: Circuit) -> bool:
    return not mul_balance_violations(c)
