"""Flattening of balanced circuits to layered depth 4.

Gates of degree below d/a are expanded into sums of monomials over the
inputs. Gates of degree at least d/a are expanded into sums of monomials
over the low-degree gates they read, treated as fresh variables. Put
together, this gives one top Add of level-3 products of level-2 sums of
level-1 monomials.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Tuple

from ._log import _pass_msg
from .balance import mul_balance_violations
from .circuit import (Circuit, CircuitBuilder, GateKind, ParseTree,
                      is_homogeneous)
from .errors import ContractError, ParameterError
from .polynomial import (DEFAULT_TERM_BUDGET, Monomial, SparsePolynomial,
                         expand, expand_all)

TOP_FANIN_FACTOR = 15


@dataclass(frozen=True)
class DepthFourShape:
    """Fan-in bounds of the depth-4 circuit for degree d and parameter a.

    Args:
        a (int): Split parameter.
        d (int): Degree.
        top_mul_fanin_bound (int): floor(15a), bound on level-3 fan-in.
        bottom_mul_fanin_bound (int): ceil(d/a), bound on level-1 fan-in.
        threshold (Fraction): d/a; gates of smaller degree are expanded
            over the inputs.
    """

    a: int
    d: int
    top_mul_fanin_bound: int
    bottom_mul_fanin_bound: int
    threshold: Fraction

    @classmethod
    def for_degree(cls, d: int, a: int) -> 'DepthFourShape':
        threshold = Fraction(d) / Fraction(a)
        return cls(a, d, math.floor(TOP_FANIN_FACTOR * a),
                   math.ceil(threshold), threshold)


def check_split_parameter(d: int, a) -> None:
    """Raise ParameterError unless 0 < a < d (or a = 1 when d = 1)."""
    if d == 1 and a == 1:
        return
    if not 0 < a < d:
        raise ParameterError("split parameter must satisfy 0 < a < %d, "
                             "got %s" % (d, a))


@dataclass(frozen=True)
class SplitClassification:
    """Classification of the high-degree Mul nodes of a parse tree.

    Nodes are identified by their preorder position in the tree.

    Args:
        g0 (FrozenSet[int]): Mul nodes with no high-degree child.
        g1 (FrozenSet[int]): Mul nodes with exactly one high-degree child.
        g2 (FrozenSet[int]): Mul nodes with two or more high-degree children.
        leaves (int): Non-constant low-degree children of high-degree nodes.
    """

    g0: FrozenSet[int]
    g1: FrozenSet[int]
    g2: FrozenSet[int]
    leaves: int

    def within(self, a: float) -> bool:
        """True if the counting bounds hold for split parameter ``a``."""
        g0, g1, g2 = len(self.g0), len(self.g1), len(self.g2)
        return (g0 <= a and g1 <= a and g2 <= g0
                and self.leaves <= 5 * (g0 + g1 + g2) <= 15 * a)


def _is_high(c: Circuit, g: int, threshold: Fraction) -> bool:
    gate = c.gates[g]
    d = c.degrees[g]
    return not gate.kind.is_leaf and not d.is_neg_infinity \
        and int(d) >= threshold


def classify_split(c: Circuit, tree: ParseTree,
                   threshold: Fraction) -> SplitClassification:
    """Classify the Mul nodes of a parse tree lying above the threshold.

    Args:
        c (Circuit): Circuit the tree belongs to.
        tree (ParseTree): A parse tree of ``c``.
        threshold (Fraction): Degree d/a separating the two parts.

    Returns:
        SplitClassification: The three node classes and the leaf count.
    """
    classes: Tuple[set, set, set] = (set(), set(), set())
    leaves = 0
    for position, node in enumerate(tree.nodes()):
        if not _is_high(c, node.gate, threshold):
            continue
        high = 0
        for child in node.children:
            if _is_high(c, child.gate, threshold):
                high += 1
            elif c.degrees[child.gate] > 0:
                leaves += 1
        if c.gates[node.gate].kind is GateKind.MUL:
            classes[min(high, 2)].add(position)
    return SplitClassification(frozenset(classes[0]), frozenset(classes[1]),
                               frozenset(classes[2]), leaves)


class _Layers:
    """Builder of a layered depth-4 circuit."""

    def __init__(self):
        self.b = CircuitBuilder()
        self.level3: List[int] = []

    def monomial(self, m: Monomial, coef: int) -> int:
        children = [self.b.const(coef)] if coef != 1 or m.degree == 0 else []
        for var, e in m.items:
            children.extend([self.b.input(var)] * e)
        return self.b.mul(children)

    def sum_of_monomials(self, p: SparsePolynomial, scale: int = 1) -> int:
        if p.is_zero():
            return self.b.add([self.monomial(Monomial(), 0)])
        return self.b.add(self.monomial(m, coef * scale) for m, coef in p)

    def product(self, factors: List[int]) -> int:
        g = self.b.mul(factors)
        self.level3.append(g)
        return g

    def constant(self, value: int) -> int:
        return self.product([self.sum_of_monomials(
            SparsePolynomial.constant(value))])

    def build(self) -> Circuit:
        if not self.level3:
            self.constant(0)
        return self.b.build([self.b.add(self.level3)])


def _constant_form(value: int) -> Circuit:
    layers = _Layers()
    layers.constant(value)
    return layers.build()


def depth4_reduce(c: Circuit, a: int,
                  term_budget: int = DEFAULT_TERM_BUDGET) -> Circuit:
    """Return an equivalent layered depth-4 circuit.

    Gates of degree below d/a are expanded over the inputs, giving level-2
    sums of level-1 monomials of degree at most ceil(d/a). The output is
    expanded over those gates, giving level-3 products of at most 15a of
    them. Coefficients of the output expansion are folded into one level-2
    factor of each product. Constant circuits give a constant layered form.

    Args:
        c (Circuit): Homogeneous multiplicatively balanced circuit.
        a (int): Split parameter, 0 < a < d (a = 1 is allowed for d = 1).
        term_budget (int): Term budget of the expansions.

    Returns:
        Circuit: The layered circuit.

    Raises:
        ContractError: If ``c`` is not homogeneous and balanced.
        ParameterError: If ``a`` is out of range.
        TermBudgetExceededError: If an expansion exceeds the budget.
    """
    output = c.output
    d = c.degree
    if d <= 0:
        value = 0 if d.is_neg_infinity else expand(c).coefficient(Monomial())
        return _constant_form(value)
    d = int(d)
    check_split_parameter(d, a)
    if not is_homogeneous(c):
        raise ContractError("depth4 needs a homogeneous circuit")
    if mul_balance_violations(c):
        raise ContractError("depth4 needs a multiplicatively balanced "
                            "circuit")
    shape = DepthFourShape.for_degree(d, a)
    high = [_is_high(c, g, shape.threshold) for g in range(c.size)]
    boundary = set()
    for gate in c.gates:
        if high[gate.id]:
            boundary.update(ch for ch in gate.children
                            if not high[ch] and c.degrees[ch] > 0)
    if not high[output]:
        boundary.add(output)
    boundary = sorted(boundary)
    low = expand_all(c, term_budget, boundary)
    fresh = {g: SparsePolynomial.variable(g) for g in boundary}
    top = expand_all(c, term_budget, [output], substitute=fresh)[output]
    layers = _Layers()
    for m, coef in top:
        factors = []
        for g, e in m.items:
            factors.extend([g] * e)
        if not factors:
            layers.constant(coef)
            continue
        cheapest = min(factors, key=lambda g: (len(low[g]), g))
        level2 = []
        for g in factors:
            scale = coef if g == cheapest else 1
            level2.append(layers.sum_of_monomials(low[g], scale))
            if g == cheapest:
                coef = 1
        layers.product(level2)
    out = layers.build()
    logging.info(_pass_msg('depth4', c.size, out.size))
    return out
