"""Exact sparse multivariate polynomials.

Polynomials are maps from :class:`Monomial` to nonzero coefficients of a
commutative ring. They are the reference semantics of circuits: every pass
is checked against :func:`expand` wherever the expansion fits a term budget.
"""

from functools import total_ordering
from typing import (Dict, Iterable, Iterator, List, Mapping, Optional,
                    Sequence, Tuple)

from .circuit import NEG_INFINITY, Circuit, GateDegree, GateKind, ParseTree
from .errors import AssignmentError, TermBudgetExceededError

DEFAULT_TERM_BUDGET = 10**6


class IntegerRing:
    """Arbitrary precision integers."""

    name = 'ZZ'

    def normalize(self, value: int) -> int:
        return int(value)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def __hash__(self) -> int:
        return hash('ZZ')

    def __repr__(self) -> str:
        return 'IntegerRing()'


INTEGERS = IntegerRing()


@total_ordering
class Monomial:
    """Product of variables with positive exponents.

    Monomials are ordered graded-lexicographically: first by total degree,
    then by the exponent of the smallest variable index, and so on.

    Args:
        exponents (Mapping[int, int]): Variable index to exponent. Zero
            exponents are dropped.
    """

    __slots__ = ('_items', '_degree')

    def __init__(self, exponents: Mapping[int, int] = None):
        items = [] if exponents is None else \
            [(v, e) for v, e in exponents.items() if e != 0]
        if any(e < 0 for _, e in items):
            raise ValueError("exponents must be non-negative")
        self._items: Tuple[Tuple[int, int], ...] = tuple(sorted(items))
        self._degree = sum(e for _, e in self._items)

    @classmethod
    def variable(cls, var: int) -> 'Monomial':
        return cls({var: 1})

    @property
    def items(self) -> Tuple[Tuple[int, int], ...]:
        """(variable, exponent) pairs sorted by variable."""
        return self._items

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self._items)

    def exponent(self, var: int) -> int:
        for v, e in self._items:
            if v == var:
                return e
        return 0

    def key(self) -> tuple:
        """Sort key realizing the graded-lexicographic order."""
        return (self._degree, tuple((-v, e) for v, e in self._items))

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        exponents = dict(self._items)
        for v, e in other._items:
            exponents[v] = exponents.get(v, 0) + e
        return Monomial(exponents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other: 'Monomial') -> bool:
        return self.key() < other.key()

    def __hash__(self) -> int:
        return hash(self._items)

    def evaluate(self, point: Mapping[int, int],
                 modulus: Optional[int] = None) -> int:
        value = 1
        for v, e in self._items:
            if v not in point:
                raise AssignmentError("variable x%d has no value" % v)
            value *= pow(point[v], e, modulus) if modulus else point[v]**e
            if modulus:
                value %= modulus
        return value

    def __str__(self) -> str:
        if not self._items:
            return '1'
        return '*'.join('x%d' % v if e == 1 else 'x%d^%d' % (v, e)
                        for v, e in self._items)

    def __repr__(self) -> str:
        return 'Monomial(%s)' % str(self)


ONE = Monomial()


class MonomialSet:
    """Immutable set of monomials, iterated in graded-lex order.

    Args:
        monomials (Iterable[Monomial]): Members of the set.
    """

    def __init__(self, monomials: Iterable[Monomial] = ()):
        self._members = frozenset(monomials)

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._members, key=Monomial.key))

    def __contains__(self, m) -> bool:
        return m in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialSet):
            return NotImplemented
        return self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __le__(self, other: 'MonomialSet') -> bool:
        return self._members <= other._members

    def union(self, *others: 'MonomialSet') -> 'MonomialSet':
        members = set(self._members)
        for other in others:
            members |= other._members
        return MonomialSet(members)

    def products(self, other: 'MonomialSet') -> 'MonomialSet':
        """Return the set of pairwise products."""
        return MonomialSet(a * b for a in self._members
                           for b in other._members)

    def __repr__(self) -> str:
        return 'MonomialSet({%s})' % ', '.join(str(m) for m in self)


class SparsePolynomial:
    """Polynomial stored as a map from monomials to nonzero coefficients.

    Args:
        terms (Mapping[Monomial, int]): Coefficients. Zero coefficients
            (after reduction in the ring) are dropped.
        ring: Coefficient ring with a ``normalize`` method. Defaults to the
            integers.
    """

    __slots__ = ('_terms', '_ring')

    def __init__(self, terms: Mapping[Monomial, int] = None, ring=None):
        self._ring = INTEGERS if ring is None else ring
        self._terms: Dict[Monomial, int] = {}
        if terms:
            for m, coef in terms.items():
                coef = self._ring.normalize(coef)
                if coef != 0:
                    self._terms[m] = coef

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int], ring) -> 'SparsePolynomial':
        p = cls.__new__(cls)
        p._ring = ring
        p._terms = terms
        return p

    @classmethod
    def constant(cls, value: int, ring=None) -> 'SparsePolynomial':
        return cls({ONE: value}, ring)

    @classmethod
    def variable(cls, var: int, ring=None) -> 'SparsePolynomial':
        return cls({Monomial.variable(var): 1}, ring)

    @classmethod
    def zero(cls, ring=None) -> 'SparsePolynomial':
        return cls({}, ring)

    @property
    def ring(self):
        return self._ring

    @property
    def terms(self) -> Dict[Monomial, int]:
        """A copy of the coefficient map."""
        return dict(self._terms)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        """Iterate over (monomial, coefficient) in descending graded-lex."""
        for m in sorted(self._terms, key=Monomial.key, reverse=True):
            yield m, self._terms[m]

    @property
    def degree(self) -> GateDegree:
        if not self._terms:
            return NEG_INFINITY
        return GateDegree(max(m.degree for m in self._terms))

    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self._terms}) <= 1

    def homogeneous_part(self, i: int) -> 'SparsePolynomial':
        return SparsePolynomial._raw(
            {m: c for m, c in self._terms.items() if m.degree == i},
            self._ring)

    def support(self) -> MonomialSet:
        return MonomialSet(self._terms)

    def __add__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        terms = dict(self._terms)
        for m, c in other._terms.items():
            value = self._ring.normalize(terms.get(m, 0) + c)
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        return SparsePolynomial._raw(terms, self._ring)

    def __neg__(self) -> 'SparsePolynomial':
        return self.scale(-1)

    def __sub__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        return self + (-other)

    def __mul__(self, other: 'SparsePolynomial') -> 'SparsePolynomial':
        terms: Dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return SparsePolynomial(terms, self._ring)

    def scale(self, value: int) -> 'SparsePolynomial':
        return SparsePolynomial({m: c * value
                                 for m, c in self._terms.items()},
                                self._ring)

    def evaluate(self, point: Mapping[int, int],
                 modulus: Optional[int] = None) -> int:
        """Value at a point, reduced modulo ``modulus`` if given."""
        total = 0
        for m, c in self._terms.items():
            total += c * m.evaluate(point, modulus)
        return total % modulus if modulus else total

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self._terms == other._terms and self._ring == other._ring

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for m, c in self:
            if m.degree == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = str(m)
            else:
                body = '%d*%s' % (abs(c), m)
            if not parts:
                parts.append('-' + body if c < 0 else body)
            else:
                parts.append(('- ' if c < 0 else '+ ') + body)
        return ' '.join(parts)

    def __repr__(self) -> str:
        return 'SparsePolynomial(%s)' % str(self)


def add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p + q


def mul(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p * q


def support(p: SparsePolynomial) -> MonomialSet:
    """Return the set of monomials with nonzero coefficient in ``p``."""
    return p.support()


def homogeneous_part(p: SparsePolynomial, i: int) -> SparsePolynomial:
    """Return the sum of the terms of ``p`` of total degree exactly ``i``."""
    if i < 0:
        raise ValueError("degree must be non-negative")
    return p.homogeneous_part(i)


def _needed(c: Circuit, roots: Iterable[int],
            stops: Mapping[int, SparsePolynomial]) -> List[bool]:
    need = [False] * c.size
    stack = list(roots)
    while stack:
        g = stack.pop()
        if need[g]:
            continue
        need[g] = True
        if g not in stops:
            stack.extend(c.gates[g].children)
    return need


def expand_all(c: Circuit,
               term_budget: int = DEFAULT_TERM_BUDGET,
               gates: Optional[Sequence[int]] = None,
               ring=None,
               substitute: Optional[Mapping[int, SparsePolynomial]] = None
               ) -> List[Optional[SparsePolynomial]]:
    """Expand gates of a circuit into polynomials.

    Args:
        c (Circuit): Circuit.
        term_budget (int): Maximum number of terms at any gate.
        gates (Optional[Sequence[int]]): Gates whose polynomials are needed.
            Every gate if None.
        ring: Coefficient ring. Defaults to the integers.
        substitute (Optional[Mapping[int, SparsePolynomial]]): Gates whose
            polynomial is given instead of computed from their children.

    Returns:
        List[Optional[SparsePolynomial]]: Polynomial of every needed gate,
        None for gates that were not needed.

    Raises:
        TermBudgetExceededError: Naming the first gate over budget.
    """
    ring = INTEGERS if ring is None else ring
    substitute = {} if substitute is None else substitute
    roots = range(c.size) if gates is None else gates
    need = _needed(c, roots, substitute)
    polys: List[Optional[SparsePolynomial]] = [None] * c.size
    for gate in c.gates:
        g = gate.id
        if not need[g]:
            continue
        if g in substitute:
            p = substitute[g]
        elif gate.kind is GateKind.INPUT:
            p = SparsePolynomial.variable(gate.var, ring)
        elif gate.kind is GateKind.CONST:
            p = SparsePolynomial.constant(gate.value, ring)
        elif gate.kind is GateKind.ADD:
            p = SparsePolynomial.zero(ring)
            for ch in gate.children:
                p = p + polys[ch]
        else:
            p = SparsePolynomial.constant(1, ring)
            for ch in gate.children:
                p = p * polys[ch]
                if len(p) > term_budget:
                    break
        if len(p) > term_budget:
            raise TermBudgetExceededError(g, len(p), term_budget)
        polys[g] = p
    return polys


def expand(c: Circuit, output: Optional[int] = None,
           term_budget: int = DEFAULT_TERM_BUDGET,
           ring=None) -> SparsePolynomial:
    """Return the polynomial computed at one gate.

    Args:
        c (Circuit): Circuit.
        output (Optional[int]): Gate to expand. Defaults to the single
            output of the circuit.
        term_budget (int): Maximum number of terms at any gate.
        ring: Coefficient ring. Defaults to the integers.

    Returns:
        SparsePolynomial: The exact polynomial.
    """
    g = c.output if output is None else output
    return expand_all(c, term_budget, [g], ring)[g]


def expand_outputs(c: Circuit, term_budget: int = DEFAULT_TERM_BUDGET,
                   ring=None) -> List[SparsePolynomial]:
    """Return the polynomial of every output, in output order."""
    polys = expand_all(c, term_budget, c.outputs, ring)
    return [polys[o] for o in c.outputs]


def parse_tree_monomial(c: Circuit, tree: ParseTree,
                        ring=None) -> SparsePolynomial:
    """Return m(T): the product of the leaves of a parse tree."""
    p = SparsePolynomial.constant(1, ring)
    for leaf in tree.leaves():
        gate = c.gates[leaf]
        if gate.kind is GateKind.INPUT:
            p = p * SparsePolynomial.variable(gate.var, ring)
        else:
            p = p.scale(gate.value)
    return p
