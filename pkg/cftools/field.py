"""Evaluation of circuits over prime fields and randomized equivalence.

Two circuits computing different polynomials of degree at most d agree at a
uniformly random point of a field of size p with probability at most d/p.
:func:`equivalent` repeats the test ``trials`` times with a seeded generator
and, when it finds a disagreement, returns the point as proof.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Set

import numpy as np
from sympy import isprime

from .circuit import Circuit, GateKind, _reachable
from .errors import (AssignmentError, ContractError, FieldConfigurationError,
                     TermBudgetExceededError)
from .polynomial import DEFAULT_TERM_BUDGET, expand_all, expand_outputs

DEFAULT_PRIME = 2**61 - 1
DEFAULT_TRIALS = 20
DEFAULT_SEED = 0

# circuits up to this size are checked for zero gates with the exact oracle
EXACT_ZERO_LIMIT = 64

LIMB_BITS = 32

# rounds of ``trials`` points tried before giving up on a witness
WITNESS_ROUNDS = 50


class PrimeField:
    """The integers modulo a prime.

    Args:
        modulus (int): A prime. Defaults to 2^61 - 1.
    """

    def __init__(self, modulus: int = DEFAULT_PRIME):
        modulus = int(modulus)
        if modulus < 2 or not isprime(modulus):
            raise FieldConfigurationError("%d is not prime" % modulus)
        self.modulus = modulus

    @property
    def name(self) -> str:
        return 'GF(%d)' % self.modulus

    def normalize(self, value: int) -> int:
        return int(value) % self.modulus

    def random_points(self, variables: Sequence[int], count: int,
                      rng: np.random.Generator) -> List[Dict[int, int]]:
        """Draw ``count`` uniform points over the given variables.

        Moduli of 63 bits or more are sampled from 32-bit limbs with
        rejection.
        """
        shape = (count, len(variables))
        if self.modulus < 2**63:
            values = rng.integers(0, self.modulus, size=shape,
                                  dtype=np.int64).tolist()
        else:
            values = [[self._draw(rng) for _ in variables]
                      for _ in range(count)]
        return [dict(zip(variables, row)) for row in values]

    def _draw(self, rng: np.random.Generator) -> int:
        bits = self.modulus.bit_length()
        limbs = -(-bits // LIMB_BITS)
        while True:
            value = 0
            for limb in rng.integers(0, 2**LIMB_BITS, size=limbs,
                                     dtype=np.uint64).tolist():
                value = (value << LIMB_BITS) | int(limb)
            value >>= limbs * LIMB_BITS - bits
            if value < self.modulus:
                return value

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(('GF', self.modulus))

    def __repr__(self) -> str:
        return 'PrimeField(%d)' % self.modulus


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of an equivalence check.

    Args:
        equal (bool): True if no difference was found.
        trials (int): Number of random points evaluated.
        failure_point (Optional[Dict[int, int]]): A point where the two
            circuits differ, present whenever ``equal`` is False.
        seed (Optional[int]): Seed of the point generator.
        modulus (Optional[int]): Field modulus used for evaluation.
        method (str): ``"exact"`` or ``"randomized"``.
    """

    equal: bool
    trials: int
    failure_point: Optional[Dict[int, int]] = None
    seed: Optional[int] = None
    modulus: Optional[int] = None
    method: str = 'randomized'

    def to_dict(self) -> dict:
        point = None
        if self.failure_point is not None:
            point = {'x%d' % v: val
                     for v, val in sorted(self.failure_point.items())}
        return {'equal': self.equal,
                'trials': self.trials,
                'failure_point': point,
                'seed': self.seed,
                'modulus': self.modulus,
                'method': self.method}


def evaluate_points(c: Circuit,
                    points: Sequence[Mapping[int, int]],
                    field: Optional[PrimeField] = None,
                    gates: Optional[Sequence[int]] = None
                    ) -> List[Optional[np.ndarray]]:
    """Evaluate gates of a circuit at many points at once.

    Values are kept in numpy object arrays so products of 61-bit residues
    never overflow.

    Args:
        c (Circuit): Circuit.
        points (Sequence[Mapping[int, int]]): Variable assignments.
        field (Optional[PrimeField]): Field. Defaults to GF(2^61 - 1).
        gates (Optional[Sequence[int]]): Gates to evaluate; all if None.

    Returns:
        List[Optional[np.ndarray]]: Values of every needed gate, one entry
        per point; None for gates that were not needed.
    """
    field = PrimeField() if field is None else field
    p = field.modulus
    k = len(points)
    need = _reachable(c.gates, range(c.size) if gates is None else gates)
    values: List[Optional[np.ndarray]] = [None] * c.size
    for gate in c.gates:
        if not need[gate.id]:
            continue
        if gate.kind is GateKind.INPUT:
            try:
                column = [int(point[gate.var]) % p for point in points]
            except KeyError:
                raise AssignmentError("variable x%d has no value" % gate.var)
            v = np.array(column, dtype=object)
        elif gate.kind is GateKind.CONST:
            v = np.full(k, gate.value % p, dtype=object)
        elif gate.kind is GateKind.ADD:
            v = np.full(k, 0, dtype=object)
            for ch in gate.children:
                v = (v + values[ch]) % p
        else:
            v = np.full(k, 1, dtype=object)
            for ch in gate.children:
                v = (v * values[ch]) % p
        values[gate.id] = v
    return values


def evaluate(c: Circuit, assignment: Mapping[int, int],
             field: Optional[PrimeField] = None,
             output: Optional[int] = None) -> int:
    """Return the value of an output at a point.

    Args:
        c (Circuit): Circuit.
        assignment (Mapping[int, int]): Value of every variable of ``c``.
        field (Optional[PrimeField]): Field. Defaults to GF(2^61 - 1).
        output (Optional[int]): Gate to evaluate. Defaults to the single
            output.

    Returns:
        int: The value, in [0, p).
    """
    g = c.output if output is None else output
    return int(evaluate_points(c, [assignment], field, [g])[g][0])


def _check_degree(field: PrimeField, d):
    if not d.is_neg_infinity and field.modulus <= int(d):
        raise FieldConfigurationError("modulus %d does not exceed degree %d"
                                      % (field.modulus, int(d)))


def _check_modulus(field: PrimeField, *circuits: Circuit):
    for c in circuits:
        _check_degree(field, c.degree)


def _differs(c1: Circuit, c2: Circuit, point: Mapping[int, int],
             field: PrimeField) -> bool:
    return any(evaluate(c1, point, field, o1) != evaluate(c2, point, field, o2)
               for o1, o2 in zip(c1.outputs, c2.outputs))


def equivalent(c1: Circuit, c2: Circuit,
               trials: int = DEFAULT_TRIALS,
               field: Optional[PrimeField] = None,
               seed: int = DEFAULT_SEED) -> EquivalenceVerdict:
    """Randomized test that two circuits compute the same polynomials.

    Outputs are compared position by position.

    Args:
        c1 (Circuit): First circuit.
        c2 (Circuit): Second circuit, same number of outputs.
        trials (int): Number of random points. Defaults to 20.
        field (Optional[PrimeField]): Field. Defaults to GF(2^61 - 1).
        seed (int): Seed of the point generator. Defaults to 0.

    Returns:
        EquivalenceVerdict: Verdict, with a confirmed failure point if the
        circuits differ.
    """
    field = PrimeField() if field is None else field
    if len(c1.outputs) != len(c2.outputs):
        raise ContractError("circuits have %d and %d outputs"
                            % (len(c1.outputs), len(c2.outputs)))
    _check_modulus(field, c1, c2)
    variables = sorted(set(c1.variables) | set(c2.variables))
    rng = np.random.default_rng(seed)
    points = field.random_points(variables, trials, rng)
    v1 = evaluate_points(c1, points, field, c1.outputs)
    v2 = evaluate_points(c2, points, field, c2.outputs)
    for t in range(trials):
        if any(v1[o1][t] != v2[o2][t]
               for o1, o2 in zip(c1.outputs, c2.outputs)):
            point = points[t]
            assert _differs(c1, c2, point, field)
            return EquivalenceVerdict(False, t + 1, point, seed,
                                      field.modulus)
    return EquivalenceVerdict(True, trials, None, seed, field.modulus)


def verify_equivalence(c1: Circuit, c2: Circuit,
                       term_budget: int = DEFAULT_TERM_BUDGET,
                       trials: int = DEFAULT_TRIALS,
                       field: Optional[PrimeField] = None,
                       seed: int = DEFAULT_SEED) -> EquivalenceVerdict:
    """Compare two circuits exactly when possible, randomly otherwise.

    The exact oracle is used when every gate of both circuits expands within
    ``term_budget`` terms. A difference found exactly is witnessed by a
    random point where the difference polynomial does not vanish; points
    are drawn until one is found.

    Returns:
        EquivalenceVerdict: Verdict with ``method`` set accordingly.

    Raises:
        FieldConfigurationError: If the difference vanishes modulo the
            field's prime, so no point of the field can witness it.
    """
    field = PrimeField() if field is None else field
    if len(c1.outputs) != len(c2.outputs):
        raise ContractError("circuits have %d and %d outputs"
                            % (len(c1.outputs), len(c2.outputs)))
    try:
        p1 = expand_outputs(c1, term_budget)
        p2 = expand_outputs(c2, term_budget)
    except TermBudgetExceededError:
        return equivalent(c1, c2, trials, field, seed)
    if p1 == p2:
        return EquivalenceVerdict(True, 0, None, seed, field.modulus,
                                  'exact')
    _check_modulus(field, c1, c2)
    variables = sorted(set(c1.variables) | set(c2.variables))
    rng = np.random.default_rng(seed)
    diffs = [a - b for a, b in zip(p1, p2)]
    if all(coef % field.modulus == 0
           for d in diffs for coef in d.terms.values()):
        raise FieldConfigurationError("the circuits differ by a multiple of "
                                      "%d; use a larger prime"
                                      % field.modulus)
    tried = 0
    for _ in range(WITNESS_ROUNDS):
        for point in field.random_points(variables, trials, rng):
            tried += 1
            if any(d.evaluate(point, field.modulus) for d in diffs):
                assert _differs(c1, c2, point, field)
                return EquivalenceVerdict(False, tried, point, seed,
                                          field.modulus, 'exact')
    raise FieldConfigurationError("no point of %s separates the circuits "
                                  "after %d trials" % (field.name, tried))


def find_zero_gates(c: Circuit,
                    exact_limit: int = EXACT_ZERO_LIMIT,
                    term_budget: int = DEFAULT_TERM_BUDGET,
                    trials: int = DEFAULT_TRIALS,
                    field: Optional[PrimeField] = None,
                    seed: int = DEFAULT_SEED) -> Set[int]:
    """Return the gates that compute the zero polynomial.

    Gates of degree minus infinity are zero structurally. Small circuits are
    then expanded exactly; larger ones are evaluated at ``trials`` random
    points and a gate vanishing at all of them is taken to be zero.

    Returns:
        Set[int]: Ids of zero gates.
    """
    zeros = {g for g, d in enumerate(c.degrees) if d.is_neg_infinity}
    if c.size <= exact_limit:
        try:
            polys = expand_all(c, term_budget)
            return zeros | {g for g, p in enumerate(polys) if p.is_zero()}
        except TermBudgetExceededError:
            pass
    field = PrimeField() if field is None else field
    _check_degree(field, max(c.degrees))
    rng = np.random.default_rng(seed)
    points = field.random_points(list(c.variables), trials, rng)
    values = evaluate_points(c, points, field)
    return zeros | {g for g, v in enumerate(values) if not v.any()}
