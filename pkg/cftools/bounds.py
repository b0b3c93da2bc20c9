"""Size bounds and lower-bound certificates for depth-4 circuits.

A layered depth-4 circuit has Mul gates at level 1, Add gates at level 2,
Mul gates at level 3 and one Add gate at level 4, with the inputs at level
0. Any such circuit computing the n x n permanent or determinant must have
at least (n!)^(1/v) - 1 gates at level 1 when its level-3 fan-in is at most
v, because every monomial of the output is a product of at most v level-1
monomials. All certificates compare exact integers.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Set

from scipy.special import comb
from sympy import integer_nthroot

from .circuit import Circuit, GateKind, is_homogeneous
from .errors import (ClosureBudgetError, ContractError, ParameterError,
                     StructuralError)
from .polynomial import (DEFAULT_TERM_BUDGET, ONE, Monomial, MonomialSet,
                         expand)

DEFAULT_CLOSURE_BUDGET = 10**6
TARGETS = ('perm', 'det')


def binomial(k_plus_l: int, l: int) -> int:
    """Return the exact binomial coefficient C(k + l, l)."""
    if k_plus_l < 0 or l < 0:
        raise ParameterError("binomial arguments must be non-negative")
    return int(comb(k_plus_l, l, exact=True))


def stirling_bound(k: float, l: float) -> float:
    """Return the exponent l + l*log2(k/l) estimating log2 C(k + l, l)."""
    if l <= 0:
        return 0.0
    return l + l * math.log2(k / l)


def integer_root_ceil(value: int, v: int) -> int:
    """Return the smallest integer r with r**v >= value."""
    root, exact = integer_nthroot(value, v)
    return int(root) if exact else int(root) + 1


def closure_sum(sets: Iterable[MonomialSet]) -> MonomialSet:
    """Monomials of the sums of polynomials with the given supports."""
    return MonomialSet().union(*sets)


def closure_prod(E: MonomialSet, k: int,
                 budget: int = DEFAULT_CLOSURE_BUDGET) -> MonomialSet:
    """Return all products of at most k monomials of E, including 1.

    Args:
        E (MonomialSet): Monomials.
        k (int): Maximum number of factors.
        budget (int): Largest a priori bound (|E|+1)^k allowed.

    Returns:
        MonomialSet: The product closure.

    Raises:
        ClosureBudgetError: If (|E|+1)^k exceeds the budget.
    """
    bound = (len(E) + 1) ** k
    if bound > budget:
        raise ClosureBudgetError(bound, budget)
    result = MonomialSet([ONE])
    for _ in range(k):
        result = result.union(result.products(E))
    return result


@dataclass(frozen=True)
class BoundCertificate:
    """A checked inequality between exact numbers.

    Args:
        claim (str): Name of the inequality.
        lhs (Optional[int]): Measured side, None when nothing was measured.
        rhs (int): Bound side.
        relation (str): ``">="`` or ``"<="``, read as lhs relation rhs.
        satisfied (Optional[bool]): Outcome, None when lhs is None.
        details (Dict[str, Any]): Intermediate quantities.
    """

    claim: str
    lhs: Optional[int]
    rhs: int
    relation: str
    satisfied: Optional[bool]
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        from .report import _jsonable
        return {'claim': self.claim,
                'lhs': self.lhs,
                'rhs': self.rhs,
                'relation': self.relation,
                'satisfied': self.satisfied,
                'details': _jsonable(self.details)}


def lower_bound_level3(n: int, v: int,
                       s1: Optional[int] = None) -> BoundCertificate:
    """Minimum level-1 size of a depth-4 circuit for Perm_n or Det_n.

    The bound is ceil((n!)^(1/v) - 1). With ``s1`` given, the certificate
    checks (s1 + 1)^v >= n!.

    Args:
        n (int): Matrix size.
        v (int): Bound on the level-3 fan-in.
        s1 (Optional[int]): Measured number of level-1 gates.

    Returns:
        BoundCertificate: Claim ``level1-size``.
    """
    if n < 1 or v < 1:
        raise ParameterError("lower bound needs n >= 1 and v >= 1")
    f = math.factorial(n)
    rhs = integer_root_ceil(f, v) - 1
    satisfied = None if s1 is None else (s1 + 1) ** v >= f
    return BoundCertificate('level1-size', s1, rhs, '>=', satisfied,
                            {'n': n, 'v': v, 'n_factorial': f})


@dataclass(frozen=True)
class LevelProfile:
    """Per-level gate counts and fan-ins of a layered depth-4 circuit.

    ``bottom_min_fanin`` is the smallest number of non-constant children of
    a level-1 gate; inputs wired straight into level 2 are counted in
    ``bare_wires`` and not in the minimum.
    """

    s1: int
    s2: int
    s3: int
    s4: int
    t1: int
    t2: int
    t3: int
    t4: int
    bottom_min_fanin: Optional[int]
    bare_wires: int
    level1: List[int]
    level2: List[int]
    level3: List[int]
    top: int

    def to_dict(self) -> Dict[str, Any]:
        return {'s': [self.s1, self.s2, self.s3, self.s4],
                't': [self.t1, self.t2, self.t3, self.t4],
                'bottom_min_fanin': self.bottom_min_fanin,
                'bare_wires': self.bare_wires}


def level_profile(c: Circuit) -> LevelProfile:
    """Extract the levels of a layered depth-4 circuit.

    Raises:
        StructuralError: If the circuit does not alternate Add, Mul, Add,
            Mul from the output down, or an input feeds level 3 or 4.
    """
    top = c.output
    gates = c.gates

    def expect(g: int, kind: GateKind, level: int):
        if gates[g].kind is not kind:
            raise StructuralError("gate %d at level %d is %s, expected %s"
                                  % (g, level, gates[g].kind.value,
                                     kind.value))

    expect(top, GateKind.ADD, 4)
    level3 = sorted(set(gates[top].children))
    for g in level3:
        expect(g, GateKind.MUL, 3)
    level2 = sorted({ch for g in level3 for ch in gates[g].children})
    for g in level2:
        expect(g, GateKind.ADD, 2)
    level1: Set[int] = set()
    bare: Set[int] = set()
    for g in level2:
        for ch in gates[g].children:
            if gates[ch].kind is GateKind.INPUT:
                bare.add(ch)
            else:
                expect(ch, GateKind.MUL, 1)
                level1.add(ch)
    fanins = []
    for g in sorted(level1):
        for ch in gates[g].children:
            if not gates[ch].kind.is_leaf:
                raise StructuralError("level-1 gate %d has a computation "
                                      "child %d" % (g, ch))
        fanins.append(sum(1 for ch in gates[g].children
                          if gates[ch].kind is GateKind.INPUT))
    levels = [set(level1) | bare, set(level2), set(level3), {top}]
    for i in range(len(levels)):
        for j in range(i + 1, len(levels)):
            both = levels[i] & levels[j]
            if both:
                raise StructuralError("gate %d appears on two levels"
                                      % min(both))
    return LevelProfile(
        s1=len(level1), s2=len(level2), s3=len(level3), s4=1,
        t1=max(fanins, default=0),
        t2=max((len(gates[g].children) for g in level2), default=0),
        t3=max((len(gates[g].children) for g in level3), default=0),
        t4=len(gates[top].children),
        bottom_min_fanin=min(fanins) if fanins else None,
        bare_wires=len(bare),
        level1=sorted(level1), level2=level2, level3=level3, top=top)


def _level1_monomials(c: Circuit, profile: LevelProfile) -> MonomialSet:
    monomials = []
    for g in profile.level1:
        exponents: Dict[int, int] = {}
        for ch in c.gates[g].children:
            gate = c.gates[ch]
            if gate.kind is GateKind.INPUT:
                exponents[gate.var] = exponents.get(gate.var, 0) + 1
        monomials.append(Monomial(exponents))
    for level2 in profile.level2:
        for ch in c.gates[level2].children:
            if c.gates[ch].kind is GateKind.INPUT:
                monomials.append(Monomial.variable(c.gates[ch].var))
    return MonomialSet(monomials)


def _target(target: str, n: int) -> Circuit:
    from .generators import gen_det, gen_perm
    if target == 'perm':
        return gen_perm(n)
    if target == 'det':
        return gen_det(n)
    raise ParameterError("unknown target '%s'" % target)


def check_lower_bound(c: Circuit, target: str, n: int,
                      term_budget: int = DEFAULT_TERM_BUDGET,
                      closure_budget: int = DEFAULT_CLOSURE_BUDGET,
                      **verify_kwargs) -> BoundCertificate:
    """Check the level-1 lower bound on a depth-4 circuit for a target.

    The circuit is first verified to compute the target. Then
    s1 >= (n!)^(1/t3) - 1 is checked, where bare wires count as level-1
    gates, and the monomial closure of the level-1 monomials is bounded by
    (|M1|+1)^t3 and, when it fits the budget, built and shown to contain
    every monomial of the target.

    Args:
        c (Circuit): Layered depth-4 circuit.
        target (str): ``perm`` or ``det``.
        n (int): Matrix size.
        term_budget (int): Term budget of the equivalence check.
        closure_budget (int): Largest closure to materialize.
        **verify_kwargs: ``trials``, ``field`` and ``seed`` of the
            equivalence check.

    Returns:
        BoundCertificate: Claim ``level1-size``.

    Raises:
        StructuralError: If ``c`` is not layered.
        ContractError: If ``c`` does not compute the target.
    """
    from .field import verify_equivalence
    profile = level_profile(c)
    reference = _target(target, n)
    verdict = verify_equivalence(c, reference, term_budget, **verify_kwargs)
    if not verdict.equal:
        raise ContractError("circuit does not compute %s_%d" % (target, n))
    s1 = profile.s1 + profile.bare_wires
    v = max(1, profile.t3)
    cert = lower_bound_level3(n, v, s1)
    m1 = _level1_monomials(c, profile)
    f = math.factorial(n)
    closure_bound = (len(m1) + 1) ** v
    details = dict(cert.details)
    details.update({'target': target, 'profile': profile,
                    'level1_monomials': len(m1),
                    'closure_bound': closure_bound,
                    'equivalence': verdict})
    satisfied = cert.satisfied and f <= closure_bound
    if closure_bound <= closure_budget:
        closure = closure_prod(m1, v, closure_budget)
        support = expand(reference, term_budget=term_budget).support()
        covered = support <= closure
        details['closure_size'] = len(closure)
        details['closure_covers_target'] = covered
        satisfied = satisfied and covered
    return BoundCertificate('level1-size', s1, cert.rhs, '>=', satisfied,
                            details)


def homogeneous_bottom_fanin_bound(c: Circuit, n: int) -> BoundCertificate:
    """Lower bound for homogeneous depth-4 circuits with bottom fan-in t.

    With every level-1 gate of fan-in at least t, every level-1 and level-2
    gate has degree at least t, so each level-3 gate has fan-in at most n/t.
    This is checked gate by gate and chained into the level-1 bound with
    v = floor(n/t), giving s1 >= (n!)^(t/n) - 1 up to rounding.

    Args:
        c (Circuit): Homogeneous layered depth-4 circuit of degree n.
        n (int): Matrix size.

    Returns:
        BoundCertificate: Claim ``homogeneous-bottom-fanin``.

    Raises:
        ContractError: If ``c`` is not homogeneous or not of degree n.
    """
    if not is_homogeneous(c):
        raise ContractError("circuit is not homogeneous")
    profile = level_profile(c)
    if c.degree != n:
        raise ContractError("circuit has degree %s, expected %d"
                            % (c.degree, n))
    t = profile.bottom_min_fanin or 1
    limit = max(1, n // t)
    wide = [g for g in profile.level3
            if len(c.gates[g].children) > limit]
    chain = lower_bound_level3(n, limit, profile.s1 + profile.bare_wires)
    details = dict(chain.details)
    details.update({'t': t, 'level3_limit': limit, 't3': profile.t3,
                    'wide_level3_gates': wide,
                    'bare_wires': profile.bare_wires,
                    'exponent': Fraction(t, n)})
    return BoundCertificate('homogeneous-bottom-fanin', chain.lhs, chain.rhs,
                            '>=', chain.satisfied and not wide, details)


def depth4_size_bound(sigma: int, n: int, d: int, a: float) -> int:
    """Size of the depth-4 circuit built from a balanced circuit.

    1 + C(sigma + 15a, 15a) + sigma + sigma*C(n + d/a, d/a) + n, with 15a
    rounded down and d/a rounded up.
    """
    top = math.floor(15 * a)
    bottom = math.ceil(Fraction(d) / Fraction(a))
    return (1 + binomial(sigma + top, top) + sigma
            + sigma * binomial(n + bottom, bottom) + n)


def choose_split_parameter(d: int, n: int, sigma: int) -> int:
    """Return round(sqrt(d*log2(n)/log2(sigma))) clamped to [1, d-1]."""
    if d <= 2 or n <= 1 or sigma <= 1:
        return 1
    a = round(math.sqrt(d * math.log2(n) / math.log2(sigma)))
    return min(max(1, a), d - 1)


def fanin_exponents(d: int, n: int, sigma: int) -> Dict[str, Optional[float]]:
    """Return the real top and bottom fan-in exponents of the reduction."""
    if n <= 1 or sigma <= 1:
        return {'alpha': None, 'beta': None}
    ratio = math.log2(n) / math.log2(sigma)
    return {'alpha': math.sqrt(d * ratio), 'beta': math.sqrt(d / ratio)}


def predict_depth4_size(s: int, d: int, n: int,
                        measured: Optional[int] = None) -> BoundCertificate:
    """Predicted size of the depth-4 circuit for size s, degree d, n inputs.

    Uses t = s(d+1)^2, sigma = t^6 + t^4 + 1 and the split parameter of
    :func:`choose_split_parameter`.

    Returns:
        BoundCertificate: Claim ``depth4-size`` with ``measured <= rhs``.
    """
    if s < 1 or d < 1 or n < 1:
        raise ParameterError("prediction needs s, d, n >= 1")
    t = s * (d + 1) ** 2
    sigma = t**6 + t**4 + 1
    a = choose_split_parameter(d, n, sigma)
    rhs = depth4_size_bound(sigma, n, d, a)
    satisfied = None if measured is None else measured <= rhs
    details = {'t': t, 'sigma': sigma, 'a': a}
    details.update(fanin_exponents(d, n, sigma))
    return BoundCertificate('depth4-size', measured, rhs, '<=', satisfied,
                            details)


predict_theorem1_size = predict_depth4_size
