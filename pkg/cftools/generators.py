"""Reference circuits: permanent, determinant, comb and random circuits.

The permanent and determinant of an n x n matrix use the variable x_{i,j}
with index ``i*n + j``. Both are built as a naive sum over permutations,
which keeps them homogeneous of degree n.
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .circuit import Circuit, CircuitBuilder, is_homogeneous, validate
from .errors import GenerationError, ParameterError

MAX_MATRIX_SIZE = 5
MAX_ATTEMPTS = 100

FAMILIES = ('perm', 'det', 'comb', 'random')


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a generated circuit.

    Args:
        family (str): One of ``perm``, ``det``, ``comb`` and ``random``.
        n (int): Matrix size, comb length, or number of variables.
        seed (int): Seed of a random circuit. Defaults to 0.
        gates (int): Maximum size of a random circuit. Defaults to 12.
        max_degree (int): Maximum degree of a random circuit. Defaults to 6.
        min_degree (int): Minimum output degree of a random circuit.
            Defaults to 1.
        max_fanin (int): Maximum fan-in of a random circuit. Defaults to 3.
        homogeneous (bool): Build a homogeneous random circuit.
            Defaults to False.
        negative (bool): Allow negative constants, scaling by -1 and sums
            ``g + (-1)*g`` that cancel. Defaults to False.
    """

    family: str
    n: int
    seed: int = 0
    gates: int = 12
    max_degree: int = 6
    min_degree: int = 1
    max_fanin: int = 3
    homogeneous: bool = False
    negative: bool = False


def _parity(perm: Sequence[int]) -> int:
    """Return 1 for an odd permutation, 0 for an even one."""
    inversions = sum(1 for i, j in itertools.combinations(range(len(perm)), 2)
                     if perm[i] > perm[j])
    return inversions % 2


def _matrix_form(n: int, signed: bool) -> Circuit:
    if not 1 <= n <= MAX_MATRIX_SIZE:
        raise ParameterError("matrix size must be in [1, %d], got %d"
                             % (MAX_MATRIX_SIZE, n))
    b = CircuitBuilder()
    x = [[b.input(i*n + j) for j in range(n)] for i in range(n)]
    terms = []
    for perm in itertools.permutations(range(n)):
        term = b.mul(x[i][perm[i]] for i in range(n))
        if signed and _parity(perm):
            term = b.scal(b.const(-1), term)
        terms.append(term)
    return b.build([b.add(terms)])


def gen_perm(n: int) -> Circuit:
    """Return a circuit for the permanent of an n x n matrix."""
    return _matrix_form(n, signed=False)


def gen_det(n: int) -> Circuit:
    """Return a circuit for the determinant of an n x n matrix."""
    return _matrix_form(n, signed=True)


def gen_comb(n: int) -> Circuit:
    """Return the right-nested product x0*(x1*(...*x(n-1))).

    It has n - 1 Mul gates, each with a right child of maximal degree.
    """
    if n < 2:
        raise ParameterError("comb needs n >= 2, got %d" % n)
    b = CircuitBuilder()
    g = b.mul([b.input(n - 2), b.input(n - 1)])
    for i in range(n - 3, -1, -1):
        g = b.mul([b.input(i), g])
    return b.build([g])


def _coefficient(spec: GeneratorSpec, rng: np.random.Generator,
                 low: int) -> int:
    if not spec.negative:
        return int(rng.integers(low, 4))
    value = int(rng.integers(1, 4))
    return -value if rng.random() < 0.5 else value


def _random_attempt(spec: GeneratorSpec,
                    rng: np.random.Generator) -> Optional[Circuit]:
    b = CircuitBuilder(dedupe=False)
    inputs = [b.input(v) for v in range(spec.n)]
    pool: List[int] = list(inputs)
    degs: List[int] = [1] * spec.n
    if rng.random() < 0.5 and len(b) < spec.gates:
        pool.append(b.const(_coefficient(spec, rng, 1)))
        degs.append(0)
    last = None
    stalls = 0
    ops = 5 if spec.negative else 4
    while len(b) < spec.gates and stalls < 50:
        op = int(rng.integers(0, ops))
        k = int(rng.integers(2, spec.max_fanin + 1))
        picks = [int(i) for i in rng.integers(0, len(pool), size=k)]
        room = spec.gates - len(b)
        if op in (0, 1):
            d = sum(degs[i] for i in picks)
            if d > spec.max_degree:
                stalls += 1
                continue
            g = b.mul(pool[i] for i in picks)
        elif op == 2:
            if room < 2:
                stalls += 1
                continue
            d = degs[picks[0]]
            g = b.scal(b.const(_coefficient(spec, rng, 2)), pool[picks[0]])
        elif op == 4:
            # g + (-1)*g
            if room < 3:
                stalls += 1
                continue
            d = degs[picks[0]]
            h = pool[picks[0]]
            g = b.add([h, b.scal(b.const(-1), h)])
        else:
            d = max(degs[i] for i in picks)
            pads = sum(d - degs[i] for i in picks) if spec.homogeneous else 0
            if pads + 1 > room:
                stalls += 1
                continue
            children = []
            for i in picks:
                h = pool[i]
                if spec.homogeneous:
                    for _ in range(d - degs[i]):
                        pad = inputs[int(rng.integers(0, len(inputs)))]
                        h = b.mul([h, pad])
                children.append(h)
            g = b.add(children)
        pool.append(g)
        degs.append(d)
        last = g
    if last is None or degs[-1] < spec.min_degree:
        return None
    return b.build([last])


def gen_random(spec: GeneratorSpec) -> Circuit:
    """Return a seeded random circuit within the caps of ``spec``.

    Constants are positive unless ``spec.negative`` is set, in which case
    gates of the result may compute zero.

    Args:
        spec (GeneratorSpec): Caps and seed.

    Returns:
        Circuit: A valid circuit; homogeneous if requested.

    Raises:
        GenerationError: If no attempt met the caps.
    """
    if spec.n < 1 or spec.gates < 1 or spec.max_fanin < 2:
        raise ParameterError("random circuits need n >= 1, gates >= 1 and "
                             "max_fanin >= 2")
    rng = np.random.default_rng(spec.seed)
    for _ in range(MAX_ATTEMPTS):
        c = _random_attempt(spec, rng)
        if c is None or not validate(c).ok:
            continue
        if spec.homogeneous and not is_homogeneous(c):
            continue
        return c
    raise GenerationError("no circuit within the caps after %d attempts"
                          % MAX_ATTEMPTS)


def generate(spec: GeneratorSpec) -> Circuit:
    """Build the circuit described by ``spec``."""
    if spec.family == 'perm':
        return gen_perm(spec.n)
    if spec.family == 'det':
        return gen_det(spec.n)
    if spec.family == 'comb':
        return gen_comb(spec.n)
    if spec.family == 'random':
        return gen_random(spec)
    raise ParameterError("unknown family '%s'" % spec.family)
