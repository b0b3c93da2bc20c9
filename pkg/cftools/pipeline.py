"""Named pass pipeline and the depth-4 reduction driver.

Stages run in the order given. Every stage returns a new circuit and a
:class:`PassReport` with before and after statistics, the size bound the
output must respect and an equivalence verdict against the stage input.
Stages that need a single output (balance, depth4) run output by output
and merge the results. The homogenize stage binarizes wide products of its
input first.
"""

import logging
import math
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, \
    Tuple

from ._log import _pass_msg
from .balance import Balancer, mul_balance_violations
from .bounds import (choose_split_parameter, depth4_size_bound,
                     fanin_exponents, level_profile, predict_depth4_size)
from .circuit import Circuit, CircuitBuilder, GateKind, depth, \
    is_homogeneous, stats
from .depth4 import DepthFourShape, check_split_parameter, depth4_reduce
from .errors import ParameterError, StructuralError
from .field import (DEFAULT_SEED, DEFAULT_TRIALS, EXACT_ZERO_LIMIT,
                    PrimeField, verify_equivalence)
from .polynomial import DEFAULT_TERM_BUDGET
from .report import PassReport
from .transform import binarize_mul, eliminate_zeros, homogenize, normalize

STAGES = ('binarize', 'homogenize', 'normalize', 'balance', 'depth4')


class _Options(NamedTuple):
    a: Optional[int]
    term_budget: int
    trials: int
    field: Optional[PrimeField]
    seed: int


def sum_outputs(c: Circuit) -> Circuit:
    """Return the single-output circuit computing the sum of the outputs."""
    if len(c.outputs) == 1:
        return c
    b = CircuitBuilder()
    m = b.extend(c)
    return b.build([b.add(m[o] for o in c.outputs)])


def merge_outputs(parts: Sequence[Circuit]) -> Circuit:
    """Return one circuit whose outputs are the outputs of ``parts``."""
    if len(parts) == 1:
        return parts[0]
    b = CircuitBuilder()
    outputs = []
    for part in parts:
        m = b.extend(part)
        outputs.extend(m[o] for o in part.outputs)
    return b.build(outputs)


def _split(c: Circuit) -> List[Circuit]:
    return [c.restrict(o) for o in c.outputs]


def _check_equivalence(report: PassReport, before: Circuit, after: Circuit,
                       opts: _Options):
    if len(before.outputs) != len(after.outputs):
        before, after = sum_outputs(before), sum_outputs(after)
    verdict = verify_equivalence(before, after, opts.term_budget,
                                 opts.trials, opts.field, opts.seed)
    report.equivalence = verdict.to_dict()


def _start(name: str, c: Circuit, out: Circuit) -> PassReport:
    return PassReport(name, input_stats=stats(c), output_stats=stats(out))


def _max_mul_fanin(c: Circuit) -> int:
    return max((len(g.children) for g in c.gates
                if g.kind is GateKind.MUL), default=0)


def _stage_binarize(c: Circuit, opts: _Options) -> Tuple[Circuit,
                                                          PassReport]:
    out = binarize_mul(c)
    report = _start('binarize', c, out)
    extra = sum(len(g.children) - 2 for g in c.gates
                if g.kind is GateKind.MUL and len(g.children) > 2)
    report.check_bound(c.size + extra)
    if _max_mul_fanin(out) > 2:
        report.add_violation('mul-fanin', None,
                             "a mul gate still has fan-in above 2")
    _check_equivalence(report, c, out, opts)
    return out, report


def _stage_homogenize(c: Circuit, opts: _Options) -> Tuple[Circuit,
                                                            PassReport]:
    if c.degree.is_neg_infinity and len(c.outputs) == 1:
        b = CircuitBuilder()
        out = b.build([b.const(0)])
        report = _start('homogenize', c, out)
        report.check_bound(1)
        report.notes.update({'parts': 1, 'binarized': False})
        _check_equivalence(report, c, out, opts)
        return out, report
    binary = c if _max_mul_fanin(c) <= 2 else binarize_mul(c)
    out = homogenize(binary)
    report = _start('homogenize', c, out)
    d = int(c.degree)
    report.check_bound(binary.size * (d + 1) ** 2)
    report.notes['parts'] = len(out.outputs)
    report.notes['binarized'] = binary is not c
    if not is_homogeneous(out):
        report.add_violation('homogeneous', None,
                             "homogenized circuit is not homogeneous")
    if _max_mul_fanin(out) > 2:
        report.add_violation('mul-fanin', None,
                             "a mul gate has fan-in above 2")
    _check_equivalence(report, c, out, opts)
    return out, report


def _stage_normalize(c: Circuit, opts: _Options) -> Tuple[Circuit,
                                                           PassReport]:
    out = normalize(c, EXACT_ZERO_LIMIT, opts.trials, opts.field, opts.seed)
    report = _start('normalize', c, out)
    if _max_mul_fanin(c) <= 2:
        report.check_bound(c.size)
    _check_equivalence(report, c, out, opts)
    return out, report


def _stage_balance(c: Circuit, opts: _Options) -> Tuple[Circuit,
                                                         PassReport]:
    parts = []
    bound = tighter = 0
    pairs = []
    cases = {'1': 0, '2': 0, 'mu': 0}
    depths = []
    for part in _split(c):
        balancer = Balancer(part)
        out = eliminate_zeros(balancer.run(), EXACT_ZERO_LIMIT, opts.trials,
                              opts.field, opts.seed)
        logging.info(_pass_msg('balance', part.size, out.size))
        s = part.size
        bound += s**6 + s**4 + 1
        tighter += s**6 + s**2 + 1
        pairs.append(balancer.materialized_pairs)
        for split in balancer.splits:
            cases[str(split.case)] += 1
            if split.mu is not None:
                cases['mu'] += 1
        d = part.degree
        entry = {'depth': depth(out), 'log_size_log_degree': None}
        if out.size > 1 and not d.is_neg_infinity and int(d) > 1:
            entry['log_size_log_degree'] = \
                math.log2(out.size) * math.log2(int(d))
        depths.append(entry)
        parts.append(out)
    merged = merge_outputs(parts)
    report = _start('balance', c, merged)
    report.check_bound(bound, tighter)
    report.notes.update({'materialized_pairs': pairs, 'splits': cases,
                         'depths': depths})
    for v in mul_balance_violations(merged):
        report.violations.append(v)
    if not is_homogeneous(merged):
        report.add_violation('homogeneous', None,
                             "balanced circuit is not homogeneous")
    _check_equivalence(report, c, merged, opts)
    return merged, report


def _split_parameter(d: int, n: int, sigma: int,
                     override: Optional[int]) -> int:
    if d <= 0:
        return 1
    if override is not None and (0 < override < d
                                 or d == override == 1):
        return override
    return choose_split_parameter(d, n, sigma)


def _merge_depth4(parts: Sequence[Circuit]) -> Circuit:
    b = CircuitBuilder()
    products = []
    for part in parts:
        m = b.extend(part)
        products.extend(m[g] for g in part.gates[part.output].children)
    return b.build([b.add(products)])


def _stage_depth4(c: Circuit, opts: _Options) -> Tuple[Circuit,
                                                        PassReport]:
    d_max = c.degree
    if opts.a is not None and not d_max.is_neg_infinity and int(d_max) >= 1:
        check_split_parameter(int(d_max), opts.a)
    n = max(1, c.n)
    parts = []
    bound = 0
    shapes = []
    wide = []
    dropped = 0
    for part in _split(c):
        d = part.degree
        if d.is_neg_infinity:
            dropped += 1
            continue
        d = int(d)
        a = _split_parameter(d, n, part.size, opts.a)
        out = depth4_reduce(part, a, opts.term_budget)
        bound += depth4_size_bound(part.size, n, d, a)
        entry = {'degree': d, 'a': a, 'sigma': part.size}
        if d >= 1:
            shape = DepthFourShape.for_degree(d, a)
            profile = level_profile(out)
            entry.update(fanin_exponents(d, n, part.size))
            entry.update({'top_mul_fanin_bound': shape.top_mul_fanin_bound,
                          'bottom_mul_fanin_bound':
                              shape.bottom_mul_fanin_bound,
                          'profile': profile})
            if profile.t3 > shape.top_mul_fanin_bound:
                wide.append(('level3-fanin', profile.t3, d))
            if profile.t1 > shape.bottom_mul_fanin_bound:
                wide.append(('level1-fanin', profile.t1, d))
        shapes.append(entry)
        parts.append(out)
    if not parts:
        parts.append(depth4_reduce(c.restrict(c.outputs[0]), 1))
    merged = _merge_depth4(parts)
    report = _start('depth4', c, merged)
    report.check_bound(bound + 1 if bound else merged.size)
    report.notes.update({'parts': shapes, 'dropped_zero_parts': dropped})
    for code, fanin, d in wide:
        report.add_violation(code, None, "fan-in %d in the part of degree %d"
                             % (fanin, d))
    try:
        report.notes['profile'] = level_profile(merged)
    except StructuralError as e:
        report.add_violation('layers', None, str(e))
    _check_equivalence(report, c, merged, opts)
    return merged, report


_STAGE_FUNCTIONS: Dict[str, Callable[[Circuit, _Options],
                                     Tuple[Circuit, PassReport]]] = {
    'binarize': _stage_binarize,
    'homogenize': _stage_homogenize,
    'normalize': _stage_normalize,
    'balance': _stage_balance,
    'depth4': _stage_depth4,
}


def parse_stages(text: str) -> List[str]:
    """Split a comma separated stage list and check every name."""
    names = [name.strip() for name in text.split(',') if name.strip()]
    if not names:
        raise ParameterError("no stage given")
    for name in names:
        if name not in _STAGE_FUNCTIONS:
            raise ParameterError("unknown stage '%s', expected one of %s"
                                 % (name, ', '.join(STAGES)))
    return names


def run_passes(c: Circuit, names: Sequence[str],
               a: Optional[int] = None,
               term_budget: int = DEFAULT_TERM_BUDGET,
               trials: int = DEFAULT_TRIALS,
               field: Optional[PrimeField] = None,
               seed: int = DEFAULT_SEED) -> Tuple[Circuit, List[PassReport]]:
    """Run the named stages in order.

    Args:
        c (Circuit): Input circuit.
        names (Sequence[str]): Stage names among ``binarize``,
            ``homogenize``, ``normalize``, ``balance`` and ``depth4``.
        a (Optional[int]): Split parameter of the depth4 stage. Parts for
            which it is out of range get the computed default.
        term_budget (int): Term budget of expansions.
        trials (int): Random points of randomized checks.
        field (Optional[PrimeField]): Field of randomized checks.
        seed (int): Seed of randomized checks.

    Returns:
        Tuple[Circuit, List[PassReport]]: Final circuit and one report per
        stage.

    Raises:
        ParameterError: If a stage name is unknown or ``a`` is out of range.
    """
    opts = _Options(a, term_budget, trials, field, seed)
    for name in names:
        if name not in _STAGE_FUNCTIONS:
            raise ParameterError("unknown stage '%s'" % name)
    if a is not None and a <= 0:
        raise ParameterError("split parameter must be positive, got %s" % a)
    reports = []
    for name in names:
        c, report = _STAGE_FUNCTIONS[name](c, opts)
        reports.append(report)
    return c, reports


def reduce_to_depth4(c: Circuit,
                     a: Optional[int] = None,
                     term_budget: int = DEFAULT_TERM_BUDGET,
                     trials: int = DEFAULT_TRIALS,
                     field: Optional[PrimeField] = None,
                     seed: int = DEFAULT_SEED) -> Tuple[Circuit, PassReport]:
    """Reduce a single-output circuit to an equivalent depth-4 circuit.

    Runs every stage, adding the homogeneous parts together with one top
    Add gate, and checks the final size against the size predicted from
    s, d and n alone.

    Args:
        c (Circuit): Single-output circuit of size s, degree d, n variables.
        a (Optional[int]): Split parameter override.

    Returns:
        Tuple[Circuit, PassReport]: The depth-4 circuit and a report whose
        stages are the per-stage reports.
    """
    out, stages = run_passes(c, STAGES, a, term_budget, trials, field, seed)
    report = PassReport('reduce_to_depth4', input_stats=stats(c),
                        output_stats=stats(out), stages=stages)
    d = c.degree
    if not d.is_neg_infinity and int(d) >= 1 and c.n >= 1:
        certificate = predict_depth4_size(c.size, int(d), c.n, out.size)
        report.check_bound(certificate.rhs)
        report.notes['prediction'] = certificate
    if is_homogeneous(c):
        report.notes['homogeneous_preserved'] = is_homogeneous(out)
        if not is_homogeneous(out):
            report.add_violation('homogeneous', None,
                                 "homogeneous input gave a "
                                 "non-homogeneous output")
    _check_equivalence(report, c, out,
                       _Options(a, term_budget, trials, field, seed))
    return out, report
