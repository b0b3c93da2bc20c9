"""Command line front end.

Every subcommand writes JSON lines with sorted keys to standard output (or
to ``--report``) and a short human summary to standard error. The exit code
is 0 when every requested check holds, 1 when a check fails and 2 when the
input or the parameters are rejected.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ._log import _log_msg
from .bounds import (TARGETS, check_lower_bound,
                     homogeneous_bottom_fanin_bound, level_profile,
                     lower_bound_level3)
from .circuit import (DEFAULT_PARSE_TREE_LIMIT, count_parse_trees,
                      is_homogeneous, iter_parse_trees, validate)
from .errors import CircuitError, ParameterError
from .field import DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS, PrimeField, \
    verify_equivalence
from .generators import FAMILIES, GeneratorSpec, generate
from .io import Metadata, format_circuit, read, write_circuit
from .pipeline import STAGES, parse_stages, run_passes
from .polynomial import DEFAULT_TERM_BUDGET, SparsePolynomial, expand, \
    parse_tree_monomial
from .report import PassReport

SEED_VARIABLE = 'CF_SEED'
TREE_LISTING_LIMIT = 1000

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


@dataclass
class PipelineConfig:
    """Settings of one command line invocation.

    Args:
        inputs (List[str]): Input circuit paths.
        output (Optional[str]): Output circuit path.
        passes (List[str]): Stages of ``transform``.
        a (Optional[int]): Split parameter override of the depth4 stage.
        prime (int): Modulus of randomized checks.
        trials (int): Random points of randomized checks.
        seed (int): Seed of randomized checks.
        term_budget (int): Term budget of exact expansions.
        report (Optional[str]): Path of the JSON lines report.
    """

    inputs: List[str]
    output: Optional[str] = None
    passes: Tuple[str, ...] = STAGES
    a: Optional[int] = None
    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    term_budget: int = DEFAULT_TERM_BUDGET
    report: Optional[str] = None

    def __post_init__(self):
        if self.a is not None and self.a <= 0:
            raise ParameterError("--a must be positive, got %d" % self.a)
        if self.trials < 1:
            raise ParameterError("--trials must be at least 1")
        if self.term_budget < 1:
            raise ParameterError("--term-budget must be at least 1")

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.prime)

    def check_kwargs(self) -> Dict[str, Any]:
        """Keyword arguments of the randomized checks."""
        return {'trials': self.trials, 'field': self.field,
                'seed': self.seed}

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out['passes'] = list(self.passes)
        return out


def _seed(value: Optional[int], environ=None) -> int:
    environ = os.environ if environ is None else environ
    if value is not None:
        return value
    if SEED_VARIABLE in environ:
        try:
            return int(environ[SEED_VARIABLE])
        except ValueError:
            raise ParameterError("%s must be an integer, got %r"
                                 % (SEED_VARIABLE, environ[SEED_VARIABLE]))
    return DEFAULT_SEED


def config_from_args(args: argparse.Namespace,
                     environ=None) -> PipelineConfig:
    """Build a :class:`PipelineConfig` from parsed arguments."""
    passes = parse_stages(args.passes) if getattr(args, 'passes', None) \
        else STAGES
    return PipelineConfig(inputs=list(getattr(args, 'inputs', [])),
                          output=getattr(args, 'out', None),
                          passes=tuple(passes),
                          a=getattr(args, 'a', None),
                          prime=args.prime,
                          trials=args.trials,
                          seed=_seed(args.seed, environ),
                          term_budget=args.term_budget,
                          report=args.report)


def _emit(records: Sequence[Dict[str, Any]], path: Optional[str]):
    text = "".join("%s\n" % json.dumps(r, sort_keys=True) for r in records)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as f:
        f.write(text)
    logging.info(_log_msg(path, os.stat(path).st_size))


def _with_config(report: PassReport, config: PipelineConfig) -> PassReport:
    report.notes['config'] = config.to_dict()
    return report


def cmd_stats(config: PipelineConfig,
              limit: int = DEFAULT_PARSE_TREE_LIMIT) -> PassReport:
    """Validate a circuit file and report its statistics.

    The parse-tree count is reported when it is at most ``limit``.
    """
    c = read(config.inputs[0])
    report = validate(c)
    report.name = 'stats'
    report.input_stats = report.output_stats
    count = count_parse_trees(c)
    report.notes['parse_trees'] = count if count <= limit else None
    report.notes['parse_tree_limit'] = limit
    return _with_config(report, config)


def cmd_gen(spec: GeneratorSpec, config: PipelineConfig) -> PassReport:
    """Generate a circuit and write it to ``config.output``."""
    c = generate(spec)
    report = PassReport('gen', output_stats=validate(c).output_stats)
    report.notes['spec'] = asdict(spec)
    if config.output is not None:
        metadata = Metadata(title="%s(%d)" % (spec.family, spec.n),
                            source="cftools gen %s %d --seed %d"
                            % (spec.family, spec.n, spec.seed))
        report.notes['path'] = write_circuit(c, config.output,
                                             metadata=metadata)
    else:
        report.notes['circuit'] = format_circuit(c)
    return _with_config(report, config)


def cmd_transform(config: PipelineConfig) -> PassReport:
    """Run the configured stages on a circuit file.

    A circuit that fails validation is not transformed; its violations are
    reported instead. A stage that rejects its input stops the run; its
    report carries the error under the stage name.
    """
    c = read(config.inputs[0])
    checked = validate(c)
    report = PassReport('transform', input_stats=checked.output_stats)
    if not checked.ok:
        report.violations.extend(checked.violations)
        return _with_config(report, config)
    for name in config.passes:
        try:
            c, stages = run_passes(c, [name], config.a, config.term_budget,
                                   **config.check_kwargs())
        except CircuitError as e:
            failed = PassReport(name)
            failed.add_violation('error', None, str(e))
            report.stages.append(failed)
            logging.error("%s: %s", name, e)
            return _with_config(report, config)
        report.stages.extend(stages)
    report.output_stats = report.stages[-1].output_stats
    if config.output is not None:
        metadata = Metadata(source="cftools transform --pass %s"
                            % ",".join(config.passes))
        report.notes['path'] = write_circuit(c, config.output,
                                             metadata=metadata)
    return _with_config(report, config)


def cmd_verify(config: PipelineConfig) -> PassReport:
    """Compare two circuit files, exactly when they fit the term budget."""
    c1, c2 = (read(path) for path in config.inputs[:2])
    verdict = verify_equivalence(c1, c2, config.term_budget,
                                 **config.check_kwargs())
    report = PassReport('verify', input_stats=validate(c1).output_stats,
                        output_stats=validate(c2).output_stats,
                        equivalence=verdict.to_dict())
    return _with_config(report, config)


def cmd_bounds(config: PipelineConfig, target: Optional[str] = None,
               n: Optional[int] = None) -> List[Dict[str, Any]]:
    """Return the lower-bound certificates of a layered depth-4 circuit.

    Without a target only the level-1 bound for the measured top fan-in is
    given. With one, the circuit must compute it; the homogeneous
    bottom fan-in bound is added when it applies.

    Returns:
        List[Dict[str, Any]]: Serialized certificates, each carrying the
        configuration.
    """
    c = read(config.inputs[0])
    profile = level_profile(c)
    if n is None:
        n = max(1, int(c.degree)) if not c.degree.is_neg_infinity else 1
    certificates = [lower_bound_level3(n, max(1, profile.t3),
                                       profile.s1 + profile.bare_wires)]
    if target is not None:
        certificates.append(check_lower_bound(
            c, target, n, config.term_budget, **config.check_kwargs()))
        if is_homogeneous(c) and c.degree == n:
            certificates.append(homogeneous_bottom_fanin_bound(c, n))
    records = []
    for cert in certificates:
        record = cert.to_dict()
        record['profile'] = profile.to_dict()
        record['config'] = config.to_dict()
        records.append(record)
    return records


def cmd_parse_trees(config: PipelineConfig,
                    limit: int = TREE_LISTING_LIMIT) -> PassReport:
    """Count the parse trees of a circuit and check their monomials.

    When there are at most ``limit`` trees, their monomials are listed and
    their sum is compared with the expansion of the circuit.
    """
    c = read(config.inputs[0])
    report = PassReport('parse-trees', input_stats=validate(c).output_stats)
    count = count_parse_trees(c)
    report.notes['count'] = count
    if count <= limit:
        total = SparsePolynomial.zero()
        monomials = []
        for tree in iter_parse_trees(c, c.output):
            m = parse_tree_monomial(c, tree)
            monomials.append(str(m))
            total = total + m
        expansion = expand(c, term_budget=config.term_budget)
        report.notes.update({'monomials': monomials, 'sum': str(total),
                             'expansion': str(expansion)})
        if total != expansion:
            report.add_violation('parse-tree-sum', c.output,
                                 "parse tree monomials do not add up to "
                                 "the expansion")
    return _with_config(report, config)


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--prime", type=int, default=DEFAULT_PRIME,
                        help="Prime modulus of randomized checks.")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help="Random points of randomized checks.")
    parser.add_argument("--seed", type=int, default=None,
                        help="Seed of randomized checks (else $%s)."
                        % SEED_VARIABLE)
    parser.add_argument("--term-budget", type=int,
                        default=DEFAULT_TERM_BUDGET,
                        help="Largest polynomial expanded exactly.")
    parser.add_argument("--report", default=None,
                        help="Write the JSON lines report to this file.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cftools",
        description="Depth reduction of arithmetic circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="Validate a circuit and print stats.")
    p.add_argument("inputs", nargs=1, metavar="circuit")
    p.add_argument("--limit", type=int, default=DEFAULT_PARSE_TREE_LIMIT,
                   help="Largest parse-tree count to report.")
    _common(p)

    p = sub.add_parser("gen", help="Generate a circuit.")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--gates", type=int, default=12)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--min-degree", type=int, default=1)
    p.add_argument("--max-fanin", type=int, default=3)
    p.add_argument("--homogeneous", action="store_true")
    p.add_argument("--negative", action="store_true",
                   help="Allow negative and cancelling coefficients.")
    p.add_argument("--out", default=None, help="Output circuit file.")
    _common(p)

    p = sub.add_parser("transform", help="Run passes on a circuit.")
    p.add_argument("inputs", nargs=1, metavar="circuit")
    p.add_argument("--pass", dest="passes", default=",".join(STAGES),
                   help="Comma separated stages among %s."
                   % ", ".join(STAGES))
    p.add_argument("--a", type=int, default=None,
                   help="Split parameter of the depth4 stage.")
    p.add_argument("--out", default=None, help="Output circuit file.")
    _common(p)

    p = sub.add_parser("verify", help="Compare two circuits.")
    p.add_argument("inputs", nargs=2, metavar="circuit")
    _common(p)

    p = sub.add_parser("bounds", help="Lower-bound certificates.")
    p.add_argument("inputs", nargs=1, metavar="circuit")
    p.add_argument("--target", choices=TARGETS, default=None)
    p.add_argument("--n", type=int, default=None, help="Matrix size.")
    _common(p)

    p = sub.add_parser("parse-trees", help="Count and list parse trees.")
    p.add_argument("inputs", nargs=1, metavar="circuit")
    p.add_argument("--limit", type=int, default=TREE_LISTING_LIMIT,
                   help="Largest number of trees to list.")
    _common(p)
    return parser


def _run(args: argparse.Namespace) -> Tuple[List[Dict[str, Any]], int,
                                            Optional[str]]:
    config = config_from_args(args)
    if args.command == "stats":
        reports = [cmd_stats(config, args.limit)]
    elif args.command == "gen":
        spec = GeneratorSpec(args.family, args.n, seed=config.seed,
                             gates=args.gates, max_degree=args.max_degree,
                             min_degree=args.min_degree,
                             max_fanin=args.max_fanin,
                             homogeneous=args.homogeneous,
                             negative=args.negative)
        report = cmd_gen(spec, config)
        if config.output is None and config.report is None:
            sys.stdout.write(report.notes['circuit'])
            return [], EXIT_OK, None
        reports = [report]
    elif args.command == "transform":
        reports = [cmd_transform(config)]
    elif args.command == "verify":
        reports = [cmd_verify(config)]
    elif args.command == "bounds":
        records = cmd_bounds(config, args.target, args.n)
        ok = all(r['satisfied'] is not False for r in records)
        return records, EXIT_OK if ok else EXIT_FAILED, config.report
    else:
        reports = [cmd_parse_trees(config, args.limit)]
    for report in reports:
        logging.info("%s: %s", report.name, "ok" if report.ok else "FAILED")
        for code in report.codes():
            logging.info("  violation: %s", code)
    if any('error' in r.codes() for r in reports):
        code = EXIT_ERROR
    else:
        code = EXIT_OK if all(r.ok for r in reports) else EXIT_FAILED
    return [r.to_dict() for r in reports], code, config.report


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``cftools`` command."""
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        records, code, path = _run(args)
    except (CircuitError, ValueError, OSError) as e:
        logging.error("%s: %s", args.command, e)
        return EXIT_ERROR
    if records:
        _emit(records, path)
    return code


if __name__ == "__main__":
    sys.exit(main())
