"""Reports produced by validation and by the circuit passes.

A :class:`PassReport` is the unit of output of every pass and of the command
line tool. It serializes to a single JSON object with sorted keys and no
timestamps, so identical runs produce byte-identical reports.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .circuit import GateDegree


def _jsonable(value: Any) -> Any:
    """Convert a report value into something ``json.dumps`` accepts."""
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if hasattr(value, 'to_json'):
        return value.to_json()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class CircuitStats:
    """Structural statistics of a circuit.

    Args:
        size (int): Number of gates (s).
        degree (GateDegree): Maximum degree over the outputs (d).
        n (int): Number of distinct variables.
        depth (int): Length of the longest input-to-output path.
        counts (Dict[str, int]): Gate count per kind.
        max_fanin (Dict[str, int]): Maximum fan-in per computation kind.
        homogeneous (bool): True if every Add gate is homogeneous.
        outputs (int): Number of designated outputs.
    """

    size: int
    degree: 'GateDegree'
    n: int
    depth: int
    counts: Dict[str, int]
    max_fanin: Dict[str, int]
    homogeneous: bool
    outputs: int

    def to_dict(self) -> Dict[str, Any]:
        return {'size': self.size,
                'degree': self.degree.to_json(),
                'n': self.n,
                'depth': self.depth,
                'counts': dict(self.counts),
                'max_fanin': dict(self.max_fanin),
                'homogeneous': self.homogeneous,
                'outputs': self.outputs}


@dataclass(frozen=True)
class Violation:
    """A broken circuit invariant.

    Args:
        code (str): Short identifier such as ``"scal-child-degree"``.
        gate (Optional[int]): Offending gate id, if any.
        message (str): Human readable description.
    """

    code: str
    gate: Optional[int]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'gate': self.gate, 'message': self.message}


@dataclass
class PassReport:
    """Record of one pass (or one validation) over a circuit.

    Args:
        name (str): Name of the pass.
        input_stats (Optional[CircuitStats]): Statistics of the input.
        output_stats (Optional[CircuitStats]): Statistics of the output.
        predicted_bound (Optional[int]): Size bound the output must respect.
        bound_satisfied (Optional[bool]): Output size within the bound.
        tighter_bound (Optional[int]): A sharper bound, recorded only.
        violations (List[Violation]): Broken invariants.
        equivalence (Optional[Dict[str, Any]]): Serialized equivalence
            verdict between input and output.
        notes (Dict[str, Any]): Free-form measured quantities.
        stages (List[PassReport]): Reports of nested stages.
    """

    name: str
    input_stats: Optional[CircuitStats] = None
    output_stats: Optional[CircuitStats] = None
    predicted_bound: Optional[int] = None
    bound_satisfied: Optional[bool] = None
    tighter_bound: Optional[int] = None
    violations: List[Violation] = field(default_factory=list)
    equivalence: Optional[Dict[str, Any]] = None
    notes: Dict[str, Any] = field(default_factory=dict)
    stages: List['PassReport'] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True if no violation, bound or equivalence failure is recorded."""
        if self.violations or self.bound_satisfied is False:
            return False
        if self.equivalence is not None and not self.equivalence['equal']:
            return False
        return all(stage.ok for stage in self.stages)

    def check_bound(self, bound: int, tighter: Optional[int] = None) -> bool:
        """Record a size bound and whether the output respects it."""
        self.predicted_bound = bound
        self.tighter_bound = tighter
        self.bound_satisfied = self.output_stats.size <= bound
        if tighter is not None:
            self.notes['tighter_bound_satisfied'] = \
                self.output_stats.size <= tighter
        return self.bound_satisfied

    def add_violation(self, code: str, gate: Optional[int], message: str):
        self.violations.append(Violation(code, gate, message))

    def codes(self) -> List[str]:
        """Return the violation codes of this report and its stages."""
        codes = [v.code for v in self.violations]
        for stage in self.stages:
            codes.extend(stage.codes())
        return codes

    def to_dict(self) -> Dict[str, Any]:
        return {'pass': self.name,
                'ok': self.ok,
                'input': _jsonable(self.input_stats),
                'output': _jsonable(self.output_stats),
                'predicted_bound': self.predicted_bound,
                'bound_satisfied': self.bound_satisfied,
                'tighter_bound': self.tighter_bound,
                'violations': [v.to_dict() for v in self.violations],
                'equivalence': _jsonable(self.equivalence),
                'notes': _jsonable(self.notes),
                'stages': [s.to_dict() for s in self.stages]}

    def to_json(self) -> str:
        """Return the report as one line of JSON with sorted keys."""
        return json.dumps(self.to_dict(), sort_keys=True)
