"""Exceptions raised by cftools.

Every error derives from :class:`CircuitError`, which is itself a
``ValueError`` so callers that only guard against bad arguments keep working.
"""


class CircuitError(ValueError):
    """Base class of every error raised by cftools."""


class StructuralError(CircuitError):
    """A circuit does not have the shape an operation requires."""


class ContractError(CircuitError):
    """An input violates the precondition of a pass."""


class ParameterError(CircuitError):
    """A numeric parameter is out of its admissible range."""


class FieldConfigurationError(CircuitError):
    """A prime field is unusable (composite modulus or modulus too small)."""


class AssignmentError(CircuitError):
    """A variable assignment does not cover the circuit's variables."""


class GenerationError(CircuitError):
    """No circuit satisfying the generator caps was found."""


class CircuitParseError(CircuitError):
    """A line of a circuit file could not be parsed.

    Args:
        line (int): One-based line number of the offending line.
        message (str): Description of the problem.
    """

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__("line %d: %s" % (line, message))


class EnumerationOverflowError(CircuitError):
    """Parse-tree enumeration would exceed its limit.

    Args:
        count (int): Exact number of parse trees.
        limit (int): The limit that was exceeded.
    """

    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__("circuit has %d parse trees, limit is %d"
                         % (count, limit))


class TermBudgetExceededError(CircuitError):
    """Exact expansion produced more terms than allowed.

    Args:
        gate (int): Gate whose expansion exceeded the budget.
        terms (int): Number of terms at that gate.
        budget (int): The term budget.
    """

    def __init__(self, gate: int, terms: int, budget: int):
        self.gate = gate
        self.terms = terms
        self.budget = budget
        super().__init__("gate %d expands to %d terms, budget is %d"
                         % (gate, terms, budget))


class ClosureBudgetError(CircuitError):
    """A product closure of monomial sets is too large to materialize.

    Args:
        bound (int): The a priori bound (|E|+1)^k on the closure size.
        budget (int): The budget that was exceeded.
    """

    def __init__(self, bound: int, budget: int):
        self.bound = bound
        self.budget = budget
        super().__init__("closure may hold up to %d monomials, budget is %d"
                         % (bound, budget))
