"""Exact structure relations and inverse classification of classical orthogonal polynomials."""

__version__ = "0.1.0"

from .exprio import EquationData, RecurrenceEq, parse_recurrence, print_report  # noqa: E402
from .relations import relations  # noqa: E402
from .inverse import run_algorithm  # noqa: E402

__all__ = ["EquationData", "RecurrenceEq", "parse_recurrence", "print_report", "relations", "run_algorithm", "__version__"]
