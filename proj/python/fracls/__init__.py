"""Modified least squares in Muntz spaces M_n^lambda."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    Error,
    DomainError,
    UsageError,
    NumericalError,
    ConditioningError,
    DegeneracyError,
    RankDeficiencyError,
)

__version__ = "0.1.0"
