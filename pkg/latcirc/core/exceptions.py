"""
Exception hierarchy for latcirc.
"""
from typing import Any, Sequence


class LatcircError(ValueError):
    """Base class for every error raised by latcirc."""


class InvalidConfig(LatcircError):
    """A fixed spin value or boundary configuration is out of range."""


class DimensionMismatch(LatcircError):
    """State, gate or circuit dimensions do not agree."""


class MalformedGeometry(LatcircError):
    """A lattice or graph description is inconsistent."""


class EnumerationTooLarge(LatcircError):
    """An exact enumeration would exceed the configured cap."""


class WidthExceeded(LatcircError):
    """A compiled or simulated register is wider than the configured cap."""


class BlockBudget(LatcircError):
    """A compiled lattice does not fit the requested block budget."""


class SearchExhausted(LatcircError):
    """A bounded search ended without a result."""


class UnsupportedGate(LatcircError):
    """A gate lies outside the alphabet of the requested construction."""


class UnsupportedFace(LatcircError):
    """A lattice gauge face cannot be expressed as a circuit gate."""


class NotSixVertexForm(LatcircError):
    """A two-qubit gate violates the six-vertex sparsity pattern."""


class BadEpsilon(LatcircError):
    """A filter parameter lies outside its admissible range."""


class BadParameter(LatcircError):
    """A recipe parameter lies outside its admissible range."""


class BadConfig(LatcircError):
    """An estimator configuration is inconsistent."""


class NonUnitaryCircuit(LatcircError):
    """An estimator received a circuit with a non-unitary gate."""


class AuxiliaryReuse(LatcircError):
    """A recipe step used an auxiliary qudit that was already consumed."""


class GaugeLoop(LatcircError):
    """Gauge-fixed edges close a loop."""

    def __init__(self, cycle: Sequence[Any]):
        self.cycle = tuple(cycle)
        super().__init__(f"Gauge-fixed edges form a closed loop: {list(self.cycle)}")
