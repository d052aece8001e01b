"""Transaction size estimate for fee budgeting: 148 i + 34 o + 10, +/- i bytes."""

from typing import Tuple

from .errors import DomainError

BYTES_PER_INPUT = 148
BYTES_PER_OUTPUT = 34
BYTES_OVERHEAD = 10


def estimate_size(num_inputs: int, num_outputs: int) -> Tuple[int, int]:
    """(min_bytes, max_bytes) for a P2PKH-style transaction."""
    if num_inputs < 1 or num_outputs < 1:
        raise DomainError("need at least one input and one output")
    center = BYTES_PER_INPUT * num_inputs + BYTES_PER_OUTPUT * num_outputs + BYTES_OVERHEAD
    return center - num_inputs, center + num_inputs
