"""Certified floors of reciprocal power sums of generalized Fibonacci numbers."""

from .identities import fib_recip_floor, gen_fib_cubed_floor, pell_recip_floor
from .quadfield import QuadElem, qf_make
from .sequence import FIBONACCI, PELL, SequenceParams, binet_eval, seq_term
from .tailsum import FloorResult, PowerSumQuery, Undecided, floor_recip_sum, tail_bound

__all__ = [
    "FIBONACCI",
    "FloorResult",
    "PELL",
    "PowerSumQuery",
    "QuadElem",
    "SequenceParams",
    "Undecided",
    "binet_eval",
    "fib_recip_floor",
    "floor_recip_sum",
    "gen_fib_cubed_floor",
    "pell_recip_floor",
    "qf_make",
    "seq_term",
    "tail_bound",
]

__version__ = "0.1.0"
