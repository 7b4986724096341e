"""chipfire - exact divisor theory and higher gonality on finite multigraphs."""

__version__ = "0.1.0"
__author__ = "chipfire developers"

# Export the main entry points for convenience
from chipfire.certificates import (
    BrambleCertificate,
    ScrambleCertificate,
    certify_lower_bound,
    scramble_order,
    vertex_scramble,
)
from chipfire.config import Config
from chipfire.divisors import Divisor, FiringScript, mdba, q_reduce, rank, rank_at_least
from chipfire.gonality import SearchReport, alpha_r, gonality, mf_gonality
from chipfire.graph import INFINITE, Multigraph, load_text, parse_text

__all__ = [
    "BrambleCertificate",
    "Config",
    "Divisor",
    "FiringScript",
    "INFINITE",
    "Multigraph",
    "ScrambleCertificate",
    "SearchReport",
    "alpha_r",
    "certify_lower_bound",
    "gonality",
    "load_text",
    "mdba",
    "mf_gonality",
    "parse_text",
    "q_reduce",
    "rank",
    "rank_at_least",
    "scramble_order",
    "vertex_scramble",
    "__version__",
]
