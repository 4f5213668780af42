"""Zero-knowledge proof-chain toolkit.

A simulated ledger anchors commitments to private operational data,
computation units derive shared public data with proofs, and a proof-chain
graph verifies that public claims trace back to anchored private records or
registered authorities.
"""

from . import crypto, encoding, errors, graph, ledger, merkle, scenarios, zklink

__version__ = "0.1.0"

__all__ = [
    "crypto",
    "encoding",
    "errors",
    "graph",
    "ledger",
    "merkle",
    "scenarios",
    "zklink",
    "__version__",
]
