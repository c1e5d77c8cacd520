"""Shared exception types."""


class SwssError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(SwssError):
    """Malformed or structurally invalid UCCA input."""


class DatasetError(SwssError):
    """Problem with an evaluation dataset, manifest, or score table."""
