"""Exception types shared by the toolkit."""
from __future__ import annotations


class DunklError(Exception):
    """Base class for toolkit errors."""


class InvalidParameterError(DunklError, ValueError):
    """A parameter lies outside the domain of an operation."""


class TruncationError(DunklError):
    """A profile has not decayed at the end of its grid.

    ``magnitude`` is the boundary magnitude relative to the profile maximum.
    """

    def __init__(self, message: str, magnitude: float):
        super().__init__(f"{message} (relative boundary magnitude {magnitude:.3e})")
        self.magnitude = magnitude


class ResolutionError(DunklError):
    """The quadrature grid cannot resolve the requested frequencies."""


class DegeneracyError(DunklError):
    """A ratio has a vanishing right-hand side but a non-negligible left-hand side."""


class ConfigurationError(DunklError):
    """An experiment configuration is inconsistent or refers to unknown names."""


class ExperimentError(DunklError):
    """One or more sweep cells failed; ``failures`` lists (provenance, error) pairs."""

    def __init__(self, failures):
        self.failures = list(failures)
        lines = [f"{len(self.failures)} cell(s) failed:"]
        for prov, err in self.failures[:20]:
            text = f"{type(err).__name__}: {err}" if isinstance(err, BaseException) else str(err)
            lines.append(f"  {prov}: {text}")
        super().__init__("\n".join(lines))
