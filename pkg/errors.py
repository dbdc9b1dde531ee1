from typing import Dict, List, Optional


class Dirac1DError(Exception):
    """Base class for errors raised by the laboratory."""

    error_type = "dirac1d_error"


class SpectrumError(Dirac1DError):
    error_type = "spectral_parameter_on_spectrum"


class DomainTooSmallError(Dirac1DError):
    error_type = "domain_too_small"


class DegenerateInputError(Dirac1DError):
    error_type = "degenerate_input"


class ProfileDecayError(Dirac1DError):
    error_type = "insufficient_decay"


class WindowError(Dirac1DError):
    error_type = "window_outside_trajectory"


class WindingUnresolvedError(Dirac1DError):
    error_type = "winding_unresolved"


class BlowUpError(Dirac1DError):
    error_type = "blow_up_suspected"

    def __init__(self, t: float, reason: str):
        super().__init__(f"blow-up suspected at t={t!r} ({reason})")
        self.t = t
        self.reason = reason


class ConfigError(Dirac1DError):
    """Carries every violation found, each as {"pointer": ..., "message": ...}."""

    error_type = "config_error"

    def __init__(self, violations: List[Dict[str, str]], message: Optional[str] = None):
        self.violations = violations
        summary = "; ".join(f"{v['pointer']}: {v['message']}" for v in violations)
        super().__init__(message or f"invalid configuration: {summary}")
