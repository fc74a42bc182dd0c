"""Exception types shared across the package."""


class OcmsimError(Exception):
    """Base class for all package-specific errors."""


class InfeasibleCrosstalk(OcmsimError):
    """Aggregate inter-channel crosstalk reaches or exceeds the full signal.

    Raised when the summed adjacent-channel leakage X >= 1, i.e. the WDM
    channels cannot be resolved at the given Q factor and channel spacing.
    """

    def __init__(self, m, spacing_ghz, q, x_total):
        self.m = m
        self.spacing_ghz = spacing_ghz
        self.q = q
        self.x_total = x_total
        super().__init__(
            f"crosstalk power fraction X={x_total:.4f} >= 1 for m={m}, "
            f"spacing={spacing_ghz:.3f} GHz, Q={q:g}"
        )


class NoFeasibleDesign(OcmsimError):
    """A design sweep found no point within the optical power budget."""


class MalformedTrace(OcmsimError):
    """A trace file line failed to parse.

    Carries the 1-based line number and the offending token so callers can
    point at the exact spot in the input.
    """

    def __init__(self, line_number, token, reason=""):
        self.line_number = line_number
        self.token = token
        detail = f": {reason}" if reason else ""
        super().__init__(
            f"malformed trace at line {line_number}: {token!r}{detail}"
        )


class ConfigConflict(OcmsimError):
    """A configuration is internally inconsistent or incomplete."""
