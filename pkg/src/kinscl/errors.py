"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value, file, or grid geometry."""


class InvariantViolation(RuntimeError):
    """A runtime invariant of a scheme was broken (aborts the run)."""


class SignStructureError(InvariantViolation):
    """A kinetic column violates the signed-indicator structure."""


class MassMismatchError(ValueError):
    """Transport-map endpoints carry different total mass."""
