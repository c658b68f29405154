"""Exception types raised across the package."""


class DMVRError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(DMVRError, ValueError):
    pass


class InvalidEdgeError(DMVRError, ValueError):
    pass


class NotConnectedError(DMVRError, ValueError):
    pass


class InvalidVoteError(DMVRError, ValueError):
    pass


class UnsupportedKError(DMVRError, ValueError):
    pass


class ConfigurationError(DMVRError, ValueError):
    """A scenario, manifest or observer set is inconsistent."""


class DomainError(DMVRError, ValueError):
    """A closed-form formula was evaluated outside its domain."""


class StateSpaceTooLarge(DMVRError, ValueError):
    """Exhaustive exploration refused because the scale limits are exceeded."""
