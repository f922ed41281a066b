"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 1, InfeasibleError -> 2,
anything else -> 3.
"""


class TrussKitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TrussKitError):
    """Malformed input: bad indices, bad file, bad CLI arguments."""


class InfeasibleError(TrussKitError):
    """Input is well formed but the requested computation cannot proceed.

    Examples: degenerate geometry (zero-area face, collapsed wheel sector),
    a flexible truss where rigidity is required, non-flat length data handed
    to the development routine, incompatible prescribed elongations.
    """


class DisconnectedWarning(UserWarning):
    """Edge removal left the active link graph disconnected."""


class LengthMismatchWarning(UserWarning):
    """Stored edge length disagrees with the embedded distance.

    Stored lengths win for length-data (ND) operations, positions win for
    displacement (LD) operations.
    """
