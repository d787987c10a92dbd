"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """A documented enumeration or word-length cap was exceeded."""


class TruncationError(ValueError):
    """A truncated sequence is too short for the requested order."""
