"""Exceptions shared across the package."""


class SizeGuardExceeded(Exception):
    """An operation was asked to enumerate more than its practical guard allows."""


class NotInKernel(ValueError):
    """A vector handed to a kernel-only operation does not lie in the kernel."""


class DecompositionFailed(RuntimeError):
    """No conformal decomposition exists; the supplied basis is not a Graver basis."""
