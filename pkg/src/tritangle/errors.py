"""Exception types shared across the package."""

from __future__ import annotations


class NumericalConsistencyError(RuntimeError):
    """An internal numerical contract was violated.

    Raised when a quantity that is nonnegative (or otherwise constrained)
    by construction comes out wrong by far more than round-off can explain,
    e.g. a concurrence radicand below -1e-6.  This signals a bug or a
    badly conditioned input rather than ordinary floating-point noise,
    so it is never silently clamped.
    """


def clamp_nonneg(x: float, *, fail_below: float = -1e-6, what: str = "value") -> float:
    """Clamp small negative round-off to zero, failing loudly on large negatives.

    Parameters
    ----------
    x : float
        Quantity that is nonnegative in exact arithmetic.
    fail_below : float
        Threshold below which the negativity is treated as a bug.
    what : str
        Label used in the error message.

    Returns
    -------
    float
        ``max(x, 0.0)``.

    Raises
    ------
    NumericalConsistencyError
        If ``x < fail_below``.
    """
    if x < fail_below:
        raise NumericalConsistencyError(
            f"{what} = {x:.6e} is negative beyond round-off (threshold {fail_below:.1e})"
        )
    return x if x > 0.0 else 0.0
