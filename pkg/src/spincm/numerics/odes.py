"""Fixed-step classical Runge-Kutta integration."""

import numpy as np


def rk4(rhs, y0: np.ndarray, t0: float, t1: float, steps: int) -> np.ndarray:
    """Integrate y' = rhs(t, y) from t0 to t1 with `steps` RK4 steps.

    The state may be real or complex; the global error scales as the
    fourth power of the step size.  Non-finite state components abort
    with a diagnostic rather than propagating NaNs.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y = np.array(y0)
    h = (t1 - t0) / steps
    t = t0
    for k in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (k + 1) * h
        if not np.all(np.isfinite(y)):
            raise FloatingPointError(f"non-finite state at t={t:.6g} (step {k + 1}/{steps})")
    return y
