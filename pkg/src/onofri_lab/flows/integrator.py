"""Classical RK4 with step-doubling error control."""

import numpy as np

from ..errors import FlowError


def rk4_step(rhs, t, y, dt):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs, y0, sample_times, dt, tol=1e-9, dt_min=1e-12, check=None,
              on_sample=None, max_steps=2_000_000):
    """Advance ``y' = rhs(t, y)`` and hand the state to ``on_sample`` at each sample time.

    Each step is taken once with dt and twice with dt/2; the difference
    (divided by 15) is the local error estimate.  ``check(y_new, y_old)``
    may return a reason string to force a rejection and halve dt.  ``dt``
    is the initial step and also the largest step ever taken.
    """
    sample_times = np.asarray(sample_times, dtype=float)
    y = np.array(y0, dtype=float)
    t = float(sample_times[0])
    dt_max = float(dt)
    h = dt_max
    steps = rejections = 0
    rejected = False
    if on_sample is not None:
        on_sample(t, y)
    for t_next in sample_times[1:]:
        while t < t_next - 1e-14 * max(1.0, abs(t_next)):
            if steps >= max_steps:
                raise FlowError(f"step budget of {max_steps} exhausted at t={t:.4g}")
            step = min(h, t_next - t)
            with np.errstate(over="ignore", invalid="ignore"):
                full = rk4_step(rhs, t, y, step)
                mid = rk4_step(rhs, t, y, 0.5 * step)
                fine = rk4_step(rhs, t + 0.5 * step, mid, 0.5 * step)
            if not np.all(np.isfinite(fine)):
                err = np.inf
            else:
                err = float(np.max(np.abs(fine - full))) / 15.0
            scale = tol * (1.0 + float(np.max(np.abs(y))))
            reason = None
            if err > scale:
                reason = "error"
            elif check is not None:
                reason = check(fine, y)
            if reason is not None:
                rejections += 1
                h = 0.5 * step if reason != "error" or not np.isfinite(err) else \
                    step * max(0.2, 0.9 * (scale / err) ** 0.2)
                if h < dt_min:
                    raise FlowError(f"step size collapsed below {dt_min:g} at t={t:.4g} ({reason})")
                rejected = True
                continue
            t += step
            y = fine
            steps += 1
            growth = 2.0 if err == 0.0 else min(2.0, 0.9 * (scale / err) ** 0.2)
            if rejected:
                # no growth right after a rejection; avoids oscillating at the stability edge
                growth = min(growth, 1.0)
                rejected = False
            h = min(dt_max, step * max(growth, 0.2))
        t = float(t_next)
        if on_sample is not None:
            on_sample(t, y)
    return y, {"steps": steps, "rejections": rejections}
