import csv
import io
from dataclasses import dataclass, field

import numpy as np

CSV_COLUMNS = ("t", "mass", "lyapunov", "dissipation")
CSV_VERSION = "onofri-lab/trace/v1"


@dataclass
class FlowState:
    t: float
    field: object
    mass: float
    lyapunov: float
    dissipation: float


@dataclass
class FlowTrace:
    """Sampled history of one flow run.

    ``integral_of_dissipation`` is integrated alongside the state by the
    same RK4 steps, so it does not depend on how densely we sample.
    """

    kind: str
    t: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    lyapunov: list = field(default_factory=list)
    dissipation: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    integral_of_dissipation: float = 0.0
    final: FlowState = None
    stats: dict = field(default_factory=dict)

    def record(self, state, **extra):
        self.t.append(state.t)
        self.mass.append(state.mass)
        self.lyapunov.append(state.lyapunov)
        self.dissipation.append(state.dissipation)
        for key, val in extra.items():
            self.extras.setdefault(key, []).append(val)
        self.final = state

    def arrays(self):
        return {k: np.asarray(getattr(self, k)) for k in CSV_COLUMNS}

    @property
    def mass_drift(self):
        m = np.asarray(self.mass)
        return float(np.max(np.abs(m - m[0])))

    @property
    def lyapunov_drop(self):
        return self.lyapunov[0] - self.lyapunov[-1]

    @property
    def max_lyapunov_increase(self):
        d = np.diff(np.asarray(self.lyapunov))
        return float(d.max()) if d.size else 0.0

    def to_csv(self, meta=None):
        buf = io.StringIO()
        header = [CSV_VERSION, f"kind={self.kind}"]
        header += [f"{k}={v}" for k, v in (meta or {}).items()]
        buf.write("# " + " ".join(header) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in zip(self.t, self.mass, self.lyapunov, self.dissipation):
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def read_trace_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected trace header {header}")
    rows = np.array([[float(x) for x in row] for row in reader])
    return {name: rows[:, i] for i, name in enumerate(CSV_COLUMNS)}


def exponential_tail(t, values, fraction=0.1):
    """Estimate the integral from the last sample to infinity assuming exponential decay.

    The rate is fitted to log(values) over the final ``fraction`` of the time span.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if v[-1] <= 0.0:
        return 0.0, np.inf
    start = t[-1] - fraction * (t[-1] - t[0])
    sel = (t >= start) & (v > 0)
    if sel.sum() < 2:
        sel = v > 0
    slope = np.polyfit(t[sel], np.log(v[sel]), 1)[0]
    rate = -slope
    if rate <= 0.0:
        return np.inf, rate
    return float(v[-1] / rate), float(rate)
