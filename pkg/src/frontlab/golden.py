"""Checked-in reference values with per-quantity tolerances.

Used by the CLI --golden flag.  Each entry is (value, absolute tolerance).
"""

GOLDEN = {
    "tau@nu=0": (0.693147, 1e-3),
    "tau@nu=0.25": (0.70, 1e-2),
    "tau_crossing@target=1": (1.1835, 1e-2),
    "nu_critical": (4.096, 1e-2),
    "bound_minus@phi0=-1/59,nu=1/4": (1.6748, 1e-4),
    "bound_plus@phi0=-1/59,nu=1/4": (1.675, 1e-3),
    "tau_bound@nu=1/4": (0.8375, 5e-4),
    "bound_crossing@nu=1/4": (-0.017, 5e-3),
}


def check(name: str, value: float) -> tuple[bool, float, float]:
    """Return (ok, reference, tolerance) for one golden quantity."""
    ref, tol = GOLDEN[name]
    return abs(value - ref) <= tol, ref, tol
