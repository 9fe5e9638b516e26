# Tolerances shared by the library, the reports and the tests.
UNITARY_TOL = 1e-10
QUADRATURE_TOL = 1e-10
IDENTITY_TOL = 1e-12
SUPPORT_TOL = 1e-14

# Below this a post-selection is reported as failed rather than as a tiny number.
POSTSELECT_FLOOR = 1e-30

# Phase budget 2N p0 dx above which results are flagged, and above which the run is refused.
PHASE_BUDGET_WARN = 0.1
PHASE_BUDGET_MAX = 1.0

# G * (spectral weight in the outermost Fourier pair) above which physical <L_x> shifts are flagged.
# Ideal-limit runs claim exact shifts and are flagged above QUADRATURE_TOL instead.
EDGE_WRAP_WARN = 1e-2

SCHEMA_VERSION = "1.0"


def tolerances() -> dict[str, float]:
    return {
        "unitary": UNITARY_TOL,
        "quadrature": QUADRATURE_TOL,
        "identity": IDENTITY_TOL,
        "postselect_floor": POSTSELECT_FLOOR,
        "phase_budget_warn": PHASE_BUDGET_WARN,
        "phase_budget_max": PHASE_BUDGET_MAX,
        "edge_wrap_warn": EDGE_WRAP_WARN,
    }
