# src/main/constants.py
"""
Application-wide constants for catsim.
Keep configuration keys, numerical tolerances, default parameters and
commonly used literals here.
"""

from pathlib import Path

APP_NAME = "catsim"
VERSION = "0.2.0"

# File system
ROOT_DIR = Path(__file__).resolve().parent.parent.parent
SRC_DIR = ROOT_DIR / "src"
CONFIG_DIR = ROOT_DIR / "config"
DATA_DIR = SRC_DIR / "data"
SCHEMA_DIR = DATA_DIR / "schemas"

# Environment variable names
ENV_THREADS = "CATSIM_THREADS"
ENV_OUTPUT_DIR = "CATSIM_OUTPUT_DIR"
ENV_LOG_LEVEL = "CATSIM_LOG_LEVEL"

# Default filenames
DEFAULT_SETTINGS_FILE = CONFIG_DIR / "default_settings.json"
APP_SETTINGS_FILE = CONFIG_DIR / "app_settings.json"
SETTINGS_SCHEMA_FILE = SCHEMA_DIR / "settings_schema.json"
SCENARIO_SCHEMA_FILE = SCHEMA_DIR / "scenario_schema.json"

# Logging / runtime
LOGGER_NAME = "catsim"

# -------------------------------------------------
# Numerical tolerances
# -------------------------------------------------
# Fock levels at the top of a truncated mode that must stay (nearly) empty.
LEAK_MARGIN = 5
LEAK_TOL = 1e-8

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-8
EIGEN_TOL = 1e-8

SQUEEZE_MAX = 2.0
BRANCH_MIN_PROBABILITY = 1e-12
# photon-number blocks lighter than this are skipped by blockwise propagation
BLOCK_DROP_TOL = 1e-14
POSITIVITY_WARN = -1e-6
MIN_CAT_AMPLITUDE = 0.1

# Master-equation integrator: relative local error target per unit of omega_b * t;
# the absolute target is LINDBLAD_ATOL_SCALE times smaller. Looser targets let
# the kernel of a low-rank density matrix drift below -EIGEN_TOL.
LINDBLAD_TOL = 1e-12
LINDBLAD_ATOL_SCALE = 1e-2
LINDBLAD_METHOD = "DOP853"

# -------------------------------------------------
# Reference parameters (angular frequencies in rad/s)
# -------------------------------------------------
BEC_OMEGA_B = 2.0e5
BEC_G = 6.0e5
OPTICAL_G = 1.1e5
SOLID_OMEGA_B = 1.0e7
SOLID_G = 1.0e4
LOSSY_KAPPA = 1.0e5
OPTICAL_ALPHA0 = 2.0

# Omega_sw / omega_b ratios that give two-, three- and four-component optical cats
CAT_RATIOS = {"two": -0.71, "three": -0.18, "four": 0.5}

# Default Fock truncations
MECH_CAVITY_DIM = 3
MECH_DIM = 60
OPTICAL_CAVITY_DIM = 30
OPTICAL_MECH_DIM = 180

# Default Wigner grids (x = Re xi, y = Im xi)
MECH_GRID = {"x_min": -6.0, "x_max": 3.0, "x_points": 121,
             "y_min": -4.0, "y_max": 4.0, "y_points": 121}
OPTICAL_GRID = {"x_min": -4.0, "x_max": 4.0, "x_points": 161,
                "y_min": -4.0, "y_max": 4.0, "y_points": 161}

# Output formatting: 12 significant digits, scientific notation
NUMBER_FORMAT = "%.11e"

SCENARIOS = (
    "amplitude_sweep",
    "concurrence",
    "mech_cat",
    "variance_sweep",
    "lossy_cat",
    "optical_cat",
    "selfcheck",
)

# Emitted table -> published figure panel whose data it holds (None: no figure)
TABLE_FIGURES = {
    "amplitude_time.csv": "Fig. 1(d)",
    "amplitude_scattering.csv": "Fig. 1(e)",
    "concurrence.csv": "Fig. 1(f)",
    "wigner_solid_state.csv": "Fig. 2(a)",
    "wigner_mechanical.csv": "Fig. 2(b-c)",
    "variances.csv": "Fig. 2(d)",
    "effective_params.csv": "Fig. 3(a)",
    "wigner_optical.csv": "Fig. 3(b-d)",
    "wigner_lossy.csv": "Fig. 4",
    "wigner_lossless.csv": "Fig. 4",
    "lossy_populations.csv": "Fig. 4",
    "selfcheck.csv": None,
}

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_GUARD = 2
EXIT_TOLERANCE = 3
