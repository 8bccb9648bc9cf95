"""
Constants used throughout pnpvamp

Centralizes tolerances, clamps, Monte Carlo defaults and file names
so solvers, state evolution and scenarios agree on the same numbers.
"""

# =============================================================================
# PRECISION CLAMPS
# =============================================================================

GAMMA_MIN = 1e-11  # Lower clamp on every precision (gamma) value
GAMMA_MAX = 1e11  # Upper clamp on every precision (gamma) value

# Divergences outside (ALPHA_EPS, 1 - ALPHA_EPS) are degenerate
ALPHA_EPS = 1e-8

# Practical initialization of the denoiser input precision
DEFAULT_GAMMA10 = 1e-6

# Postulated noise precision when the true noise is zero
NOISELESS_GAMMA_W = 1e10


# =============================================================================
# MONTE CARLO DEFAULTS
# =============================================================================

MC_PROBES = 8  # Probes per Monte Carlo divergence estimate
MC_EPSILON = 1e-4  # Relative finite-difference step, scaled by max(1, ||r||/sqrt(N))

SE_TRIALS = 500  # Noise draws per E1/A1 evaluation in state evolution

STEIN_MIN_OFFDIAG = 1e-12  # |S12| below this makes the Stein check undefined


# =============================================================================
# ALGORITHM DEFAULTS
# =============================================================================

DEFAULT_ITERATIONS = 10
DEFAULT_TRIALS = 5
DEFAULT_TAU10 = 1.0

LIFTED_INNER_ITERS = 20  # Alternating rounds inside the rank-one denoiser

# AMP is flagged diverged once MSE exceeds this multiple of its initial MSE
AMP_DIVERGENCE_FACTOR = 1e3
AMP_DIVERGENCE_PATIENCE = 3  # consecutive iterations above the threshold


# =============================================================================
# METRICS
# =============================================================================

DB_FLOOR = -300.0  # Reported in place of -inf for exact recoveries
PSNR_CEILING = 99.0  # Reported for zero-error image recoveries
PIXEL_MAX = 255.0
LIFT_SUCCESS_DB = -60.0  # nmse_outer below this counts as a success

FREQUENCY_GRID = 512  # Points used for Lipschitz bounds of convolutions


# =============================================================================
# FILE NAMES
# =============================================================================

DEFAULT_OUTPUT_ROOT = "./outputs"
RESULTS_CSV = "results.csv"
SE_CSV = "se.csv"
RUNTIME_CSV = "runtime.csv"
META_JSON = "meta.json"
RECOVERED_PGM = "recovered.pgm"

# CNN weight files start with this magic, then a uint32 header length
CNN_WEIGHTS_MAGIC = b"PNPW"
