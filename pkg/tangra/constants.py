import sys

MACHEPS = sys.float_info.epsilon

DEFAULT_MAX_LEVEL = 10
MAX_LEVEL_LIMIT = 40
DEFAULT_ROOT_RTOL = 1e-12
DEFAULT_RHO = 2.0
RHO_FLOOR = 1 + 1e-8

MAX_THETA_RETRIES = 32
DEGENERATE_THETA_FACTOR = 1e3
# modulus of the complex-mode shift, in prescaled coordinates
COMPLEX_SHIFT_RADIUS = 0.25

# exp() argument bound; e^{709} is the largest finite binary64 power of e
EXPONENT_CLAMP = 700.0
POLE_TOLERANCE = 1e-300
NEGLIGIBLE_RATIO = 1e-300

POLISH_MAX_STEPS = 20
# a stable root set counts as converged only while every Newton step stays
# below this fraction of the distance to the nearest other root
SETTLED_STEP_RATIO = 0.1
# working precision for Newton polishing and the settled check
EXTENDED_PRECISION_BITS = 128
DUPLICATE_RTOL = 1e-6
PAIRING_RTOL = 1e-12

ORACLE_TOL = 1e-13
ORACLE_STALL_TOL = 1e-8
ORACLE_MAX_ITER = 1000

PERFIDIOUS_MAX_DEGREE = 25

REAL_MODE = "real"
COMPLEX_MODE = "complex"
MODES = (REAL_MODE, COMPLEX_MODE)
