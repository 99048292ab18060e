"""Central defaults shared by the library and the CLI.

Every tunable that appears in a report is defined once here so that runs
are reproducible from (inputs, seed, version).
"""

# Search defaults
DEFAULT_DEPTH = 8
DEFAULT_TOL = 1e-6
DEFAULT_NODE_BUDGET = 10**7
DEFAULT_SEED = 0

# Numerical tolerances
ZERO_PROB_TOL = 1e-14        # probabilities below this count as zero
STATIONARITY_TOL = 1e-10     # ||pP - p||_inf
ROW_STOCHASTIC_TOL = 1e-12   # row sums of a transition matrix
RANK_TOL = 1e-10             # relative rank tolerance in algebra closure
INVARIANCE_TOL = 1e-8        # scale-relative subspace invariance residual
MEMBERSHIP_TOL = 1e-10       # polytope gauge membership
VERTEX_BUDGET = 10**4        # certification vertex cap
GROWTH_THRESHOLD = 1e6       # boundedness probe escape level
EXTREMALITY_TOL = 1e-6       # verdict tolerance for exact Lyapunov methods
RENORM_EVERY = 32            # steps between running-product rescales

# Env flag: set to "1" to force the pure-numpy kernel path.
NO_NUMBA_ENV = "JSRKIT_NO_NUMBA"
