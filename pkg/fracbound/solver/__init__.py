from .line_search import SolverError, MAX_BACKTRACKS
from .minimize import SolveConfig, MinimizeReport, minimize_fixed_params, jacobi_diagonal
from .continuation import (ContinuationSchedule, Problem, StageRecord, SolveReport,
                           continuation_solve, volume_tune_epsilon, sigma_stage_exponent)
