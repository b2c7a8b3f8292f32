MODULE_NAME = 'oabounds'

from ._core import (
    ArraySpec,
    BoundKind,
    BoundTarget,
    GvVariant,
    ScaledParams,
    block_of,
    running_cost,
    scientific,
)
from ._exact import (
    BigCount,
    EnumerationSizeError,
    brute_force_oracle,
    direct_bound,
    direct_op_count,
    dp_bound,
    dp_log_bound,
    dp_log_table,
)
from ._asymptotics import (
    LdEstimate,
    TiltProfile,
    entropy,
    ld_estimate,
    limit_grid,
    optimal_tilt,
    prelimit_grid,
    rate_sweep,
    solve_lambda,
    value_function,
)
from ._simulate import (
    DiagnosticRow,
    IsConfig,
    IsResult,
    is_estimate,
    optimality_diagnostic,
    weight_of_endpoint,
)
from ._log import disable_logger, enable_logger
