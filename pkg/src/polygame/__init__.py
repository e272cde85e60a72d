"""Zero-sum games on polymatroid and contrapolymatroid base polytopes."""

from polygame.errors import (
    CapExceeded,
    InvalidInput,
    InvalidSpec,
    NotInBase,
    PolygameError,
    UnstableSystem,
)
from polygame.setfunc import (
    SUBMODULAR,
    SUPERMODULAR,
    AggregateFunction,
    OracleFunction,
    SetFunction,
    TableFunction,
    contract,
    dual,
    greedy_vertex,
    linear_optimize,
    membership,
    restrict,
    verify_structure,
)
from polygame.families import (
    queueing_function,
    rescue_function,
    scheduling_function,
    variable_speed_function,
)
from polygame.games import (
    GameSpec,
    Solution,
    Variant,
    expected_payoff,
    fw_decomposition,
    game_value,
    is_player2_optimal,
    player1_optimal,
    player2_optimal,
    ratio_extremize,
    solve,
)
from polygame.decompose import decompose_base_point
from polygame.fastpaths import (
    PermutationSampler,
    ZetaIndex,
    check_zeta_monotone,
    monotone_value,
    sample_many,
    sample_sigma,
    zeta_solve,
)
from polygame.kernels import BACKEND

__version__ = "0.1.0"
