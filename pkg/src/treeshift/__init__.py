"""Topological entropy of tree shifts of finite type via recursive count systems."""

from .api import Analysis, analyze, entropy
from .classify import RatioTrace, TypeLabel, classify_type_22, detect_empirically, is_equal_growth
from .entropy import EntropyResult, LogState, degree_estimate, entropy_generic, iterate_log
from .errors import ConsistencyError, ConvergenceError, InfeasibleError, UnsupportedCase, ValidationError
from .oracle import count_rooted, verify_snre
from .series import entropy_type_C, entropy_type_D, entropy_type_E, entropy_type_O
from .sft import (
    Alphabet,
    BasicSet,
    ForbiddenSet,
    TransitionMatrices,
    ball_size,
    basic_to_matrices,
    forbidden_to_basic,
    free_ball_size,
    is_matrix_representable,
    matrices_to_basic,
)
from .shifts import FreeGroupGms, chessboard_basic, fd_gms_entropy, gms_basic
from .snre import Snre, build_snre, classify_symbols, connects, indicator_vector, induces

__version__ = "0.1.0"
