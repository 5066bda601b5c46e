"""Shift operators on weighted L^p spaces of directed trees."""

from ._core import (
    TreeFunction,
    TreeModel,
    WeightMap,
    apply_B,
    apply_B_pow,
    apply_S,
    apply_S_pow,
    apply_Sstar,
    apply_T_n,
    backward_bound,
    check_unitary_equivalence,
    decay_csv,
    decay_json,
    decide_backward_json,
    decide_forward_json,
    dual_pairing,
    estimate_sigma,
    load_tree,
    load_weights,
    necessary_sum,
    norm_p,
    omega,
    omega_star,
    random_function,
    run_shadow,
    shift_norm,
    theta,
)

__all__ = [
    "TreeFunction",
    "TreeModel",
    "WeightMap",
    "apply_B",
    "apply_B_pow",
    "apply_S",
    "apply_S_pow",
    "apply_Sstar",
    "apply_T_n",
    "backward_bound",
    "check_unitary_equivalence",
    "decay_csv",
    "decay_json",
    "decide_backward_json",
    "decide_forward_json",
    "dual_pairing",
    "estimate_sigma",
    "load_tree",
    "load_weights",
    "necessary_sum",
    "norm_p",
    "omega",
    "omega_star",
    "random_function",
    "run_shadow",
    "shift_norm",
    "theta",
]
