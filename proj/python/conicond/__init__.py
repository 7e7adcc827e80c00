"""Condition numbers for homogeneous conic feasibility problems."""

import json

from ._conicond import (
    Cone,
    ConicondError,
    classify_feasibility,
    cone_subspace_angle,
    gcc_condition,
    grassmann_condition,
    grassmann_distances,
    kappa,
    parse_cone,
    polar_decompose,
    principal_angles,
    rank_deficiency_distance,
    renegar_condition,
    run_experiment,
    singular_values,
    smallest_enclosing_cap,
    witness_image,
    witness_kernel,
)
from ._conicond import analyze_json


def analyze(cone, a, witnesses=False):
    """Condition report as a dict; infinities are the string "inf"."""
    if isinstance(cone, str):
        cone = parse_cone(cone)
    return json.loads(analyze_json(cone, a, witnesses))


__all__ = [
    "Cone",
    "ConicondError",
    "analyze",
    "analyze_json",
    "classify_feasibility",
    "cone_subspace_angle",
    "gcc_condition",
    "grassmann_condition",
    "grassmann_distances",
    "kappa",
    "parse_cone",
    "polar_decompose",
    "principal_angles",
    "rank_deficiency_distance",
    "renegar_condition",
    "run_experiment",
    "singular_values",
    "smallest_enclosing_cap",
    "witness_image",
    "witness_kernel",
]
