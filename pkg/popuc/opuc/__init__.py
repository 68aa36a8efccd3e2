from popuc.opuc.measures import (
    DiscreteMeasure,
    MeasureName,
    MeasureSpec,
    NamedMeasure,
    RationalWeight,
    bernstein_szego_weight,
    check_probability,
    measure_sequence,
    named_weight,
    parse_measure,
    weight_derivative,
)
from popuc.opuc.sequence import (
    OpucSequence,
    beta_from_points,
    gram_schmidt_discrete,
    normalize_points,
    popuc,
    szego_sequence,
)

__all__ = [
    "DiscreteMeasure",
    "MeasureName",
    "MeasureSpec",
    "NamedMeasure",
    "OpucSequence",
    "RationalWeight",
    "bernstein_szego_weight",
    "beta_from_points",
    "check_probability",
    "gram_schmidt_discrete",
    "measure_sequence",
    "named_weight",
    "normalize_points",
    "parse_measure",
    "popuc",
    "szego_sequence",
    "weight_derivative",
]
