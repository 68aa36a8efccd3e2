"""From a measure description to the data every ODE construction starts from.

Discrete measures go through the generator construction's first three
steps: Gram-Schmidt on the points, then the Bernstein-Szegő weight
1/|phi_{n-1}|^2, whose sequence shares Phi_0..Phi_{n-1} with the discrete
one. All other measures use their own sequence and weight directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from loguru import logger

from popuc.algebra.ratfun import RationalFn
from popuc.cauchy import GdjTriple, Region, build_gdj
from popuc.errors import InvalidConfiguration
from popuc.opuc.measures import (
    DEFAULT_QUADRATURE_POINTS,
    DiscreteMeasure,
    NamedMeasure,
    RationalWeight,
    bernstein_szego_weight,
    measure_sequence,
    weight_derivative,
)
from popuc.opuc.sequence import OpucSequence, gram_schmidt_discrete

Measure = NamedMeasure | RationalWeight | DiscreteMeasure


@dataclass(frozen=True, slots=True)
class Problem:
    """A measure at a fixed degree, ready for h, the ODE and the system.

    `weight_measure` is the absolutely continuous measure whose weight
    derivative `f` feeds the integrals; for discrete input it is the
    Bernstein-Szegő measure and `seq` is that measure's sequence.
    """

    measure: Measure
    n: int
    region: Region
    seq: OpucSequence
    weight_measure: NamedMeasure | RationalWeight
    f: RationalFn
    gdj: GdjTriple


def build_problem(
    measure: Measure,
    n: int | None = None,
    region: Region | str = Region.EXTERIOR,
    *,
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS,
) -> Problem:
    """Assemble sequence, weight derivative and G, D, J for degree n.

    For a discrete measure n defaults to (and may not exceed) the number
    of points.
    """
    region = Region(region)
    if isinstance(measure, DiscreteMeasure):
        count = len(measure.points)
        n = count if n is None else n
        if not 2 <= n <= count:
            raise InvalidConfiguration(
                f"Degree {n} is not available for a {count}-point measure",
                hint="Discrete measures support degrees 2..len(points).",
            )
        discrete = gram_schmidt_discrete(measure.points)
        weight_measure: NamedMeasure | RationalWeight = bernstein_szego_weight(discrete, n)
        seq = discrete.bernstein_szego_extension(n)
    else:
        if n is None or n < 1:
            raise InvalidConfiguration(
                f"Degree must be a positive integer, got {n}",
                hint="Pass --n for named and rational-weight measures.",
            )
        weight_measure = measure
        seq = measure_sequence(measure, n, quadrature_points=quadrature_points)

    f = weight_derivative(weight_measure)
    gdj = build_gdj(seq, n, f, region)
    logger.debug(
        "Built {} problem at n = {}: f has {} poles, G has {}",
        region.value,
        n,
        len(f.poles),
        len(gdj.G.poles),
    )
    return Problem(
        measure=measure,
        n=n,
        region=region,
        seq=seq,
        weight_measure=weight_measure,
        f=f,
        gdj=gdj,
    )
