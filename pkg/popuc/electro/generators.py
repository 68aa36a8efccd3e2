"""Electric field generators for a prescribed set of points on the circle.

Given n >= 2 distinct points x_j:

1. beta = (-1)^{n+1} prod conj(x_j) and mu_n = (1/n) sum delta_{x_j};
2. Gram-Schmidt gives phi_0..phi_{n-1} in L^2(mu_n);
3. nu_n = |phi_{n-1}|^{-2} dtheta/2pi has the same degree-n
   paraorthogonal polynomial, whose zeros are exactly the x_j;
4. G, D, J of nu_n on the chosen region give h(z; beta; beta) = S1/S2;
5. charges -1/2 at the zeros of S1, +1/2 at the zeros of S2 and
   (1 - n)/2 at the origin, with coincident charges summed.

The resulting configuration holds the x_j in total equilibrium.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from loguru import logger

from popuc.algebra.roots import RootOptions
from popuc.cauchy import Region
from popuc.electro.lame import lame_from_h, lame_normal_form
from popuc.electro.models import ChargeConfiguration, LameForm
from popuc.errors import GeneratorCollision
from popuc.ode import Sampling, h_fn, second_order_ode
from popuc.opuc.measures import DEFAULT_QUADRATURE_POINTS, DiscreteMeasure
from popuc.opuc.sequence import beta_from_points, normalize_points
from popuc.pipeline import Measure, build_problem

DEFAULT_COLLISION_TOLERANCE = 1e-8


def _check_collisions(
    config: ChargeConfiguration, points: np.ndarray, tolerance: float
) -> float:
    """Smallest generator-to-point distance; raises below `tolerance`."""
    if not config.generators:
        return float("inf")
    gaps = np.abs(points[:, None] - config.locations()[None, :])
    closest = float(np.min(gaps))
    if closest < tolerance:
        j, i = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        raise GeneratorCollision(
            f"Generator at {config.generators[i].location:.12g} is {closest:.3g} from point {j}",
            hint="A zero of S1 or S2 coincides with one of the points, so the force there is undefined.",
        )
    return closest


def generators_from_points(
    points: Sequence[complex],
    *,
    region: Region | str = Region.EXTERIOR,
    collision_tolerance: float = DEFAULT_COLLISION_TOLERANCE,
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS,
    roots: RootOptions | None = None,
) -> tuple[ChargeConfiguration, list[str]]:
    """Generators putting `points` in total equilibrium, plus diagnostics."""
    x = normalize_points(points)
    n = x.size
    beta = beta_from_points(x)
    problem = build_problem(
        DiscreteMeasure(points=tuple(complex(p) for p in x)),
        n,
        region,
        quadrature_points=quadrature_points,
    )
    h = h_fn(problem.seq, n, problem.gdj, beta, beta)
    form = lame_from_h(h, n, roots=roots)
    config = form.charges()
    closest = _check_collisions(config, x, collision_tolerance)

    diagnostics = list(form.diagnostics)
    diagnostics.append(f"beta = {beta:.12g}")
    diagnostics.append(f"deg S1 = {form.S1.degree}, deg S2 = {form.S2.degree}")
    diagnostics.append(f"closest generator-to-point distance {closest:.3e}")
    logger.debug("{} generators for {} points ({})", len(config.generators), n, region)
    return config, diagnostics


def generators_from_measure(
    measure: Measure,
    n: int,
    beta: complex,
    region: Region | str = Region.EXTERIOR,
    *,
    sampling: Sampling | None = None,
    quadrature_points: int = DEFAULT_QUADRATURE_POINTS,
    roots: RootOptions | None = None,
) -> tuple[ChargeConfiguration, LameForm]:
    """Generators read off the Lamé form of the measure's own ODE at (n, beta)."""
    problem = build_problem(measure, n, region, quadrature_points=quadrature_points)
    ode = second_order_ode(problem.seq, n, problem.gdj, beta)
    h = h_fn(problem.seq, n, problem.gdj, beta, beta)
    form = lame_normal_form(ode, h, sampling=sampling, roots=roots)
    return form.charges(), form
