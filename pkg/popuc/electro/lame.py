"""Generalized Lamé form of the ODE.

Since p = (1 - n)/z - h'/h and h = S1/S2, the logarithmic derivative
splits p into simple poles: t = -1 at every zero of S1, t = +1 at every
zero of S2 and t = 1 - n at the origin. Entries at the same location are
summed and dropped when they cancel.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from loguru import logger

from popuc.algebra.poly import ComplexPoly
from popuc.algebra.ratfun import (
    MERGE_TOLERANCE,
    RationalFn,
    partial_fractions,
    same_point,
)
from popuc.algebra.roots import RootOptions, factored_roots
from popuc.electro.models import LameForm
from popuc.errors import DegenerateLame
from popuc.ode import OdeCoefficients, Sampling, sample_points

ON_CIRCLE_TOLERANCE = 1e-9


def merge_lame_poles(
    zeros: Sequence[tuple[complex, int]],
    poles: Sequence[tuple[complex, int]],
    n: int,
    diagnostics: list[str] | None = None,
) -> list[tuple[complex, int]]:
    """Combine zero, pole and origin contributions into (location, t) pairs."""
    merged: list[list] = [[0j, 1 - n]]
    entries = [(r, -m) for r, m in zeros] + [(r, m) for r, m in poles]
    for r, t in entries:
        for entry in merged:
            if same_point(entry[0], r, MERGE_TOLERANCE):
                entry[1] += t
                if diagnostics is not None and entry[0] != 0:
                    diagnostics.append(f"merged t = {t:+d} into the charge at {entry[0]:.6g}")
                break
        else:
            merged.append([r, t])
    return [(complex(w), int(t)) for w, t in merged if t != 0]


def lame_from_h(h: RationalFn, n: int, *, roots: RootOptions | None = None) -> LameForm:
    """Lamé data read off h = S1/S2.

    A factor that S1 and S2 still share puts opposite entries at one
    location, and the merge drops them.
    """
    if h.is_zero:
        raise DegenerateLame(
            "S1 vanishes identically; h has no zeros to place charges at",
            hint="Choose beta so that h_n(z; beta; beta) is not the zero function.",
        )
    zeros = (roots or RootOptions()).factor(h.num)
    diagnostics: list[str] = []
    poles = merge_lame_poles(zeros, h.poles, n, diagnostics)
    logger.debug(
        "Lamé form at n = {}: {} zeros of S1, {} poles of h, {} charges",
        n,
        sum(m for _, m in zeros),
        sum(m for _, m in h.poles),
        len(poles),
    )
    return LameForm(poles=poles, n=n, S1=h.num, S2=h.den, diagnostics=diagnostics)


def lame_normal_form(
    ode: OdeCoefficients,
    h: RationalFn,
    *,
    sampling: Sampling | None = None,
    roots: RootOptions | None = None,
) -> LameForm:
    """Lamé form of `ode`, checked against p at sample points."""
    form = lame_from_h(h, ode.n, roots=roots)
    form.polynomial_part = partial_fractions(ode.p)[0]
    zs = sample_points(
        [w for w, _ in form.poles] + [r for r, _ in ode.p.poles],
        ode.region,
        sampling or Sampling(),
    )
    expected = np.asarray(ode.p(zs))
    scale = np.maximum(1.0, np.abs(expected))
    form.reconstruction_error = float(np.max(np.abs(form.p_value(zs) - expected) / scale))
    return form


def lame_from_fraction(
    P1: ComplexPoly,
    P2: ComplexPoly,
    n: int,
    *,
    tolerance: float = MERGE_TOLERANCE,
) -> LameForm:
    """Lamé data for h = P1/P2 given in a possibly non-reduced form.

    Roots shared by P1 and P2 cancel before charges are placed. A
    cancellation on the unit circle is kept as a diagnostic, since such a
    factor would otherwise put a charge on top of the mobile points.
    """
    if P1.is_zero:
        raise DegenerateLame("P1 vanishes identically")
    zeros = [[r, m] for r, m in factored_roots(P1)]
    poles = [[r, m] for r, m in factored_roots(P2)]
    diagnostics: list[str] = []
    on_circle: list[complex] = []
    for zero in zeros:
        for pole in poles:
            if zero[1] and pole[1] and same_point(zero[0], pole[0], tolerance):
                k = min(zero[1], pole[1])
                zero[1] -= k
                pole[1] -= k
                if abs(abs(zero[0]) - 1.0) <= ON_CIRCLE_TOLERANCE:
                    on_circle.append(complex(zero[0]))
                    note = f"cancelled common factor (z - {zero[0]:.6g})^{k} on the unit circle"
                    diagnostics.append(note)
                    logger.warning("{}", note)
    kept_zeros = [(r, m) for r, m in zeros if m]
    kept_poles = [(r, m) for r, m in poles if m]
    S1 = ComplexPoly.from_roots(
        [r for r, m in kept_zeros for _ in range(m)], leading=P1.leading
    )
    S2 = ComplexPoly.from_roots(
        [r for r, m in kept_poles for _ in range(m)], leading=P2.leading
    )
    return LameForm(
        poles=merge_lame_poles(kept_zeros, kept_poles, n, diagnostics),
        n=n,
        S1=S1,
        S2=S2,
        cancelled_on_circle=on_circle,
        diagnostics=diagnostics,
    )
