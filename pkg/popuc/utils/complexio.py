"""Complex number codecs for JSON, CSV and command-line flags.

Complex values always travel as [re, im] pairs in JSON and as two
separate columns in CSV. Command-line flags accept "re,im", a bare real
number, or Python's own "1-2j" notation.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import Any

from popuc.errors import InvalidConfiguration


def complex_pair(value: complex) -> list[float]:
    """Encode as [re, im]; negative zero is normalized so output is stable."""
    z = complex(value)
    return [z.real + 0.0, z.imag + 0.0]


def complex_pairs(values: Iterable[complex]) -> list[list[float]]:
    return [complex_pair(v) for v in values]


def parse_complex(value: Any) -> complex:
    """Decode a complex number from any of the accepted spellings."""
    if isinstance(value, complex):
        return value
    if isinstance(value, bool):
        raise InvalidConfiguration(f"Expected a complex number, got {value!r}")
    if isinstance(value, int | float):
        return complex(value)
    if isinstance(value, Sequence) and not isinstance(value, str):
        if len(value) != 2:
            raise InvalidConfiguration(
                f"Complex pairs need exactly two entries, got {len(value)}",
                hint="Write complex numbers as [re, im].",
            )
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip()
        try:
            if "," in text:
                re_part, im_part = text.split(",", 1)
                return complex(float(re_part), float(im_part))
            return complex(text.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise InvalidConfiguration(
                f"Cannot parse complex number {value!r}",
                hint="Use 're,im' (for example '0.5,0') or '0.3+0.4j'.",
            ) from exc
    raise InvalidConfiguration(f"Expected a complex number, got {type(value).__name__}")
