"""Plain-text ideal files: a ``ring p=<prime> n=<vars>`` header, then one generator per line."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Union

from .ideal import Ideal
from .ring import Ring, RingError

_HEADER = re.compile(r"ring\s+p=(\d+)\s+n=(\d+)\s*$")


def parse_ring_header(line: str) -> Ring:
    m = _HEADER.match(line.strip())
    if not m:
        raise RingError(f"bad ring header {line!r}; expected 'ring p=<prime> n=<vars>'")
    return Ring(int(m.group(2)), int(m.group(1)))


def ideal_to_text(ideal: Ideal) -> str:
    lines = [ideal.ring.header()] + [str(g) for g in ideal.generators]
    return "\n".join(lines) + "\n"


def ideal_from_text(text: str) -> Ideal:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise RingError("empty ideal file")
    ring = parse_ring_header(lines[0])
    return Ideal(ring, [ring.parse(ln) for ln in lines[1:]])


def read_ideal(path: Union[str, Path]) -> Ideal:
    return ideal_from_text(Path(path).read_text())


def write_ideal(ideal: Ideal, path: Union[str, Path]) -> None:
    Path(path).write_text(ideal_to_text(ideal))
