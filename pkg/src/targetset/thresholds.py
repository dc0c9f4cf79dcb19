"""Threshold assignments: random, constant, proportional and explicit.

All degree-based formulas read the in-degree, the quantity the activation rule
counts.  On bidirected graphs this is simply the degree.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from .graph import Digraph


class ThresholdError(ValueError):
    pass


@dataclass(frozen=True)
class ThresholdAssignment:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        for v in self.values:
            if not isinstance(v, int) or v < 0:
                raise ThresholdError(f"thresholds must be non-negative integers, got {v!r}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)


def random_thresholds(g: Digraph, seed: int | None = None) -> ThresholdAssignment:
    """Uniform integer in [1, d_in(v)]; nodes without in-neighbors get 1."""
    rng = random.Random(seed)
    return ThresholdAssignment(
        tuple(rng.randint(1, d) if d >= 1 else 1 for d in map(len, g.in_adj))
    )


def constant_thresholds(g: Digraph, t_const: int) -> ThresholdAssignment:
    if t_const < 1:
        raise ThresholdError("constant threshold must be >= 1")
    return ThresholdAssignment(tuple(min(t_const, len(a)) for a in g.in_adj))


def proportional_thresholds(g: Digraph, alpha: float | Fraction | str) -> ThresholdAssignment:
    """ceil(alpha * d_in(v)), evaluated exactly.

    Floats are read through their decimal repr so that 0.3 * 10 gives 3, not 4.
    """
    a = Fraction(alpha) if isinstance(alpha, (Fraction, str)) else Fraction(repr(float(alpha)))
    if not 0 < a < 1:
        raise ThresholdError("alpha must lie strictly between 0 and 1")
    return ThresholdAssignment(tuple(math.ceil(a * len(adj)) for adj in g.in_adj))


def explicit_thresholds(values: Sequence[int], g: Digraph | None = None, n: int | None = None) -> ThresholdAssignment:
    expected = g.n if g is not None else n
    if expected is not None and len(values) != expected:
        raise ThresholdError(f"expected {expected} thresholds, got {len(values)}")
    return ThresholdAssignment(tuple(values))


def read_threshold_file(path: str | Path, g: Digraph) -> ThresholdAssignment:
    """One integer per line, in dense node order (blank and '#' lines skipped)."""
    vals = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise ThresholdError(f"{path}:{lineno}: not an integer: {line!r}") from None
    return explicit_thresholds(vals, g)


@dataclass(frozen=True)
class Scheme:
    """A parsed threshold scheme such as ``random:7``, ``const:3``, ``prop:0.5``."""

    kind: str
    param: str | None = None

    @property
    def name(self) -> str:
        if self.kind == "random" or self.param is None:
            return self.kind
        return f"{self.kind}:{self.param}"

    @property
    def randomized(self) -> bool:
        return self.kind == "random"

    def build(self, g: Digraph, seed: int | None = None) -> ThresholdAssignment:
        if self.kind == "random":
            return random_thresholds(g, int(self.param) if self.param is not None else seed)
        if self.kind == "const":
            return constant_thresholds(g, int(self.param))
        if self.kind == "prop":
            return proportional_thresholds(g, self.param)
        if self.kind == "file":
            return read_threshold_file(self.param, g)
        raise ThresholdError(f"unknown scheme kind {self.kind!r}")


def parse_scheme(text: str) -> Scheme:
    kind, _, param = text.partition(":")
    kind = kind.strip().lower()
    param = param.strip() or None
    if kind == "majority" and param is None:
        return Scheme("prop", "0.5")
    if kind not in ("random", "const", "prop", "file"):
        raise ThresholdError(f"unknown threshold scheme {text!r}")
    try:
        if kind == "random" and param is not None:
            int(param)
        elif kind == "const":
            if param is None or int(param) < 1:
                raise ValueError
        elif kind == "prop":
            if param is None or not 0 < Fraction(param) < 1:
                raise ValueError
    except ValueError:
        raise ThresholdError(f"bad parameter in threshold scheme {text!r}") from None
    if kind == "file" and param is None:
        raise ThresholdError("file scheme needs a path")
    return Scheme(kind, param)


# random, const t=2..10, prop alpha=0.1..0.9
STUDY_SCHEMES: tuple[Scheme, ...] = (
    (Scheme("random"),)
    + tuple(Scheme("const", str(t)) for t in range(2, 11))
    + tuple(Scheme("prop", f"0.{i}") for i in range(1, 10))
)
