"""Evolution of the discrete KdV equation and its lambda-deformation.

The lattice window is ``[0, M] x [0, N]``; ``x[m][n]`` is evolved towards the
north-east with

    x[m+1][n+1] = x[m][n] + 1/x[m+1][n] - lam/x[m][n+1]

(``lam = 1`` is the integrable equation).  Initial data live on a border: a
staircase ``Staircase(S)`` made of the sites with ``m + n = S`` and
``m + n = S + 1``, continued by column 0 above it and row 0 to its right.
``S = 0`` is the plain L-shape (row 0 plus column 0).  Sites below the
staircase are outside the domain.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .errors import DivisionBySeriesZero, PrecisionExhausted, ScenarioError, SeedConflict
from .exactnum import GF_DEFAULT, QQ, LaurentSeries, add, inv

log = logging.getLogger(__name__)

LSHAPE = "LShape"
STAIRCASE = "Staircase"
BORDER_SHAPES = (LSHAPE, STAIRCASE)

SEED_VARIANTS = (
    "GenericValue",
    "Zero",
    "Infinity",
    "TaishiPair",
    "VerticalTaishiPair",
    "ExplicitSeries",
)

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class EvolutionParams:
    """Deformation parameter, PRNG seed, truncation budget and coefficient field."""

    lam: Fraction = Fraction(1)
    prng_seed: int = 0
    truncation_budget: int = 16
    field: object = GF_DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.lam == 0:
            raise ScenarioError("lambda", "lambda must be nonzero")
        if not 0 <= self.prng_seed <= _U64:
            raise ScenarioError("prng_seed", "must be an unsigned 64-bit integer")
        if self.truncation_budget < 1:
            raise ScenarioError("truncation_budget", "must be positive")

    @property
    def integrable(self) -> bool:
        return self.lam == 1

    def with_budget(self, k: int) -> "EvolutionParams":
        return replace(self, truncation_budget=k)

    def with_seed(self, seed: int) -> "EvolutionParams":
        return replace(self, prng_seed=seed)


@dataclass(frozen=True)
class SeedSpec:
    """A prescribed singular (or explicit) value on the border.

    ``TaishiPair`` occupies ``len(weights) + 1`` vertically adjacent sites
    starting at ``position``; consecutive products are ``1 + c eps**w``
    (a zero weight leaves that pair unconstrained).  ``VerticalTaishiPair``
    is the horizontal analogue with products ``-1 + O(eps**w)``.
    """

    variant: str
    position: tuple[int, int]
    weight: int | None = None
    weights: tuple[int, ...] | None = None
    anchor: Fraction | None = None
    coefficient: Fraction | None = None
    value: Fraction | None = None
    series: LaurentSeries | None = None

    def __post_init__(self):
        if self.variant not in SEED_VARIANTS:
            raise ScenarioError("variant", f"unknown seed variant {self.variant!r}")
        object.__setattr__(self, "position", tuple(int(c) for c in self.position))
        if self.variant in ("TaishiPair", "VerticalTaishiPair"):
            ws = self.weights if self.weights is not None else (self.weight,)
            if any(w is None or w < 0 for w in ws) or not any(ws):
                raise ScenarioError("weight", f"{self.variant} needs nonnegative weights, not all zero")
            object.__setattr__(self, "weights", tuple(int(w) for w in ws))
        elif self.variant in ("Zero", "Infinity"):
            if self.weight is None or self.weight < 1:
                raise ScenarioError("weight", f"{self.variant} seed needs weight >= 1")
        elif self.variant == "GenericValue" and self.value is None:
            raise ScenarioError("value", "GenericValue seed needs a value")
        elif self.variant == "ExplicitSeries" and self.series is None:
            raise ScenarioError("series", "ExplicitSeries seed needs a series")

    # convenience constructors
    @classmethod
    def zero(cls, position, s: int = 1, coefficient=None) -> "SeedSpec":
        return cls("Zero", position, weight=s, coefficient=coefficient)

    @classmethod
    def infinity(cls, position, q: int = 1, coefficient=None) -> "SeedSpec":
        return cls("Infinity", position, weight=q, coefficient=coefficient)

    @classmethod
    def taishi(cls, position, weights, anchor=None) -> "SeedSpec":
        if isinstance(weights, int):
            weights = (weights,)
        return cls("TaishiPair", position, weights=tuple(weights), anchor=anchor)

    @classmethod
    def vertical_taishi(cls, position, weights, anchor=None) -> "SeedSpec":
        if isinstance(weights, int):
            weights = (weights,)
        return cls("VerticalTaishiPair", position, weights=tuple(weights), anchor=anchor)

    @classmethod
    def generic(cls, position, value) -> "SeedSpec":
        return cls("GenericValue", position, value=Fraction(value))

    @classmethod
    def explicit(cls, position, series: LaurentSeries) -> "SeedSpec":
        return cls("ExplicitSeries", position, series=series)

    def sites(self) -> list[tuple[int, int]]:
        m, n = self.position
        if self.variant == "TaishiPair":
            return [(m, n + i) for i in range(len(self.weights) + 1)]
        if self.variant == "VerticalTaishiPair":
            return [(m + i, n) for i in range(len(self.weights) + 1)]
        return [(m, n)]

    @property
    def total_weight(self) -> int:
        if self.weights is not None:
            return sum(self.weights)
        return self.weight or 0


@dataclass
class Grid:
    """Finite window of cell values; ``cells[m][n]`` is ``None`` outside the domain
    or where not yet computed."""

    M: int
    N: int
    cells: list
    border: frozenset
    border_shape: str = LSHAPE
    staircase: int = 0
    seeds: tuple = ()
    params: EvolutionParams = field(default_factory=EvolutionParams)

    def __getitem__(self, mn):
        m, n = mn
        return self.cells[m][n]

    def in_domain(self, m: int, n: int) -> bool:
        return 0 <= m <= self.M and 0 <= n <= self.N and m + n >= self.staircase

    def is_border(self, m: int, n: int) -> bool:
        return (m, n) in self.border

    def coords(self):
        for m in range(self.M + 1):
            for n in range(self.N + 1):
                if self.in_domain(m, n):
                    yield m, n

    @property
    def complete(self) -> bool:
        return all(self.cells[m][n] is not None for m, n in self.coords())

    def copy(self) -> "Grid":
        return replace(self, cells=[list(col) for col in self.cells])


def border_sites(shape: str, M: int, N: int, staircase: int = 0) -> frozenset:
    """Initial-value sites of the window for the given border shape."""
    if shape not in BORDER_SHAPES:
        raise ScenarioError("border_shape", f"unknown border shape {shape!r}")
    S = staircase if shape == STAIRCASE else 0
    if S < 0 or S + 1 > M or S > N:
        raise ScenarioError("staircase", f"staircase size {S} does not fit window {M}x{N}")
    sites = set()
    for m in range(S + 1):
        sites.add((m, S - m))
    for m in range(1, S + 2):
        sites.add((m, S + 1 - m))
    for n in range(S, N + 1):
        sites.add((0, n))
    for m in range(S, M + 1):
        sites.add((m, 0))
    return frozenset(sites)


def staircase_outer_corners(staircase: int) -> list[tuple[int, int]]:
    """Border sites whose north and east neighbours are both computed.

    A zero placed on one of these produces the elementary-cell singularity.
    Ordered from north-west to south-east.
    """
    return [(m, staircase + 1 - m) for m in range(1, staircase + 1)]


def staircase_inner_corners(staircase: int) -> list[tuple[int, int]]:
    return [(m, staircase - m) for m in range(staircase + 1)]


def contiguous_zero_sites(staircase: int, count: int, start: int | None = None, corner: str = "outer"):
    """``count`` consecutive corners of the staircase, centred unless ``start`` is given."""
    corners = staircase_outer_corners(staircase) if corner == "outer" else staircase_inner_corners(staircase)
    if count > len(corners):
        raise ScenarioError("num_zeros", f"staircase {staircase} has only {len(corners)} {corner} corners")
    if start is None:
        start = (len(corners) - count) // 2
    return corners[start : start + count]


def default_truncation(seeds: Sequence[SeedSpec]) -> int:
    """``4 W + 8`` with ``W`` the sum of all seeded weights."""
    return 4 * sum(s.total_weight for s in seeds) + 8


def _generic(rng: random.Random) -> Fraction:
    u = rng.randint(1, 97)
    v = rng.randint(1, 97)
    return Fraction(u, v) * rng.choice((1, -1))


def _seed_values(seed: SeedSpec, rng: random.Random, K: int, ring) -> list[LaurentSeries]:
    const = lambda c: LaurentSeries.constant(c, K, ring)  # noqa: E731
    var = seed.variant
    if var == "GenericValue":
        return [const(seed.value)]
    if var == "ExplicitSeries":
        s = seed.series
        if s.ring != ring:
            s = LaurentSeries.from_terms(s.terms(), s.known_order, ring)
        return [s.truncate(K)]
    if var in ("Zero", "Infinity"):
        c = seed.coefficient if seed.coefficient is not None else _generic(rng)
        e = seed.weight if var == "Zero" else -seed.weight
        return [LaurentSeries.monomial(c, e, K, ring)]
    # taishi: chained products 1 + c eps^w (horizontal) or -(1 + c eps^w) (vertical)
    sign = 1 if var == "TaishiPair" else -1
    a = seed.anchor if seed.anchor is not None else _generic(rng)
    values = [const(a)]
    for w in seed.weights:
        if w == 0:
            values.append(const(_generic(rng)))
            continue
        prod = LaurentSeries.from_terms({0: sign, w: sign * _generic(rng)}, K, ring)
        values.append(prod * inv(values[-1]))
    return values


def build_initial(
    seeds: Sequence[SeedSpec],
    shape: str,
    M: int,
    N: int,
    params: EvolutionParams,
    staircase: int = 0,
) -> Grid:
    """Fill the border: seeded sites get their prescribed values, the rest
    independent generic rationals drawn from ``params.prng_seed``."""
    K = params.truncation_budget
    ring = params.field
    border = border_sites(shape, M, N, staircase)
    S = staircase if shape == STAIRCASE else 0
    cells = [[None] * (N + 1) for _ in range(M + 1)]
    rng = random.Random(params.prng_seed)
    for m, n in sorted(border):
        cells[m][n] = LaurentSeries.constant(_generic(rng), K, ring)
    seed_rng = random.Random(params.prng_seed ^ 0x9E3779B97F4A7C15)
    taken: dict[tuple[int, int], int] = {}
    for i, seed in enumerate(seeds):
        sites = seed.sites()
        for site in sites:
            if site not in border:
                raise ScenarioError(f"seeds[{i}].position", f"site {site} is not on the {shape} border")
            if site in taken:
                raise SeedConflict(f"seeds {taken[site]} and {i} both claim site {site}")
            taken[site] = i
        for (m, n), value in zip(sites, _seed_values(seed, seed_rng, K, ring)):
            cells[m][n] = value
    return Grid(M, N, cells, border, shape, S, tuple(seeds), params)


def step_cell(x_mn: LaurentSeries, x_m1n: LaurentSeries, x_mn1: LaurentSeries, params: EvolutionParams) -> LaurentSeries:
    """``x_mn + 1/x_m1n - lam/x_mn1``, exactly (up to the tracked known order)."""
    a = inv(x_m1n)
    b = inv(x_mn1)
    if params.lam != 1:
        b = b.scale(params.lam)
    return add(add(x_mn, a), -b)


def evolve(grid: Grid, params: EvolutionParams | None = None) -> Grid:
    """Fill every interior cell by anti-diagonal sweeps ``m + n = const``."""
    params = params or grid.params
    out = grid.copy()
    out.params = params
    cells = out.cells
    M, N, S = out.M, out.N, out.staircase
    border = out.border
    lam = params.lam
    ring = params.field
    scale_lam = lam != 1
    lam_c = ring.coerce(lam)
    inverses: dict[tuple[int, int], LaurentSeries] = {}

    def inverse(m, n):
        key = (m, n)
        r = inverses.get(key)
        if r is None:
            try:
                r = inv(cells[m][n])
            except DivisionBySeriesZero as exc:
                raise DivisionBySeriesZero(str(exc), key) from None
            inverses[key] = r
        return r

    for d in range(S + 2, M + N + 1):
        for m in range(max(1, d - N), min(M, d - 1) + 1):
            n = d - m
            if (m, n) in border:
                continue
            a = inverse(m, n - 1)
            b = inverse(m - 1, n)
            if scale_lam:
                b = b.scale(lam_c)
            x = add(add(cells[m - 1][n - 1], a), -b)
            if x.is_truncated_zero:
                raise PrecisionExhausted(
                    f"all coefficients cancel below O(eps^{x.known_order + 1})", (m, n)
                )
            cells[m][n] = x
        # cells two anti-diagonals back are no longer needed as inverses
        for m in range(max(0, d - 1 - N), min(M, d - 1) + 1):
            inverses.pop((m, d - 1 - m), None)
    log.debug("evolved %dx%d window, K=%d, lam=%s", M, N, params.truncation_budget, lam)
    return out


def simulate(
    seeds: Sequence[SeedSpec],
    shape: str,
    M: int,
    N: int,
    params: EvolutionParams,
    staircase: int = 0,
) -> Grid:
    return evolve(build_initial(seeds, shape, M, N, params, staircase), params)


def grid_series_json(grid: Grid) -> dict:
    """Full series of every cell (large); keys are ``"m,n"``."""
    from .exactnum import series_to_json

    return {
        "window": [grid.M, grid.N],
        "cells": {
            f"{m},{n}": series_to_json(grid.cells[m][n])
            for m, n in grid.coords()
            if grid.cells[m][n] is not None
        },
    }


# -- one-dimensional mappings ------------------------------------------------

MAP_IDS = ("Eq1", "Eq2")


def iterate_map_1d(map_id: str, a, x_prev: LaurentSeries, x_cur: LaurentSeries, steps: int) -> list[LaurentSeries]:
    """Orbit ``[x_cur, x_1, ..., x_steps]`` of a second-order mapping.

    ``Eq2``: ``x[n+1] + x[n-1] = a + 1/x[n]`` (integrable),
    ``Eq1``: ``x[n+1] + x[n-1] = a + 1/x[n]**2``.
    """
    if map_id not in MAP_IDS:
        raise ValueError(f"map_id must be one of {MAP_IDS}")
    if a == 0:
        raise ValueError("a must be nonzero")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    orbit = [x_cur]
    prev, cur = x_prev, x_cur
    for _ in range(steps):
        r = inv(cur)
        if map_id == "Eq1":
            r = r * r
        nxt = (r + a) - prev
        orbit.append(nxt)
        prev, cur = cur, nxt
    return orbit


__all__ = [
    "EvolutionParams",
    "SeedSpec",
    "Grid",
    "LSHAPE",
    "STAIRCASE",
    "border_sites",
    "staircase_outer_corners",
    "staircase_inner_corners",
    "contiguous_zero_sites",
    "default_truncation",
    "build_initial",
    "step_cell",
    "evolve",
    "simulate",
    "grid_series_json",
    "iterate_map_1d",
    "QQ",
    "GF_DEFAULT",
]
