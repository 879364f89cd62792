"""Scenario orchestration and three-way checks.

A strip/diagonal scenario is evolved on the lattice, its strip profile is
measured west (before) and east (after) of the diagonals, and the east
profile is compared with the symbolic dynamics and, where one exists, with the
closed-form prediction.  The module also hosts the confinement, transparency
and one-dimensional smoke checks.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .classify import (
    UNDEFINED,
    StripProfile,
    ValuationMap,
    detect_confined_clusters,
    detect_strips,
    profiles_vector,
    valuation_map,
)
from .errors import DivisionBySeriesZero, InconsistentStrip, PrecisionExhausted, ScenarioError
from .exactnum import QQ, LaurentSeries, ring_from_name, series_from_json, series_to_json
from .lattice import (
    BORDER_SHAPES,
    LSHAPE,
    SEED_VARIANTS,
    STAIRCASE,
    EvolutionParams,
    Grid,
    SeedSpec,
    contiguous_zero_sites,
    default_truncation,
    iterate_map_1d,
    simulate,
)
from .rules import (
    WeightVector,
    canonicalize,
    closed_form_taishi,
    interact_diagonal,
    scenario_predict,
    split_taishi,
)

log = logging.getLogger(__name__)

_U64 = (1 << 64) - 1

STRIP_BASE_ROW = 8

__all__ = [
    "Scenario",
    "Region",
    "CrosscheckReport",
    "ConfinementVerdict",
    "TransparencyVerdict",
    "Smoke1DReport",
    "strip_diagonal_scenario",
    "auto_window",
    "run_crosscheck",
    "confinement_test",
    "transparency_test",
    "interference_shift",
    "smoke_1d",
    "sweep",
    "summary_table",
    "REFERENCE_SCENARIOS",
    "reference_scenario",
]


# -- scenario description ----------------------------------------------------


@dataclass(frozen=True)
class Region:
    """A measurement band: inclusive column and row ranges, plus the cumulative
    diagonal weight that has crossed the strips by the time they reach it."""

    columns: tuple[int, int]
    rows: tuple[int, int] | None = None
    after_q: int = 0

    def to_json(self) -> dict:
        out = {"columns": list(self.columns), "after_q": self.after_q}
        if self.rows is not None:
            out["rows"] = list(self.rows)
        return out

    @classmethod
    def from_json(cls, obj: dict, where: str) -> "Region":
        try:
            cols = tuple(int(c) for c in obj["columns"])
            rows = obj.get("rows")
            rows = None if rows is None else tuple(int(r) for r in rows)
            return cls(cols, rows, int(obj.get("after_q", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(where, f"bad measurement region: {exc}") from None


@dataclass(frozen=True)
class Scenario:
    params: EvolutionParams
    seeds: tuple
    window: tuple[int, int] | None = None
    border_shape: str = LSHAPE
    staircase: int = 0
    margin: int = 4
    name: str = ""
    expected: WeightVector | None = None
    intermediate: tuple = ()

    @property
    def q_total(self) -> int:
        return sum(s.weight for s in self.seeds if s.variant == "Infinity")

    @property
    def strip_seeds(self) -> list[SeedSpec]:
        return [s for s in self.seeds if s.variant == "TaishiPair"]

    def resolved_window(self) -> tuple[int, int]:
        return self.window if self.window is not None else auto_window(self.seeds)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lambda": _frac_out(self.params.lam),
            "prng_seed": self.params.prng_seed,
            "truncation_budget": self.params.truncation_budget,
            "field": self.params.field.name,
            "border_shape": self.border_shape,
            "staircase": self.staircase,
            "margin": self.margin,
            "seeds": [_seed_to_json(s) for s in self.seeds],
        }
        if self.window is not None:
            out["window"] = list(self.window)
        if self.expected is not None:
            out["expected"] = str(self.expected)
        if self.intermediate:
            out["intermediate"] = [r.to_json() for r in self.intermediate]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Scenario":
        if not isinstance(obj, dict):
            raise ScenarioError("scenario", "top level must be a JSON object")
        lam = _frac_in(obj.get("lambda", 1), "lambda")
        seed = obj.get("prng_seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ScenarioError("prng_seed", "must be an integer")
        seeds_raw = obj.get("seeds")
        if not isinstance(seeds_raw, list):
            raise ScenarioError("seeds", "must be a list of seed objects")
        seeds = tuple(_seed_from_json(s, f"seeds[{i}]") for i, s in enumerate(seeds_raw))
        try:
            ring = ring_from_name(obj.get("field", "GF"))
        except ValueError as exc:
            raise ScenarioError("field", str(exc)) from None
        budget = obj.get("truncation_budget")
        if budget is None:
            budget = default_truncation(seeds)
        if not isinstance(budget, int) or isinstance(budget, bool):
            raise ScenarioError("truncation_budget", "must be an integer")
        params = EvolutionParams(lam=lam, prng_seed=seed, truncation_budget=budget, field=ring)
        window = obj.get("window")
        if window is not None:
            if not (isinstance(window, list) and len(window) == 2 and all(isinstance(w, int) and w > 0 for w in window)):
                raise ScenarioError("window", "must be [M, N] with positive integers")
            window = tuple(window)
        shape = obj.get("border_shape", LSHAPE)
        if shape not in BORDER_SHAPES:
            raise ScenarioError("border_shape", f"must be one of {BORDER_SHAPES}")
        staircase = obj.get("staircase", 0)
        if not isinstance(staircase, int) or staircase < 0:
            raise ScenarioError("staircase", "must be a nonnegative integer")
        margin = obj.get("margin", obj.get("margins", 4))
        if not isinstance(margin, int) or margin < 0:
            raise ScenarioError("margin", "must be a nonnegative integer")
        expected = obj.get("expected")
        if expected is not None:
            expected = _vector_in(expected, "expected")
        inter = tuple(Region.from_json(r, f"intermediate[{i}]") for i, r in enumerate(obj.get("intermediate", [])))
        return cls(params, seeds, window, shape, staircase, margin, str(obj.get("name", "")), expected, inter)

    @classmethod
    def load(cls, path) -> "Scenario":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ScenarioError("scenario", f"cannot read {path}: {exc.strerror}") from None
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError("scenario", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return cls.from_json(obj)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")

    def grid(self, params: EvolutionParams | None = None, window=None) -> Grid:
        M, N = window or self.resolved_window()
        return simulate(self.seeds, self.border_shape, M, N, params or self.params, self.staircase)


def _frac_in(x, where) -> Fraction:
    if isinstance(x, bool):
        raise ScenarioError(where, "must be a number")
    try:
        return Fraction(x) if not isinstance(x, float) else Fraction(str(x))
    except (TypeError, ValueError, ZeroDivisionError):
        raise ScenarioError(where, f"cannot parse {x!r} as a rational") from None


def _frac_out(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


def _vector_in(x, where) -> WeightVector:
    try:
        if isinstance(x, str):
            return WeightVector.parse(x)
        return WeightVector(int(x.get("base_row", 0)), tuple(x["weights"]))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ScenarioError(where, f"bad weight vector: {exc}") from None


def _seed_from_json(obj, where) -> SeedSpec:
    if not isinstance(obj, dict):
        raise ScenarioError(where, "must be an object")
    variant = obj.get("variant")
    if variant not in SEED_VARIANTS:
        raise ScenarioError(f"{where}.variant", f"must be one of {SEED_VARIANTS}")
    pos = obj.get("position")
    if not (isinstance(pos, list) and len(pos) == 2 and all(isinstance(c, int) and c >= 0 for c in pos)):
        raise ScenarioError(f"{where}.position", "must be [m, n] with nonnegative integers")
    kw = {}
    if "weight" in obj:
        kw["weight"] = obj["weight"]
    if "weights" in obj:
        kw["weights"] = tuple(obj["weights"]) if isinstance(obj["weights"], list) else obj["weights"]
    for key in ("anchor", "coefficient", "value"):
        if key in obj:
            kw[key] = _frac_in(obj[key], f"{where}.{key}")
    if "series" in obj:
        try:
            kw["series"] = series_from_json(obj["series"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"{where}.series", str(exc)) from None
    try:
        return SeedSpec(variant, tuple(pos), **kw)
    except ScenarioError as exc:
        raise ScenarioError(f"{where}.{exc.field}", str(exc).split(": ", 1)[-1]) from None
    except TypeError as exc:
        raise ScenarioError(where, str(exc)) from None


def _seed_to_json(s: SeedSpec) -> dict:
    out = {"variant": s.variant, "position": list(s.position)}
    if s.weights is not None:
        out["weights"] = list(s.weights)
    elif s.weight is not None:
        out["weight"] = s.weight
    for key in ("anchor", "coefficient", "value"):
        v = getattr(s, key)
        if v is not None:
            out[key] = _frac_out(Fraction(v))
    if s.series is not None:
        out["series"] = series_to_json(s.series)
    return out


# -- geometry ----------------------------------------------------------------


def auto_window(seeds: Sequence[SeedSpec]) -> tuple[int, int]:
    """Smallest window that lets every strip seeded on column 0 cross every
    diagonal seeded on row 0 and settle before the east measurement band."""
    strips = [s for s in seeds if s.variant == "TaishiPair"]
    diags = [s for s in seeds if s.variant == "Infinity"]
    q = sum(s.weight for s in diags)
    top = max((s.position[1] + len(s.weights) for s in strips), default=0)
    N = top + 2 * q + 6
    last = max((s.position[0] for s in diags), default=0)
    return last + N + 6, N


def strip_diagonal_scenario(
    weights: Sequence[int],
    diagonals: Sequence[int] | int,
    prng_seed: int = 0,
    name: str = "",
    expected: WeightVector | None = None,
    base_row: int = STRIP_BASE_ROW,
    margin: int = 4,
    truncation_budget: int | None = None,
) -> Scenario:
    """Horizontal strips (ascending ``weights``, zeros allowed) seeded on
    column 0 from ``base_row``, crossed by diagonals of the given weights
    seeded on row 0.

    Diagonals are spaced so that the strips settle between consecutive
    crossings; the settled profile after each diagonal is measured there.
    """
    if isinstance(diagonals, int):
        diagonals = [diagonals]
    weights = tuple(weights)
    q_total = sum(diagonals)
    hi_row = base_row + len(weights) + 2 * q_total + 2
    spacing = hi_row - base_row + 14
    seeds = [SeedSpec.taishi((0, base_row), weights)]
    regions = []
    q_cum = 0
    for j, q in enumerate(diagonals):
        seeds.append(SeedSpec.infinity((j * spacing, 0), q))
        q_cum += q
        if j + 1 < len(diagonals):
            right = (j + 1) * spacing + base_row - 4
            regions.append(Region((right - margin, right), (base_row - 2, hi_row + 2), q_cum))
    N = hi_row + 4
    M = (len(diagonals) - 1) * spacing + N + 6
    K = truncation_budget if truncation_budget is not None else default_truncation(seeds)
    params = EvolutionParams(prng_seed=prng_seed, truncation_budget=K)
    return Scenario(params, tuple(seeds), (M, N), LSHAPE, 0, margin, name, expected, tuple(regions))


# -- crosscheck --------------------------------------------------------------


@dataclass
class CrosscheckReport:
    name: str
    west_profile: list
    east_profile: list
    predicted: WeightVector | None
    closed_form: WeightVector | None = None
    closed_form_kind: str | None = None
    verdict: str = "Inconclusive"
    details: list = field(default_factory=list)
    seeds_used: list = field(default_factory=list)
    truncation_used: int = 0
    window_used: tuple = ()
    intermediate: list = field(default_factory=list)

    @property
    def west(self) -> WeightVector:
        return profiles_vector(self.west_profile)

    @property
    def east(self) -> WeightVector:
        return profiles_vector(self.east_profile)

    def to_json(self) -> dict:
        vec = lambda v: None if v is None else {"base_row": v.base_row, "weights": list(v.w)}  # noqa: E731
        return {
            "name": self.name,
            "verdict": self.verdict,
            "details": self.details,
            "west_profile": [p.to_json() for p in self.west_profile],
            "east_profile": [p.to_json() for p in self.east_profile],
            "west": vec(self.west) if self.west_profile or self.east_profile else None,
            "east": vec(self.east) if self.east_profile else None,
            "predicted": vec(self.predicted),
            "closed_form": vec(self.closed_form),
            "closed_form_kind": self.closed_form_kind,
            "intermediate": [
                {"after_q": q, "measured": vec(m), "predicted": vec(p)} for q, m, p in self.intermediate
            ],
            "seeds_used": self.seeds_used,
            "truncation_used": self.truncation_used,
            "window_used": list(self.window_used),
        }


def _measure(grid: Grid, columns, rows=None) -> list[StripProfile]:
    """Strip profiles on a band that must be free of singular cells."""
    lo, hi = max(0, columns[0]), min(grid.M, columns[1])
    r_lo, r_hi = (0, grid.N) if rows is None else (max(0, rows[0]), min(grid.N, rows[1] + 1))
    for m in range(lo, hi + 1):
        for n in range(r_lo, r_hi + 1):
            x = grid.cells[m][n]
            if x is None:
                continue
            if x.is_truncated_zero or x.valuation != 0:
                raise InconsistentStrip(f"measurement band columns {lo}..{hi} crosses singular cell {(m, n)}")
    return detect_strips(grid, (lo, hi), None if rows is None else (r_lo, r_hi - 1))


def _west_rows(sc: Scenario) -> tuple[int, int]:
    rows = [n for s in sc.strip_seeds for _, n in s.sites()]
    return min(rows) - 2, max(rows) + 1


def _closed_form(west: WeightVector, q: int):
    """Closed-form prediction for one or two taishi, else ``(None, None)``."""
    runs = split_taishi(west)
    if not runs or any(len(r.w) > 2 for r in runs) or len(runs) > 2:
        return None, None
    pairs = [(r.w[0], r.w[1] if len(r.w) == 2 else 0) for r in runs]
    if len(runs) == 1:
        return closed_form_taishi(*pairs[0], q).placed(runs[0].base_row), "single"
    out = scenario_predict(pairs[0], runs[0].base_row, pairs[1], runs[1].base_row, q)
    if out.scenario == "Ongoing":
        return None, "Ongoing"
    return out.vector(), out.scenario


def _observe(sc: Scenario, params: EvolutionParams, window) -> tuple:
    grid = sc.grid(params, window)
    M = grid.M
    west = _measure(grid, (0, sc.margin), _west_rows(sc))
    east = _measure(grid, (M - sc.margin, M))
    inter = [(r.after_q, profiles_vector(_measure(grid, r.columns, r.rows))) for r in sc.intermediate]
    return west, east, inter


def run_crosscheck(sc: Scenario, seeds: Sequence[int] | None = None) -> CrosscheckReport:
    """Evolve under two PRNG seeds and compare lattice, symbolic dynamics and
    closed forms.  Precision failures are retried once with the truncation
    budget doubled; a measurement band hit by singular cells once with the
    window doubled."""
    if sc.params.lam != 1:
        raise ScenarioError("lambda", "crosscheck needs the integrable equation (lambda = 1)")
    if not sc.strip_seeds:
        raise ScenarioError("seeds", "crosscheck needs at least one TaishiPair seed")
    if sc.q_total < 1:
        raise ScenarioError("seeds", "crosscheck needs at least one Infinity seed")
    if seeds is None:
        seeds = [sc.params.prng_seed, (sc.params.prng_seed + 1) & _U64]
    report = CrosscheckReport(sc.name, [], [], None, seeds_used=list(seeds))
    K = sc.params.truncation_budget
    window = sc.resolved_window()
    observations = []
    for s in seeds:
        retried_k = retried_w = False
        while True:
            params = sc.params.with_seed(s).with_budget(K)
            try:
                observations.append(_observe(sc, params, window))
                break
            except (PrecisionExhausted, DivisionBySeriesZero) as exc:
                if retried_k:
                    report.details.append(f"seed {s}: {exc} (K={K})")
                    report.verdict = "Inconclusive"
                    report.truncation_used, report.window_used = K, window
                    return report
                log.info("seed %d: %s; retrying with K=%d", s, exc, 2 * K)
                K, retried_k = 2 * K, True
            except InconsistentStrip as exc:
                if retried_w:
                    report.details.append(f"seed {s}: {exc} (window {window})")
                    report.verdict = "Inconclusive"
                    report.truncation_used, report.window_used = K, window
                    return report
                log.info("seed %d: %s; enlarging window", s, exc)
                window, retried_w = (2 * window[0], 2 * window[1]), True
    report.truncation_used, report.window_used = K, window

    west, east, inter = observations[0]
    report.west_profile, report.east_profile = west, east
    for s, (w2, e2, i2) in zip(seeds[1:], observations[1:]):
        if (w2, e2, i2) != (west, east, inter):
            report.details.append(f"profiles differ between PRNG seeds {seeds[0]} and {s}")

    west_v, east_v = profiles_vector(west), profiles_vector(east)
    q = sc.q_total
    report.predicted = canonicalize(interact_diagonal(west_v, q)) if west_v.w else west_v
    if east_v != report.predicted:
        report.details.append(f"east {east_v} != symbolic dynamics {report.predicted}")
    if west_v.total != east_v.total:
        report.details.append(f"total weight not conserved: west {west_v.total}, east {east_v.total}")
    try:
        cf, kind = _closed_form(west_v, q)
    except ValueError:
        cf, kind = None, None
    report.closed_form, report.closed_form_kind = cf, kind
    if cf is not None and cf != east_v:
        report.details.append(f"east {east_v} != closed form ({kind}) {cf}")
    if sc.expected is not None and canonicalize(sc.expected) != east_v:
        report.details.append(f"east {east_v} != expected {canonicalize(sc.expected)}")
    for after_q, measured in inter:
        pred = canonicalize(interact_diagonal(west_v, after_q))
        report.intermediate.append((after_q, measured, pred))
        if measured != pred:
            report.details.append(f"after q={after_q}: measured {measured} != symbolic dynamics {pred}")
    report.verdict = "Disagree" if report.details else "Agree"
    return report


def summary_table(reports: Sequence[CrosscheckReport]) -> str:
    rows = [("scenario", "west", "east", "predicted", "closed form", "verdict")]
    for r in reports:
        rows.append(
            (
                r.name or "-",
                str(r.west) if r.west_profile else "-",
                str(r.east) if r.east_profile else "-",
                str(r.predicted) if r.predicted is not None else "-",
                f"{r.closed_form} ({r.closed_form_kind})" if r.closed_form is not None else (r.closed_form_kind or "-"),
                r.verdict,
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows) + "\n"


def _crosscheck_job(sc: Scenario) -> CrosscheckReport:
    return run_crosscheck(sc)


def sweep(scenarios: Sequence[Scenario], jobs: int = 1) -> list[CrosscheckReport]:
    """Crosscheck independent scenarios, optionally in worker processes."""
    if jobs <= 1:
        return [run_crosscheck(sc) for sc in scenarios]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_crosscheck_job, scenarios))


def interference_shift(lower: int, upper: int, gap: int, q: int, prng_seed: int = 0) -> int:
    """Extra upshift of a lower single strip caused by a second strip ``gap``
    rows above it, measured on the lattice against the solo closed form."""
    weights = (lower,) + (0,) * (gap - 1) + (upper,)
    sc = strip_diagonal_scenario(weights, q, prng_seed=prng_seed)
    report = run_crosscheck(sc)
    if report.verdict == "Inconclusive":
        raise PrecisionExhausted("; ".join(report.details))
    runs = split_taishi(report.east)
    mine = [r for r in runs if r.total == lower]
    if len(mine) != 1:
        raise ValueError(f"cannot identify the lower strip in {report.east}")
    solo = closed_form_taishi(lower, 0, q).placed(STRIP_BASE_ROW)
    return mine[0].base_row - solo.base_row


# -- confinement -------------------------------------------------------------


@dataclass
class ConfinementVerdict:
    kind: str  # ConfinedWithExtent, Unconfined, Inconclusive
    extent: tuple[int, int] | None = None
    flanked_zero_line: bool = False
    details: str = ""
    vmap: ValuationMap | None = None

    def __str__(self):
        if self.kind == "ConfinedWithExtent":
            return f"ConfinedWithExtent({self.extent[0]}x{self.extent[1]})"
        if self.kind == "Unconfined":
            return "Unconfined" + (" (zero line flanked by infinities)" if self.flanked_zero_line else "")
        return f"Inconclusive({self.details})"


def _flanked_zero_line(vmap: ValuationMap, min_length: int = 5) -> bool:
    """A NE run of zeros reaching the window edge with infinities immediately
    west and east of each of its cells (its seed cell excepted)."""
    def singular(v, sign):
        return v is not None and v != UNDEFINED and v * sign > 0

    for m in range(vmap.M + 1):
        for n in range(vmap.N + 1):
            if not singular(vmap[m, n], 1) or singular(vmap[m - 1, n - 1], 1):
                continue
            run = []
            t = 0
            while singular(vmap[m + t, n + t], 1):
                run.append((m + t, n + t))
                t += 1
            em, en = run[-1]
            if len(run) < min_length or not (em == vmap.M or en == vmap.N):
                continue
            if all(singular(vmap[a - 1, b], -1) and singular(vmap[a + 1, b], -1) for a, b in run[1:-1]):
                return True
    return False


def confinement_test(
    lam,
    num_zeros: int,
    window: tuple[int, int] = (40, 40),
    staircase: int | None = None,
    prng_seeds: Sequence[int] = (0, 1),
    truncation_budget: int | None = None,
) -> ConfinementVerdict:
    """Evolve ``num_zeros`` contiguous weight-1 zeros on a staircase border."""
    if num_zeros < 1:
        raise ScenarioError("num_zeros", "must be >= 1")
    M, N = window
    S = staircase if staircase is not None else min(M, N) // 2 - 4
    sites = contiguous_zero_sites(S, num_zeros)
    seeds = [SeedSpec.zero(s) for s in sites]
    K = truncation_budget or default_truncation(seeds)
    vmaps = []
    for s in prng_seeds:
        params = EvolutionParams(lam=lam, prng_seed=s, truncation_budget=K)
        try:
            grid = simulate(seeds, STAIRCASE, M, N, params, S)
        except (PrecisionExhausted, DivisionBySeriesZero):
            params = params.with_budget(2 * K)
            try:
                grid = simulate(seeds, STAIRCASE, M, N, params, S)
            except (PrecisionExhausted, DivisionBySeriesZero) as exc:
                return ConfinementVerdict("Inconclusive", details=str(exc))
        vmaps.append(valuation_map(grid))
    vmap = vmaps[0]
    if any(v != vmap for v in vmaps[1:]):
        return ConfinementVerdict("Inconclusive", details="valuation map depends on the PRNG seed", vmap=vmap)
    if vmap.undefined:
        return ConfinementVerdict("Inconclusive", details=f"undefined cells {vmap.undefined[:3]}", vmap=vmap)
    clusters = detect_confined_clusters(vmap)
    if any(c.touches_edge for c in clusters):
        return ConfinementVerdict("Unconfined", flanked_zero_line=_flanked_zero_line(vmap), vmap=vmap)
    if len(clusters) == 1 and clusters[0].confined:
        return ConfinementVerdict("ConfinedWithExtent", extent=clusters[0].extent, vmap=vmap)
    return ConfinementVerdict("Inconclusive", details=f"{len(clusters)} clusters", vmap=vmap)


# -- transparency ------------------------------------------------------------


@dataclass
class TransparencyVerdict:
    passed: bool
    differing: list = field(default_factory=list)

    def __str__(self):
        return "Pass" if self.passed else f"Fail ({len(self.differing)} cells differ)"


def _leading(x: LaurentSeries):
    return None if x is None else (("?",) if x.is_truncated_zero else (x.valuation, x.leading))


def transparency_test(
    p: int,
    anchor,
    other_anchor,
    lam=1,
    window: tuple[int, int] = (24, 20),
    base_row: int = STRIP_BASE_ROW,
    prng_seed: int = 0,
) -> TransparencyVerdict:
    """Evolve a weight-``p`` strip twice, changing only the value at its lower
    site (the product constraint fixes the upper one), and compare the leading
    terms of every cell off the strip's two rows."""
    if Fraction(anchor) == Fraction(other_anchor):
        raise ValueError("the two anchors must differ")
    M, N = window
    grids = []
    for a in (anchor, other_anchor):
        seeds = [SeedSpec.taishi((0, base_row), (p,), anchor=Fraction(a))]
        params = EvolutionParams(lam=lam, prng_seed=prng_seed, truncation_budget=default_truncation(seeds))
        grids.append(simulate(seeds, LSHAPE, M, N, params))
    g1, g2 = grids
    differing = [
        (m, n)
        for m, n in g1.coords()
        if n not in (base_row, base_row + 1) and _leading(g1.cells[m][n]) != _leading(g2.cells[m][n])
    ]
    return TransparencyVerdict(not differing, differing)


# -- one-dimensional mappings ------------------------------------------------


@dataclass
class Smoke1DReport:
    eq2_valuations: list
    eq1_valuations: list
    generic_valuations: list
    eq2_confined: bool
    eq1_persistent: bool
    generic_regular: bool

    @property
    def passed(self) -> bool:
        return self.eq2_confined and self.eq1_persistent and self.generic_regular

    def to_json(self) -> dict:
        return {
            "Eq2": self.eq2_valuations,
            "Eq1": self.eq1_valuations,
            "Eq2_generic": self.generic_valuations,
            "Eq2_confined": self.eq2_confined,
            "Eq1_persistent": self.eq1_persistent,
            "generic_regular": self.generic_regular,
            "passed": self.passed,
        }


EQ2_PATTERN = (1, -1, 0, -1, 1)
EQ1_PATTERN = (1, -2, 0, -2, 1, -2, 0)


def smoke_1d(steps: int = 24, truncation_budget: int = 40) -> Smoke1DReport:
    """A zero of weight 1 entering each mapping from a generic value, ``a = 1``."""
    K = truncation_budget
    prev = LaurentSeries.constant(Fraction(2, 7), K, QQ)
    zero = LaurentSeries.from_terms({1: 1}, K, QQ)
    vals = lambda orbit: [x.valuation for x in orbit]  # noqa: E731
    eq2 = vals(iterate_map_1d("Eq2", 1, prev, zero, steps))
    eq1 = vals(iterate_map_1d("Eq1", 1, prev, zero, steps))
    generic = vals(iterate_map_1d("Eq2", 1, prev, LaurentSeries.constant(Fraction(3, 5), K, QQ), steps))
    eq2_ok = tuple(eq2[: len(EQ2_PATTERN)]) == EQ2_PATTERN and all(v == 0 for v in eq2[len(EQ2_PATTERN) :])
    eq1_ok = tuple(eq1[: len(EQ1_PATTERN)]) == EQ1_PATTERN and len(eq1) > 20 and all(
        any(v != 0 for v in eq1[i : i + 4]) for i in range(len(eq1) - 3)
    )
    return Smoke1DReport(eq2, eq1, generic, eq2_ok, eq1_ok, all(v == 0 for v in generic))


# -- reference configurations ------------------------------------------------

# ascending strip weights and the weights of the diagonals, in crossing order
REFERENCE_SCENARIOS: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {
    "w1_q1": ((1,), (1,)),
    "w2_q1": ((2,), (1,)),
    "w3_q1": ((3,), (1,)),
    "w5_q3": ((5,), (3,)),
    "w2_q4": ((2,), (4,)),
    "w3_q7": ((3,), (7,)),
    "w1.0.2_q2": ((1, 0, 2), (2,)),
    "w1.0.2_q1": ((1, 0, 2), (1,)),
    "w3.0.7_q5": ((3, 0, 7), (5,)),
    "w1.2.0.5.2_q5": ((1, 2, 0, 5, 2), (5,)),
    "w1.3.0.9_q3": ((1, 3, 0, 9), (3,)),
    "w3.5.4.1_q4": ((3, 5, 4, 1), (4,)),
    "w1.2.0.6_q2+2+1": ((1, 2, 0, 6), (2, 2, 1)),
}


def reference_scenario(name: str, prng_seed: int = 0) -> Scenario:
    try:
        weights, diags = REFERENCE_SCENARIOS[name]
    except KeyError:
        raise ScenarioError("name", f"unknown reference scenario {name!r}") from None
    return strip_diagonal_scenario(weights, diags, prng_seed=prng_seed, name=name)
