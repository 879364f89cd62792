"""Taishi interaction calculus on strip-weight vectors.

A :class:`WeightVector` lists the weights of consecutive horizontal strips from
the bottom up: ``w[i]`` is the order in ``eps`` of ``x[m][r]*x[m][r+1] - 1``
with ``r = base_row + i``.  Interaction with a diagonal of infinities of
weight ``q`` is ``2q`` applications of :func:`elementary_step`.

Columns written top row first must be reversed on ingestion, see
:meth:`WeightVector.from_top_down`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DegenerateTaishi

__all__ = [
    "WeightVector",
    "TaishiOutcome",
    "PairOutcome",
    "elementary_step",
    "interact_diagonal",
    "interaction_trace",
    "closed_form_taishi",
    "single_strip_rule",
    "scenario_predict",
    "canonicalize",
    "combine",
    "split_taishi",
]


@dataclass(frozen=True)
class WeightVector:
    base_row: int
    w: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if any(x < 0 for x in self.w):
            raise ValueError(f"weights must be nonnegative: {self.w}")

    @classmethod
    def from_top_down(cls, column: Sequence[int], base_row: int = 0) -> "WeightVector":
        return cls(base_row, tuple(reversed(column)))

    def top_down(self) -> tuple[int, ...]:
        return tuple(reversed(self.w))

    @property
    def total(self) -> int:
        return sum(self.w)

    def __len__(self):
        return len(self.w)

    def padded(self, length: int) -> "WeightVector":
        return WeightVector(self.base_row, self.w + (0,) * max(0, length - len(self.w)))

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """Parse ``"1,3,0,9@5"`` (ascending weights, ``@base_row`` optional)."""
        text = text.strip()
        base = 0
        if "@" in text:
            text, b = text.rsplit("@", 1)
            base = int(b)
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError("empty weight vector")
        return cls(base, tuple(int(p) for p in parts))

    def __str__(self):
        return ",".join(map(str, self.w)) + f"@{self.base_row}"


@dataclass(frozen=True)
class TaishiOutcome:
    """Upshift ``k`` and lower/upper weights after one diagonal interaction."""

    k: int
    n_tilde: int
    p_tilde: int

    def placed(self, base_row: int) -> WeightVector:
        """Canonical vector for a taishi that started at ``base_row``."""
        return canonicalize(WeightVector(base_row + self.k, (self.n_tilde, self.p_tilde)))


@dataclass(frozen=True)
class PairOutcome:
    """Two-taishi interaction with one diagonal.

    ``scenario`` is ``"A"`` (no mutual interference), ``"B"`` (interference
    completed, closed form available) or ``"Ongoing"`` (no closed form;
    use :func:`interact_diagonal` on the combined vector).
    """

    scenario: str
    lower: TaishiOutcome
    lower_base: int
    upper: TaishiOutcome | None
    upper_base: int

    @property
    def lower_vector(self) -> WeightVector:
        return self.lower.placed(self.lower_base)

    @property
    def upper_vector(self) -> WeightVector | None:
        return None if self.upper is None else self.upper.placed(self.upper_base)

    def vector(self) -> WeightVector | None:
        if self.scenario == "Ongoing":
            return None
        return combine([self.lower_vector, self.upper_vector])


def elementary_step(wv: WeightVector) -> WeightVector:
    """Interaction with a diagonal of weight 1/2.

    Scanning upward, the lowest nonzero strip gives one unit to the strip just
    above; scanning resumes two strips higher.  The vector grows by one entry
    only when the top strip must give.
    """
    w = list(wv.w)
    i = 0
    while i < len(w):
        if w[i] > 0:
            w[i] -= 1
            if i + 1 == len(w):
                w.append(0)
            w[i + 1] += 1
            i += 2
        else:
            i += 1
    return WeightVector(wv.base_row, tuple(w))


def interaction_trace(wv: WeightVector, q: int) -> list[WeightVector]:
    """All ``2q + 1`` vectors from ``wv`` to the result of a weight-``q`` diagonal."""
    if q < 1:
        raise ValueError("diagonal weight q must be >= 1")
    out = [wv]
    for _ in range(2 * q):
        out.append(elementary_step(out[-1]))
    return out


def interact_diagonal(wv: WeightVector, q: int) -> WeightVector:
    return interaction_trace(wv, q)[-1]


def closed_form_taishi(n: int, p: int, q: int) -> TaishiOutcome:
    """Outcome for a taishi with lower weight ``n`` and upper weight ``p``.

    Solves ``n~ + p~ = n + p`` and ``k n~ + (k+1) p~ = p + 2q`` in
    nonnegative integers.  When ``2q + p`` is a multiple of ``n + p`` the two
    strips merge; that case is returned as ``n~ = 0``.
    """
    if n < 0 or p < 0 or q < 1:
        raise ValueError("need n, p >= 0 and q >= 1")
    total = n + p
    if total == 0:
        raise DegenerateTaishi("taishi with n + p = 0")
    s = 2 * q + p
    if s % total:
        k = s // total
        pt = s - k * total
        return TaishiOutcome(k, total - pt, pt)
    return TaishiOutcome(s // total - 1, 0, total)


def single_strip_rule(p: int, q: int) -> TaishiOutcome:
    """A single strip of weight ``p`` is pushed up ``k = [2q/p]`` rows and
    splits into ``(k+1)p - 2q`` (lower) and ``2q - kp`` (upper)."""
    if p < 1 or q < 1:
        raise ValueError("need p >= 1 and q >= 1")
    k = 2 * q // p
    return TaishiOutcome(k, (k + 1) * p - 2 * q, 2 * q - k * p)


WeightLike = Union[WeightVector, TaishiOutcome]


def canonicalize(x: WeightLike, base_row: int = 0) -> WeightVector:
    """Trim zero strips at both ends, moving ``base_row`` accordingly.

    A :class:`TaishiOutcome` is placed at ``base_row + k`` first.
    """
    if isinstance(x, TaishiOutcome):
        x = WeightVector(base_row + x.k, (x.n_tilde, x.p_tilde))
    w = x.w
    lo, hi = 0, len(w)
    while lo < hi and w[lo] == 0:
        lo += 1
    while hi > lo and w[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return WeightVector(x.base_row, ())
    return WeightVector(x.base_row + lo, w[lo:hi])


def combine(parts: Sequence[WeightVector]) -> WeightVector:
    """Sum vectors into one canonical vector spanning all of them."""
    parts = [p for p in parts if p is not None and p.w]
    if not parts:
        return WeightVector(0, ())
    lo = min(p.base_row for p in parts)
    hi = max(p.base_row + len(p.w) for p in parts)
    out = [0] * (hi - lo)
    for p in parts:
        for i, x in enumerate(p.w):
            out[p.base_row - lo + i] += x
    return canonicalize(WeightVector(lo, tuple(out)))


def split_taishi(wv: WeightVector) -> list[WeightVector]:
    """Split a vector at empty strips into maximal runs of nonzero strips."""
    runs = []
    cur: list[int] = []
    start = None
    for i, x in enumerate(wv.w):
        if x:
            if start is None:
                start = i
            cur.append(x)
        elif start is not None:
            runs.append(WeightVector(wv.base_row + start, tuple(cur)))
            cur, start = [], None
    if start is not None:
        runs.append(WeightVector(wv.base_row + start, tuple(cur)))
    return runs


def _separated(a: WeightVector, b: WeightVector) -> bool:
    """At least one empty strip row between two canonical vectors."""
    lo, hi = sorted((a, b), key=lambda v: v.base_row)
    return lo.base_row + len(lo.w) + 1 <= hi.base_row


def scenario_predict(lower: tuple[int, int], r: int, upper: tuple[int, int], R: int, q: int) -> PairOutcome:
    """Closed-form outcome for taishi ``(n, p)`` at row ``r`` and ``(N, P)`` at
    row ``R > r`` meeting a diagonal of weight ``q``."""
    n, p = lower
    N, P = upper
    if n + p == 0 or N + P == 0:
        raise DegenerateTaishi("taishi with zero total weight")
    if R <= r + (1 if p else 0):
        raise ValueError(f"upper taishi at row {R} overlaps the lower one at row {r}")
    lo = closed_form_taishi(n, p, q)
    up = closed_form_taishi(N, P, q)
    lo_v, up_v = lo.placed(r), up.placed(R)
    if lo_v.base_row < up_v.base_row and _separated(lo_v, up_v):
        return PairOutcome("A", lo, r, up, R)
    # the lower taishi absorbs 2(n + p) of the diagonal and gains two extra rows
    s = 2 * (q - n - p) + P
    if s >= 0:
        k2 = s // (N + P)
        pt = s - k2 * (N + P)
        up2 = TaishiOutcome(k2, N + P - pt, pt)
        lo2 = TaishiOutcome(lo.k + 2, lo.n_tilde, lo.p_tilde)
        if _separated(lo2.placed(r), up2.placed(R)):
            return PairOutcome("B", lo2, r, up2, R)
    return PairOutcome("Ongoing", lo, r, None, R)

