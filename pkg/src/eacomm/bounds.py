"""Singleton-type bounds for quantum and entanglement-assisted schemes.

All finite-length bounds return the largest admissible integer minimum
distance, i.e. the floor of the real-valued bound.  Bound ids:

=============  =====================================  ==================
id             bound on d                             from
=============  =====================================  ==================
qSingleton     (n - k + 2) / 2                        plain QECC
eaSingleton    (n - k + 2 + c) / 2                    EAQECC
absolute       n - k + 1                              any quantum code
ourBound       n - 2k + 1                             teleportation scheme
eaSingletonKC  n / 2 + 1                              EAQECC with c = k
=============  =====================================  ==================

The asymptotic frontier substitutes each entanglement policy into the
bounds and divides by n (R = k/n, delta = d/n):

* absolute: ``delta = 1 - R``
* qecc (c = 0): ``delta = (1 - R) / 2``
* eaHalf (c = (n - k)/2): ``2d <= (3/2)(n - k) + 2``, so ``delta = 3(1 - R)/4``
* eaKC (c = k): ``delta = 1/2`` for ``R <= 1/2``
* ours: ``delta = 1 - 2R`` for ``R <= 1/2``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import KTooLarge, UnknownVariant, ValidationError
from .protocol import SchemeParams

BOUND_IDS = ("qSingleton", "eaSingleton", "absolute", "ourBound", "eaSingletonKC")


def q_singleton(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValidationError(f"need 0 <= k <= n, got n={n}, k={k}")
    return (n - k + 2) // 2


def ea_singleton(n: int, k: int, c: int) -> int:
    if not 0 <= k <= n or c < 0:
        raise ValidationError(f"need 0 <= k <= n and c >= 0, got n={n}, k={k}, c={c}")
    return (n - k + 2 + c) // 2


def ea_singleton_proven(n: int, d: int) -> bool:
    """Whether d lies in the range d <= (n + 2)/2 where the EA bound is a theorem."""
    return 2 * d <= n + 2


def absolute_bound(n: int, k: int) -> int:
    return n - k + 1


def our_bound(n: int, k: int) -> int:
    if 2 * k > n:
        raise KTooLarge(f"2k = {2 * k} exceeds n = {n}")
    return n - 2 * k + 1


def ea_singleton_kc(n: int) -> int:
    if n < 1:
        raise ValidationError("n must be >= 1")
    return n // 2 + 1


@dataclass(frozen=True)
class BoundResult:
    max_d: int | None
    status: str  # satisfies | meets | violates | inapplicable


@dataclass
class BoundReport:
    params: SchemeParams
    per_bound: dict[str, BoundResult]
    notes: list[str] = field(default_factory=list)
    c_ge_k: bool = True

    def violates(self, bound_id: str) -> bool:
        return self.per_bound[bound_id].status == "violates"

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "bounds": {
                bid: {"maxD": r.max_d, "status": r.status} for bid, r in self.per_bound.items()
            },
            "cGeK": self.c_ge_k,
            "notes": self.notes,
        }

    def to_text(self) -> str:
        lines = [f"{self.params}"]
        lines += [f"  {bid:<14} maxD={r.max_d!s:<4} {r.status}" for bid, r in self.per_bound.items()]
        lines += [f"  note: {note}" for note in self.notes]
        return "\n".join(lines)


def _status(d: int, max_d: int) -> str:
    if d < max_d:
        return "satisfies"
    return "meets" if d == max_d else "violates"


def classify(params: SchemeParams) -> BoundReport:
    """Evaluate every bound on ``params`` and label each satisfies/meets/violates."""
    n, k, d, c = params.n, params.k, params.d, params.c
    maxes: dict[str, int | None] = {
        "qSingleton": q_singleton(n, k),
        "eaSingleton": ea_singleton(n, k, c),
        "absolute": absolute_bound(n, k),
        "ourBound": our_bound(n, k) if 2 * k <= n else None,
        "eaSingletonKC": ea_singleton_kc(n),
    }
    per = {bid: BoundResult(m, "inapplicable" if m is None else _status(d, m)) for bid, m in maxes.items()}
    report = BoundReport(params, per, c_ge_k=c >= k)
    if k != c:
        report.notes.append("eaSingletonKC assumes c = k; value shown for reference")
    if per["ourBound"].status == "inapplicable":
        report.notes.append("ourBound needs 2k <= n")
    if report.violates("eaSingleton"):
        regime = "inside" if ea_singleton_proven(n, d) else "outside"
        report.notes.append(f"violates eaSingleton {regime} the proven regime d <= (n+2)/2")
        if c >= k:
            report.notes.append("c >= k holds, as required to beat eaSingleton")
        else:
            report.notes.append("c < k: beating eaSingleton requires c >= k, parameters are infeasible")
    if report.violates("absolute"):
        report.notes.append("violates the absolute bound: no quantum scheme has these parameters")
    return report


# ---------------------------------------------------------------------------
# asymptotic frontier


@dataclass(frozen=True)
class FrontierPoint:
    R: Fraction
    delta: Fraction
    variant: str


# variant -> (largest R in domain, intercept, slope) for delta = intercept + slope * R
VARIANTS: dict[str, tuple[Fraction, Fraction, Fraction]] = {
    "absolute": (Fraction(1), Fraction(1), Fraction(-1)),
    "qecc": (Fraction(1), Fraction(1, 2), Fraction(-1, 2)),
    "eaHalf": (Fraction(1), Fraction(3, 4), Fraction(-3, 4)),
    "eaKC": (Fraction(1, 2), Fraction(1, 2), Fraction(0)),
    "ours": (Fraction(1, 2), Fraction(1), Fraction(-2)),
}


def _variant(name: str) -> tuple[Fraction, Fraction, Fraction]:
    try:
        return VARIANTS[name]
    except KeyError:
        raise UnknownVariant(f"unknown frontier variant {name!r}; choose from {sorted(VARIANTS)}") from None


def frontier_delta(variant: str, R: Fraction | int | str) -> Fraction:
    r_max, a, b = _variant(variant)
    R = Fraction(R)
    if not 0 <= R <= r_max:
        raise ValidationError(f"R = {R} outside the domain [0, {r_max}] of {variant}")
    return a + b * R


def frontier(variant: str, points: int) -> list[FrontierPoint]:
    """``points`` evenly spaced rates over the variant's domain [0, R_max]."""
    if points < 2:
        raise ValidationError("points must be >= 2")
    r_max, _, _ = _variant(variant)
    rs = [r_max * Fraction(i, points - 1) for i in range(points)]
    return [FrontierPoint(R, frontier_delta(variant, R), variant) for R in rs]


def crossing(v1: str, v2: str) -> tuple[Fraction, Fraction] | None:
    """Exact intersection of two frontier lines inside both domains, if any."""
    r1, a1, b1 = _variant(v1)
    r2, a2, b2 = _variant(v2)
    if b1 == b2:
        return None
    R = (a2 - a1) / (b1 - b2)
    if not 0 <= R <= min(r1, r2):
        return None
    return R, a1 + b1 * R


def format_fraction(x: Fraction) -> str:
    """Plain decimal; exact when the expansion terminates, else 17 significant digits."""
    den = x.denominator
    for f in (2, 5):
        while den % f == 0:
            den //= f
    with localcontext() as ctx:
        ctx.prec = 60 if den == 1 else 17
        value = Decimal(x.numerator) / Decimal(x.denominator)
    text = format(value.normalize(), "f") if value else "0"
    return text
