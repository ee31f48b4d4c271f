"""Classical linear codes [n, kappa, d]_q over GF(q).

Symbols are element indices (see :mod:`eacomm.field`), and every routine
works on integer numpy arrays through the field's lookup tables.  Decoding is
exhaustive over the q**kappa codewords, which is the regime of interest here
(kappa = 2k is at most a handful).
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DecodeFailure, FieldMismatch, LengthMismatch, LengthOutOfRange, TooLarge, ValidationError
from .field import FieldSpec, field_to_string, parse_field_spec

# q**kappa limit for anything that enumerates the codebook
MAX_CODEWORDS = 2**20


@dataclass(frozen=True)
class CodeParams:
    n: int
    kappa: int
    d: int
    q: int

    def __post_init__(self):
        if self.d > self.n - self.kappa + 1:
            raise ValidationError(f"[{self.n},{self.kappa},{self.d}] exceeds the classical Singleton bound")

    def __str__(self) -> str:
        return f"[{self.n},{self.kappa},{self.d}]_{self.q}"


def _rank(field: FieldSpec, mat: np.ndarray) -> int:
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    a = mat.copy()
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        pivots = np.nonzero(a[rank:, col])[0]
        if not len(pivots):
            continue
        piv = rank + pivots[0]
        a[[rank, piv]] = a[[piv, rank]]
        a[rank] = mul[inv[a[rank, col]], a[rank]]
        for r in range(rows):
            if r != rank and a[r, col]:
                a[r] = add[a[r], mul[neg[a[r, col]], a[rank]]]
        rank += 1
        if rank == rows:
            break
    return rank


class LinearCode:
    """Linear code given by a kappa x n generator matrix of element indices.

    The minimum distance ``d`` is either supplied by a constructor that knows
    it (Reed-Solomon, repetition) or computed on demand by
    :func:`min_distance`.
    """

    def __init__(self, field: FieldSpec, gen, d: int | None = None, *, check: bool = True):
        gen = np.array(gen, dtype=np.int64)
        if gen.ndim != 2 or gen.shape[0] < 1 or gen.shape[0] > gen.shape[1]:
            raise ValidationError(f"generator must be kappa x n with 1 <= kappa <= n, got shape {gen.shape}")
        if gen.min() < 0 or gen.max() >= field.q:
            raise ValidationError("generator entries must be element indices < q")
        if check and _rank(field, gen) != gen.shape[0]:
            raise ValidationError("generator matrix is not of full row rank")
        gen.setflags(write=False)
        self.field = field
        self.gen = gen
        self._d = d
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.gen.shape[1]

    @property
    def kappa(self) -> int:
        return self.gen.shape[0]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def d(self) -> int | None:
        return self._d

    @property
    def params(self) -> CodeParams:
        return CodeParams(self.n, self.kappa, min_distance(self), self.q)

    def __repr__(self) -> str:
        d = "?" if self._d is None else self._d
        return f"LinearCode([{self.n},{self.kappa},{d}]_{self.q})"

    @cached_property
    def messages(self) -> np.ndarray:
        """All q**kappa messages, lexicographic (first symbol most significant)."""
        self._guard()
        return np.array(list(itertools.product(range(self.q), repeat=self.kappa)), dtype=np.int64)

    @cached_property
    def codewords(self) -> np.ndarray:
        """Row i is the encoding of ``messages[i]``."""
        msgs = self.messages
        add, mul = self.field.add_table, self.field.mul_table
        cw = np.zeros((len(msgs), self.n), dtype=np.int64)
        for j in range(self.kappa):
            cw = add[cw, mul[msgs[:, j : j + 1], self.gen[j][None, :]]]
        cw.setflags(write=False)
        return cw

    def _guard(self) -> None:
        if self.q**self.kappa > MAX_CODEWORDS:
            raise TooLarge(f"q^kappa = {self.q}^{self.kappa} exceeds {MAX_CODEWORDS}")

    def message_index(self, msg: Sequence[int]) -> int:
        idx = 0
        for s in msg:
            idx = idx * self.q + int(s)
        return idx

    def to_json(self) -> dict:
        return {
            "field": field_to_string(self.field),
            "n": self.n,
            "kappa": self.kappa,
            "gen": self.gen.tolist(),
            "d": self._d,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LinearCode:
        if isinstance(data, str):
            data = json.loads(data)
        field = parse_field_spec(data["field"])
        code = cls(field, data["gen"], data.get("d"))
        if (code.n, code.kappa) != (data["n"], data["kappa"]):
            raise ValidationError(f"header [{data['n']},{data['kappa']}] disagrees with generator shape")
        return code


def rs_code(field: FieldSpec, n: int, kappa: int) -> LinearCode:
    """Reed-Solomon code evaluating polynomials of degree < kappa.

    Evaluation points are the first ``n`` field elements in index order; for
    ``n == q + 1`` all q points are used and the extended coordinate (the
    coefficient of x^(kappa-1)) is appended last.
    """
    q = field.q
    if not 1 <= kappa <= n or n > q + 1:
        raise LengthOutOfRange(f"need 1 <= kappa <= n <= q+1, got n={n}, kappa={kappa}, q={q}")
    mul = field.mul_table
    pts = np.arange(min(n, q))
    gen = np.zeros((kappa, n), dtype=np.int64)
    row = np.ones(len(pts), dtype=np.int64)
    for i in range(kappa):
        gen[i, : len(pts)] = row
        row = mul[row, pts]
    if n == q + 1:
        gen[kappa - 1, q] = 1
    return LinearCode(field, gen, d=n - kappa + 1, check=False)


def repeat_code(code: LinearCode, ell: int) -> LinearCode:
    """Concatenate the generator with itself ``ell`` times: [l*n, kappa, l*d]."""
    if ell < 1:
        raise ValidationError(f"ell must be >= 1, got {ell}")
    d = None if code.d is None else ell * code.d
    return LinearCode(code.field, np.tile(code.gen, (1, ell)), d=d, check=False)


def identity_code(field: FieldSpec, n: int) -> LinearCode:
    return LinearCode(field, np.eye(n, dtype=np.int64), d=1, check=False)


def _as_symbols(code: LinearCode, vec, length: int, what: str) -> np.ndarray:
    if isinstance(vec, np.ndarray):
        arr = vec.astype(np.int64)
    else:
        vec = list(vec)
        if vec and hasattr(vec[0], "spec"):
            if any(v.spec != code.field for v in vec):
                raise FieldMismatch(f"{what} is not over {code.field}")
            vec = [v.index for v in vec]
        arr = np.array(vec, dtype=np.int64)
    if arr.shape != (length,):
        raise LengthMismatch(f"{what} must have length {length}, got {arr.shape}")
    if len(arr) and (arr.min() < 0 or arr.max() >= code.q):
        raise FieldMismatch(f"{what} has symbols outside GF({code.q})")
    return arr


def encode(code: LinearCode, msg) -> np.ndarray:
    """Return ``msg @ gen`` over GF(q) as a length-n index vector."""
    msg = _as_symbols(code, msg, code.kappa, "message")
    add, mul = code.field.add_table, code.field.mul_table
    out = np.zeros(code.n, dtype=np.int64)
    for j, s in enumerate(msg):
        if s:
            out = add[out, mul[s, code.gen[j]]]
    return out


def min_distance(code: LinearCode) -> int:
    """Exact minimum distance by enumerating all nonzero codewords (memoised)."""
    if code._d is not None:
        return code._d
    code._guard()
    weights = np.count_nonzero(code.codewords[1:], axis=1)
    d = int(weights.min())
    with code._lock:
        if code._d is None:
            code._d = d
    return code._d


def verify_min_distance(code: LinearCode) -> int:
    """Recompute d from the codebook, ignoring any stored value."""
    code._guard()
    return int(np.count_nonzero(code.codewords[1:], axis=1).min())


def correction_radius(code: LinearCode) -> int:
    return (min_distance(code) - 1) // 2


def decode_bounded(code: LinearCode, received) -> tuple[np.ndarray, np.ndarray]:
    """Bounded-distance decoding within radius t = floor((d-1)/2).

    Returns ``(message, codeword)``; raises :class:`DecodeFailure` when no
    codeword lies within distance t.
    """
    r = _as_symbols(code, received, code.n, "received word")
    t = correction_radius(code)
    dist = np.count_nonzero(code.codewords != r[None, :], axis=1)
    best = int(np.argmin(dist))
    if dist[best] > t:
        raise DecodeFailure(f"no codeword within distance {t} (nearest at {dist[best]})")
    return code.messages[best].copy(), code.codewords[best].copy()


def decode_erasures(code: LinearCode, received, erased: Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Recover the unique codeword agreeing with ``received`` off the erased set.

    Erased positions may be given explicitly or marked by ``None`` (or a
    negative value) in ``received``.
    """
    vals = list(received)
    if len(vals) != code.n:
        raise LengthMismatch(f"received word must have length {code.n}, got {len(vals)}")
    erased_set = {i for i, v in enumerate(vals) if v is None or v < 0}
    if erased is not None:
        bad = [i for i in erased if not 0 <= i < code.n]
        if bad:
            raise LengthMismatch(f"erasure positions {bad} outside 0..{code.n - 1}")
        erased_set |= set(erased)
    keep = np.array(sorted(set(range(code.n)) - erased_set), dtype=np.int64)
    r = np.array([0 if i in erased_set else vals[i] for i in range(code.n)], dtype=np.int64)
    if r.max(initial=0) >= code.q:
        raise FieldMismatch(f"received word has symbols outside GF({code.q})")
    code._guard()
    match = np.all(code.codewords[:, keep] == r[keep][None, :], axis=1)
    hits = np.nonzero(match)[0]
    if len(hits) != 1:
        raise DecodeFailure(f"{len(hits)} codewords agree with the {len(keep)} surviving symbols")
    return code.messages[hits[0]].copy(), code.codewords[hits[0]].copy()


def singleton_bound_classical(n: int, kappa: int) -> int:
    return n - kappa + 1


def griesmer_bound(q: int, kappa: int, d: int) -> int:
    """Smallest length allowed by n >= sum_{i<kappa} ceil(d / q^i)."""
    if kappa < 1 or d < 1:
        raise ValidationError("griesmer_bound needs kappa >= 1 and d >= 1")
    return sum(-(-d // q**i) for i in range(kappa))
