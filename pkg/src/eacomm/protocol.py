"""Teleportation and the teleportation-based entanglement-assisted scheme.

The sender Bell-measures each of the k payload qudits against one half of a
maximally entangled pair, obtaining outcomes (a_i, b_i).  The 2k symbols
``a_1..a_k, b_1..b_k`` are encoded with a classical [n, 2k, d]_q code and the
codeword is sent as a computational basis state over n channel uses.  The
receiver measures, decodes, and applies the Pauli correction to its k halves.

Two simulations of that pipeline are provided:

* :func:`ea_send` carries the channel basis state as a symbol vector.  A
  basis state travelling through a channel and then measured in the
  computational basis is fully described by the induced symbol statistics,
  so this is exact for every channel model here.
* :func:`ea_send_fully_quantum` replaces the Bell measurement by a Bell
  basis change and the classical encoder by an isometry, keeps the whole
  register coherent through the channel, and runs a coherent decoder that
  applies controlled corrections.  It is the cross-check for the first.

Corrections: after outcome (a, b) the receiver half holds ``X^a Z^-b |phi>``
(up to phase), so the applied correction is ``X^-a Z^b``, recorded as the
label ``(-a mod q, b)``.
"""

from __future__ import annotations

import itertools
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import qudit as qs
from .codes import LinearCode, decode_bounded, decode_erasures, encode, min_distance, repeat_code, rs_code
from .errors import DecodeFailure, OddKappa, RegisterTooLarge, ValidationError
from .field import FieldSpec, field_for_order
from .qudit import PauliLabel, QuditState

FIDELITY_ATOL = 1e-9

NONE = "none"
SUBSTITUTION = "adversarial-substitution"
PHASE = "adversarial-phase"
SYMMETRIC = "symmetric-random"
ERASURE = "erasure"
UNITARY = "unitary"
CHANNEL_KINDS = (NONE, SUBSTITUTION, PHASE, SYMMETRIC, ERASURE, UNITARY)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class SchemeParams:
    """Parameters [[n, k, d; c]]_q of a communication scheme."""

    n: int
    k: int
    d: int
    c: int
    q: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n or self.c < 0 or self.d < 1 or self.q < 2:
            raise ValidationError(f"invalid scheme parameters {self.shorthand()}")

    def shorthand(self) -> str:
        return f"{self.n},{self.k},{self.d},{self.c},{self.q}"

    def __str__(self) -> str:
        return f"[[{self.n},{self.k},{self.d};{self.c}]]_{self.q}"

    @classmethod
    def parse(cls, text: str) -> SchemeParams:
        """Parse the ``n,k,d,c,q`` shorthand."""
        try:
            n, k, d, c, q = (int(x) for x in text.split(","))
        except ValueError:
            raise ValidationError(f"scheme shorthand must be n,k,d,c,q, got {text!r}") from None
        return cls(n, k, d, c, q)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "c": self.c, "q": self.q}


def scheme_from_code(code: LinearCode) -> SchemeParams:
    """[n, 2k, d]_q classical code -> [[n, k, d; k]]_q scheme."""
    if code.kappa % 2:
        raise OddKappa(f"code dimension {code.kappa} is odd; the scheme needs 2k symbols")
    k = code.kappa // 2
    return SchemeParams(code.n, k, min_distance(code), k, code.q)


def code_for_scheme(params: SchemeParams, field: FieldSpec | None = None) -> LinearCode:
    """Built-in classical code realising ``params``.

    MDS parameters d = n - 2k + 1 with n <= q + 1 use a Reed-Solomon code;
    k = 1 schemes [[l(q+1), 1, lq; 1]] use the l-fold repeated [q+1, 2, q] code.
    """
    field = field or field_for_order(params.q)
    if field.q != params.q:
        raise ValidationError(f"field order {field.q} does not match q = {params.q}")
    n, k, d, q = params.n, params.k, params.d, params.q
    if params.c != k:
        raise ValidationError(f"teleportation-based schemes use c = k, got {params}")
    if 2 * k <= n <= q + 1 and d == n - 2 * k + 1:
        return rs_code(field, n, 2 * k)
    if k == 1 and n % (q + 1) == 0 and d == (n // (q + 1)) * q:
        return repeat_code(rs_code(field, q + 1, 2), n // (q + 1))
    raise ValidationError(f"no built-in construction for {params}")


# ---------------------------------------------------------------------------
# channels


@dataclass(frozen=True)
class Substitution:
    pos: int
    value: int
    offset: bool = False  # True: symbol -> symbol + value (field addition)


@dataclass(frozen=True)
class ChannelModel:
    """Noise acting on the n channel systems.

    ``phases`` maps positions to q unit-modulus phases (a diagonal unitary);
    ``phases=None`` with the phase kind draws fresh uniform phases for every
    position on each use.  ``unitaries`` entries with a ``None`` matrix draw a
    Haar-random unitary on each use.
    """

    kind: str = NONE
    substitutions: tuple[Substitution, ...] = ()
    phases: tuple[tuple[int, tuple[complex, ...]], ...] | None = None
    eps: float = 0.0
    erasures: tuple[int, ...] = ()
    unitaries: tuple[tuple[int, object], ...] = dc_field(default=(), compare=False)
    spec: str | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValidationError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.eps <= 1.0:
            raise ValidationError(f"eps must lie in [0, 1], got {self.eps}")
        for _, ph in self.phases or ():
            if not np.allclose(np.abs(np.asarray(ph)), 1.0, atol=1e-12):
                raise ValidationError("phases must have unit modulus")

    @classmethod
    def substitution(cls, subs: Sequence[tuple[int, int]], offset: bool = False) -> ChannelModel:
        return cls(SUBSTITUTION, substitutions=tuple(Substitution(p, v, offset) for p, v in subs))

    @classmethod
    def phase(cls, phases: dict[int, Sequence[complex]] | None = None) -> ChannelModel:
        if phases is None:
            return cls(PHASE, phases=None)
        return cls(PHASE, phases=tuple((p, tuple(complex(x) for x in ph)) for p, ph in sorted(phases.items())))

    @classmethod
    def symmetric(cls, eps: float) -> ChannelModel:
        return cls(SYMMETRIC, eps=eps)

    @classmethod
    def erasure(cls, positions: Sequence[int]) -> ChannelModel:
        return cls(ERASURE, erasures=tuple(sorted(positions)))

    @classmethod
    def unitary(cls, unitaries: dict[int, np.ndarray | None]) -> ChannelModel:
        return cls(UNITARY, unitaries=tuple(sorted(unitaries.items(), key=lambda kv: kv[0])))

    def positions(self) -> list[int]:
        return (
            [s.pos for s in self.substitutions]
            + [p for p, _ in self.phases or ()]
            + list(self.erasures)
            + [p for p, _ in self.unitaries]
        )

    def check(self, n: int, q: int) -> None:
        bad = [p for p in self.positions() if not 0 <= p < n]
        if bad:
            raise ValidationError(f"channel positions {bad} outside 0..{n - 1}")
        if any(not 0 <= s.value < q for s in self.substitutions):
            raise ValidationError(f"substitution symbols must lie in 0..{q - 1}")
        if any(len(ph) != q for _, ph in self.phases or ()):
            raise ValidationError(f"each phase list needs {q} entries")
        for _, u in self.unitaries:
            if u is not None and np.asarray(u).shape != (q, q):
                raise ValidationError(f"channel unitaries must be {q}x{q}")

    def phase_table(self, n: int, q: int, rng: np.random.Generator) -> dict[int, np.ndarray]:
        if self.phases is None:
            return {pos: np.exp(2j * np.pi * rng.random(q)) for pos in range(n)}
        return {pos: np.asarray(ph, dtype=complex) for pos, ph in self.phases}

    def unitary_table(self, q: int, rng: np.random.Generator) -> list[tuple[int, np.ndarray]]:
        return [(pos, qs.haar_unitary(q, rng) if u is None else np.asarray(u, dtype=complex)) for pos, u in self.unitaries]

    def apply_to_symbols(self, sent: np.ndarray, field: FieldSpec, rng: np.random.Generator) -> tuple[list, complex]:
        """Received symbols (``None`` marks an erasure) and the discarded phase."""
        n, q = len(sent), field.q
        self.check(n, q)
        recv: list = [int(s) for s in sent]
        phase = 1.0 + 0j
        if self.kind == SUBSTITUTION:
            for s in self.substitutions:
                recv[s.pos] = int(field.add_table[recv[s.pos], s.value]) if s.offset else s.value
        elif self.kind == PHASE:
            for pos, ph in self.phase_table(n, q, rng).items():
                phase *= ph[recv[pos]]
        elif self.kind == SYMMETRIC:
            for pos in range(n):
                if rng.random() < self.eps:
                    recv[pos] = (recv[pos] + 1 + int(rng.integers(q - 1))) % q
        elif self.kind == ERASURE:
            for pos in self.erasures:
                recv[pos] = None
        elif self.kind == UNITARY:
            for pos, u in self.unitary_table(q, rng):
                col = u[:, recv[pos]]
                probs = np.abs(col) ** 2
                recv[pos] = int(rng.choice(q, p=probs / probs.sum()))
                phase *= col[recv[pos]] / abs(col[recv[pos]])
        return recv, phase

    def apply_to_register(
        self, state: QuditState, labels: Sequence[str], field: FieldSpec, rng: np.random.Generator
    ) -> QuditState:
        """Act on the channel qudits ``labels`` of a coherent register.

        Non-unitary models (symbol overwrite, symmetric replacement) are run as
        quantum trajectories: one Kraus operator is sampled with its Born
        probability.  Erased systems are scrambled by a Haar-random unitary.
        """
        n, q = len(labels), field.q
        self.check(n, q)
        if self.kind == SUBSTITUTION:
            for s in self.substitutions:
                lab = labels[s.pos]
                if s.offset:
                    state = qs.apply_unitary(state, lab, _shift_matrix(field, s.value))
                else:
                    state = _overwrite(state, lab, field, rng, lambda _sym, v=s.value: v)
        elif self.kind == PHASE:
            for pos, ph in self.phase_table(n, q, rng).items():
                state = qs.apply_diagonal(state, labels[pos], ph)
        elif self.kind == SYMMETRIC:
            for pos in range(n):
                if rng.random() < self.eps:
                    state = _overwrite(
                        state, labels[pos], field, rng, lambda sym: (sym + 1 + int(rng.integers(q - 1))) % q
                    )
        elif self.kind == ERASURE:
            for pos in self.erasures:
                state = qs.apply_unitary(state, labels[pos], qs.haar_unitary(q, rng))
        elif self.kind == UNITARY:
            for pos, u in self.unitary_table(q, rng):
                state = qs.apply_unitary(state, labels[pos], u)
        return state

    def to_string(self) -> str:
        if self.spec is not None:
            return self.spec
        if self.kind == NONE:
            return "none"
        if self.kind == SUBSTITUTION:
            return "subst:" + ",".join(f"{s.pos}{'+' if s.offset else '='}{s.value}" for s in self.substitutions)
        if self.kind == PHASE and self.phases is None:
            return "phase:random"
        if self.kind == SYMMETRIC:
            return f"rand:eps={self.eps:g}"
        if self.kind == ERASURE:
            return "erase:" + ",".join(map(str, self.erasures))
        if self.kind == UNITARY and all(u is None for _, u in self.unitaries):
            return "haar:" + ",".join(str(p) for p, _ in self.unitaries)
        return f"{self.kind}:<explicit>"


def _shift_matrix(field: FieldSpec, value: int) -> np.ndarray:
    q = field.q
    mat = np.zeros((q, q), dtype=complex)
    mat[field.add_table[np.arange(q), value], np.arange(q)] = 1
    return mat


def _overwrite(state: QuditState, label: str, field: FieldSpec, rng: np.random.Generator, new_symbol) -> QuditState:
    q = field.q
    probs = qs.marginal_probabilities(state, label)
    sym = int(rng.choice(q, p=probs / probs.sum()))
    _, state = qs.project_symbol(state, label, sym)
    target = int(new_symbol(sym))
    return qs.apply_unitary(state, label, _shift_matrix(field, int(field.add_table[target, field.neg_table[sym]])))


_SUBST_RE = re.compile(r"^(\d+)([=+])(\d+)$")


def parse_channel(text: str) -> ChannelModel:
    """Parse ``none | subst:pos=v,... | subst:pos+v,... | phase:random | rand:eps=E | erase:p,... | haar:p,...``.

    ``pos=v`` overwrites the symbol with v; ``pos+v`` adds v to it.
    """
    text = text.strip()
    head, _, body = text.partition(":")
    try:
        if text == "none":
            chan = ChannelModel()
        elif head == "subst" and body:
            subs = []
            for item in body.split(","):
                m = _SUBST_RE.match(item.strip())
                if not m:
                    raise ValueError(item)
                subs.append(Substitution(int(m[1]), int(m[3]), m[2] == "+"))
            chan = ChannelModel(SUBSTITUTION, substitutions=tuple(subs))
        elif text == "phase:random":
            chan = ChannelModel(PHASE, phases=None)
        elif head == "rand" and body.startswith("eps="):
            chan = ChannelModel(SYMMETRIC, eps=float(body[4:]))
        elif head == "erase":
            chan = ChannelModel(ERASURE, erasures=tuple(sorted(int(p) for p in body.split(","))) if body else ())
        elif head == "haar" and body:
            chan = ChannelModel(UNITARY, unitaries=tuple((int(p), None) for p in body.split(",")))
        else:
            raise ValueError(text)
    except ValueError:
        raise ValidationError(f"malformed channel spec {text!r}") from None
    return ChannelModel(**{**chan.__dict__, "spec": text})


# ---------------------------------------------------------------------------
# transcript


@dataclass
class Transcript:
    bell: list[PauliLabel] | None
    sent: list[int] | None
    recv: list[int | None]
    verdict: str  # "ok" | "fail"
    corrected: list[int] | None
    corrections: list[PauliLabel]
    fidelity: float

    @property
    def ok(self) -> bool:
        return self.verdict == "ok"

    def to_json(self) -> dict:
        return {
            "bell": None if self.bell is None else [[int(a), int(b)] for a, b in self.bell],
            "sent": self.sent,
            "recv": self.recv,
            "verdict": self.verdict,
            "corrected": self.corrected,
            "corr": [[int(a), int(b)] for a, b in self.corrections],
            "fidelity": self.fidelity,
        }


def correction_for(outcome: tuple[int, int], q: int) -> PauliLabel:
    """Pauli label (in X^a Z^b form) undoing the Bell outcome ``(a, b)``."""
    return PauliLabel((-outcome[0]) % q, outcome[1] % q)


# ---------------------------------------------------------------------------
# teleportation


def _bell_stage(payload: QuditState, labels: Sequence[str], rng, outcomes):
    q = payload.dim
    state = payload
    results = []
    for i, lab in enumerate(labels):
        state = qs.product(state, qs.max_entangled(q, (f"_S{i}", f"_R{i}")))
        forced = None if outcomes is None else outcomes[i]
        out, state = qs.bell_measure(state, (lab, f"_S{i}"), rng, outcome=forced)
        results.append(out)
    return results, state


def _finish(state: QuditState, payload: QuditState, labels: Sequence[str], corrections) -> QuditState:
    for i, corr in enumerate(corrections):
        state = qs.apply_pauli(state, f"_R{i}", corr.a, corr.b)
    state = qs.relabel(state, {f"_R{i}": lab for i, lab in enumerate(labels)})
    return qs.reorder(state, payload.labels)


def teleport(
    payload: QuditState,
    rng: np.random.Generator | None = None,
    labels: Sequence[str] | None = None,
    outcomes: Sequence[tuple[int, int]] | None = None,
) -> tuple[QuditState, Transcript]:
    """Teleport the ``labels`` subsystems of ``payload`` (default: all of them).

    Other subsystems (e.g. a reference system) are left untouched, so the
    output can be compared with ``payload`` directly.  ``outcomes`` forces the
    Bell measurement results.
    """
    rng = rng if rng is not None else np.random.default_rng()
    labels = tuple(payload.labels if labels is None else labels)
    q = payload.dim
    results, state = _bell_stage(payload, labels, rng, outcomes)
    corrections = [correction_for(o, q) for o in results]
    out = _finish(state, payload, labels, corrections)
    symbols = [o.a for o in results] + [o.b for o in results]
    return out, Transcript(results, symbols, list(symbols), "ok", list(symbols), corrections, qs.fidelity(payload, out))


# ---------------------------------------------------------------------------
# the entanglement-assisted scheme


def _check_scheme(payload: QuditState, code: LinearCode) -> int:
    k = payload.nqudits
    if code.kappa != 2 * k:
        raise ValidationError(f"code dimension {code.kappa} must equal 2k = {2 * k}")
    if payload.dim != code.q:
        raise ValidationError(f"payload dimension {payload.dim} differs from alphabet size {code.q}")
    return k


def _decode(code: LinearCode, recv: list) -> tuple[np.ndarray, np.ndarray]:
    if any(r is None for r in recv):
        return decode_erasures(code, recv)
    return decode_bounded(code, recv)


def ea_send(
    payload: QuditState,
    code: LinearCode,
    channel: ChannelModel | None = None,
    rng: np.random.Generator | None = None,
    outcomes: Sequence[tuple[int, int]] | None = None,
) -> tuple[QuditState, Transcript]:
    """Send a k-qudit payload with the [n, 2k, d]_q code ``code`` over ``channel``.

    On a decoding failure no correction is applied and the verdict is
    ``"fail"``; the returned state is the raw receiver state.
    """
    rng = rng if rng is not None else np.random.default_rng()
    channel = channel or ChannelModel()
    k = _check_scheme(payload, code)
    q = code.q
    results, state = _bell_stage(payload, payload.labels, rng, outcomes)
    msg = [o.a for o in results] + [o.b for o in results]
    sent = encode(code, msg)
    recv, _ = channel.apply_to_symbols(sent, code.field, rng)
    try:
        dmsg, corrected = _decode(code, recv)
    except DecodeFailure:
        verdict, corrected, corrections = "fail", None, []
        out = _finish(state, payload, payload.labels, [PauliLabel(0, 0)] * k)
    else:
        verdict = "ok"
        corrections = [correction_for((int(dmsg[i]), int(dmsg[k + i])), q) for i in range(k)]
        out = _finish(state, payload, payload.labels, corrections)
        corrected = [int(x) for x in corrected]
    return out, Transcript(
        results, [int(x) for x in sent], recv, verdict, corrected, corrections, qs.fidelity(payload, out)
    )


def _decode_table(code: LinearCode, words: np.ndarray, erased: Sequence[int]) -> np.ndarray:
    """Decoded message index per received word (rows of ``words``), -1 on failure."""
    cw = code.codewords
    t = (min_distance(code) - 1) // 2
    keep = np.array(sorted(set(range(code.n)) - set(erased)), dtype=np.int64)
    out = np.full(len(words), -1, dtype=np.int64)
    chunk = max(1, 2**22 // max(1, len(cw) * code.n))
    for lo in range(0, len(words), chunk):
        w = words[lo : lo + chunk]
        if len(erased):
            match = np.all(cw[None, :, keep] == w[:, None, keep], axis=2)
            unique = match.sum(axis=1) == 1
            out[lo : lo + chunk] = np.where(unique, match.argmax(axis=1), -1)
        else:
            dist = np.count_nonzero(cw[None, :, :] != w[:, None, :], axis=2)
            best = dist.argmin(axis=1)
            out[lo : lo + chunk] = np.where(dist[np.arange(len(w)), best] <= t, best, -1)
    return out


def ea_send_fully_quantum(
    payload: QuditState,
    code: LinearCode,
    channel: ChannelModel | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[QuditState, Transcript]:
    """Coherent version of :func:`ea_send`.

    Bell transform, isometric encoder ``|m>|0^(n-2k)> -> |C(m)>``, channel on
    the n-qudit register, then a decoder that measures only the
    success/failure flag and applies the correction for the decoded message
    controlled on each received basis word.  The reported fidelity is that of
    the receiver's reduced state.  ``bell`` and ``sent`` are ``None`` in the
    transcript since no Bell outcome is ever produced; ``recv`` comes from
    measuring the discarded channel register afterwards.
    """
    rng = rng if rng is not None else np.random.default_rng()
    channel = channel or ChannelModel()
    k = _check_scheme(payload, code)
    q, n = code.q, code.n
    if q ** max(3 * k, n + k) > qs.MAX_AMPLITUDES:
        raise RegisterTooLarge(f"fully-quantum register of {q}^{max(3 * k, n + k)} amplitudes is too large")
    labels = payload.labels
    state = payload
    for i in range(k):
        state = qs.product(state, qs.max_entangled(q, (f"_S{i}", f"_R{i}")))
    for i, lab in enumerate(labels):
        state = qs.bell_transform(state, (lab, f"_S{i}"))
    rlabels = [f"_R{i}" for i in range(k)]
    order = [*labels, *(f"_S{i}" for i in range(k)), *rlabels]
    data = qs.reorder(state, order).amps.reshape(q ** (2 * k), q**k)

    # encoder isometry: message basis index -> codeword basis index
    radix = q ** np.arange(n - 1, -1, -1)
    cw_index = code.codewords @ radix
    enc = np.zeros((q**n, q**k), dtype=complex)
    enc[cw_index] = data
    clabels = [f"_C{j}" for j in range(n)]
    state = QuditState(q, (*clabels, *rlabels), enc.reshape(-1))

    state = channel.apply_to_register(state, clabels, code.field, rng)
    erased = channel.erasures if channel.kind == ERASURE else ()

    rows = state.amps.reshape(q**n, q**k).copy()
    weight = np.sum(np.abs(rows) ** 2, axis=1)
    support = np.nonzero(weight > 1e-30)[0]
    words = np.stack(np.unravel_index(support, (q,) * n), axis=1)
    decoded = _decode_table(code, words, erased)
    p_ok = float(weight[support[decoded >= 0]].sum() / weight.sum())
    ok = p_ok > 1 - 1e-12 or (p_ok > 1e-12 and rng.random() < p_ok)
    keep_rows = support[decoded >= 0] if ok else support[decoded < 0]
    mask = np.zeros(q**n, dtype=bool)
    mask[keep_rows] = True
    rows[~mask] = 0
    rows /= np.linalg.norm(rows)

    msg_of_row = np.full(q**n, -1, dtype=np.int64)
    msg_of_row[support] = decoded
    if ok:
        for m in np.unique(msg_of_row[keep_rows]):
            sel = keep_rows[msg_of_row[keep_rows] == m]
            tensor = rows[sel].reshape((len(sel),) + (q,) * k)
            msg = code.messages[m]
            for i in range(k):
                corr = correction_for((int(msg[i]), int(msg[k + i])), q)
                tensor = _pauli_on_axis(tensor, 1 + i, q, corr)
            rows[sel] = tensor.reshape(len(sel), -1)

    joint = QuditState(q, (*clabels, *rlabels), rows.reshape(-1))
    joint = qs.relabel(joint, {f"_R{i}": lab for i, lab in enumerate(labels)})
    fid = qs.reduced_fidelity(joint, payload)

    recv, out = qs.measure(joint, clabels, rng)
    out = qs.reorder(out, payload.labels)
    recv = [int(r) for r in recv]
    received = [None if j in erased else r for j, r in enumerate(recv)]
    if ok:
        dmsg, corrected = _decode(code, received)
        corrections = [correction_for((int(dmsg[i]), int(dmsg[k + i])), q) for i in range(k)]
        transcript = Transcript(None, None, received, "ok", [int(x) for x in corrected], corrections, fid)
    else:
        transcript = Transcript(None, None, received, "fail", None, [], fid)
    return out, transcript


def _pauli_on_axis(tensor: np.ndarray, axis: int, q: int, label: PauliLabel) -> np.ndarray:
    shape = [1] * tensor.ndim
    shape[axis] = q
    phases = qs.omega(q) ** ((label.b * np.arange(q)) % q)
    return np.roll(tensor * phases.reshape(shape), label.a % q, axis=axis)


# ---------------------------------------------------------------------------
# payloads, Monte Carlo, exhaustive verification


def probe_payloads(q: int, k: int, rng: np.random.Generator, labels: Sequence[str] | None = None) -> list[QuditState]:
    """All q^k basis states, the uniform superposition, and one random-phase superposition."""
    labels = tuple(labels or (f"P{i}" for i in range(k)))
    probes = [qs.basis_state(q, labels, s) for s in itertools.product(range(q), repeat=k)]
    dim = q**k
    probes.append(qs.state_from_amplitudes(q, labels, np.ones(dim)))
    probes.append(qs.state_from_amplitudes(q, labels, np.exp(2j * np.pi * rng.random(dim))))
    return probes


def sample_payload(q: int, k: int, rng: np.random.Generator, labels: Sequence[str] | None = None) -> QuditState:
    """Monte Carlo payload: with probability 1/2 a uniform basis state, else a uniform-phase superposition."""
    labels = tuple(labels or (f"P{i}" for i in range(k)))
    if rng.random() < 0.5:
        return qs.basis_state(q, labels, [int(s) for s in rng.integers(q, size=k)])
    return qs.state_from_amplitudes(q, labels, np.exp(2j * np.pi * rng.random(q**k)))


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


@dataclass(frozen=True)
class MonteCarloSummary:
    trials: int
    successes: int
    decode_failures: int
    mean_fidelity: float

    @property
    def failure_rate(self) -> float:
        return 1 - self.successes / self.trials

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "decodeFailures": self.decode_failures,
            "meanFidelity": self.mean_fidelity,
            "failureRate": self.failure_rate,
        }


def _mc_chunk(code_json: dict, channel: ChannelModel, master_seed: int, start: int, stop: int):
    code = LinearCode.from_json(code_json)
    k = code.kappa // 2
    successes = failures = 0
    fids = []
    for i in range(start, stop):
        rng = trial_rng(master_seed, i)
        payload = sample_payload(code.q, k, rng)
        _, tr = ea_send(payload, code, channel, rng)
        fids.append(tr.fidelity)
        if tr.ok and tr.corrected == tr.sent:
            successes += 1
        if not tr.ok:
            failures += 1
    return successes, failures, fids


def monte_carlo(
    code: LinearCode, channel: ChannelModel, trials: int, master_seed: int, workers: int = 1
) -> MonteCarloSummary:
    """Independent :func:`ea_send` trials with per-trial seeds derived from ``master_seed``.

    A trial succeeds when the decoder returns exactly the transmitted
    codeword.  Results do not depend on ``workers``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    min_distance(code)
    code_json = code.to_json()
    if workers <= 1:
        parts = [_mc_chunk(code_json, channel, master_seed, 0, trials)]
    else:
        bounds = np.linspace(0, trials, min(workers * 4, trials) + 1).astype(int)
        with ProcessPoolExecutor(workers) as pool:
            futures = [
                pool.submit(_mc_chunk, code_json, channel, master_seed, int(lo), int(hi))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            parts = [f.result() for f in futures]
    successes = sum(p[0] for p in parts)
    failures = sum(p[1] for p in parts)
    fids = [f for p in parts for f in p[2]]
    return MonteCarloSummary(trials, successes, failures, math.fsum(fids) / trials)


def binomial_tail(n: int, eps: float, at_least: int) -> float:
    """P[Binomial(n, eps) >= at_least]."""
    return math.fsum(math.comb(n, j) * eps**j * (1 - eps) ** (n - j) for j in range(at_least, n + 1))


@dataclass
class ExhaustiveReport:
    runs: int = 0
    worst_fidelity: float = 1.0
    failures: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "runs": self.runs,
            "worstFidelity": self.worst_fidelity,
            "failures": self.failures,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def substitution_patterns(n: int, q: int, max_weight: int):
    """Every additive error pattern of weight 1..max_weight, as (pos, offset) lists."""
    for w in range(1, max_weight + 1):
        for positions in itertools.combinations(range(n), w):
            for offsets in itertools.product(range(1, q), repeat=w):
                yield list(zip(positions, offsets))


def exhaustive_check(
    code: LinearCode,
    max_weight: int | None = None,
    erasures: bool = True,
    seed: int = 0,
    all_outcomes: bool = True,
) -> ExhaustiveReport:
    """Run :func:`ea_send` over every probe payload, error pattern and Bell outcome.

    Substitution patterns go up to ``max_weight`` (default: the correction
    radius); with ``erasures`` every erasure set of size <= d - 1 is also run.
    Any fidelity below ``1 - 1e-9`` is a failure.
    """
    d = min_distance(code)
    k, q, n = code.kappa // 2, code.q, code.n
    t = (d - 1) // 2 if max_weight is None else max_weight
    rng = np.random.default_rng(seed)
    probes = probe_payloads(q, k, rng)
    channels = [("noiseless", ChannelModel())]
    channels += [
        (f"subst {p}", ChannelModel.substitution(p, offset=True)) for p in substitution_patterns(n, q, t)
    ]
    if erasures:
        channels += [
            (f"erase {list(e)}", ChannelModel.erasure(e))
            for w in range(1, d)
            for e in itertools.combinations(range(n), w)
        ]
    outcome_sets = (
        list(itertools.product(itertools.product(range(q), repeat=2), repeat=k)) if all_outcomes else [None]
    )
    report = ExhaustiveReport()
    for name, chan in channels:
        for pi, payload in enumerate(probes):
            for outs in outcome_sets:
                _, tr = ea_send(payload, code, chan, rng, outcomes=outs)
                report.runs += 1
                report.worst_fidelity = min(report.worst_fidelity, tr.fidelity)
                if not tr.ok or tr.fidelity < 1 - FIDELITY_ATOL:
                    report.failures.append(f"{name} probe={pi} outcomes={outs} fidelity={tr.fidelity:.12f}")
    return report
