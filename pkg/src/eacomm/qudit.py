"""Dense state-vector simulation of small registers of q-level systems.

A :class:`QuditState` carries an ordered tuple of subsystem labels and a
flat amplitude vector; the first label is the most significant digit of the
amplitude index.  Internally operations reshape to one tensor axis per label.

Conventions:

* ``omega = exp(2*pi*i/q)``; ``X|j> = |j+1 mod q>``, ``Z|j> = omega**j |j>``.
* ``apply_pauli(state, label, a, b)`` applies ``X**a Z**b`` (Z first).
* Bell basis: ``|Phi^{a,b}> = (I (x) X**a Z**b) |Phi>`` with the operator on
  the second member of the pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import LabelMismatch, OutOfRange, RegisterTooLarge, UnknownLabel, ValidationError, ZeroNorm

MAX_AMPLITUDES = 2**22
ATOL = 1e-12


class PauliLabel(NamedTuple):
    a: int  # X exponent
    b: int  # Z exponent


def omega(dim: int) -> complex:
    return np.exp(2j * np.pi / dim)


@dataclass(frozen=True, eq=False)
class QuditState:
    dim: int
    labels: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"qudit dimension must be >= 2, got {self.dim}")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"duplicate labels in {self.labels}")
        _guard(self.dim, len(self.labels))
        if self.amps.shape != (self.dim ** len(self.labels),):
            raise ValidationError(f"amplitude vector has shape {self.amps.shape}, expected ({self.dim ** len(self.labels)},)")
        self.amps.setflags(write=False)

    @property
    def nqudits(self) -> int:
        return len(self.labels)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((self.dim,) * self.nqudits)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in {self.labels}") from None

    def to_json(self) -> dict:
        inter = np.empty(2 * len(self.amps))
        inter[0::2] = self.amps.real
        inter[1::2] = self.amps.imag
        return {"dim": self.dim, "labels": list(self.labels), "amps": inter.tolist()}

    @classmethod
    def from_json(cls, data: dict | str) -> QuditState:
        if isinstance(data, str):
            data = json.loads(data)
        inter = np.asarray(data["amps"], dtype=float)
        return cls(int(data["dim"]), tuple(data["labels"]), inter[0::2] + 1j * inter[1::2])


def _guard(dim: int, count: int) -> None:
    if dim**count > MAX_AMPLITUDES:
        raise RegisterTooLarge(f"{dim}^{count} amplitudes exceed the {MAX_AMPLITUDES} limit")


def _from_tensor(dim: int, labels: Sequence[str], tensor: np.ndarray) -> QuditState:
    return QuditState(dim, tuple(labels), np.ascontiguousarray(tensor).reshape(-1))


def state_from_amplitudes(dim: int, labels: Sequence[str], amps, normalize: bool = True) -> QuditState:
    amps = np.asarray(amps, dtype=complex).copy()
    if normalize:
        nrm = np.linalg.norm(amps)
        if nrm < ATOL:
            raise ZeroNorm("cannot normalize a zero vector")
        amps /= nrm
    return QuditState(dim, tuple(labels), amps)


def basis_state(dim: int, labels: Sequence[str], symbols: Sequence[int]) -> QuditState:
    labels = tuple(labels)
    if len(symbols) != len(labels):
        raise ValidationError(f"{len(symbols)} symbols for {len(labels)} labels")
    if any(not 0 <= int(s) < dim for s in symbols):
        raise OutOfRange(f"symbols {list(symbols)} must lie in 0..{dim - 1}")
    _guard(dim, len(labels))
    amps = np.zeros(dim ** len(labels), dtype=complex)
    amps[int(np.ravel_multi_index(tuple(int(s) for s in symbols), (dim,) * len(labels))) if labels else 0] = 1.0
    return QuditState(dim, labels, amps)


def max_entangled(dim: int, labels: tuple[str, str] = ("S", "R")) -> QuditState:
    """(1/sqrt(q)) sum_i |i>|i> on the two given labels."""
    amps = np.zeros(dim * dim, dtype=complex)
    amps[np.arange(dim) * (dim + 1)] = 1 / np.sqrt(dim)
    return QuditState(dim, tuple(labels), amps)


def product(*states: QuditState) -> QuditState:
    """Tensor product, labels concatenated in argument order."""
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise ValidationError("cannot tensor states of different dimension")
    labels = tuple(lab for s in states for lab in s.labels)
    _guard(dim, len(labels))
    amps = states[0].amps
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
    return QuditState(dim, labels, np.asarray(amps, dtype=complex))


def relabel(state: QuditState, mapping: dict[str, str]) -> QuditState:
    return QuditState(state.dim, tuple(mapping.get(lab, lab) for lab in state.labels), state.amps.copy())


def reorder(state: QuditState, labels: Sequence[str]) -> QuditState:
    """Same state with the subsystems permuted into ``labels`` order."""
    labels = tuple(labels)
    if sorted(labels) != sorted(state.labels):
        raise LabelMismatch(f"{labels} is not a permutation of {state.labels}")
    perm = [state.axis(lab) for lab in labels]
    return _from_tensor(state.dim, labels, state.tensor().transpose(perm))


def _apply_on_axis(state: QuditState, label: str, op: np.ndarray) -> QuditState:
    ax = state.axis(label)
    t = np.moveaxis(np.tensordot(op, state.tensor(), axes=([1], [ax])), 0, ax)
    return _from_tensor(state.dim, state.labels, t)


def pauli_matrix(dim: int, a: int, b: int) -> np.ndarray:
    """Matrix of X**a Z**b."""
    j = np.arange(dim)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[(j + a) % dim, j] = omega(dim) ** ((b * j) % dim)
    return mat


def apply_pauli(state: QuditState, label: str, a: int, b: int) -> QuditState:
    """Apply X**a Z**b on one subsystem: |j> -> omega**(b j) |j + a>."""
    q = state.dim
    ax = state.axis(label)
    phases = omega(q) ** ((b * np.arange(q)) % q)
    shape = [1] * state.nqudits
    shape[ax] = q
    t = np.roll(state.tensor() * phases.reshape(shape), a % q, axis=ax)
    return _from_tensor(q, state.labels, t)


def apply_unitary(state: QuditState, label: str, unitary: np.ndarray) -> QuditState:
    unitary = np.asarray(unitary, dtype=complex)
    if unitary.shape != (state.dim, state.dim):
        raise ValidationError(f"single-qudit operator must be {state.dim}x{state.dim}")
    return _apply_on_axis(state, label, unitary)


def apply_diagonal(state: QuditState, label: str, phases: Sequence[complex]) -> QuditState:
    ax = state.axis(label)
    shape = [1] * state.nqudits
    shape[ax] = state.dim
    return _from_tensor(state.dim, state.labels, state.tensor() * np.asarray(phases, dtype=complex).reshape(shape))


def bell_basis(dim: int, labels: tuple[str, str] = ("A", "B")) -> list[QuditState]:
    """The q**2 states |Phi^{a,b}>, ordered by a then b (index a*q + b)."""
    base = max_entangled(dim, labels)
    return [apply_pauli(base, labels[1], a, b) for a in range(dim) for b in range(dim)]


def bell_amplitudes(state: QuditState, pair: tuple[str, str]) -> np.ndarray:
    """Coefficients ``v[a, b, rest]`` of the state in the Bell basis of ``pair``.

    ``v[a, b]`` is ``(<Phi^{a,b}| (x) I) |psi>`` reshaped over the remaining
    labels (in their original order).  The map ``psi -> v`` is unitary: it is
    the Bell-to-computational basis change.
    """
    q = state.dim
    ax1, ax2 = state.axis(pair[0]), state.axis(pair[1])
    if ax1 == ax2:
        raise ValidationError("Bell pair needs two distinct labels")
    t = np.moveaxis(state.tensor(), (ax1, ax2), (0, 1)).reshape(q, q, -1)
    i = np.arange(q)
    # g[a, i, rest] = psi[i, i + a, rest]
    g = t[i[None, :], (i[None, :] + i[:, None]) % q, :]
    # <Phi^{a,b}| has conjugated phases omega**(-b i)
    f = omega(q) ** (-(np.outer(i, i) % q)) / np.sqrt(q)
    return np.einsum("bi,air->abr", f, g)


def bell_probabilities(state: QuditState, pair: tuple[str, str]) -> np.ndarray:
    v = bell_amplitudes(state, pair)
    return np.sum(np.abs(v) ** 2, axis=2)


def _remaining(state: QuditState, pair: Sequence[str]) -> tuple[str, ...]:
    return tuple(lab for lab in state.labels if lab not in pair)


def bell_project(state: QuditState, pair: tuple[str, str], a: int, b: int) -> tuple[float, QuditState]:
    """Probability of outcome (a, b) and the normalised post-measurement state."""
    v = bell_amplitudes(state, pair)[a % state.dim, b % state.dim]
    prob = float(np.vdot(v, v).real)
    if prob < ATOL**2:
        raise ZeroNorm(f"Bell outcome ({a},{b}) has probability {prob:g}")
    return prob, QuditState(state.dim, _remaining(state, pair), v / np.sqrt(prob))


def bell_measure(
    state: QuditState, pair: tuple[str, str], rng: np.random.Generator, outcome: tuple[int, int] | None = None
) -> tuple[PauliLabel, QuditState]:
    """Generalised Bell measurement on ``pair``; the pair is removed from the state.

    ``outcome`` forces a branch (it must have nonzero probability) instead of
    sampling with ``rng``.
    """
    q = state.dim
    v = bell_amplitudes(state, pair)
    if outcome is None:
        probs = np.sum(np.abs(v) ** 2, axis=2).reshape(-1)
        total = probs.sum()
        if total < ATOL:
            raise ZeroNorm("cannot measure a zero-norm state")
        flat = int(rng.choice(q * q, p=probs / total))
        a, b = divmod(flat, q)
    else:
        a, b = outcome[0] % q, outcome[1] % q
    branch = v[a, b]
    prob = float(np.vdot(branch, branch).real)
    if prob < ATOL**2:
        raise ZeroNorm(f"Bell outcome ({a},{b}) has probability {prob:g}")
    return PauliLabel(a, b), QuditState(q, _remaining(state, pair), branch / np.sqrt(prob))


def bell_transform(state: QuditState, pair: tuple[str, str]) -> QuditState:
    """Unitary mapping |Phi^{a,b}> on ``pair`` to |a>|b> on the same labels."""
    q = state.dim
    v = bell_amplitudes(state, pair)
    rest = _remaining(state, pair)
    return reorder(_from_tensor(q, (*pair, *rest), v.reshape((q, q) + (q,) * len(rest))), state.labels)


def marginal_probabilities(state: QuditState, label: str) -> np.ndarray:
    t = np.moveaxis(state.tensor(), state.axis(label), 0).reshape(state.dim, -1)
    return np.sum(np.abs(t) ** 2, axis=1)


def project_symbol(state: QuditState, label: str, symbol: int) -> tuple[float, QuditState]:
    """Project one subsystem onto |symbol> (kept in the register), renormalised."""
    ax = state.axis(label)
    t = np.moveaxis(state.tensor(), ax, 0).copy()
    mask = np.ones(state.dim, dtype=bool)
    mask[symbol] = False
    t[mask] = 0
    prob = float(np.sum(np.abs(t) ** 2))
    if prob < ATOL**2:
        raise ZeroNorm(f"symbol {symbol} on {label!r} has probability {prob:g}")
    return prob, _from_tensor(state.dim, state.labels, np.moveaxis(t, 0, ax) / np.sqrt(prob))


def measure(state: QuditState, labels: Sequence[str], rng: np.random.Generator) -> tuple[tuple[int, ...], QuditState]:
    """Computational-basis measurement of ``labels``; measured labels are removed."""
    q = state.dim
    labels = tuple(labels)
    axes = [state.axis(lab) for lab in labels]
    t = np.moveaxis(state.tensor(), axes, range(len(axes))).reshape(q ** len(axes), -1)
    probs = np.sum(np.abs(t) ** 2, axis=1)
    flat = int(rng.choice(len(probs), p=probs / probs.sum()))
    outcome = tuple(int(s) for s in np.unravel_index(flat, (q,) * len(axes)))
    row = t[flat]
    return outcome, QuditState(q, _remaining(state, labels), row / np.linalg.norm(row))


def fidelity(s1: QuditState, s2: QuditState) -> float:
    """|<s1|s2>|**2; subsystems are matched by label."""
    if s1.dim != s2.dim or sorted(s1.labels) != sorted(s2.labels):
        raise LabelMismatch(f"{s1.labels} vs {s2.labels}")
    if s1.labels != s2.labels:
        s2 = reorder(s2, s1.labels)
    return min(1.0, float(abs(np.vdot(s1.amps, s2.amps)) ** 2))


def reduced_fidelity(joint: QuditState, target: QuditState) -> float:
    """<target| rho |target> where rho is ``joint`` traced down to target's labels."""
    if joint.dim != target.dim:
        raise LabelMismatch("dimension mismatch")
    for lab in target.labels:
        joint.axis(lab)
    rest = _remaining(joint, target.labels)
    t = reorder(joint, (*target.labels, *rest)).amps.reshape(target.dim**target.nqudits, -1)
    v = target.amps.conj() @ t
    return min(1.0, float(np.vdot(v, v).real))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    qm, r = np.linalg.qr(z)
    d = np.diag(r)
    return qm * (d / np.abs(d))


def random_state(dim: int, labels: Sequence[str], rng: np.random.Generator) -> QuditState:
    n = dim ** len(labels)
    return state_from_amplitudes(dim, labels, rng.standard_normal(n) + 1j * rng.standard_normal(n))
