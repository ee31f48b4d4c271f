"""Simulator and verifier for teleportation-based entanglement-assisted quantum communication."""

__version__ = "0.1.0"

from .bounds import classify, ea_singleton, frontier, our_bound, q_singleton
from .codes import LinearCode, decode_bounded, decode_erasures, encode, min_distance, repeat_code, rs_code
from .field import FieldSpec, elements, field_new, parse_field_spec
from .protocol import ChannelModel, SchemeParams, ea_send, ea_send_fully_quantum, monte_carlo, scheme_from_code, teleport
from .qudit import QuditState, basis_state, bell_basis, bell_measure, fidelity, max_entangled

__all__ = [
    "ChannelModel",
    "FieldSpec",
    "LinearCode",
    "QuditState",
    "SchemeParams",
    "basis_state",
    "bell_basis",
    "bell_measure",
    "classify",
    "decode_bounded",
    "decode_erasures",
    "ea_send",
    "ea_send_fully_quantum",
    "ea_singleton",
    "elements",
    "encode",
    "fidelity",
    "field_new",
    "frontier",
    "max_entangled",
    "min_distance",
    "monte_carlo",
    "our_bound",
    "parse_field_spec",
    "q_singleton",
    "repeat_code",
    "rs_code",
    "scheme_from_code",
    "teleport",
]
