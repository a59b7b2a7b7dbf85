"""Commutation frontend: per-qubit H/Rx/Ry slots feeding the permutation queue.

Each qubit carries at most one pending Ry angle, one pending Rx angle, and
an H parity bit.  The pending operator is Ry * Rx * H, applied after the
phase/permutation queue; a flush therefore executes the queue first, then
H, then Rx, then Ry per qubit.  Incoming gates are rewritten through the
slots toward the queue using a fixed table of commutation relations;
anything without a table entry forces a flush of the touched qubits and is
dispatched again into the empty structures.  Deferring the pairwise gates
this way keeps the stored map small, since only they can grow it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import permqueue
from .ir import GateOp
from .permqueue import PhasePermRecord
from .state import h_block, rx_block, ry_block

_PHASE_S = 1j
_PHASE_SDG = -1j
_PHASE_T = cmath.exp(0.25j * math.pi)
_PHASE_TDG = cmath.exp(-0.25j * math.pi)
_MINUS_ONE = complex(-1.0, 0.0)


@dataclass
class QubitSlots:
    ry: float | None = None
    rx: float | None = None
    h: int = 0

    def empty(self) -> bool:
        return self.ry is None and self.rx is None and self.h == 0


def _mask(qubits) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def phase_perm_record(op: GateOp) -> PhasePermRecord | None:
    """The queue record for ``op``, or None if the gate is pairwise."""
    kind = op.kind
    ctrl = _mask(op.controls)
    if kind == "x":
        return permqueue.flip_record(1 << op.targets[0], ctrl)
    if kind == "y":
        return permqueue.pauli_y_record(op.targets[0], ctrl)
    if kind == "z":
        return permqueue.phase_record(_MINUS_ONE, ctrl | (1 << op.targets[0]))
    if kind == "s":
        return permqueue.phase_record(_PHASE_S, ctrl | (1 << op.targets[0]))
    if kind == "sdg":
        return permqueue.phase_record(_PHASE_SDG, ctrl | (1 << op.targets[0]))
    if kind == "t":
        return permqueue.phase_record(_PHASE_T, ctrl | (1 << op.targets[0]))
    if kind == "tdg":
        return permqueue.phase_record(_PHASE_TDG, ctrl | (1 << op.targets[0]))
    if kind == "r1":
        return permqueue.phase_record(cmath.exp(1j * op.angle), ctrl | (1 << op.targets[0]))
    if kind == "rz":
        half = 0.5 * op.angle
        pe = complex(math.cos(half), -math.sin(half))
        return permqueue.zparity_record(1 << op.targets[0], pe, pe.conjugate(), ctrl)
    if kind == "swap":
        return permqueue.bitswap_record(op.targets[0], op.targets[1], ctrl)
    if kind == "pexp" and all(ax == "Z" for ax in op.axes):
        half = 0.5 * op.angle
        pe = complex(math.cos(half), -math.sin(half))
        return permqueue.zparity_record(_mask(op.targets), pe, pe.conjugate(), ctrl)
    return None


def flush_qubits(sim, qubits) -> None:
    """Execute the whole queue, then the pending slots of ``qubits`` only.

    Slots on untouched qubits stay pending; their support is disjoint so
    they commute with anything acting on the flushed qubits.
    """
    pending = [q for q in qubits if q in sim.slots and not sim.slots[q].empty()]
    if not pending and not sim.queue.records:
        return
    sim.stats.flush_count += 1
    if sim.queue.records:
        sim._execute_queue()
    for q in sorted(pending):
        sl = sim.slots[q]
        if sl.h:
            sim._apply_pairwise(h_block(q))
        if sl.rx is not None:
            sim._apply_pairwise(rx_block(q, sl.rx))
        if sl.ry is not None:
            sim._apply_pairwise(ry_block(q, sl.ry))
        sl.ry = sl.rx = None
        sl.h = 0


def flush_all(sim) -> None:
    flush_qubits(sim, list(sim.slots.keys()))


def pre_measure_flush(sim, qubits) -> None:
    """Before measuring: run the entire queue plus the measured qubits' slots."""
    flush_qubits(sim, qubits)


def _slot(sim, q: int) -> QubitSlots:
    sl = sim.slots.get(q)
    if sl is None:
        sl = QubitSlots()
        sim.slots[q] = sl
    return sl


def _merge_slot_gate(sim, op: GateOp) -> None:
    q = op.targets[0]
    sl = _slot(sim, q)
    kind = op.kind
    if kind == "ry":
        sl.ry = op.angle if sl.ry is None else sl.ry + op.angle
        if sl.ry == 0.0:
            sl.ry = None
    elif kind == "rx":
        if sl.ry is not None:
            flush_qubits(sim, [q])
            _merge_slot_gate(sim, op)
            return
        sl.rx = op.angle if sl.rx is None else sl.rx + op.angle
        if sl.rx == 0.0:
            sl.rx = None
    else:  # h
        if sl.rx is not None:
            flush_qubits(sim, [q])
            _merge_slot_gate(sim, op)
            return
        if sl.ry is not None:
            sl.ry = -sl.ry  # H * Ry(a) = Ry(-a) * H
        sl.h ^= 1  # H * H = I
    sim.stats.gates_absorbed += 1


def _commute_pauli(sim, op: GateOp) -> None:
    # Uncontrolled X/Y/Z pushed through Ry, then Rx, then H on its qubit.
    kind = op.kind
    q = op.targets[0]
    sl = _slot(sim, q)
    if sl.ry is not None and kind in ("x", "z"):
        sl.ry = -sl.ry
    if sl.rx is not None and kind in ("y", "z"):
        sl.rx = -sl.rx
    minus = False
    if sl.h:
        if kind == "x":
            kind = "z"
        elif kind == "z":
            kind = "x"
        else:
            minus = True  # Y * H = -H * Y
    sim._enqueue(phase_perm_record(GateOp(kind, (q,))))
    if minus:
        sim._enqueue(permqueue.phase_record(_MINUS_ONE))


def dispatch(sim, op: GateOp) -> None:
    """Route one gate: merge into a slot, enqueue, or flush and re-dispatch."""
    kind = op.kind

    if kind in ("h", "rx", "ry"):
        if op.controls:
            flush_qubits(sim, op.controls + op.targets)
            sim._apply_direct(op)
        else:
            _merge_slot_gate(sim, op)
        return

    if kind == "pexp" and any(ax != "Z" for ax in op.axes):
        flush_qubits(sim, op.controls + op.targets)
        sim._apply_direct(op)
        return

    if kind in ("x", "y", "z") and not op.controls:
        _commute_pauli(sim, op)
        return

    # Phase/permutation gate, possibly controlled.
    if any(not _slot(sim, q).empty() for q in op.controls):
        flush_qubits(sim, op.controls + op.targets)

    if kind == "x":
        t = op.targets[0]
        sl = _slot(sim, t)
        if sl.ry is not None:
            flush_qubits(sim, op.controls + op.targets)
            sl = _slot(sim, t)
        # A pending Rx on the target commutes with controlled-X.
        if sl.h:
            # CX * H_t = H_t * CZ: the target bit joins the phase condition.
            sim._enqueue(permqueue.phase_record(_MINUS_ONE, _mask(op.controls) | (1 << t)))
        else:
            sim._enqueue(permqueue.flip_record(1 << t, _mask(op.controls)))
        return

    if any(not _slot(sim, q).empty() for q in op.targets):
        flush_qubits(sim, op.controls + op.targets)
    sim._enqueue(phase_perm_record(op))
