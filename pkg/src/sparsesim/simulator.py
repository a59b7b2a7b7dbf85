"""Simulator facade tying together state, queue, scheduler, and statistics."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from . import permqueue, scheduler
from .ir import Conditional, GateOp, Program, validate_op
from .permqueue import PhasePermQueue
from .state import (
    PRUNE_EPS,
    MeasurementOutcome,
    PairwiseBlock,
    SparseState,
    h_block,
    new_wavefunction,
    pauli_exp_block,
    rx_block,
    ry_block,
)


@dataclass
class SimStats:
    """Instrumentation counters accumulated over a run."""

    gate_count: int = 0
    flush_count: int = 0
    gates_absorbed: int = 0
    gates_enqueued: int = 0
    queue_executions: int = 0
    parallel_executions: int = 0
    measurement_count: int = 0
    max_state_size: int = 1


@dataclass
class RunStats:
    """Table-style run report; serialized with a stable key order."""

    qubits: int
    max_state_size: int
    gate_count: int
    flush_count: int
    wall_time_ms: int
    threads: int
    seed: int
    success: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "qubits": self.qubits,
                "max_state_size": self.max_state_size,
                "gate_count": self.gate_count,
                "flush_count": self.flush_count,
                "wall_time_ms": self.wall_time_ms,
                "threads": self.threads,
                "seed": self.seed,
                "success": self.success,
            }
        )


class Simulator:
    """Owns one sparse wavefunction and schedules gates onto it.

    Operations take exclusive access and complete before the next begins;
    the only internal parallelism is the partitioned queue execution.
    """

    def __init__(
        self,
        num_qubits: int,
        *,
        seed: int = 0,
        threads: int = 1,
        use_scheduler: bool = True,
        par_min_queue: int = permqueue.DEFAULT_PAR_MIN_QUEUE,
        par_min_states: int = permqueue.DEFAULT_PAR_MIN_STATES,
        prune_eps: float = PRUNE_EPS,
    ):
        self.state = new_wavefunction(num_qubits, prune_eps)
        self.num_qubits = num_qubits
        self.queue = PhasePermQueue()
        self.slots: dict[int, scheduler.QubitSlots] = {}
        self.rng = random.Random(seed)
        self.seed = seed
        self.threads = threads
        self.use_scheduler = use_scheduler
        self.par_min_queue = par_min_queue
        self.par_min_states = par_min_states
        self.stats = SimStats()
        self.outcomes: list[MeasurementOutcome] = []

    @property
    def measurements(self) -> list[int]:
        return [o.result for o in self.outcomes]

    def state_size(self) -> int:
        return len(self.state)

    def norm_sq(self) -> float:
        return self.state.norm_sq()

    def apply(self, op: GateOp) -> None:
        validate_op(op, self.num_qubits)
        self.stats.gate_count += 1
        if op.kind == "mz":
            self.measure(op.targets)
            return
        if self.use_scheduler:
            scheduler.dispatch(self, op)
        else:
            self._apply_direct(op)

    def apply_all(self, ops) -> None:
        for op in ops:
            self.apply(op)

    def measure(self, qubits) -> int:
        """Flush what the measurement needs, then project a joint Z product."""
        if self.use_scheduler:
            scheduler.pre_measure_flush(self, tuple(qubits))
        outcome, new_state = self.state.measure(qubits, self.rng)
        self._set_state(new_state)
        self.outcomes.append(outcome)
        self.stats.measurement_count += 1
        return outcome.result

    def flush(self) -> None:
        """Force every queued gate and pending slot into the state."""
        if self.use_scheduler:
            scheduler.flush_all(self)

    def dump(self) -> list[tuple[int, complex]]:
        self.flush()
        return self.state.dump()

    # -- internals used by the scheduler ---------------------------------

    def _set_state(self, state: SparseState) -> None:
        self.state = state
        if len(state) > self.stats.max_state_size:
            self.stats.max_state_size = len(state)

    def _apply_pairwise(self, block: PairwiseBlock, control_mask: int = 0) -> None:
        self._set_state(self.state.apply_block(block, control_mask))

    def _enqueue(self, record) -> None:
        self.queue.enqueue(record)
        self.stats.gates_enqueued += 1

    def _execute_queue(self) -> None:
        self._set_state(
            permqueue.execute(
                self.queue,
                self.state,
                thread_budget=self.threads,
                par_min_queue=self.par_min_queue,
                par_min_states=self.par_min_states,
                stats=self.stats,
            )
        )

    def _apply_direct(self, op: GateOp) -> None:
        """Apply one gate immediately, bypassing slots and the queue."""
        kind = op.kind
        cmask = 0
        for q in op.controls:
            cmask |= 1 << q
        if kind == "h":
            self._apply_pairwise(h_block(op.targets[0]), cmask)
            return
        if kind == "rx":
            self._apply_pairwise(rx_block(op.targets[0], op.angle), cmask)
            return
        if kind == "ry":
            self._apply_pairwise(ry_block(op.targets[0], op.angle), cmask)
            return
        if kind == "pexp" and any(ax != "Z" for ax in op.axes):
            x_mask = y_mask = z_mask = 0
            for q, ax in zip(op.targets, op.axes):
                if ax == "X":
                    x_mask |= 1 << q
                elif ax == "Y":
                    y_mask |= 1 << q
                else:
                    z_mask |= 1 << q
            self._apply_pairwise(pauli_exp_block(x_mask, y_mask, z_mask, op.angle), cmask)
            return
        rec = scheduler.phase_perm_record(op)
        amps = self.state.amps
        out: dict[int, complex] = {}
        for b, amp in amps.items():
            f, g = permqueue.apply_record(rec, b)
            out[g] = f * amp
        self._set_state(SparseState(self.num_qubits, out, self.state.prune_eps))


@dataclass
class RunResult:
    dump: list[tuple[int, complex]]
    measurements: list[int]
    stats: RunStats
    sim_stats: SimStats = field(repr=False, default=None)


def run_program(
    program: Program,
    seed: int = 0,
    threads: int = 1,
    scheduler_enabled: bool = True,
    par_min_queue: int = permqueue.DEFAULT_PAR_MIN_QUEUE,
    par_min_states: int = permqueue.DEFAULT_PAR_MIN_STATES,
) -> RunResult:
    """Run a parsed program and report the final dump, outcomes, and stats."""
    start = time.perf_counter()
    sim = Simulator(
        program.num_qubits,
        seed=seed,
        threads=threads,
        use_scheduler=scheduler_enabled,
        par_min_queue=par_min_queue,
        par_min_states=par_min_states,
    )
    for entry in program.ops:
        if isinstance(entry, Conditional):
            if sim.measurements[entry.meas_index] == entry.value:
                sim.apply(entry.op)
        else:
            sim.apply(entry)
    final = sim.dump()
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    stats = RunStats(
        qubits=program.num_qubits,
        max_state_size=sim.stats.max_state_size,
        gate_count=sim.stats.gate_count,
        flush_count=sim.stats.flush_count,
        wall_time_ms=elapsed_ms,
        threads=threads,
        seed=seed,
        success=True,
    )
    return RunResult(final, sim.measurements, stats, sim.stats)
