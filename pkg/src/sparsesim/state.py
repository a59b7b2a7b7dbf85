"""Sparse wavefunction storage and direct application of pairwise gates.

A state over ``n`` qubits is a mapping from basis labels to complex
amplitudes; qubit ``k`` lives at bit ``k`` of the label and only entries
with magnitude above the pruning threshold are stored.  Gates whose matrix
couples two basis states per application (H, Rx, Ry, Pauli exponentials
with X/Y support) are applied here in a single pass over the map; gates
with one nonzero entry per row belong to the permutation queue instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

MAX_QUBITS = 128

# Entries at or below this magnitude are dropped without renormalizing;
# each drop perturbs the norm by at most eps^2 = 1e-24.
PRUNE_EPS = 1e-12

_SQRT_HALF = math.sqrt(0.5)

Coeffs = tuple[complex, complex, complex, complex]


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a joint Z-product measurement.

    ``result`` is 0 for the even-parity (+1 eigenvalue) branch and 1 for
    the odd-parity branch; ``probability`` is the probability of the
    branch that was observed.
    """

    result: int
    probability: float


@dataclass(frozen=True)
class PairwiseBlock:
    """A gate acting on pairs of basis labels ``(b, b ^ flip_mask)``.

    ``coeffs(lo)`` returns the 2x2 action ``(a00, a01, a10, a11)`` on the
    ordered pair ``(lo, hi)`` where ``lo`` has a 0 at the lowest set bit
    of ``flip_mask`` and ``hi = lo ^ flip_mask``.  The induced 2x2 matrix
    must be unitary for every label.
    """

    flip_mask: int
    coeffs: Callable[[int], Coeffs]


def h_block(qubit: int) -> PairwiseBlock:
    a = _SQRT_HALF
    c: Coeffs = (a, a, a, -a)
    return PairwiseBlock(1 << qubit, lambda b, _c=c: _c)


def rx_block(qubit: int, theta: float) -> PairwiseBlock:
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    m: Coeffs = (c, -1j * s, -1j * s, c)
    return PairwiseBlock(1 << qubit, lambda b, _m=m: _m)


def ry_block(qubit: int, theta: float) -> PairwiseBlock:
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    m: Coeffs = (c, -s, s, c)
    return PairwiseBlock(1 << qubit, lambda b, _m=m: _m)


def pauli_exp_block(x_mask: int, y_mask: int, z_mask: int, theta: float) -> PairwiseBlock:
    """exp(-i*theta/2 * P) for a Pauli string with X or Y support.

    P maps |b> to phi(b)|b ^ m> with m the X|Y flip mask and
    phi(b) = i^{#Y} * (-1)^{parity(b & (y_mask | z_mask))}.
    """
    m = x_mask | y_mask
    if m == 0:
        raise ValueError("pauli_exp_block requires X or Y support; use a phase record for pure-Z strings")
    c = complex(math.cos(0.5 * theta))
    s = math.sin(0.5 * theta)
    ny = y_mask.bit_count()
    base = (1j ** (ny & 3)) * (-1j * s)
    sign_mask = y_mask | z_mask

    def coeffs(lo: int) -> Coeffs:
        phi_lo = base if ((lo & sign_mask).bit_count() & 1) == 0 else -base
        hi = lo ^ m
        phi_hi = base if ((hi & sign_mask).bit_count() & 1) == 0 else -base
        return (c, phi_hi, phi_lo, c)

    return PairwiseBlock(m, coeffs)


class SparseState:
    """Associative-map wavefunction: label -> amplitude, plus qubit count."""

    __slots__ = ("num_qubits", "amps", "prune_eps")

    def __init__(self, num_qubits: int, amps: dict[int, complex], prune_eps: float = PRUNE_EPS):
        self.num_qubits = num_qubits
        self.amps = amps
        self.prune_eps = prune_eps

    def __len__(self) -> int:
        return len(self.amps)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amps.values())

    def dump(self) -> list[tuple[int, complex]]:
        """Entries sorted ascending by label; deterministic across runs."""
        return sorted(self.amps.items())

    def apply_block(self, block: PairwiseBlock, control_mask: int = 0) -> "SparseState":
        """Apply a pairwise gate in one pass, producing a new map.

        Labels failing the control condition copy through unchanged.  A
        pair with both partners present is processed once, at the entry
        carrying a 1 at the lowest differing bit; a lone entry produces up
        to two outputs.  At most one partner lookup happens per entry.
        """
        m = block.flip_mask
        dbit = m & -m
        coeffs = block.coeffs
        eps = self.prune_eps
        src = self.amps
        out: dict[int, complex] = {}
        for b, amp in src.items():
            if b & control_mask != control_mask:
                out[b] = amp
                continue
            partner = b ^ m
            if b & dbit:
                lo = partner
                other = src.get(partner)
                a00, a01, a10, a11 = coeffs(lo)
                if other is not None:
                    v0 = a00 * other + a01 * amp
                    v1 = a10 * other + a11 * amp
                else:
                    v0 = a01 * amp
                    v1 = a11 * amp
                if abs(v0) > eps:
                    out[lo] = v0
                if abs(v1) > eps:
                    out[b] = v1
            else:
                if partner in src:
                    continue  # handled when the iteration reaches the partner
                a00, a01, a10, a11 = coeffs(b)
                v0 = a00 * amp
                v1 = a10 * amp
                if abs(v0) > eps:
                    out[b] = v0
                if abs(v1) > eps:
                    out[partner] = v1
        return SparseState(self.num_qubits, out, eps)

    def apply_pauli_exponential(
        self,
        pauli_string: Mapping[int, str],
        theta: float,
        controls: Iterable[int] = (),
    ) -> "SparseState":
        """Apply exp(-i*theta/2 * P), optionally controlled.

        Strings containing X or Y route through the pairwise pass; a
        pure-Z string is diagonal and only multiplies phases.
        """
        if not pauli_string:
            raise ValueError("empty Pauli string")
        x_mask = y_mask = z_mask = 0
        for q, axis in pauli_string.items():
            if axis == "X":
                x_mask |= 1 << q
            elif axis == "Y":
                y_mask |= 1 << q
            elif axis == "Z":
                z_mask |= 1 << q
            else:
                raise ValueError(f"unknown Pauli axis {axis!r}")
        cmask = 0
        for q in controls:
            cmask |= 1 << q
        if x_mask | y_mask:
            return self.apply_block(pauli_exp_block(x_mask, y_mask, z_mask, theta), cmask)
        # Diagonal: phase exp(-i*theta/2) on even parity of the Z support.
        pe = complex(math.cos(0.5 * theta), -math.sin(0.5 * theta))
        po = pe.conjugate()
        out: dict[int, complex] = {}
        for b, amp in self.amps.items():
            if b & cmask != cmask:
                out[b] = amp
            else:
                out[b] = amp * (po if (b & z_mask).bit_count() & 1 else pe)
        return SparseState(self.num_qubits, out, self.prune_eps)

    def measure(self, qubits: Iterable[int], rng) -> tuple[MeasurementOutcome, "SparseState"]:
        """Joint Z-product measurement over ``qubits``.

        Draws one uniform from ``rng``; outcome is the even-parity branch
        iff the draw lands below its probability.  The surviving branch is
        renormalized.  Deterministic given the seed stream.
        """
        mask = 0
        for q in qubits:
            mask |= 1 << q
        p_even = 0.0
        total = 0.0
        for b, amp in self.amps.items():
            w = abs(amp) ** 2
            total += w
            if not (b & mask).bit_count() & 1:
                p_even += w
        u = rng.random()
        outcome = 0 if u < p_even else 1
        p_branch = p_even if outcome == 0 else total - p_even
        if p_branch <= 0.0:
            raise RuntimeError("measured branch has vanishing probability")
        scale = 1.0 / math.sqrt(p_branch)
        out = {
            b: amp * scale
            for b, amp in self.amps.items()
            if ((b & mask).bit_count() & 1) == outcome
        }
        return MeasurementOutcome(outcome, p_branch), SparseState(self.num_qubits, out, self.prune_eps)


def new_wavefunction(num_qubits: int, prune_eps: float = PRUNE_EPS) -> SparseState:
    """The all-zeros computational basis state |0...0>."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    return SparseState(num_qubits, {0: 1 + 0j}, prune_eps)


def norm_sq(state: SparseState) -> float:
    return state.norm_sq()


def state_size(state: SparseState) -> int:
    return len(state)


def dump(state: SparseState) -> list[tuple[int, complex]]:
    return state.dump()
