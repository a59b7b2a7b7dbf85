"""Order finding and discrete-log drivers built on the sparse simulator.

Phase estimation reuses a single control qubit: for each phase bit the
driver applies H, a controlled modular multiplication, a classically
conditioned phase correction derived from the bits already measured, a
second H, and a measure-and-reset.  Modular addition keeps the running
value in [0, N) with an add / compare / conditional-subtract sequence; the
comparison flag is uncomputed either coherently (default) or by measuring
it in the X basis and repairing the phase, which temporarily doubles the
number of stored entries.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import ops
from .arithmetic import Reg, cdkm_add, cswap_regs, iqft, load_const, phi_add_const, qft
from .ir import GateOp
from .simulator import RunStats, Simulator

# -- classical number theory helpers ------------------------------------


def factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    return n > 1 and factorize(n) == {n: 1}


def is_prime_power(n: int) -> bool:
    return len(factorize(n)) == 1


def carmichael(n: int) -> int:
    """Largest multiplicative order attainable modulo n."""
    lam = 1
    for p, k in factorize(n).items():
        if p == 2 and k >= 3:
            block = 1 << (k - 2)
        else:
            block = (p - 1) * p ** (k - 1)
        lam = lam * block // math.gcd(lam, block)
    return lam


def multiplicative_order(g: int, n: int) -> int:
    if math.gcd(g, n) != 1:
        raise ValueError(f"{g} is not a unit modulo {n}")
    order = carmichael(n)
    for p in factorize(order):
        while order % p == 0 and pow(g, order // p, n) == 1:
            order //= p
    return order


def max_order_generator(n: int) -> int:
    """Smallest unit modulo n whose order equals the group exponent."""
    lam = carmichael(n)
    for g in range(2, n):
        if math.gcd(g, n) == 1 and multiplicative_order(g, n) == lam:
            return g
    raise ValueError(f"no generator of maximal order modulo {n}")


def _convergent_denominators(j: int, phase_bits: int, bound: int) -> list[int]:
    """Denominators of the convergents of j / 2^phase_bits below ``bound``."""
    num, den = j, 1 << phase_bits
    out: list[int] = []
    # k_i = a_i * k_{i-1} + k_{i-2} with k_{-2}=1, k_{-1}=0.
    k_prev, k = 1, 0
    while den:
        a, rem = divmod(num, den)
        num, den = den, rem
        k_prev, k = k, a * k + k_prev
        if k >= bound:
            break
        if k > 0:
            out.append(k)
    return out


def continued_fraction_order(j: int, phase_bits: int, g: int, n: int) -> int | None:
    """Order candidate from the convergents of j / 2^phase_bits.

    Returns the smallest convergent denominator r below n with
    g^r = 1 (mod n), or None when no convergent works (j = 0 included).
    """
    if j == 0:
        return None
    for k in _convergent_denominators(j, phase_bits, n):
        if pow(g, k, n) == 1:
            return k
    return None


def _reduce_to_order(x: int, g: int, n: int) -> int:
    """Smallest divisor d of x with g^d = 1 (mod n); x must satisfy g^x = 1."""
    for p in factorize(x):
        while x % p == 0 and pow(g, x // p, n) == 1:
            x //= p
    return x


def order_from_phase(j: int, phase_bits: int, g: int, n: int, max_multiple: int = 128) -> int | None:
    """Order recovery used by the drivers.

    Tries the plain convergents first; when the sampled eigenvalue index
    shares a factor with the order, the convergent denominator is only a
    divisor of it, so small multiples of the denominators are also tested.
    """
    order = continued_fraction_order(j, phase_bits, g, n)
    if order is not None:
        return _reduce_to_order(order, g, n)
    if j == 0:
        return None
    for k in reversed(_convergent_denominators(j, phase_bits, n)):
        for t in range(2, max_multiple + 1):
            if k * t >= n:
                break
            if pow(g, k * t, n) == 1:
                return _reduce_to_order(k * t, g, n)
    return None


def sample_phase_outcome(rng, order: int, phase_bits: int) -> int:
    """One draw from the exact order-finding measurement distribution.

    Picks an eigenvalue index uniformly, then samples the phase register
    outcome j with probability |(1/2^m) sum_a exp(2 pi i a (s/r - j/2^m))|^2.
    """
    import numpy as np

    m = phase_bits
    dim = 1 << m
    s = rng.randrange(order)
    j = np.arange(dim)
    delta = s / order - j / dim
    num = np.sin(np.pi * dim * delta) ** 2
    den = np.sin(np.pi * delta) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        probs = np.where(den < 1e-300, 1.0, num / (dim * dim * np.where(den < 1e-300, 1.0, den)))
    probs = probs / probs.sum()
    u = rng.random()
    return int(np.searchsorted(np.cumsum(probs), u))


# -- instances -----------------------------------------------------------


@dataclass(frozen=True)
class FactoringInstance:
    modulus: int
    bit_size: int
    generator: int
    order: int
    phase_bits: int
    adder: str

    @classmethod
    def build(cls, modulus: int, adder: str = "cdkm", generator: int | None = None) -> "FactoringInstance":
        if adder not in ("cdkm", "qft"):
            raise ValueError(f"unknown adder {adder!r}")
        if modulus < 9 or modulus % 2 == 0:
            raise ValueError("modulus must be an odd composite")
        if is_prime(modulus) or is_prime_power(modulus):
            raise ValueError("modulus must have at least two distinct prime factors")
        if generator is None:
            generator = max_order_generator(modulus)
        if math.gcd(generator, modulus) != 1:
            raise ValueError("generator must be a unit modulo the modulus")
        n = modulus.bit_length()
        return cls(modulus, n, generator, multiplicative_order(generator, modulus), 2 * n + 1, adder)


@dataclass(frozen=True)
class DlogInstance:
    prime: int
    bit_size: int
    base: int
    target: int
    order: int
    phase_bits: int
    adder: str = "cdkm"

    @classmethod
    def build(
        cls,
        prime: int,
        base: int | None = None,
        target: int | None = None,
        exponent: int | None = None,
        adder: str = "cdkm",
    ) -> "DlogInstance":
        if not is_prime(prime) or prime < 3:
            raise ValueError("modulus must be an odd prime")
        order = prime - 1
        if base is None:
            base = max_order_generator(prime)
        elif multiplicative_order(base, prime) != order:
            raise ValueError(f"{base} does not generate the full group modulo {prime}")
        if target is None:
            if exponent is None:
                raise ValueError("need a target value or an exponent")
            target = pow(base, exponent, prime)
        if not 1 <= target < prime or math.gcd(target, prime) != 1:
            raise ValueError("target must be a unit modulo the prime")
        n = prime.bit_length()
        return cls(prime, n, base, target, order, 2 * n + 1, adder)


# -- register file -------------------------------------------------------


@dataclass(frozen=True)
class Layout:
    """Qubit assignment for the modular-exponentiation drivers.

    The published register budgets are 5n+2 qubits for the ripple-carry
    configuration and 2n+3 for the Fourier-basis one.  Our ripple-carry
    circuit needs 3n+5 working qubits; the remainder is allocated as idle
    workspace so reported totals match the budget.
    """

    num_qubits: int
    ctrl: int
    x: Reg
    y: Reg
    a: Reg | None
    f: int
    z: int | None

    @classmethod
    def for_instance(cls, n: int, adder: str) -> "Layout":
        ctrl = 0
        x = tuple(range(1, n + 1))
        y = tuple(range(n + 1, 2 * n + 2))
        if adder == "qft":
            return cls(2 * n + 3, ctrl, x, y, None, 2 * n + 2, None)
        a = tuple(range(2 * n + 2, 3 * n + 3))
        return cls(5 * n + 2, ctrl, x, y, a, 3 * n + 3, 3 * n + 4)


# -- modular arithmetic on the register file ------------------------------


def _cdkm_add_const(sim: Simulator, lay: Layout, value: int, controls: tuple[int, ...]) -> None:
    """y += value (mod 2^w) via the operand register; loads are controlled.

    With the controls unsatisfied the operand register stays zero, so the
    uncontrolled ripple adder contributes the identity.
    """
    w = len(lay.y)
    value %= 1 << w
    sim.apply_all(load_const(lay.a, value, controls))
    sim.apply_all(cdkm_add(lay.a, lay.y, lay.z))
    sim.apply_all(load_const(lay.a, value, controls))


def _qft_add_const(sim: Simulator, lay: Layout, value: int, controls: tuple[int, ...], sign: int = 1) -> None:
    sim.apply_all(qft(lay.y))
    sim.apply_all(phi_add_const(lay.y, value, controls, sign))
    sim.apply_all(iqft(lay.y))


def _add_const(sim: Simulator, lay: Layout, adder: str, value: int, controls: tuple[int, ...], sign: int = 1) -> None:
    if adder == "qft":
        _qft_add_const(sim, lay, value, controls, sign)
    else:
        w = len(lay.y)
        _cdkm_add_const(sim, lay, value if sign > 0 else (1 << w) - value, controls)


def mod_add_const(
    sim: Simulator,
    lay: Layout,
    value: int,
    modulus: int,
    controls: tuple[int, ...],
    adder: str = "cdkm",
    mbu: bool = False,
) -> None:
    """y <- (y + value) mod modulus, gated on ``controls``.

    Requires y < modulus on every supported basis state; the top qubit of
    y is borrow headroom.  The comparison flag is cleared coherently or,
    with ``mbu``, by an X-basis measurement plus a conditional phase
    repair keyed off the borrow bit.
    """
    w = len(lay.y)
    top = lay.y[w - 1]
    a = value % modulus
    wrap = (1 << w) - modulus  # two's complement of the modulus

    _add_const(sim, lay, adder, a, controls)
    _add_const(sim, lay, adder, wrap, controls)
    # Borrow bit: set iff y_old + a < modulus (no reduction was needed).
    sim.apply(ops.cx(top, lay.f))
    _add_const(sim, lay, adder, modulus, (lay.f,))

    if mbu:
        sim.apply(ops.h(lay.f))
        if sim.measure((lay.f,)):
            sim.apply(ops.x(lay.f))
            # Phase repair (-1)^[y_new >= a] on the controlled branches.
            _add_const(sim, lay, adder, a, controls, sign=-1)
            sim.apply(ops.x(top))
            sim.apply(ops.z(top, controls))
            sim.apply(ops.x(top))
            _add_const(sim, lay, adder, a, controls)
        return

    # Coherent uncompute: the borrow of y_new - a reproduces the flag.
    _add_const(sim, lay, adder, a, controls, sign=-1)
    sim.apply(ops.x(top))
    sim.apply(GateOp("x", (lay.f,), tuple(controls) + (top,)))
    sim.apply(ops.x(top))
    _add_const(sim, lay, adder, a, controls)


def ctrl_modmul(
    sim: Simulator,
    lay: Layout,
    controls: tuple[int, ...],
    factor: int,
    modulus: int,
    adder: str = "cdkm",
    mbu: bool = False,
) -> None:
    """In-place |x> -> |factor * x mod modulus> when the controls are set.

    Multiply-accumulate into the helper register, swap it in, then run the
    inverse multiplication to return the helper to zero.
    """
    if math.gcd(factor, modulus) != 1:
        raise ValueError("multiplier must be invertible modulo the modulus")
    n = len(lay.x)
    for i in range(n):
        mod_add_const(sim, lay, (factor << i) % modulus, modulus, controls + (lay.x[i],), adder, mbu)
    sim.apply_all(cswap_regs(lay.x, lay.y[:n], controls))
    inverse = pow(factor, -1, modulus)
    for i in range(n):
        value = (modulus - ((inverse << i) % modulus)) % modulus
        mod_add_const(sim, lay, value, modulus, controls + (lay.x[i],), adder, mbu)


# -- semiclassical phase estimation ---------------------------------------


def _phase_estimate(
    sim: Simulator,
    lay: Layout,
    multipliers: list[int],
    modulus: int,
    adder: str,
    mbu: bool,
) -> int:
    """One reused control qubit; returns the measured phase integer."""
    j = 0
    for p, mult in enumerate(multipliers):
        sim.apply(ops.h(lay.ctrl))
        ctrl_modmul(sim, lay, (lay.ctrl,), mult, modulus, adder, mbu)
        if j:
            sim.apply(ops.r1(-2.0 * math.pi * j / (1 << (p + 1)), lay.ctrl))
        sim.apply(ops.h(lay.ctrl))
        if sim.measure((lay.ctrl,)):
            sim.apply(ops.x(lay.ctrl))
            j |= 1 << p
    return j


def _finish_stats(sim: Simulator, start: float, seed: int, success: bool) -> RunStats:
    sim.flush()
    return RunStats(
        qubits=sim.num_qubits,
        max_state_size=sim.stats.max_state_size,
        gate_count=sim.stats.gate_count,
        flush_count=sim.stats.flush_count,
        wall_time_ms=int((time.perf_counter() - start) * 1000),
        threads=sim.threads,
        seed=seed,
        success=success,
    )


@dataclass
class FactoringResult:
    phase: int
    order: int | None
    factors: tuple[int, int] | None
    stats: RunStats
    measurements: list[int]
    sim_stats: object = None

    @property
    def success(self) -> bool:
        return self.factors is not None


@dataclass
class DlogResult:
    phase_pair: tuple[int, int]
    exponent: int | None
    stats: RunStats
    measurements: list[int]
    sim_stats: object = None

    @property
    def success(self) -> bool:
        return self.exponent is not None


def run_factoring(
    instance: FactoringInstance,
    seed: int = 1,
    threads: int = 1,
    mbu: bool = False,
    par_min_queue: int | None = None,
    par_min_states: int | None = None,
) -> FactoringResult:
    start = time.perf_counter()
    n, N, g, m = instance.bit_size, instance.modulus, instance.generator, instance.phase_bits
    lay = Layout.for_instance(n, instance.adder)
    kwargs = {}
    if par_min_queue is not None:
        kwargs["par_min_queue"] = par_min_queue
    if par_min_states is not None:
        kwargs["par_min_states"] = par_min_states
    sim = Simulator(lay.num_qubits, seed=seed, threads=threads, **kwargs)
    sim.apply(ops.x(lay.x[0]))  # work register starts at 1

    multipliers = [pow(g, 1 << (m - 1 - p), N) for p in range(m)]
    j = _phase_estimate(sim, lay, multipliers, N, instance.adder, mbu)

    order = order_from_phase(j, m, g, N)
    factors = None
    if order is not None and order % 2 == 0:
        half = pow(g, order // 2, N)
        if half != N - 1:
            for cand in (math.gcd(half - 1, N), math.gcd(half + 1, N)):
                if 1 < cand < N:
                    factors = tuple(sorted((cand, N // cand)))
                    break
    stats = _finish_stats(sim, start, seed, factors is not None)
    return FactoringResult(j, order, factors, stats, sim.measurements, sim.stats)


def solve_dlog_pair(j: int, k: int, phase_bits: int, order: int, base: int, target: int, prime: int) -> int | None:
    """Recover the exponent from the two phase readouts.

    Rounds j and k to multiples of order/2^m and solves the resulting
    congruence over the known group order, trying the small candidate set
    of sign/inversion combinations and validating against the target.
    """
    m = 1 << phase_bits
    cg = round(Fraction(j * order, m)) % order
    ch = round(Fraction(k * order, m)) % order
    candidates = []
    for u, v in ((cg, ch), (ch, cg)):
        if math.gcd(u, order) == 1:
            inv = pow(u, -1, order)
            candidates.extend(((v * inv) % order, (-v * inv) % order))
    if ch == 0:
        candidates.append(0)
    for d in candidates:
        if pow(base, d, prime) == target:
            return d
    return None


def run_dlog(
    instance: DlogInstance,
    seed: int = 1,
    threads: int = 1,
    mbu: bool = False,
) -> DlogResult:
    start = time.perf_counter()
    p, g, h, m = instance.prime, instance.base, instance.target, instance.phase_bits
    lay = Layout.for_instance(instance.bit_size, instance.adder)
    sim = Simulator(lay.num_qubits, seed=seed, threads=threads)
    sim.apply(ops.x(lay.x[0]))

    mults_g = [pow(g, 1 << (m - 1 - q), p) for q in range(m)]
    mults_h = [pow(h, 1 << (m - 1 - q), p) for q in range(m)]
    j = _phase_estimate(sim, lay, mults_g, p, instance.adder, mbu)
    k = _phase_estimate(sim, lay, mults_h, p, instance.adder, mbu)

    d = solve_dlog_pair(j, k, m, instance.order, g, h, p)
    stats = _finish_stats(sim, start, seed, d is not None)
    return DlogResult((j, k), d, stats, sim.measurements, sim.stats)


def factor_with_retries(
    modulus: int,
    adder: str = "cdkm",
    seed: int = 1,
    trials: int = 5,
    threads: int = 1,
    mbu: bool = False,
    generator: int | None = None,
) -> FactoringResult:
    """Run up to ``trials`` seeded attempts; peak stats are merged."""
    instance = FactoringInstance.build(modulus, adder, generator)
    result = None
    peak = 0
    for attempt in range(trials):
        result = run_factoring(instance, seed=seed + attempt, threads=threads, mbu=mbu)
        peak = max(peak, result.stats.max_state_size)
        if result.success:
            break
    result.stats.max_state_size = peak
    return result


def dlog_with_retries(
    prime: int,
    base: int | None = None,
    target: int | None = None,
    exponent: int | None = None,
    seed: int = 1,
    trials: int = 5,
    threads: int = 1,
    mbu: bool = False,
    adder: str = "cdkm",
) -> DlogResult:
    instance = DlogInstance.build(prime, base, target, exponent, adder)
    result = None
    peak = 0
    for attempt in range(trials):
        result = run_dlog(instance, seed=seed + attempt, threads=threads, mbu=mbu)
        peak = max(peak, result.stats.max_state_size)
        if result.success:
            break
    result.stats.max_state_size = peak
    return result
