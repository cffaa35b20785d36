"""Path simulation with a reproducible, platform-independent RNG.

The generator is SplitMix64; trial t uses its own stream seeded as
(seed + (t+1) * GAMMA) mod 2^64, so results are independent of trial order
and identical on every platform and Python version.  Atoms are sampled by
comparing one 64-bit draw against precomputed integer breakpoints
ceil(c * 2^64) for the cumulative weights c, which is exactly the event
u / 2^64 < c; no floating point enters the sampling path.

Per trial the draw order is fixed: the noise for k = 0, -1, ..., -depth+1
first, then any entry-state draws.  Estimators report empirical frequencies
with binomial standard errors; exact references for the same quantities
come from the measure layer, so tests can hold simulation against closed
form at three sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Iterator, Optional, Sequence, Union

from .algebra import TransformationElement, generate_closure
from .errors import CarrierMismatchError, InternalInconsistencyError
from .measures import (
    NoiseSpec,
    ProbMeasure,
    _strongly_connected_components,
    act,
    convolve,
    solve_linear,
    state_carrier,
)
from .solver import SolutionLawFamily

__all__ = [
    "GAMMA",
    "SplitMix64",
    "trial_stream",
    "SimConfig",
    "PathSample",
    "CouplingSample",
    "LawEstimate",
    "StoppingTimeStats",
    "CouplingStats",
    "simulate_paths",
    "estimate_law",
    "stopping_time_stats",
    "coupling_samples",
    "ci_coupling",
    "exact_product_law",
    "exact_state_law",
    "within_three_sigma",
]

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """The standard 64-bit mixer; one instance is one stream."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & _MASK
        return _mix64(self.state)


def trial_stream(seed: int, trial: int) -> SplitMix64:
    """Stream for one trial, reproducible in isolation.

    The trial's start state is the finalizer of seed + (trial+1) * GAMMA.
    Without that mixing step, stream t would be stream 0 advanced t draws,
    and windows read by nearby trials would overlap almost entirely; the
    finalizer places the streams at unrelated points of the state cycle.
    """
    return SplitMix64(_mix64((seed + (trial + 1) * GAMMA) & _MASK))


@dataclass(frozen=True)
class SimConfig:
    depth: int = 64
    trials: int = 10000
    seed: int = 1
    rng: str = "splitmix64"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        if self.rng != "splitmix64":
            raise ValueError(f"unknown rng {self.rng!r}")


class _Sampler:
    """Exact inverse-CDF sampling via integer breakpoints."""

    __slots__ = ("breaks",)

    def __init__(self, weights: Sequence[Fraction]):
        cum = Fraction(0)
        breaks = []
        for w in weights:
            cum += w
            num, den = cum.numerator, cum.denominator
            breaks.append(((num << 64) + den - 1) // den)
        if breaks[-1] != 1 << 64:
            raise InternalInconsistencyError("sampler weights do not sum to one")
        self.breaks = breaks

    def draw(self, rng: SplitMix64) -> int:
        u = rng.next_u64()
        for i, b in enumerate(self.breaks):
            if u < b:
                return i
        raise InternalInconsistencyError("draw beyond the last breakpoint")


class _Compiled:
    """Integer tables for one noise spec: ids, products, actions, absorption."""

    def __init__(self, noise: NoiseSpec):
        self.noise = noise
        closure = generate_closure(noise.space, noise.support_elements())
        assert closure.elements is not None
        self.elements = closure.elements
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.cayley = closure.cayley
        self.action = tuple(e.image for e in self.elements)
        plen = noise.prefix_length
        self.prefix_len = plen
        self.stage_samplers = []
        self.stage_atom_ids = []
        for stage in range(plen):
            mu = noise.prefix[stage]
            self.stage_samplers.append(_Sampler([w for _, w in mu.atoms]))
            self.stage_atom_ids.append([self.index[e] for e, _ in mu.atoms])
        tail = noise.tail
        self.tail_sampler = _Sampler([w for _, w in tail.atoms])
        self.tail_atom_ids = [self.index[e] for e, _ in tail.atoms]
        self.absorbing = []
        for t in range(1, plen + 1):
            remaining = set(self.tail_atom_ids)
            for j in range(t, plen):
                remaining.update(self.index[e] for e, _ in noise.prefix[j].atoms)
            self.absorbing.append(self._absorbing_set(remaining))
        self.tail_absorbing = self._absorbing_set(set(self.tail_atom_ids))

    def _absorbing_set(self, factor_ids: set) -> frozenset:
        return frozenset(
            i
            for i in range(len(self.elements))
            if all(self.cayley[i][f] == i for f in factor_ids)
        )

    def absorbing_at(self, t: int) -> frozenset:
        if t <= len(self.absorbing):
            return self.absorbing[t - 1]
        return self.tail_absorbing

    def draw_noise_id(self, rng: SplitMix64, m: int) -> int:
        if m < self.prefix_len:
            return self.stage_atom_ids[m][self.stage_samplers[m].draw(rng)]
        return self.tail_atom_ids[self.tail_sampler.draw(rng)]


@dataclass(frozen=True)
class PathSample:
    """One simulated path: drawn noise, running products, optional states.

    ``noise[m]`` is the factor at time -m; ``products[m]`` composes the
    factors for times 0..-m.  ``absorbed_at`` is the first count of factors
    after which the product is fixed by every remaining factor, None if that
    never happens within the depth.  ``x_path[m]`` is the state at time -m
    when an entry was requested.
    """

    trial: int
    noise: tuple[TransformationElement, ...]
    products: tuple[TransformationElement, ...]
    absorbed_at: Optional[int]
    x_path: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class CouplingSample:
    trial: int
    entry_first: int
    entry_second: int
    final_first: int
    final_second: int
    collision: bool


def _entry_sampler(entry: ProbMeasure) -> tuple[_Sampler, list]:
    return _Sampler([w for _, w in entry.atoms]), [k for k, _ in entry.atoms]


def _as_entry_measure(noise: NoiseSpec, entry: Union[ProbMeasure, int]) -> ProbMeasure:
    if isinstance(entry, int):
        return ProbMeasure.point(state_carrier(noise.space), entry)
    if entry.carrier != state_carrier(noise.space):
        raise CarrierMismatchError("entry law must be a state measure on the noise space")
    return entry


def simulate_paths(
    noise: NoiseSpec,
    cfg: SimConfig,
    entry: Optional[Union[ProbMeasure, int]] = None,
) -> Iterator[PathSample]:
    """Generate one PathSample per trial under the documented draw order."""
    comp = _Compiled(noise)
    entry_tables = None
    if entry is not None:
        entry_tables = _entry_sampler(_as_entry_measure(noise, entry))
    for trial in range(cfg.trials):
        rng = trial_stream(cfg.seed, trial)
        ids = []
        product_ids = []
        pid = -1
        absorbed = None
        for m in range(cfg.depth):
            nid = comp.draw_noise_id(rng, m)
            ids.append(nid)
            pid = nid if m == 0 else comp.cayley[pid][nid]
            product_ids.append(pid)
            if absorbed is None and pid in comp.absorbing_at(m + 1):
                absorbed = m + 1
        x_path = None
        if entry_tables is not None:
            sampler, keys = entry_tables
            x = keys[sampler.draw(rng)]
            xs = [0] * (cfg.depth + 1)
            xs[cfg.depth] = x
            for m in range(cfg.depth - 1, -1, -1):
                xs[m] = comp.action[ids[m]][xs[m + 1]]
            x_path = tuple(xs)
        yield PathSample(
            trial,
            tuple(comp.elements[i] for i in ids),
            tuple(comp.elements[i] for i in product_ids),
            absorbed,
            x_path,
        )


@dataclass(frozen=True)
class LawEstimate:
    """Empirical law with per-atom counts and binomial standard errors."""

    trials: int
    depth: int
    atoms: tuple[tuple[object, int, float, float], ...]

    def frequency(self, key) -> float:
        for k, _, f, _ in self.atoms:
            if k == key:
                return f
        return 0.0

    def count(self, key) -> int:
        for k, c, _, _ in self.atoms:
            if k == key:
                return c
        return 0


def _estimate_from_counts(counts: dict, keys: Sequence, trials: int, depth: int) -> LawEstimate:
    atoms = []
    for k in keys:
        c = counts.get(k, 0)
        p = c / trials
        atoms.append((k, c, p, sqrt(p * (1 - p) / trials)))
    return LawEstimate(trials, depth, tuple(atoms))


def estimate_law(
    noise: NoiseSpec,
    cfg: SimConfig,
    observable: str = "product",
    entry: Optional[Union[ProbMeasure, int]] = None,
) -> LawEstimate:
    """Empirical law of the depth-long product, or of the state at k = 0.

    The state observable needs an entry law or entry state; the path then
    runs X(-depth) = entry, X(k) = noise(k) applied to X(k-1).
    """
    if observable not in ("product", "state"):
        raise ValueError(f"unknown observable {observable!r}")
    comp = _Compiled(noise)
    counts: dict = {}
    if observable == "product":
        for trial in range(cfg.trials):
            rng = trial_stream(cfg.seed, trial)
            pid = -1
            for m in range(cfg.depth):
                nid = comp.draw_noise_id(rng, m)
                pid = nid if m == 0 else comp.cayley[pid][nid]
            key = comp.elements[pid]
            counts[key] = counts.get(key, 0) + 1
        return _estimate_from_counts(counts, list(comp.elements), cfg.trials, cfg.depth)
    if entry is None:
        raise ValueError("the state observable needs an entry law or state")
    sampler, keys = _entry_sampler(_as_entry_measure(noise, entry))
    for trial in range(cfg.trials):
        rng = trial_stream(cfg.seed, trial)
        pid = -1
        for m in range(cfg.depth):
            nid = comp.draw_noise_id(rng, m)
            pid = nid if m == 0 else comp.cayley[pid][nid]
        x = keys[sampler.draw(rng)]
        y = comp.action[pid][x]
        counts[y] = counts.get(y, 0) + 1
    return _estimate_from_counts(
        counts, list(range(noise.space.size)), cfg.trials, cfg.depth
    )


@dataclass(frozen=True)
class StoppingTimeStats:
    """Absorption-time summary: empirical side plus the exact reference.

    ``exact_mean`` is None when absorption is not almost sure; then
    ``infinite_mass`` carries the exact probability of never absorbing and
    the empirical side reports the frequency of trials that never absorbed
    within the simulated depth.
    """

    trials: int
    depth: int
    absorbed: int
    unabsorbed: int
    empirical_mean: Optional[float]
    empirical_stderr: Optional[float]
    median: Optional[int]
    q90: Optional[int]
    exact_mean: Optional[Fraction]
    infinite_mass: Fraction


def _exact_absorption(noise: NoiseSpec) -> tuple[Optional[Fraction], Fraction]:
    """Exact E[T] and P(T = infinity) for the generalized absorption time.

    E[T] = sum over t >= 0 of P(T > t).  The prefix part is stepped law by
    law; from the first all-tail time on, the remainder is the expected
    absorption time of the homogeneous product chain, solved exactly via
    the fundamental matrix on the transient states.
    """
    comp = _Compiled(noise)
    m = len(comp.elements)
    plen = noise.prefix_length
    steps = max(plen, 1)
    # law of the product after t factors, evolved from t = 1 to t = steps;
    # head collects P(T > t) for t = 1..steps-1.
    law = [Fraction(0)] * m
    for e, w in noise.measure_at(0).atoms:
        law[comp.index[e]] += w
    head = Fraction(0)
    for t in range(1, steps):
        absorbing = comp.absorbing_at(t)
        head += sum((w for i, w in enumerate(law) if i not in absorbing), Fraction(0))
        nxt = [Fraction(0)] * m
        mu = noise.measure_at(-t)
        for i, w in enumerate(law):
            if w == 0:
                continue
            for e, we in mu.atoms:
                nxt[comp.cayley[i][comp.index[e]]] += w * we
        law = nxt
    residual = {
        i: w for i, w in enumerate(law) if w != 0 and i not in comp.tail_absorbing
    }
    tail_weights: dict[int, Fraction] = {}
    for e, w in noise.tail.atoms:
        tail_weights[comp.index[e]] = tail_weights.get(comp.index[e], Fraction(0)) + w
    succ = [
        sorted({comp.cayley[i][f] for f in tail_weights}) for i in range(m)
    ]
    comps = _strongly_connected_components(succ)
    comp_of = {}
    for ci, c in enumerate(comps):
        for v in c:
            comp_of[v] = ci
    closed = {
        ci
        for ci, c in enumerate(comps)
        if all(comp_of[t] == ci for v in c for t in succ[v])
    }
    never = {
        v for ci in closed for v in comps[ci] if v not in comp.tail_absorbing
    }
    transient = [
        i for i in range(m) if i not in comp.tail_absorbing and i not in never
    ]
    pos = {v: i for i, v in enumerate(transient)}
    size = len(transient)
    q = [[Fraction(0)] * size for _ in range(size)]
    into_never = [Fraction(0)] * size
    for i, s in enumerate(transient):
        for f, w in tail_weights.items():
            t = comp.cayley[s][f]
            if t in pos:
                q[i][pos[t]] += w
            elif t in never:
                into_never[i] += w
    identity_minus_q = [
        [
            (Fraction(1) if i == j else Fraction(0)) - q[i][j]
            for j in range(size)
        ]
        for i in range(size)
    ]
    infinite = sum((w for s, w in residual.items() if s in never), Fraction(0))
    if size and any(v != 0 for v in into_never):
        hit_never = solve_linear(identity_minus_q, into_never)
        for s, w in residual.items():
            if s in pos:
                infinite += w * hit_never[pos[s]]
    if infinite != 0:
        return None, infinite
    expected = solve_linear(identity_minus_q, [Fraction(1)] * size) if size else []
    total = Fraction(1) + head
    for s, w in residual.items():
        total += w * expected[pos[s]]
    return total, Fraction(0)


def stopping_time_stats(noise: NoiseSpec, cfg: SimConfig) -> StoppingTimeStats:
    """Empirical absorption times against the exact fundamental-matrix value."""
    comp = _Compiled(noise)
    times = []
    unabsorbed = 0
    for trial in range(cfg.trials):
        rng = trial_stream(cfg.seed, trial)
        pid = -1
        absorbed = None
        for m in range(cfg.depth):
            nid = comp.draw_noise_id(rng, m)
            pid = nid if m == 0 else comp.cayley[pid][nid]
            if pid in comp.absorbing_at(m + 1):
                absorbed = m + 1
                break
        if absorbed is None:
            unabsorbed += 1
        else:
            times.append(absorbed)
    exact_mean, infinite = _exact_absorption(noise)
    if times:
        mean = sum(times) / len(times)
        var = sum((t - mean) ** 2 for t in times) / len(times)
        stderr = sqrt(var / len(times))
        ordered = sorted(times)
        median = ordered[len(ordered) // 2]
        q90 = ordered[min(len(ordered) - 1, (len(ordered) * 9) // 10)]
    else:
        mean = stderr = None
        median = q90 = None
    return StoppingTimeStats(
        trials=cfg.trials,
        depth=cfg.depth,
        absorbed=len(times),
        unabsorbed=unabsorbed,
        empirical_mean=mean,
        empirical_stderr=stderr,
        median=median,
        q90=q90,
        exact_mean=exact_mean,
        infinite_mass=infinite,
    )


def coupling_samples(
    noise: NoiseSpec,
    first: SolutionLawFamily,
    second: SolutionLawFamily,
    cfg: SimConfig,
) -> Iterator[CouplingSample]:
    """Share the noise, draw the two entries independently, compare at 0.

    The entry for each family is its own law at -depth, which is exactly
    the conditional law of the state given the shared window noise for
    families with remote-past entries.
    """
    comp = _Compiled(noise)
    s1, k1 = _entry_sampler(first.law_at(-cfg.depth))
    s2, k2 = _entry_sampler(second.law_at(-cfg.depth))
    for trial in range(cfg.trials):
        rng = trial_stream(cfg.seed, trial)
        pid = -1
        for m in range(cfg.depth):
            nid = comp.draw_noise_id(rng, m)
            pid = nid if m == 0 else comp.cayley[pid][nid]
        x1 = k1[s1.draw(rng)]
        x2 = k2[s2.draw(rng)]
        y1 = comp.action[pid][x1]
        y2 = comp.action[pid][x2]
        yield CouplingSample(trial, x1, x2, y1, y2, y1 == y2)


@dataclass(frozen=True)
class CouplingStats:
    trials: int
    depth: int
    collisions: int
    frequency: float
    stderr: float


def ci_coupling(
    noise: NoiseSpec,
    first: SolutionLawFamily,
    second: SolutionLawFamily,
    cfg: SimConfig,
) -> CouplingStats:
    """Collision frequency at k = 0 for two solutions sharing the noise."""
    collisions = sum(1 for s in coupling_samples(noise, first, second, cfg) if s.collision)
    p = collisions / cfg.trials
    return CouplingStats(
        cfg.trials, cfg.depth, collisions, p, sqrt(p * (1 - p) / cfg.trials)
    )


def exact_product_law(noise: NoiseSpec, depth: int) -> ProbMeasure:
    """Exact law of the product of the most recent `depth` factors."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    law = noise.measure_at(0)
    for j in range(1, depth):
        law = convolve(law, noise.measure_at(-j))
    return law


def exact_state_law(
    noise: NoiseSpec, depth: int, entry: Union[ProbMeasure, int]
) -> ProbMeasure:
    """Exact law at k = 0 given the entry law at k = -depth."""
    return act(exact_product_law(noise, depth), _as_entry_measure(noise, entry))


def within_three_sigma(count: int, trials: int, p: Fraction) -> bool:
    """Binomial three-sigma acceptance against an exact probability."""
    if p == 0 or p == 1:
        return count == trials * p
    sigma = sqrt(float(p) * (1 - float(p)) / trials)
    return abs(count / trials - float(p)) <= 3 * sigma
