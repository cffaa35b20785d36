"""Exact probability measures and limit analysis of backward products.

Everything on the analysis path is a `fractions.Fraction`; equality of
measures is decidable and decided exactly.  Floats never enter this module.

The central object is the right-multiplication chain of running products
P(1) = T(1), P(t+1) = P(t) T(t+1) with T(t) drawn i.i.d. from the stationary
tail of the noise.  All limit statements about the backward products reduce
to the recurrent structure of that chain; the finite noise prefix is applied
afterwards as an exact pushforward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Literal, Mapping, Optional, Sequence, Union

from .algebra import (
    FiniteSemigroup,
    StateSpace,
    SubgroupDescriptor,
    TransformationElement,
    compose,
    find_subgroups,
)
from .context import ActionContext
from .errors import (
    CapacityError,
    CarrierMismatchError,
    InternalInconsistencyError,
    UnsupportedCaseError,
)

__all__ = [
    "Carrier",
    "ProbMeasure",
    "NoiseSpec",
    "ProductChain",
    "RecurrentClass",
    "LimitLawReport",
    "P2Certificate",
    "element_carrier",
    "state_carrier",
    "convolve",
    "act",
    "tv_distance",
    "is_right_invariant",
    "build_product_chain",
    "limit_analysis",
    "solve_linear",
]

MeasureKey = Union[TransformationElement, int]


@dataclass(frozen=True)
class Carrier:
    """What a measure lives on: maps over a space, or the states themselves."""

    space: StateSpace
    kind: Literal["element", "state"]


def element_carrier(space: StateSpace) -> Carrier:
    return Carrier(space, "element")


def state_carrier(space: StateSpace) -> Carrier:
    return Carrier(space, "state")


@dataclass(frozen=True)
class ProbMeasure:
    """A probability measure with exact rational weights.

    Atoms are stored zero-stripped and sorted, so equal measures compare
    equal structurally and iteration order is deterministic.
    """

    carrier: Carrier
    atoms: tuple[tuple[MeasureKey, Fraction], ...]

    def __post_init__(self):
        total = Fraction(0)
        previous = None
        for key, weight in self.atoms:
            self._check_key(key)
            if not isinstance(weight, Fraction):
                raise ValueError(f"weight of {key!r} is not a Fraction")
            if weight <= 0:
                raise ValueError(f"weight of {key!r} must be positive, got {weight}")
            if previous is not None and not self._key_sort(previous) < self._key_sort(key):
                raise ValueError("atoms must be strictly sorted")
            previous = key
            total += weight
        if total != 1:
            raise ValueError(f"weights sum to {total}, expected 1")

    def _check_key(self, key: MeasureKey) -> None:
        if self.carrier.kind == "element":
            if not isinstance(key, TransformationElement):
                raise ValueError(f"expected an element key, got {key!r}")
            if key.degree != self.carrier.space.size:
                raise CarrierMismatchError(
                    f"element degree {key.degree} does not match space size "
                    f"{self.carrier.space.size}"
                )
        else:
            if not isinstance(key, int) or isinstance(key, bool):
                raise ValueError(f"expected a state key, got {key!r}")
            if not 0 <= key < self.carrier.space.size:
                raise ValueError(f"state {key} outside the space")

    @staticmethod
    def _key_sort(key: MeasureKey):
        if isinstance(key, TransformationElement):
            return key.image
        return (key,)

    @classmethod
    def from_weights(
        cls, carrier: Carrier, weights: Mapping[MeasureKey, Fraction]
    ) -> "ProbMeasure":
        atoms = tuple(
            (k, Fraction(w))
            for k, w in sorted(weights.items(), key=lambda kv: cls._key_sort(kv[0]))
            if w != 0
        )
        return cls(carrier, atoms)

    @classmethod
    def point(cls, carrier: Carrier, key: MeasureKey) -> "ProbMeasure":
        return cls(carrier, ((key, Fraction(1)),))

    @classmethod
    def uniform(cls, carrier: Carrier, keys: Iterable[MeasureKey]) -> "ProbMeasure":
        keys = sorted(set(keys), key=cls._key_sort)
        if not keys:
            raise ValueError("uniform measure needs at least one atom")
        w = Fraction(1, len(keys))
        return cls(carrier, tuple((k, w) for k in keys))

    @property
    def support(self) -> tuple[MeasureKey, ...]:
        return tuple(k for k, _ in self.atoms)

    def weight(self, key: MeasureKey) -> Fraction:
        for k, w in self.atoms:
            if k == key:
                return w
        return Fraction(0)

    def items(self) -> tuple[tuple[MeasureKey, Fraction], ...]:
        return self.atoms

    def pushforward(self, f) -> "ProbMeasure":
        out: dict[MeasureKey, Fraction] = {}
        for k, w in self.atoms:
            kk = f(k)
            out[kk] = out.get(kk, Fraction(0)) + w
        return ProbMeasure.from_weights(self.carrier, out)

    def mix_with(self, others: Sequence["ProbMeasure"], weights: Sequence[Fraction]) -> "ProbMeasure":
        measures = [self, *others]
        if len(measures) != len(weights):
            raise ValueError("one weight per measure")
        return mix(measures, weights)


def mix(measures: Sequence[ProbMeasure], weights: Sequence[Fraction]) -> ProbMeasure:
    """Exact convex combination; weights must sum to 1."""
    if not measures:
        raise ValueError("nothing to mix")
    carrier = measures[0].carrier
    out: dict[MeasureKey, Fraction] = {}
    for m, w in zip(measures, weights):
        if m.carrier != carrier:
            raise CarrierMismatchError("mixture components live on different carriers")
        for k, v in m.atoms:
            out[k] = out.get(k, Fraction(0)) + w * v
    return ProbMeasure.from_weights(carrier, out)


def convolve(mu1: ProbMeasure, mu2: ProbMeasure) -> ProbMeasure:
    """(mu1 * mu2)(c) = sum of mu1(a) mu2(b) over factorizations c = a b."""
    if mu1.carrier != mu2.carrier or mu1.carrier.kind != "element":
        raise CarrierMismatchError("convolution needs two element measures on one space")
    out: dict[MeasureKey, Fraction] = {}
    for a, wa in mu1.atoms:
        for b, wb in mu2.atoms:
            c = compose(a, b)
            out[c] = out.get(c, Fraction(0)) + wa * wb
    return ProbMeasure.from_weights(mu1.carrier, out)


def act(mu: ProbMeasure, lam: ProbMeasure) -> ProbMeasure:
    """(mu * lam)(y) = sum over sigma(x) = y of mu(sigma) lam(x)."""
    if mu.carrier.kind != "element" or lam.carrier.kind != "state":
        raise CarrierMismatchError("act needs an element measure and a state measure")
    if mu.carrier.space != lam.carrier.space:
        raise CarrierMismatchError("element and state measures live on different spaces")
    out: dict[MeasureKey, Fraction] = {}
    for sigma, ws in mu.atoms:
        for x, wx in lam.atoms:
            y = sigma.image[x]
            out[y] = out.get(y, Fraction(0)) + ws * wx
    return ProbMeasure.from_weights(lam.carrier, out)


def tv_distance(m1: ProbMeasure, m2: ProbMeasure) -> Fraction:
    """Total variation distance, exact."""
    if m1.carrier != m2.carrier:
        raise CarrierMismatchError("total variation needs a shared carrier")
    keys = {k for k, _ in m1.atoms} | {k for k, _ in m2.atoms}
    total = sum((abs(m1.weight(k) - m2.weight(k)) for k in keys), Fraction(0))
    return total / 2


def is_right_invariant(nu: ProbMeasure, subgroup: SubgroupDescriptor) -> bool:
    """True iff the pushforward by every right factor from the subgroup fixes nu."""
    if nu.carrier.kind != "element":
        raise CarrierMismatchError("right invariance is about element measures")
    if subgroup.elements is None:
        raise ValueError("subgroup carries no transformation elements")
    for h in subgroup.elements:
        if nu.pushforward(lambda sigma: compose(sigma, h)) != nu:
            return False
    return True


@dataclass(frozen=True)
class NoiseSpec:
    """Noise law per time k <= 0: a finite prefix over a stationary tail.

    ``prefix[m]`` is the law at k = -m; every k below the prefix uses
    ``tail``.  An empty prefix is the i.i.d. case.
    """

    tail: ProbMeasure
    prefix: tuple[ProbMeasure, ...] = ()

    def __post_init__(self):
        if self.tail.carrier.kind != "element":
            raise CarrierMismatchError("noise must be a measure over elements")
        for m in self.prefix:
            if m.carrier != self.tail.carrier:
                raise CarrierMismatchError("all noise measures must share one carrier")

    @property
    def carrier(self) -> Carrier:
        return self.tail.carrier

    @property
    def space(self) -> StateSpace:
        return self.tail.carrier.space

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    def measure_at(self, k: int) -> ProbMeasure:
        if k > 0:
            raise ValueError(f"noise is indexed by k <= 0, got {k}")
        idx = -k
        if idx < len(self.prefix):
            return self.prefix[idx]
        return self.tail

    def support_elements(self) -> tuple[TransformationElement, ...]:
        seen = set(self.tail.support)
        for m in self.prefix:
            seen.update(m.support)
        return tuple(sorted(seen))

    def is_iid(self) -> bool:
        return all(m == self.tail for m in self.prefix)


@dataclass(frozen=True)
class RecurrentClass:
    member_ids: tuple[int, ...]
    period: int
    absorption: Fraction
    stationary: tuple[tuple[int, Fraction], ...]

    @property
    def is_singleton(self) -> bool:
        return len(self.member_ids) == 1


@dataclass(frozen=True)
class ProductChain:
    """Markov chain of running products over the tail support closure."""

    space: StateSpace
    states: tuple[TransformationElement, ...]
    transitions: tuple[tuple[Fraction, ...], ...]
    initial: tuple[Fraction, ...]
    recurrent_classes: tuple[RecurrentClass, ...]
    transient_ids: tuple[int, ...]

    def state_index(self, e: TransformationElement) -> int:
        return self.states.index(e)


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Gauss-Jordan over Fractions; raises ValueError on singular systems."""
    n = len(rows)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular linear system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _strongly_connected_components(succ: Sequence[Iterable[int]]) -> list[list[int]]:
    """Tarjan, iterative; components come out in a deterministic order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            node, child = work[-1]
            if child == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            successors = list(succ[node])
            while child < len(successors):
                nxt = successors[child]
                child += 1
                if index[nxt] == -1:
                    work[-1] = (node, child)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    v = stack.pop()
                    on_stack[v] = False
                    comp.append(v)
                    if v == node:
                        break
                components.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def _class_period(members: Sequence[int], succ: Mapping[int, list[int]]) -> int:
    base = members[0]
    level = {base: 0}
    queue = [base]
    member_set = set(members)
    while queue:
        u = queue.pop(0)
        for v in succ[u]:
            if v in member_set and v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    g = 0
    for u in members:
        for v in succ[u]:
            if v in member_set:
                g = gcd(g, level[u] + 1 - level[v])
    return abs(g) if g else 1


def build_product_chain(noise: NoiseSpec) -> ProductChain:
    """Chain of running products under the stationary tail.

    States are the products reachable from the tail support under right
    multiplication by the tail support, in breadth-first image-lex order.
    Transitions, absorption probabilities and per-class stationary laws are
    exact rationals.
    """
    tail = noise.tail
    seeds = sorted(tail.support, key=lambda e: e.image)
    states: list[TransformationElement] = []
    index: dict[TransformationElement, int] = {}
    for e in seeds:
        index[e] = len(states)
        states.append(e)
    frontier = list(states)
    while frontier:
        fresh = set()
        for s in frontier:
            for t in tail.support:
                p = compose(s, t)
                if p not in index and p not in fresh:
                    fresh.add(p)
        frontier = sorted(fresh, key=lambda e: e.image)
        for p in frontier:
            index[p] = len(states)
            states.append(p)
    n = len(states)
    rows = [[Fraction(0)] * n for _ in range(n)]
    succ: dict[int, list[int]] = {}
    for i, s in enumerate(states):
        targets: list[int] = []
        for t, w in tail.atoms:
            j = index[compose(s, t)]
            if rows[i][j] == 0:
                targets.append(j)
            rows[i][j] += w
        succ[i] = sorted(set(targets))
    components = _strongly_connected_components([succ[i] for i in range(n)])
    comp_of = {}
    for ci, comp in enumerate(components):
        for v in comp:
            comp_of[v] = ci
    closed = []
    for ci, comp in enumerate(components):
        if all(comp_of[t] == ci for v in comp for t in succ[v]):
            closed.append(ci)
    recurrent_sets = [tuple(components[ci]) for ci in sorted(closed, key=lambda ci: components[ci])]
    recurrent_ids = {v for comp in recurrent_sets for v in comp}
    transient = tuple(i for i in range(n) if i not in recurrent_ids)

    initial = [Fraction(0)] * n
    for t, w in tail.atoms:
        initial[index[t]] += w

    classes = []
    for members in recurrent_sets:
        period = _class_period(members, succ)
        stationary = _stationary_on_class(rows, members)
        absorption = _absorption_probability(rows, transient, members, recurrent_ids, initial)
        classes.append(RecurrentClass(members, period, absorption, stationary))
    total = sum((c.absorption for c in classes), Fraction(0))
    if total != 1:
        raise InternalInconsistencyError(
            f"absorption probabilities sum to {total}, expected 1"
        )
    return ProductChain(
        noise.space, tuple(states), tuple(tuple(r) for r in rows), tuple(initial),
        tuple(classes), transient,
    )


def _stationary_on_class(
    rows: Sequence[Sequence[Fraction]], members: Sequence[int]
) -> tuple[tuple[int, Fraction], ...]:
    m = len(members)
    pos = {v: i for i, v in enumerate(members)}
    # pi P = pi restricted to the class, with the last balance equation
    # replaced by normalization.
    system = [[Fraction(0)] * m for _ in range(m)]
    rhs = [Fraction(0)] * m
    for j, vj in enumerate(members):
        for i, vi in enumerate(members):
            system[j][i] = rows[vi][vj] - (Fraction(1) if i == j else Fraction(0))
    system[m - 1] = [Fraction(1)] * m
    rhs[m - 1] = Fraction(1)
    pi = solve_linear(system, rhs)
    for v in pi:
        if v < 0:
            raise InternalInconsistencyError("negative stationary weight")
    return tuple((v, pi[pos[v]]) for v in members)


def _absorption_probability(
    rows: Sequence[Sequence[Fraction]],
    transient: Sequence[int],
    members: Sequence[int],
    recurrent_ids: set,
    initial: Sequence[Fraction],
) -> Fraction:
    member_set = set(members)
    if transient:
        m = len(transient)
        pos = {v: i for i, v in enumerate(transient)}
        system = [[Fraction(0)] * m for _ in range(m)]
        rhs = [Fraction(0)] * m
        for i, s in enumerate(transient):
            system[i][i] = Fraction(1)
            for t in range(len(rows)):
                w = rows[s][t]
                if w == 0:
                    continue
                if t in pos:
                    system[i][pos[t]] -= w
                elif t in member_set:
                    rhs[i] += w
        hit = solve_linear(system, rhs)
    else:
        hit = []
        pos = {}
    total = Fraction(0)
    for s, w in enumerate(initial):
        if w == 0:
            continue
        if s in member_set:
            total += w
        elif s not in recurrent_ids and s in pos:
            total += w * hit[pos[s]]
    return total


@dataclass(frozen=True)
class P2Certificate:
    """Why a subgroup qualifies: the three exact checks, all true."""

    coset_limit_constant: bool
    right_invariant: bool
    simply_transitive_on_support: bool


@dataclass(frozen=True)
class LimitLawReport:
    """Limit behavior of the backward products, all parts exact.

    ``nu`` is the limit law of the running tail products when it exists
    (every reachable recurrent class aperiodic); ``cesaro`` always exists.
    ``nu_window``/``cesaro_window`` push the tail answer through the noise
    prefix for each represented k.  ``p2_subgroup`` is the smallest
    non-trivial subgroup certifying convergence modulo a subgroup, see
    module docs for the three conditions.
    """

    noise: NoiseSpec
    chain: ProductChain
    as_convergence: bool
    converges_in_law: bool
    nu: Optional[ProbMeasure]
    nu_window: Optional[tuple[tuple[int, ProbMeasure], ...]]
    cesaro: ProbMeasure
    cesaro_window: tuple[tuple[int, ProbMeasure], ...]
    p2_subgroup: Optional[SubgroupDescriptor]
    p2_qualifying: tuple[SubgroupDescriptor, ...]
    p2_certificate: Optional[P2Certificate]
    p2_error: Optional[str]

    def window_law(self, k: int) -> ProbMeasure:
        if self.nu_window is None:
            raise UnsupportedCaseError("no limit law; use the cesaro window")
        for kk, m in self.nu_window:
            if kk == k:
                return m
        raise ValueError(f"k={k} outside the analysis window")


def _coset_of(
    sigma: TransformationElement, subgroup: SubgroupDescriptor
) -> frozenset[TransformationElement]:
    assert subgroup.elements is not None
    return frozenset(compose(sigma, h) for h in subgroup.elements)


def _subgroup_qualifies(
    subgroup: SubgroupDescriptor,
    chain: ProductChain,
    nu: ProbMeasure,
    window: Sequence[tuple[int, ProbMeasure]],
) -> Optional[P2Certificate]:
    if subgroup.elements is None:
        return None
    # (i) the coset observable is constant on every reachable recurrent
    # class, so the coset-valued products converge almost surely.
    for cls in chain.recurrent_classes:
        cosets = {_coset_of(chain.states[i], subgroup) for i in cls.member_ids}
        if len(cosets) != 1:
            return None
    # (ii) the limit law is right invariant, exactly, at the tail and at
    # every represented window position.
    if not is_right_invariant(nu, subgroup):
        return None
    for _, m in window:
        if not is_right_invariant(m, subgroup):
            raise InternalInconsistencyError(
                "window law lost right invariance that the tail law has"
            )
    # (iii) the left action of the subgroup on the support of the limit law
    # is simply transitive: the residual limit randomness is one uniform
    # draw over a free orbit.  This pins the canonical subgroup; without it
    # absorbing supports would let arbitrarily small subgroups qualify.
    support = [s for s in nu.support if isinstance(s, TransformationElement)]
    for a in support:
        for b in support:
            hits = sum(1 for h in subgroup.elements if compose(h, a) == b)
            if hits != 1:
                return None
    return P2Certificate(True, True, True)


def limit_analysis(
    noise: NoiseSpec,
    context: ActionContext,
    *,
    window: int = 8,
    subgroup_cap: int = 64,
    max_gen: int = 2,
) -> LimitLawReport:
    """Decide convergence of the backward products and describe the limits.

    (a) Almost-sure convergence holds iff every reachable recurrent class of
        the product chain is a singleton (necessarily absorbing).
    (b) Convergence in law holds iff every reachable recurrent class is
        aperiodic; the limit is the absorption-weighted mixture of the
        per-class stationary laws.
    (c) The Cesaro limit is that same mixture and always exists.
    (d) Convergence modulo a subgroup is certified per the three conditions
        in :func:`_subgroup_qualifies`, searched over the ambient semigroup
        smallest-first; a capacity overflow is reported, not raised, so
        (a)-(c) always come back.
    """
    chain = build_product_chain(noise)
    as_convergence = all(c.is_singleton for c in chain.recurrent_classes)
    converges_in_law = all(c.period == 1 for c in chain.recurrent_classes)

    element_car = noise.carrier
    mixture_parts = []
    mixture_weights = []
    for cls in chain.recurrent_classes:
        law = ProbMeasure.from_weights(
            element_car,
            {chain.states[i]: w for i, w in cls.stationary},
        )
        mixture_parts.append(law)
        mixture_weights.append(cls.absorption)
    cesaro = mix(mixture_parts, mixture_weights)

    effective_window = max(window, noise.prefix_length)

    def push_window(base: ProbMeasure) -> tuple[tuple[int, ProbMeasure], ...]:
        laws: dict[int, ProbMeasure] = {}
        below = base
        for k in range(-effective_window, 1):
            current = convolve(noise.measure_at(k), below)
            laws[k] = current
            below = current
        return tuple((k, laws[k]) for k in range(0, -effective_window - 1, -1))

    cesaro_window = push_window(cesaro)
    nu = cesaro if converges_in_law else None
    nu_window = cesaro_window if converges_in_law else None

    if as_convergence and not converges_in_law:
        raise InternalInconsistencyError("a.s. convergence without convergence in law")

    p2_subgroup = None
    p2_qualifying: tuple[SubgroupDescriptor, ...] = ()
    p2_certificate = None
    p2_error = None
    if nu is not None:
        try:
            ambient = context.ambient_semigroup(cap=subgroup_cap)
            subgroups = find_subgroups(ambient, max_gen=max_gen, cap=subgroup_cap)
        except (CapacityError, UnsupportedCaseError) as exc:
            p2_error = str(exc)
            subgroups = ()
        qualifying = []
        certificates = {}
        for sg in subgroups:
            if sg.is_trivial:
                continue
            cert = _subgroup_qualifies(sg, chain, nu, nu_window or ())
            if cert is not None:
                qualifying.append(sg)
                certificates[sg.member_ids] = cert
        qualifying.sort(key=lambda s: (s.order, s.member_ids))
        p2_qualifying = tuple(qualifying)
        if qualifying:
            p2_subgroup = qualifying[0]
            p2_certificate = certificates[p2_subgroup.member_ids]

    report = LimitLawReport(
        noise=noise,
        chain=chain,
        as_convergence=as_convergence,
        converges_in_law=converges_in_law,
        nu=nu,
        nu_window=nu_window,
        cesaro=cesaro,
        cesaro_window=cesaro_window,
        p2_subgroup=p2_subgroup,
        p2_qualifying=p2_qualifying,
        p2_certificate=p2_certificate,
        p2_error=p2_error,
    )
    if report.converges_in_law and report.nu != report.cesaro:
        raise InternalInconsistencyError("limit law differs from Cesaro limit")
    return report
