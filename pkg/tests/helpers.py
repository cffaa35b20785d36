"""Fixture builders shared across the test modules."""

from __future__ import annotations

from fractions import Fraction

from tsl import (
    ActionContext,
    NoiseSpec,
    ProbMeasure,
    StateSpace,
    TransformationElement,
    cyclic_group_context,
    element_carrier,
    semigroup_context,
)

THREE = StateSpace.of_size(3)
GEN_A = TransformationElement((1, 0, 1))
GEN_B = TransformationElement((2, 2, 0))

# the full closure of {GEN_A, GEN_B}, in generated order
CLOSURE_IMAGES = (
    (1, 0, 1),
    (2, 2, 0),
    (0, 0, 2),
    (0, 1, 0),
    (1, 1, 1),
    (2, 2, 2),
    (0, 0, 0),
)


def two_map_noise(p, q, prefix=()) -> NoiseSpec:
    car = element_carrier(THREE)
    tail = ProbMeasure.from_weights(car, {GEN_A: Fraction(p), GEN_B: Fraction(q)})
    return NoiseSpec(tail, tuple(prefix))


def three_ctx() -> ActionContext:
    return semigroup_context(THREE)


def cyclic_noise(n: int, weights, prefix=()):
    """Context plus noise over Z/n; weights map residues to rationals."""
    ctx = cyclic_group_context(n)
    car = element_carrier(ctx.space)

    def measure(w) -> ProbMeasure:
        assert ctx.group_elements is not None
        return ProbMeasure.from_weights(
            car, {ctx.group_elements[g]: Fraction(x) for g, x in w.items()}
        )

    return ctx, NoiseSpec(measure(weights), tuple(measure(w) for w in prefix))


def element_measure(space: StateSpace, weights) -> ProbMeasure:
    return ProbMeasure.from_weights(
        element_carrier(space),
        {TransformationElement(img): Fraction(w) for img, w in weights.items()},
    )
