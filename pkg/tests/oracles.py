"""Independent reference computations the test suite checks the library against.

Everything here is written straight from the defining formulas, avoiding the
library's own code paths, so that agreement between the two is meaningful.
The brute-force Fourier oracle below predates the library's integer-test
implementation and stays the authority the tests defer to.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

_M64 = (1 << 64) - 1
_TOL = 1e-9


def splitmix64_reference(seed: int, count: int) -> list[int]:
    """The published 64-bit mixer, transliterated from its reference form."""
    state = seed & _M64
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        out.append(z ^ (z >> 31))
    return out


def character_modulus(n: int, weights: dict[int, Fraction], p: int) -> float:
    total = sum(
        float(w) * cmath.exp(2j * cmath.pi * p * g / n) for g, w in weights.items()
    )
    return abs(total)


def fourier_oracle(n: int, weights: dict[int, Fraction]) -> dict:
    """Brute-force trichotomy data from complex character moduli.

    pi marks which characters keep modulus one; their index set is read as a
    subgroup of Z/n, its minimal positive element is the generator, and the
    invariance subgroup is the annihilator under the p*g pairing.
    """
    pi = tuple(
        1 if abs(character_modulus(n, weights, p) - 1.0) < _TOL else 0
        for p in range(n)
    )
    z = tuple(p for p in range(n) if pi[p] == 1)
    positive = [p for p in z if p > 0]
    p_mu = min(positive) if positive else 0
    h = tuple(g for g in range(n) if all((p * g) % n == 0 for p in z))
    if p_mu == 0:
        case = "C1"
    elif p_mu == 1:
        case = "C2"
    else:
        case = "C3"
    return {"pi": pi, "z": z, "p_mu": p_mu, "h": h, "case": case}


def compose_images(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a[b[i]] for i in range(len(b)))


def convolution_power(
    weights: dict[tuple[int, ...], Fraction], steps: int
) -> dict[tuple[int, ...], Fraction]:
    """Law of a product of `steps` i.i.d. factors, raw-dict arithmetic.

    The product grows on the right, matching the backward-product recursion;
    for an i.i.d. law the left/right distinction does not change the result.
    """
    if steps < 1:
        raise ValueError("need at least one factor")
    law = dict(weights)
    for _ in range(steps - 1):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for img1, w1 in law.items():
            for img2, w2 in weights.items():
                key = compose_images(img1, img2)
                nxt[key] = nxt.get(key, Fraction(0)) + w1 * w2
        law = nxt
    return law


def apply_law(
    product_law: dict[tuple[int, ...], Fraction],
    entry_law: dict[int, Fraction],
) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for img, w in product_law.items():
        for x, wx in entry_law.items():
            y = img[x]
            out[y] = out.get(y, Fraction(0)) + w * wx
    return out


def three_state_stationary(p: Fraction, q: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """Closed form of the stationary state law for the two-map fixture."""
    denom = 2 + p * q
    return (
        Fraction(1 - p * q, 1) / denom,
        Fraction(p + p * q, 1) / denom,
        Fraction(q + p * q, 1) / denom,
    )


def three_state_expected_absorption(p: Fraction, q: Fraction) -> Fraction:
    """E[T] for the two-map fixture, by the waiting-time argument.

    After the first factor the running product alternates within one
    transient pair until the opposite letter shows up, so T - 1 is
    geometric: rate q after a first `a`, rate p after a first `b`.
    """
    return 1 + p / q + q / p


def three_state_absorption_tail(steps: int) -> Fraction:
    """P(T > steps) at p = q = 1/2: the opposite letter is a fair coin."""
    if steps < 1:
        return Fraction(1)
    return Fraction(1, 2 ** (steps - 1))
