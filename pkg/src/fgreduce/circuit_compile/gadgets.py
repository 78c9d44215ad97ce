"""Fan-in-2 De Morgan gadgets: multi-operand adder and binary threshold test."""

from __future__ import annotations

from ..instances import ThresholdCircuit
from .builder import CircuitBuilder


def ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


def _half(bld: CircuitBuilder, a: int, b: int) -> tuple[int, int]:
    both = bld.add("AND", (a, b))
    either = bld.add("OR", (a, b))
    s = bld.add("AND", (either, bld.add("NEG", (both,))))
    return s, both


def _full(bld: CircuitBuilder, a: int, b: int, c: int) -> tuple[int, int]:
    s1, c1 = _half(bld, a, b)
    s, c2 = _half(bld, s1, c)
    return s, bld.add("OR", (c1, c2))


def _add(bld: CircuitBuilder, xs: list[int], ys: list[int]) -> list[int]:
    """Ripple-carry sum of two little-endian numbers with len(xs) >= len(ys) >= 1."""
    out = []
    carry = None
    for i, a in enumerate(xs):
        if i < len(ys):
            s, carry = _half(bld, a, ys[i]) if carry is None else _full(bld, a, ys[i], carry)
        else:
            s, carry = _half(bld, a, carry)
        out.append(s)
    out.append(carry)
    return out


def build_adder(b: int, ell: int) -> ThresholdCircuit:
    """Sum of ``ell`` b-bit numbers as a pairwise tree of ripple adders.

    Input ``i*b + j`` is bit j (least significant first) of number i; the
    ``b + ceil(log2 ell)`` outputs are the bits of the sum, also LSB first.
    """
    if b < 1 or ell < 1:
        raise ValueError("adder needs b >= 1 and ell >= 1")
    bld = CircuitBuilder()
    nums = [[bld.input() for _ in range(b)] for _ in range(ell)]
    while len(nums) > 1:
        nxt = [_add(bld, nums[i], nums[i + 1]) for i in range(0, len(nums) - 1, 2)]
        if len(nums) % 2:
            nxt.append(nums[-1])
        nums = nxt
    return bld.build(nums[0])


def build_binth(r: int, theta: int) -> ThresholdCircuit:
    """Test whether the little-endian r-bit input is at least theta.

    Follows the recursion "some bit at position >= ceil(lg theta) is set, or
    the next bit down is set and the remaining low bits reach
    theta - 2^(ceil(lg theta) - 1)", folding constants as it goes.
    """
    if r < 1 or theta < 0:
        raise ValueError("binth needs r >= 1 and theta >= 0")
    bld = CircuitBuilder()
    xs = [bld.input() for _ in range(r)]

    def lor(a, b):
        if a is True or b is True:
            return True
        if a is False:
            return b
        if b is False:
            return a
        return bld.add("OR", (a, b))

    def land(a, b):
        if a is False or b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        return bld.add("AND", (a, b))

    def rec(th: int, m: int):
        if th <= 0:
            return True
        t = ceil_log2(th)
        if t > m:
            return False
        acc = False
        for i in range(t, m):
            acc = lor(acc, xs[i])
        if t >= 1:
            acc = lor(acc, land(xs[t - 1], rec(th - (1 << (t - 1)), t - 1)))
        return acc

    out = rec(theta, r)
    if isinstance(out, bool):
        out = bld.const(int(out))
    return bld.build([out])
