"""Cycle-accurate behavioral models of the multiplier architectures.

Each run_* function mirrors the dataflow of the generated hardware (split,
evaluate, pointwise multiply, interpolate, recombine) and reports the exact
cycle count of the corresponding RTL. Cycle counts are data-independent:

    Sbm          m
    Karatsuba2   ceil(m/2) + 1
    Toom3        ceil(m/3) + 2
    Toom4        ceil(m/4) + 3
    DigitSerial  ceil(m/n) * n      (inner Sbm)

The +1/+2/+3 constants are the operand-sum bit growth (Karatsuba) and the
evaluation/recombination register stages (Toom).
"""

from __future__ import annotations

import dataclasses
import enum

from .errors import BadDigit, BadParams, InexactDivision, InternalInterpolationError
from .numeric import INF, ArithMode, exact_div, fits, join, oracle_mul, signed_eval, split


class ArchKind(enum.Enum):
    SBM = "sbm"
    KARATSUBA2 = "karatsuba2"
    TOOM3 = "toom3"
    TOOM4 = "toom4"
    DIGIT_SERIAL = "wrapper"


@dataclasses.dataclass(frozen=True)
class RunTrace:
    product: int
    cycles: int
    sub_mults: int


TOOM3_POINTS = (0, 1, -1, 2, INF)
TOOM4_POINTS = (0, 1, -1, 2, -2, 3, INF)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_operands(a: int, b: int, m: int) -> None:
    if m < 1:
        raise BadParams(f"m must be >= 1, got {m}")
    if not fits(a, m) or not fits(b, m):
        raise OverflowError(f"operands must fit {m} bits")


def cycle_contract(kind: ArchKind, m: int, n: int | None = None) -> int:
    """Exact latency in clock cycles for a generated (kind, m[, n]) multiplier."""
    if kind is ArchKind.SBM:
        return m
    if kind is ArchKind.KARATSUBA2:
        return _ceil_div(m, 2) + 1
    if kind is ArchKind.TOOM3:
        return _ceil_div(m, 3) + 2
    if kind is ArchKind.TOOM4:
        return _ceil_div(m, 4) + 3
    if kind is ArchKind.DIGIT_SERIAL:
        if n is None:
            raise BadParams("digit-serial contract needs n")
        return _ceil_div(m, n) * n
    raise BadParams(f"unknown kind {kind}")


def run_sbm(a: int, b: int, m: int, mode: ArithMode = ArithMode.INTEGER) -> RunTrace:
    """Shift-add schoolbook multiplier: one conditional accumulate per bit of b."""
    _check_operands(a, b, m)
    acc = 0
    for i in range(m):
        if (b >> i) & 1:
            if mode is ArithMode.INTEGER:
                acc += a << i
            else:
                acc ^= a << i
    return RunTrace(acc, m, m)


def run_karatsuba2(a: int, b: int, m: int, mode: ArithMode = ArithMode.INTEGER) -> RunTrace:
    """2-way Karatsuba: 3 parallel sub-products on (h+1)-bit operands."""
    _check_operands(a, b, m)
    h = _ceil_div(m, 2)
    a0, a1 = split(a, 2, h)
    b0, b1 = split(b, 2, h)
    if mode is ArithMode.INTEGER:
        c0 = oracle_mul(a0, b0, mode)
        c1 = oracle_mul(a1, b1, mode)
        cmid = oracle_mul(a0 + a1, b0 + b1, mode)
        c2 = cmid - c1 - c0
    else:
        c0 = oracle_mul(a0, b0, mode)
        c1 = oracle_mul(a1, b1, mode)
        cmid = oracle_mul(a0 ^ a1, b0 ^ b1, mode)
        c2 = cmid ^ c1 ^ c0
    product = join([c0, c2, c1], h, mode)
    return RunTrace(product, h + 1, 3)


def _toom_product(a: int, b: int, m: int, ways: int, points) -> tuple[list[int], int]:
    """Common Toom front end: split, evaluate, pointwise multiply."""
    h = _ceil_div(m, ways)
    la = split(a, ways, h)
    lb = split(b, ways, h)
    w = [signed_eval(la, p) * signed_eval(lb, p) for p in points]
    return w, h


def run_toom3(a: int, b: int, m: int) -> RunTrace:
    """3-way Toom-Cook over points {0, 1, -1, 2, inf}; integer mode only."""
    _check_operands(a, b, m)
    w, h = _toom_product(a, b, m, 3, TOOM3_POINTS)
    w0, w1, wm1, w2, winf = w
    try:
        c0 = w0
        c4 = winf
        c2 = exact_div(w1 + wm1, 2) - c0 - c4
        t = exact_div(w1 - wm1, 2)                      # c1 + c3
        rem = w2 - c0 - 4 * c2 - 16 * c4                # 2*c1 + 8*c3
        c3 = exact_div(exact_div(rem, 2) - t, 3)
        c1 = t - c3
    except InexactDivision as exc:
        raise InternalInterpolationError(str(exc)) from exc
    product = join([c0, c1, c2, c3, c4], h)
    return RunTrace(product, h + 2, 5)


def run_toom4(a: int, b: int, m: int) -> RunTrace:
    """4-way Toom-Cook over points {0, 1, -1, 2, -2, 3, inf}; integer mode only.

    The interpolation is forward substitution over the point system; the odd
    subsystem's nodes {1, 4, 9} force one exact division by 5.
    """
    _check_operands(a, b, m)
    w, h = _toom_product(a, b, m, 4, TOOM4_POINTS)
    w0, w1, wm1, w2, wm2, w3, winf = w
    try:
        c0 = w0
        c6 = winf
        e1 = exact_div(w1 + wm1, 2) - c0 - c6           # c2 + c4
        o1 = exact_div(w1 - wm1, 2)                     # c1 + c3 + c5
        e2 = exact_div(w2 + wm2, 2) - c0 - 64 * c6      # 4*c2 + 16*c4
        o2 = exact_div(w2 - wm2, 2)                     # 2*c1 + 8*c3 + 32*c5
        c4 = exact_div(exact_div(e2, 4) - e1, 3)
        c2 = e1 - c4
        t2 = exact_div(o2, 2)                           # c1 + 4*c3 + 16*c5
        t3 = exact_div(w3 - c0 - 9 * c2 - 81 * c4 - 729 * c6, 3)  # c1 + 9*c3 + 81*c5
        u1 = exact_div(t2 - o1, 3)                      # c3 + 5*c5
        u2 = exact_div(t3 - o1, 8)                      # c3 + 10*c5
        c5 = exact_div(u2 - u1, 5)
        c3 = u1 - 5 * c5
        c1 = o1 - c3 - c5
    except InexactDivision as exc:
        raise InternalInterpolationError(str(exc)) from exc
    product = join([c0, c1, c2, c3, c4, c5, c6], h)
    return RunTrace(product, h + 3, 7)


def run_digit_serial(
    a: int,
    b: int,
    m: int,
    n: int,
    inner: ArchKind = ArchKind.SBM,
    mode: ArithMode = ArithMode.INTEGER,
) -> RunTrace:
    """Digit-serial wrapper: d = ceil(m/n) digits of b, one m-by-n inner SBM.

    Each digit product costs n cycles; the total is d*n. With n == m this
    degenerates to the inner multiplier.
    """
    _check_operands(a, b, m)
    if n < 1 or n > m:
        raise BadDigit(f"digit size must be in 1..{m}, got {n}")
    if inner is not ArchKind.SBM:
        raise BadParams(f"inner method {inner.value} is not supported; use sbm")
    d = _ceil_div(m, n)
    digits = split(b, d, n)
    acc = 0
    for k, dig in enumerate(digits):
        p = oracle_mul(a, dig, mode)
        if mode is ArithMode.INTEGER:
            acc += p << (k * n)
        else:
            acc ^= p << (k * n)
    return RunTrace(acc, d * n, d)


def run_model(
    kind: ArchKind,
    a: int,
    b: int,
    m: int,
    mode: ArithMode = ArithMode.INTEGER,
    n: int | None = None,
    inner: ArchKind = ArchKind.SBM,
) -> RunTrace:
    """Dispatch to the architecture model named by kind."""
    if kind is ArchKind.SBM:
        return run_sbm(a, b, m, mode)
    if kind is ArchKind.KARATSUBA2:
        return run_karatsuba2(a, b, m, mode)
    if kind is ArchKind.TOOM3:
        if mode is not ArithMode.INTEGER:
            raise BadParams("toom3 supports integer mode only")
        return run_toom3(a, b, m)
    if kind is ArchKind.TOOM4:
        if mode is not ArithMode.INTEGER:
            raise BadParams("toom4 supports integer mode only")
        return run_toom4(a, b, m)
    if kind is ArchKind.DIGIT_SERIAL:
        if n is None:
            raise BadParams("digit-serial model needs n")
        return run_digit_serial(a, b, m, n, inner, mode)
    raise BadParams(f"unknown kind {kind}")
