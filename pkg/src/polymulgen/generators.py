"""RTL generators for the five multiplier architectures.

Every generator returns a checked-constructible RtlModule whose `children`
tuple carries the child module definitions, so a design is self-contained.
The sequential datapaths are MSB-first (Horner) shift-add machines driven by
one-hot schedule registers; transactions are framed by rst as described in
the verilog backend (reset one cycle, hold a/b for latency_cycles, read c).

Toom generators keep all interpolation arithmetic in two's complement on a
fixed window wide enough that every intermediate fits; exact divisions by 3
and 5 are multiplications by the modular inverse, built from log-depth
shift-add ladders.
"""

from __future__ import annotations

import dataclasses

from .errors import BadDigit, BadParams
from .ir import (Add, And, Assign, Concat, Const, Instance, Mux, Net, Not,
                 Port, Ref, RegDef, RtlModule, Repl, Shl, Slice, Sub, Xor,
                 expr_width)
from .models import ArchKind
from .numeric import INF, ArithMode


@dataclasses.dataclass(frozen=True)
class GenParams:
    """Validated parameter bundle for one generated design."""

    kind: ArchKind
    m: int
    mode: ArithMode = ArithMode.INTEGER
    n: int | None = None
    inner: ArchKind | None = None

    def __post_init__(self):
        if self.m < 4:
            raise BadParams(f"operand width {self.m} < 4")
        if self.kind in (ArchKind.TOOM3, ArchKind.TOOM4) and self.mode is not ArithMode.INTEGER:
            raise BadParams(f"{self.kind.value} supports integer mode only")
        if self.kind is ArchKind.DIGIT_SERIAL:
            if self.n is None or not 1 <= self.n <= self.m:
                raise BadDigit(f"digit width {self.n} outside 1..{self.m}")
            inner = self.inner if self.inner is not None else ArchKind.SBM
            if inner is not ArchKind.SBM:
                raise BadParams("digit-serial inner core must be sbm")
            object.__setattr__(self, "inner", inner)
        else:
            if self.n is not None or self.inner is not None:
                raise BadParams(f"n/inner are digit-serial parameters, not {self.kind.value}")


class _Builder:
    """Accumulates module items in deterministic construction order."""

    def __init__(self, name: str, latency: int, meta: tuple):
        self.name = name
        self.latency = latency
        self.meta = meta
        self._ports: list = []
        self._nets: list = []
        self._regs: list = []
        self._assigns: list = []
        self._insts: list = []
        self._ntmp = 0

    def std_ports(self, wa: int, wb: int, wc: int):
        self._ports = [Port("clk", "in", 1), Port("rst", "in", 1),
                       Port("a", "in", wa), Port("b", "in", wb),
                       Port("c", "out", wc)]
        return Ref("a", wa), Ref("b", wb)

    def net(self, name: str, expr) -> Ref:
        w = expr_width(expr)
        self._nets.append(Net(name, w))
        self._assigns.append(Assign(name, expr))
        return Ref(name, w)

    def tmp(self, expr) -> Ref:
        self._ntmp += 1
        return self.net(f"t{self._ntmp}", expr)

    def ref(self, expr) -> Ref:
        """Materialize an expression as a net unless it already is a Ref."""
        return expr if isinstance(expr, Ref) else self.tmp(expr)

    def reg(self, name: str, width: int, reset: int, nxt) -> Ref:
        self._regs.append(RegDef(name, width, reset, nxt))
        return Ref(name, width)

    def out_net(self, name: str, width: int) -> Ref:
        """Declare a net that an instance output will drive."""
        self._nets.append(Net(name, width))
        return Ref(name, width)

    def inst(self, name: str, child: RtlModule, a, b, rst, c: Ref) -> None:
        self._insts.append(Instance(name, child.name, (
            ("clk", Ref("clk", 1)), ("rst", rst), ("a", a), ("b", b), ("c", c))))

    def drive_c(self, expr) -> None:
        self._assigns.append(Assign("c", expr))

    def build(self, children: tuple = ()) -> RtlModule:
        return RtlModule(self.name, tuple(self._ports), tuple(self._nets),
                         tuple(self._regs), tuple(self._assigns),
                         tuple(self._insts), self.latency, self.meta, children)


def _meta(method: str, m: int, n: int, mode: ArithMode) -> tuple:
    return (("method", method), ("m", str(m)), ("n", str(n)), ("mode", mode.value))


def _ceil_div(x: int, y: int) -> int:
    return -(-x // y)


def _zext(e, width: int):
    w = expr_width(e)
    if w == width:
        return e
    if w > width:
        raise ValueError(f"cannot zero-extend {w} bits down to {width}")
    return Concat((Const(width - w, 0), e))


def _fit(b: _Builder, e, width: int):
    """Zero-extend or truncate to `width` (truncation is mod 2^width)."""
    w = expr_width(e)
    if w <= width:
        return _zext(e, width)
    return Slice(b.ref(e), 0, width)


def _sext(b: _Builder, e, width: int):
    base = b.ref(e)
    if base.width == width:
        return base
    msb = Slice(base, base.width - 1, 1)
    return Concat((Repl(width - base.width, msb), base))


def _asr(b: _Builder, e, k: int):
    """Arithmetic shift right by a constant, width preserved."""
    base = b.ref(e)
    msb = Slice(base, base.width - 1, 1)
    return Concat((Repl(k, msb), Slice(base, k, base.width - k)))


def _or1(x, y):
    # 1-bit OR via De Morgan; the IR keeps its operator set minimal.
    return Not(And(Not(x), Not(y)))


def _shl_mod(b: _Builder, e, k: int, width: int):
    if k == 0:
        return _fit(b, e, width)
    return _fit(b, Shl(b.ref(e), k), width)


def _cmul(b: _Builder, e, k: int, width: int):
    """k*e mod 2^width for a constant k >= 1, by shift-add decomposition."""
    e = _fit(b, e, width)
    if k == 1:
        return e
    base = b.ref(e)
    acc = None
    for i in range(k.bit_length()):
        if (k >> i) & 1:
            term = base if i == 0 else _shl_mod(b, base, i, width)
            acc = term if acc is None else Add(acc, term)
    return acc


def _geom(b: _Builder, x, step: int, count: int, width: int) -> Ref:
    """sum_{j<count} (x << step*j) mod 2^width via a doubling ladder."""
    block = b.ref(_fit(b, x, width))
    total = None
    covered = 0
    size = 1
    while size <= count:
        if count & size:
            if total is None:
                total, covered = block, size
            else:
                total = b.ref(Add(total, _shl_mod(b, block, step * covered, width)))
                covered += size
        if size * 2 <= count:
            block = b.ref(Add(block, _shl_mod(b, block, step * size, width)))
        size *= 2
    return total


def _div3(b: _Builder, x, width: int):
    """Exact division by 3 as multiplication by inv(3) mod 2^width.

    3*(1 + 2*sum_{j<K} 4^j) = 1 + 2^(2K+1), so with K = ceil(width/2) the
    parenthesized constant is the inverse and q = x + 2*(sum 4^j x).
    """
    x = b.ref(_fit(b, x, width))
    t = _geom(b, x, 2, (width + 1) // 2, width)
    return Add(x, _shl_mod(b, t, 1, width))


def _div5(b: _Builder, x, width: int):
    """Exact division by 5: inv(5) = 1 + 12*sum_{j<K} 16^j mod 2^width."""
    x = b.ref(_fit(b, x, width))
    u = _geom(b, x, 4, (width + 3) // 4, width)
    return Add(Add(x, _shl_mod(b, u, 3, width)), _shl_mod(b, u, 2, width))


def _sbm_name(w: int, mode: ArithMode) -> str:
    return f"mul_sbm_{w}" if mode is ArithMode.INTEGER else f"mul_sbm_cl_{w}"


def _sbm_module(name: str, w: int, mode: ArithMode, meta: tuple) -> RtlModule:
    """Shift-add schoolbook core: MSB-first over b, w cycles, then holds."""
    b = _Builder(name, w, meta)
    a, bp = b.std_ports(w, w, 2 * w)
    sched = Ref("sched", w + 1)
    acc = Ref("acc", 2 * w)
    breg = Ref("breg", w)
    first = b.net("first", Slice(sched, 0, 1))
    done = b.net("done", Slice(sched, w, 1))
    run = b.net("run", Not(done))
    bit = b.net("bnow", Mux(first, Slice(bp, w - 1, 1), Slice(breg, w - 1, 1)))
    bsrc = b.net("bsrc", Mux(first, bp, breg))
    bnext = b.net("bnext", Slice(b.tmp(Shl(bsrc, 1)), 0, w))
    addend = b.net("addend", Mux(bit, _zext(a, 2 * w), Const(2 * w, 0)))
    accsh = b.net("accsh", Slice(b.tmp(Shl(acc, 1)), 0, 2 * w))
    comb = Xor if mode is ArithMode.CARRYLESS else Add
    step = b.net("step", comb(accsh, addend))
    b.reg("sched", w + 1, 1, Mux(done, sched, Slice(b.tmp(Shl(sched, 1)), 0, w + 1)))
    b.reg("acc", 2 * w, 0, Mux(run, step, acc))
    b.reg("breg", w, 0, Mux(run, bnext, breg))
    b.drive_c(acc)
    return b.build()


def gen_sbm(m: int, mode: ArithMode = ArithMode.INTEGER) -> RtlModule:
    if m < 4:
        raise BadParams(f"sbm needs m >= 4, got {m}")
    return _sbm_module(_sbm_name(m, mode), m, mode, _meta("sbm", m, m, mode))


def gen_karatsuba2(m: int, mode: ArithMode = ArithMode.INTEGER) -> RtlModule:
    """Three parallel SBM cores of width h+1 plus combinational pre/post adders."""
    if m < 4:
        raise BadParams(f"karatsuba2 needs m >= 4, got {m}")
    h = _ceil_div(m, 2)
    w = h + 1  # uniform child width so the sum product fits the same core
    cl = mode is ArithMode.CARRYLESS
    child = _sbm_module(_sbm_name(w, mode), w, mode, _meta("sbm", w, w, mode))
    name = f"mul_km2_cl_{m}" if cl else f"mul_km2_{m}"
    b = _Builder(name, h + 1, _meta("karatsuba2", m, m, mode))
    a, bp = b.std_ports(m, m, 2 * m)
    comb = Xor if cl else Add
    a0 = b.net("a0", _zext(Slice(a, 0, h), w))
    a1 = b.net("a1", _zext(Slice(a, h, m - h), w))
    b0 = b.net("b0", _zext(Slice(bp, 0, h), w))
    b1 = b.net("b1", _zext(Slice(bp, h, m - h), w))
    asum = b.net("asum", comb(a0, a1))
    bsum = b.net("bsum", comb(b0, b1))
    w0 = b.out_net("w0", 2 * w)
    w1 = b.out_net("w1", 2 * w)
    wm = b.out_net("wm", 2 * w)
    rst = Ref("rst", 1)
    b.inst("u_lo", child, a0, b0, rst, w0)
    b.inst("u_hi", child, a1, b1, rst, w1)
    b.inst("u_mid", child, asum, bsum, rst, wm)
    if cl:
        cmid = b.net("cmid", Xor(Xor(wm, w1), w0))
    else:
        cmid = b.net("cmid", Sub(Sub(wm, w1), w0))
    total = comb(comb(_shl_mod(b, w1, 2 * h, 2 * m), _shl_mod(b, cmid, h, 2 * m)),
                 _fit(b, w0, 2 * m))
    b.drive_c(total)
    return b.build(children=(child,))


# Toom evaluation points; INF denotes the degree-top coefficient product.
_TC3_POINTS = (0, 1, -1, 2, INF)
_TC4_POINTS = (0, 1, -1, 2, -2, 3, INF)


def _point_rows(points: tuple, k: int) -> list:
    rows = []
    for p in points:
        if p is INF:
            rows.append(tuple(1 if j == k - 1 else 0 for j in range(k)))
        else:
            rows.append(tuple(int(p) ** j for j in range(k)))
    return rows


def _row_mag(row: tuple) -> int:
    pos = sum(c for c in row if c > 0)
    neg = -sum(c for c in row if c < 0)
    return max(pos, neg, 1)


def _eval_width(h: int, row: tuple) -> int:
    # signed width for sum(c_j * limb_j), limbs < 2^h
    return h + 1 + (_row_mag(row) - 1).bit_length()


def _prod_width(h: int, row: tuple) -> int:
    mag = _row_mag(row)
    return 2 * h + 1 + (mag * mag - 1).bit_length()


def _eval_expr(b: _Builder, limbs: list, row: tuple, width: int):
    """Two's complement sum(c_j * limb_j) over unsigned h-bit limbs."""
    pos = None
    neg = None
    for limb, cj in zip(limbs, row):
        if cj == 0:
            continue
        term = _cmul(b, _zext(limb, width), abs(cj), width)
        if cj > 0:
            pos = term if pos is None else Add(pos, term)
        else:
            neg = term if neg is None else Add(neg, term)
    expr = pos if pos is not None else Const(width, 0)
    if neg is not None:
        expr = Sub(expr, neg)
    return expr


def _toom_child(name: str, h: int, k: int, wa: int, wc: int, row: tuple,
                meta: tuple) -> RtlModule:
    """Column-serial point multiplier: c = a * sum(c_j * b_j) in h cycles.

    a is the registered (already evaluated, signed) operand; the b evaluation
    is folded into the shift-add recurrence one bit column per cycle, one
    weighted addend per nonzero coefficient.
    """
    b = _Builder(name, h, meta)
    a, bp = b.std_ports(wa, k * h, wc)
    sched = Ref("sched", h + 1)
    acc = Ref("acc", wc)
    first = b.net("first", Slice(sched, 0, 1))
    done = b.net("done", Slice(sched, h, 1))
    run = b.net("run", Not(done))
    b.reg("sched", h + 1, 1, Mux(done, sched, Slice(b.tmp(Shl(sched, 1)), 0, h + 1)))
    asx = b.net("asx", _sext(b, a, wc))
    active = [(j, cj) for j, cj in enumerate(row) if cj]
    cols = Ref("cols", len(active) * h)
    nexts = []
    terms = []
    for idx, (j, cj) in enumerate(active):
        limb = b.net(f"limb{j}", Slice(bp, j * h, h))
        fld = b.net(f"fld{j}", Slice(cols, idx * h, h))
        bit = b.net(f"bit{j}", Mux(first, Slice(limb, h - 1, 1), Slice(fld, h - 1, 1)))
        nexts.append(b.net(f"cnx{j}", Mux(first, _shl_mod(b, limb, 1, h),
                                          _shl_mod(b, fld, 1, h))))
        val = _cmul(b, asx, abs(cj), wc)
        terms.append((cj < 0, b.net(f"term{j}", Mux(bit, val, Const(wc, 0)))))
    cur = b.net("accsh", _shl_mod(b, acc, 1, wc))
    for negate, term in terms:
        cur = (Sub if negate else Add)(cur, term)
    step = b.net("step", cur)
    b.reg("acc", wc, 0, Mux(run, step, acc))
    b.reg("cols", len(active) * h, 0,
          Mux(run, Concat(tuple(reversed(nexts))), cols))
    b.drive_c(acc)
    return b.build()


def _toom_frame(b: _Builder, a, bp, m: int, k: int, h: int, lat: int,
                points: tuple, stem: str, meta: tuple):
    """Shared Toom plumbing: padding, schedule, evaluation regs, children.

    Returns (child modules, child output refs, load strobe schedule refs).
    """
    rows = _point_rows(points, k)
    apad = b.net("apad", _zext(a, k * h))
    bpad = b.net("bpad", _zext(bp, k * h))
    limbs = [b.net(f"al{j}", Slice(apad, j * h, h)) for j in range(k)]
    sched = Ref("sched", lat + 1)
    ld = b.net("ld", Slice(sched, 0, 1))
    done = b.net("done", Slice(sched, lat, 1))
    b.reg("sched", lat + 1, 1, Mux(done, sched, Slice(b.tmp(Shl(sched, 1)), 0, lat + 1)))
    crst = b.net("crst", _or1(Ref("rst", 1), ld))
    children = []
    wrefs = []
    for i, row in enumerate(rows):
        wa = _eval_width(h, row)
        wc = _prod_width(h, row)
        ev = b.net(f"ev{i}", _eval_expr(b, limbs, row, wa))
        evr = b.reg(f"eva{i}", wa, 0, Mux(ld, ev, Ref(f"eva{i}", wa)))
        child = _toom_child(f"{stem}_pp{i}", h, k, wa, wc, row, meta)
        children.append(child)
        wn = b.out_net(f"w{i}", wc)
        b.inst(f"u_pp{i}", child, evr, bpad, crst, wn)
        wrefs.append(wn)
    return children, wrefs, sched


def _recombine(b: _Builder, coeffs: list, h: int, wu: int, width: int):
    """sum(coeff_i << i*h) mod 2^width; coefficients read as wu-bit unsigned."""
    total = None
    for i, cref in enumerate(coeffs):
        part = _shl_mod(b, Slice(cref, 0, wu), i * h, width)
        total = part if total is None else Add(total, part)
    return total


def gen_toom3(m: int) -> RtlModule:
    if m < 6:
        raise BadParams(f"toom3 needs m >= 6, got {m}")
    h = _ceil_div(m, 3)
    lat = h + 2
    meta = _meta("toom3", m, m, ArithMode.INTEGER)
    stem = f"mul_tc3_{m}"
    b = _Builder(stem, lat, meta)
    a, bp = b.std_ports(m, m, 2 * m)
    children, w, sched = _toom_frame(b, a, bp, m, 3, h, lat, _TC3_POINTS, stem, meta)

    # Interpolation on a signed window wide enough for every intermediate:
    # the largest magnitude is the divide-by-3 numerator, below 78 * 2^(2h).
    W = 2 * h + 8
    v = [b.net(f"vs{i}", _sext(b, w[i], W)) for i in range(5)]
    c0 = v[0]
    c4 = v[4]
    c2 = b.net("c2", Sub(Sub(_asr(b, Add(v[1], v[2]), 1), c0), c4))
    todd = b.net("todd", _asr(b, Sub(v[1], v[2]), 1))
    rem = b.net("rem", Sub(Sub(Sub(v[3], c0), _shl_mod(b, c2, 2, W)),
                           _shl_mod(b, c4, 4, W)))
    c3 = b.net("c3", _div3(b, Sub(_asr(b, rem, 1), todd), W))
    c1 = b.net("c1", Sub(todd, c3))

    fin = b.net("fin", Slice(sched, lat - 1, 1))
    recomb = _recombine(b, [c0, c1, c2, c3, c4], h, 2 * h + 2, 2 * m)
    cres = b.reg("cres", 2 * m, 0, Mux(fin, recomb, Ref("cres", 2 * m)))
    b.drive_c(cres)
    return b.build(children=tuple(children))


def gen_toom4(m: int) -> RtlModule:
    if m < 8:
        raise BadParams(f"toom4 needs m >= 8, got {m}")
    h = _ceil_div(m, 4)
    lat = h + 3
    meta = _meta("toom4", m, m, ArithMode.INTEGER)
    stem = f"mul_tc4_{m}"
    b = _Builder(stem, lat, meta)
    a, bp = b.std_ports(m, m, 2 * m)
    children, w, sched = _toom_frame(b, a, bp, m, 4, h, lat, _TC4_POINTS, stem, meta)

    # Window sized for the worst intermediate (the w(3) residue, < 2690*2^(2h)).
    W = 2 * h + 14
    v = [b.net(f"vs{i}", _sext(b, w[i], W)) for i in range(7)]
    c0 = v[0]
    c6 = v[6]
    e1 = b.net("e1", Sub(Sub(_asr(b, Add(v[1], v[2]), 1), c0), c6))
    o1 = b.net("o1", _asr(b, Sub(v[1], v[2]), 1))
    e2 = b.net("e2", Sub(Sub(_asr(b, Add(v[3], v[4]), 1), c0), _shl_mod(b, c6, 6, W)))
    o2 = b.net("o2", _asr(b, Sub(v[3], v[4]), 1))
    c4 = b.net("c4", _div3(b, Sub(_asr(b, e2, 2), e1), W))
    c2 = b.net("c2", Sub(e1, c4))
    half2 = b.net("half2", _asr(b, o2, 1))
    res3 = b.net("res3", _div3(b, Sub(Sub(Sub(Sub(v[5], c0), _cmul(b, c2, 9, W)),
                                          _cmul(b, c4, 81, W)), _cmul(b, c6, 729, W)), W))
    u1 = b.net("u1", _div3(b, Sub(half2, o1), W))
    u2 = b.net("u2", _asr(b, Sub(res3, o1), 3))
    c5 = b.net("c5", _div5(b, Sub(u2, u1), W))
    c3 = b.net("c3", Sub(u1, _cmul(b, c5, 5, W)))
    c1 = b.net("c1", Sub(Sub(o1, c3), c5))

    # Two result stages: coefficient registers, then the recombined product.
    fin1 = b.net("fin1", Slice(sched, lat - 2, 1))
    fin2 = b.net("fin2", Slice(sched, lat - 1, 1))
    wu = 2 * h + 2
    crefs = []
    for i, cref in enumerate([c0, c1, c2, c3, c4, c5, c6]):
        crefs.append(b.reg(f"cr{i}", wu, 0, Mux(fin1, Slice(cref, 0, wu),
                                                Ref(f"cr{i}", wu))))
    recomb = _recombine(b, crefs, h, wu, 2 * m)
    cres = b.reg("cres", 2 * m, 0, Mux(fin2, recomb, Ref("cres", 2 * m)))
    b.drive_c(cres)
    return b.build(children=tuple(children))


def _dsbm_core(name: str, m: int, n: int, mode: ArithMode, meta: tuple) -> RtlModule:
    """Free-running m x n digit core: one product per n-cycle window.

    c combinationally presents the next accumulator value, so during the last
    cycle of a window it equals the finished a*digit product and the wrapper
    can fold it in on the same edge.
    """
    w = m + n
    b = _Builder(name, n, meta)
    a, bp = b.std_ports(m, n, w)
    ring = Ref("ring", n)
    breg = Ref("breg", n)
    acc = Ref("acc", w)
    first = b.net("first", Slice(ring, 0, 1))
    rot = ring if n == 1 else Concat((Slice(ring, 0, n - 1), Slice(ring, n - 1, 1)))
    b.reg("ring", n, 1, rot)
    bit = b.net("bnow", Mux(first, Slice(bp, n - 1, 1), Slice(breg, n - 1, 1)))
    bsrc = b.net("bsrc", Mux(first, bp, breg))
    b.reg("breg", n, 0, Slice(b.tmp(Shl(bsrc, 1)), 0, n))
    addend = b.net("addend", Mux(bit, _zext(a, w), Const(w, 0)))
    accsh = b.net("accsh", Slice(b.tmp(Shl(acc, 1)), 0, w))
    comb = Xor if mode is ArithMode.CARRYLESS else Add
    hstep = b.net("hstep", Mux(first, addend, comb(accsh, addend)))
    b.reg("acc", w, 0, hstep)
    b.drive_c(hstep)
    return b.build()


def gen_digit_serial(m: int, n: int, inner: ArchKind = ArchKind.SBM,
                     mode: ArithMode = ArithMode.INTEGER) -> RtlModule:
    """Digit-serial wrapper: d = ceil(m/n) digits of b, MSB-first, d*n cycles."""
    if m < 4:
        raise BadParams(f"digit-serial needs m >= 4, got {m}")
    if not 1 <= n <= m:
        raise BadDigit(f"digit width {n} outside 1..{m}")
    if inner is not ArchKind.SBM:
        raise BadParams("digit-serial inner core must be sbm")
    d = _ceil_div(m, n)
    lat = d * n
    cl = mode is ArithMode.CARRYLESS
    meta = _meta("wrapper", m, n, mode)
    core = _dsbm_core(f"mul_dsbm_cl_{m}x{n}" if cl else f"mul_dsbm_{m}x{n}",
                      m, n, mode, meta)
    name = f"mul_serial_cl_{m}_{n}" if cl else f"mul_serial_{m}_{n}"
    b = _Builder(name, lat, meta)
    a, bp = b.std_ports(m, m, 2 * m)
    acc = Ref("acc", 2 * m)
    dighot = Ref("dighot", d)
    phring = Ref("phring", n)
    done = Ref("done", 1)
    bpad = b.net("bpad", _zext(bp, d * n))
    cur = None
    for k in range(d):
        sel = b.net(f"sel{k}", And(Repl(n, Slice(dighot, k, 1)),
                                   Slice(bpad, k * n, n)))
        cur = sel if cur is None else b.ref(Xor(cur, sel))
    dig = b.net("dig", cur)
    rot = phring if n == 1 else Concat((Slice(phring, 0, n - 1), Slice(phring, n - 1, 1)))
    b.reg("phring", n, 1, rot)
    wend = b.net("wend", Slice(phring, n - 1, 1))
    upd = b.net("upd", And(Not(done), wend))
    pprod = b.out_net("pprod", m + n)
    b.inst("u_core", core, a, dig, Ref("rst", 1), pprod)
    comb = Xor if cl else Add
    step = b.net("step", comb(_shl_mod(b, acc, n, 2 * m), _zext(pprod, 2 * m)))
    b.reg("acc", 2 * m, 0, Mux(upd, step, acc))
    shr = dighot if d == 1 else Mux(upd, Concat((Const(1, 0), Slice(dighot, 1, d - 1))),
                                    dighot)
    b.reg("dighot", d, 1 << (d - 1), shr)
    b.reg("done", 1, 0, _or1(done, And(wend, Slice(dighot, 0, 1))))
    b.drive_c(acc)
    return b.build(children=(core,))


def generate(params: GenParams) -> RtlModule:
    """Dispatch one GenParams bundle to its generator."""
    if params.kind is ArchKind.SBM:
        return gen_sbm(params.m, params.mode)
    if params.kind is ArchKind.KARATSUBA2:
        return gen_karatsuba2(params.m, params.mode)
    if params.kind is ArchKind.TOOM3:
        return gen_toom3(params.m)
    if params.kind is ArchKind.TOOM4:
        return gen_toom4(params.m)
    if params.kind is ArchKind.DIGIT_SERIAL:
        return gen_digit_serial(params.m, params.n, params.inner, params.mode)
    raise BadParams(f"unknown architecture {params.kind!r}")


def top_name(kind: ArchKind, m: int, mode: ArithMode = ArithMode.INTEGER,
             n: int | None = None) -> str:
    """Top module name for a parameter bundle, without generating it."""
    cl = mode is ArithMode.CARRYLESS
    if kind is ArchKind.SBM:
        return f"mul_sbm_cl_{m}" if cl else f"mul_sbm_{m}"
    if kind is ArchKind.KARATSUBA2:
        return f"mul_km2_cl_{m}" if cl else f"mul_km2_{m}"
    if kind is ArchKind.TOOM3:
        return f"mul_tc3_{m}"
    if kind is ArchKind.TOOM4:
        return f"mul_tc4_{m}"
    if kind is ArchKind.DIGIT_SERIAL:
        if n is None:
            raise BadParams("digit-serial name needs n")
        return f"mul_serial_cl_{m}_{n}" if cl else f"mul_serial_{m}_{n}"
    raise BadParams(f"unknown architecture {kind!r}")


def design_library(top: RtlModule) -> dict:
    """name -> module map for a generated design (top plus its children)."""
    lib = {child.name: child for child in top.children}
    lib[top.name] = top
    return lib
