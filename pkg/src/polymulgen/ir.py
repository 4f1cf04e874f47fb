"""Structural RTL intermediate representation.

A module is ports + nets + registers + continuous assigns + child instances.
Expressions form a width-checked operator tree; there is no implicit
truncation or extension anywhere, so every width change is an explicit
Slice/Concat/Repl. Registers are posedge-clocked with synchronous active-high
reset to a constant.

The standard multiplier interface is the fixed port list
clk(1), rst(1), a, b (inputs), c (output).
"""

from __future__ import annotations

import dataclasses
import re

from .errors import CyclicHierarchy, UnresolvedInstance

_IDENT_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


@dataclasses.dataclass(frozen=True)
class Const:
    width: int
    value: int


@dataclasses.dataclass(frozen=True)
class Ref:
    name: str
    width: int


@dataclasses.dataclass(frozen=True)
class Slice:
    base: "Expr"
    lo: int
    width: int


@dataclasses.dataclass(frozen=True)
class Concat:
    parts: tuple  # most significant part first, as in Verilog {a, b}


@dataclasses.dataclass(frozen=True)
class Repl:
    count: int
    base: "Expr"


@dataclasses.dataclass(frozen=True)
class Add:
    a: "Expr"
    b: "Expr"


@dataclasses.dataclass(frozen=True)
class Sub:
    a: "Expr"
    b: "Expr"


@dataclasses.dataclass(frozen=True)
class And:
    a: "Expr"
    b: "Expr"


@dataclasses.dataclass(frozen=True)
class Xor:
    a: "Expr"
    b: "Expr"


@dataclasses.dataclass(frozen=True)
class Not:
    base: "Expr"


@dataclasses.dataclass(frozen=True)
class Mux:
    cond: "Expr"
    t: "Expr"
    f: "Expr"


@dataclasses.dataclass(frozen=True)
class Shl:
    """Shift left by a constant; the result is base.width + amount bits wide."""

    base: "Expr"
    amount: int


Expr = (Const, Ref, Slice, Concat, Repl, Add, Sub, And, Xor, Not, Mux, Shl)


@dataclasses.dataclass(frozen=True)
class Port:
    name: str
    direction: str  # "in" | "out"
    width: int


@dataclasses.dataclass(frozen=True)
class Net:
    name: str
    width: int


@dataclasses.dataclass(frozen=True)
class RegDef:
    name: str
    width: int
    reset: int
    next: "Expr"


@dataclasses.dataclass(frozen=True)
class Assign:
    target: str
    expr: "Expr"


@dataclasses.dataclass(frozen=True)
class Instance:
    name: str
    module_name: str
    bindings: tuple  # ((port_name, Expr), ...) in child port order


@dataclasses.dataclass(frozen=True)
class RtlModule:
    name: str
    ports: tuple
    nets: tuple
    regs: tuple
    assigns: tuple
    instances: tuple
    latency_cycles: int
    meta: tuple  # ((key, value), ...) embedded in the emitted header
    children: tuple = ()  # child module definitions, so a design is self-contained


@dataclasses.dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str  # "<module>.<item>" location
    detail: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.where}: {self.detail}"


def expr_width(e) -> int:
    """Width of an expression, validating every structural constraint on the way.

    Raises ValueError with a description on any malformed node.
    """
    if isinstance(e, Const):
        if e.width < 1:
            raise ValueError(f"const width {e.width} < 1")
        if not 0 <= e.value < (1 << e.width):
            raise ValueError(f"const value {e.value} does not fit {e.width} bits")
        return e.width
    if isinstance(e, Ref):
        if e.width < 1:
            raise ValueError(f"ref {e.name} width {e.width} < 1")
        return e.width
    if isinstance(e, Slice):
        bw = expr_width(e.base)
        if e.lo < 0 or e.width < 1 or e.lo + e.width > bw:
            raise ValueError(f"slice [{e.lo}+:{e.width}] out of {bw}-bit operand")
        return e.width
    if isinstance(e, Concat):
        if not e.parts:
            raise ValueError("empty concat")
        return sum(expr_width(p) for p in e.parts)
    if isinstance(e, Repl):
        if e.count < 1:
            raise ValueError(f"repl count {e.count} < 1")
        return e.count * expr_width(e.base)
    if isinstance(e, (Add, Sub, And, Xor)):
        wa, wb = expr_width(e.a), expr_width(e.b)
        if wa != wb:
            raise ValueError(f"{type(e).__name__} operand widths {wa} != {wb}")
        return wa
    if isinstance(e, Not):
        return expr_width(e.base)
    if isinstance(e, Mux):
        if expr_width(e.cond) != 1:
            raise ValueError("mux condition must be 1 bit")
        wt, wf = expr_width(e.t), expr_width(e.f)
        if wt != wf:
            raise ValueError(f"mux arm widths {wt} != {wf}")
        return wt
    if isinstance(e, Shl):
        if e.amount < 0:
            raise ValueError(f"shift amount {e.amount} < 0")
        return expr_width(e.base) + e.amount
    raise ValueError(f"unknown expression node {e!r}")


def expr_refs(e, out: set) -> set:
    """Collect names of all Refs in an expression tree."""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Ref):
            out.add(node.name)
        elif isinstance(node, (Const,)):
            pass
        elif isinstance(node, Slice):
            stack.append(node.base)
        elif isinstance(node, Concat):
            stack.extend(node.parts)
        elif isinstance(node, Repl):
            stack.append(node.base)
        elif isinstance(node, (Add, Sub, And, Xor)):
            stack.append(node.a)
            stack.append(node.b)
        elif isinstance(node, Not):
            stack.append(node.base)
        elif isinstance(node, Mux):
            stack.extend((node.cond, node.t, node.f))
        elif isinstance(node, Shl):
            stack.append(node.base)
    return out


def check(module: RtlModule, library: dict | None = None) -> list:
    """Validate a module; returns a list of Diagnostics (empty when clean)."""
    diags = []

    def bad(code, item, detail):
        diags.append(Diagnostic(code, f"{module.name}.{item}", detail))

    # Declarations: identifiers legal and unique across ports/nets/regs.
    decls = {}
    for kind, items in (("port", module.ports), ("net", module.nets), ("reg", module.regs)):
        for it in items:
            if not _IDENT_RE.match(it.name):
                bad("BadIdentifier", it.name, f"{kind} name not lowercase identifier")
            if it.name in decls:
                bad("DuplicateDecl", it.name, f"declared as {decls[it.name]} and {kind}")
            decls[it.name] = kind
            if it.width < 1:
                bad("BadWidth", it.name, f"{kind} width {it.width} < 1")
    if not _IDENT_RE.match(module.name):
        bad("BadIdentifier", "<module>", "module name not lowercase identifier")

    # Interface contract: clk(1), rst(1), a, b inputs then c output, nothing else.
    shape = [(p.name, p.direction) for p in module.ports]
    if shape != [("clk", "in"), ("rst", "in"), ("a", "in"), ("b", "in"), ("c", "out")]:
        bad("BadInterface", "<ports>", f"port list {shape} != clk/rst/a/b in, c out")
    else:
        if module.ports[0].width != 1 or module.ports[1].width != 1:
            bad("BadInterface", "<ports>", "clk and rst must be 1 bit")

    widths = {name: it.width for items in (module.ports, module.nets, module.regs)
              for it, name in ((i, i.name) for i in items)}

    def check_expr(item, e, want=None):
        try:
            w = expr_width(e)
        except ValueError as exc:
            bad("WidthMismatch", item, str(exc))
            return
        refs = expr_refs(e, set())
        for r in sorted(refs):
            if r not in decls:
                bad("UnknownRef", item, f"reference to undeclared name {r}")
            elif decls[r] == "port" and _port(module, r).direction == "out":
                bad("OutputRead", item, f"output port {r} read inside module")
        # Ref widths must agree with declarations.
        _check_ref_widths(e, widths, bad, item)
        if want is not None and w != want:
            bad("WidthMismatch", item, f"expression width {w} != target width {want}")

    # Drivers: assigns and instance output bindings; exactly one per net/output.
    drivers = {}
    for a in module.assigns:
        drivers[a.target] = drivers.get(a.target, 0) + 1
        tkind = decls.get(a.target)
        if tkind is None:
            bad("UnknownRef", a.target, "assign target not declared")
        elif tkind == "reg":
            bad("BadTarget", a.target, "assign target is a reg (regs drive via next)")
        elif tkind == "port" and _port(module, a.target).direction != "out":
            bad("BadTarget", a.target, "assign target is an input port")
        want = widths.get(a.target)
        check_expr(a.target, a.expr, want)

    inst_names = set()
    for inst in module.instances:
        if inst.name in inst_names:
            bad("DuplicateDecl", inst.name, "duplicate instance name")
        inst_names.add(inst.name)
        child = None if library is None else library.get(inst.module_name)
        if library is not None and child is None:
            bad("UnresolvedInstance", inst.name, f"module {inst.module_name} not in library")
        bound = [p for p, _ in inst.bindings]
        if child is not None and bound != [p.name for p in child.ports]:
            bad("BadBinding", inst.name, f"bindings {bound} != child ports")
        for pname, expr in inst.bindings:
            cport = None if child is None else _port(child, pname)
            if cport is not None and cport.direction == "out":
                if not isinstance(expr, Ref):
                    bad("BadBinding", f"{inst.name}.{pname}", "output binding must be a net ref")
                    continue
                drivers[expr.name] = drivers.get(expr.name, 0) + 1
                if decls.get(expr.name) not in ("net", "port"):
                    bad("BadBinding", f"{inst.name}.{pname}",
                        f"output bound to non-net {expr.name}")
                if expr.name in widths and cport.width != widths[expr.name]:
                    bad("WidthMismatch", f"{inst.name}.{pname}",
                        f"child width {cport.width} != net width {widths[expr.name]}")
            else:
                want = None if cport is None else cport.width
                check_expr(f"{inst.name}.{pname}", expr, want)

    for net in module.nets:
        n = drivers.get(net.name, 0)
        if n == 0:
            bad("Undriven", net.name, "net has no driver")
        elif n > 1:
            bad("MultipleDrivers", net.name, f"net has {n} drivers")
    for p in module.ports:
        if p.direction == "out":
            n = drivers.get(p.name, 0)
            if n == 0:
                bad("Undriven", p.name, "output port has no driver")
            elif n > 1:
                bad("MultipleDrivers", p.name, f"output port has {n} drivers")
    for r in module.regs:
        if not 0 <= r.reset < (1 << r.width):
            bad("BadReset", r.name, f"reset value {r.reset} does not fit {r.width} bits")
        check_expr(f"{r.name}.next", r.next, r.width)

    if module.latency_cycles < 1:
        bad("BadLatency", "<module>", f"latency_cycles {module.latency_cycles} < 1")

    return diags


def _port(module: RtlModule, name: str):
    for p in module.ports:
        if p.name == name:
            return p
    return None


def _check_ref_widths(e, widths, bad, item):
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Ref):
            if node.name in widths and widths[node.name] != node.width:
                bad("WidthMismatch", item,
                    f"ref {node.name} width {node.width} != declared {widths[node.name]}")
        elif isinstance(node, Slice):
            stack.append(node.base)
        elif isinstance(node, Concat):
            stack.extend(node.parts)
        elif isinstance(node, Repl):
            stack.append(node.base)
        elif isinstance(node, (Add, Sub, And, Xor)):
            stack.extend((node.a, node.b))
        elif isinstance(node, Not):
            stack.append(node.base)
        elif isinstance(node, Mux):
            stack.extend((node.cond, node.t, node.f))
        elif isinstance(node, Shl):
            stack.append(node.base)


def flatten_hierarchy(top: RtlModule, library: dict) -> list:
    """Topologically ordered module list: children before parents, duplicates
    removed, lexicographic visiting order for determinism.

    Raises UnresolvedInstance for a missing child and CyclicHierarchy when the
    instantiation graph loops.
    """
    order = []
    done = set()
    in_progress = set()

    def visit(mod: RtlModule):
        if mod.name in done:
            return
        if mod.name in in_progress:
            raise CyclicHierarchy(f"instantiation cycle through {mod.name}")
        in_progress.add(mod.name)
        for child_name in sorted({i.module_name for i in mod.instances}):
            child = library.get(child_name)
            if child is None:
                raise UnresolvedInstance(f"{mod.name} instantiates unknown {child_name}")
            visit(child)
        in_progress.discard(mod.name)
        done.add(mod.name)
        order.append(mod)

    visit(top)
    return order
