"""Straight-line programs over abstract generator slots.

A program is a list of instructions, each writing a fresh register::

    r3 = g0
    r4 = r3 * r1
    r5 = r4^-1
    r6 = r4^7
    return r6

Programs are evaluated in any backend by supplying generator images, which
is also how elements are transported along a homomorphism given by images
of generators: the same program evaluated on the domain generators yields
a preimage of its value on the images.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .blackbox import power


class SlpError(ValueError):
    """Malformed program: bad syntax, read before write, or register reuse."""


class NotFound(LookupError):
    """No kernel adjustment satisfied the predicate."""


# Instruction tuples:
#   ("gen", dst, i)        dst = g_i
#   ("mul", dst, a, b)     dst = r_a * r_b
#   ("inv", dst, a)        dst = r_a^-1
#   ("pow", dst, a, e)     dst = r_a^e
Instruction = tuple


@dataclass
class Slp:
    instructions: list[Instruction] = field(default_factory=list)
    result: int | None = None

    @property
    def arity(self) -> int:
        gens = [ins[2] for ins in self.instructions if ins[0] == "gen"]
        return max(gens) + 1 if gens else 0

    def __len__(self) -> int:
        return len(self.instructions)

    def registers(self) -> list[int]:
        return [ins[1] for ins in self.instructions]

    def validate(self) -> None:
        written: set[int] = set()
        for ins in self.instructions:
            op, dst = ins[0], ins[1]
            if op == "gen":
                if ins[2] < 0:
                    raise SlpError(f"negative generator index in {ins}")
            elif op == "mul":
                reads = (ins[2], ins[3])
            elif op in ("inv", "pow"):
                reads = (ins[2],)
            else:
                raise SlpError(f"unknown instruction {op!r}")
            if op != "gen":
                for r in reads:
                    if r not in written:
                        raise SlpError(f"register r{r} read before it is written")
            if dst in written:
                raise SlpError(f"register r{dst} written twice")
            written.add(dst)
        if self.result is None or self.result not in written:
            raise SlpError("result register is never written")

    def next_register(self) -> int:
        regs = self.registers()
        return max(regs) + 1 if regs else 0

    def shifted(self, offset: int) -> "Slp":
        """Copy with every register renumbered by ``offset``."""
        out = []
        for ins in self.instructions:
            op = ins[0]
            if op == "gen":
                out.append(("gen", ins[1] + offset, ins[2]))
            elif op == "mul":
                out.append(("mul", ins[1] + offset, ins[2] + offset, ins[3] + offset))
            elif op == "inv":
                out.append(("inv", ins[1] + offset, ins[2] + offset))
            else:
                out.append(("pow", ins[1] + offset, ins[2] + offset, ins[3]))
        return Slp(out, None if self.result is None else self.result + offset)

    def __mul__(self, other: "Slp") -> "Slp":
        return concatenate(self, other)

    def text(self) -> str:
        return format_slp(self)


def generator(i: int) -> Slp:
    return Slp([("gen", 0, i)], 0)


def identity_program() -> Slp:
    """``g0 * g0^-1``; evaluates to the identity for any nonempty generator list."""
    return Slp([("gen", 0, 0), ("inv", 1, 0), ("mul", 2, 0, 1)], 2)


def concatenate(p: Slp, q: Slp) -> Slp:
    """Program for the product of the values of ``p`` and ``q``."""
    q2 = q.shifted(p.next_register())
    dst = q2.next_register()
    return Slp(p.instructions + q2.instructions + [("mul", dst, p.result, q2.result)], dst)


def inverse(p: Slp) -> Slp:
    dst = p.next_register()
    return Slp(p.instructions + [("inv", dst, p.result)], dst)


def raised(p: Slp, e: int) -> Slp:
    dst = p.next_register()
    return Slp(p.instructions + [("pow", dst, p.result, e)], dst)


def from_word(letters: Sequence[tuple[int, int]]) -> Slp:
    """Program for a word given as ``(generator index, exponent)`` pairs."""
    if not letters:
        return identity_program()
    ins: list[Instruction] = []
    reg = 0
    acc = None
    for gi, e in letters:
        ins.append(("gen", reg, gi))
        cur = reg
        reg += 1
        if e != 1:
            ins.append(("pow", reg, cur, e))
            cur = reg
            reg += 1
        if acc is None:
            acc = cur
        else:
            ins.append(("mul", reg, acc, cur))
            acc = reg
            reg += 1
    return Slp(ins, acc)


def evaluate(p: Slp, gens: Sequence):
    """Value of ``p`` with ``g_i`` replaced by ``gens[i]``."""
    if p.arity > len(gens):
        raise SlpError(f"program needs {p.arity} generators, got {len(gens)}")
    regs: dict[int, object] = {}
    for ins in p.instructions:
        op, dst = ins[0], ins[1]
        if dst in regs:
            raise SlpError(f"register r{dst} written twice")
        try:
            if op == "gen":
                regs[dst] = gens[ins[2]]
            elif op == "mul":
                regs[dst] = regs[ins[2]] * regs[ins[3]]
            elif op == "inv":
                regs[dst] = regs[ins[2]].inverse()
            elif op == "pow":
                regs[dst] = power(regs[ins[2]], ins[3])
            else:
                raise SlpError(f"unknown instruction {op!r}")
        except KeyError as exc:
            raise SlpError(f"register r{exc.args[0]} read before it is written") from None
    if p.result not in regs:
        raise SlpError("result register is never written")
    return regs[p.result]


_LINE = re.compile(
    r"^r(\d+)\s*=\s*(?:g(\d+)|r(\d+)\s*\*\s*r(\d+)|r(\d+)\s*\^\s*(-?\d+))$"
)
_RETURN = re.compile(r"^return\s+r(\d+)$")


def parse_slp(text: str) -> Slp:
    """Parse the one-instruction-per-line text form."""
    ins: list[Instruction] = []
    result = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if result is not None:
            raise SlpError(f"line {lineno}: instruction after return")
        m = _RETURN.match(line)
        if m:
            result = int(m.group(1))
            continue
        m = _LINE.match(line)
        if not m:
            raise SlpError(f"line {lineno}: cannot parse {raw!r}")
        dst = int(m.group(1))
        if m.group(2) is not None:
            ins.append(("gen", dst, int(m.group(2))))
        elif m.group(3) is not None:
            ins.append(("mul", dst, int(m.group(3)), int(m.group(4))))
        else:
            e = int(m.group(6))
            if e == -1:
                ins.append(("inv", dst, int(m.group(5))))
            else:
                ins.append(("pow", dst, int(m.group(5)), e))
    if result is None:
        raise SlpError("missing return line")
    p = Slp(ins, result)
    p.validate()
    return p


def format_slp(p: Slp) -> str:
    lines = []
    for ins in p.instructions:
        op, dst = ins[0], ins[1]
        if op == "gen":
            lines.append(f"r{dst} = g{ins[2]}")
        elif op == "mul":
            lines.append(f"r{dst} = r{ins[2]} * r{ins[3]}")
        elif op == "inv":
            lines.append(f"r{dst} = r{ins[2]}^-1")
        else:
            lines.append(f"r{dst} = r{ins[2]}^{ins[3]}")
    lines.append(f"return r{p.result}")
    return "\n".join(lines) + "\n"


def random_slp(arity: int, length: int, rng: random.Random, max_exponent: int = 5) -> Slp:
    """A random well-formed program of ``length`` instructions (for testing)."""
    ins: list[Instruction] = [("gen", i, i) for i in range(min(arity, length))]
    reg = len(ins)
    while len(ins) < length:
        op = rng.choice(("gen", "mul", "mul", "inv", "pow"))
        if op == "gen":
            ins.append(("gen", reg, rng.randrange(arity)))
        elif op == "mul":
            ins.append(("mul", reg, rng.randrange(reg), rng.randrange(reg)))
        elif op == "inv":
            ins.append(("inv", reg, rng.randrange(reg)))
        else:
            e = rng.randint(-max_exponent, max_exponent)
            ins.append(("pow", reg, rng.randrange(reg), e))
        reg += 1
    return Slp(ins, reg - 1)


@dataclass
class HomByImages:
    """A homomorphism fixed by the images of the domain generators.

    ``kernel`` optionally lists the kernel elements (in the domain) used to
    adjust lifted preimages; it must be closed under multiplication.
    """

    generator_count: int
    images: list
    kernel: list | None = None

    def __post_init__(self):
        if len(self.images) != self.generator_count:
            raise ValueError("image list length must equal the generator count")
        if self.kernel is not None:
            ks = set(self.kernel)
            for a in self.kernel:
                for b in self.kernel:
                    if a * b not in ks:
                        raise ValueError("kernel list is not closed under multiplication")

    def image(self, p: Slp):
        return evaluate(p, self.images)


def lift_through(p: Slp, hom: HomByImages, domain_gens: Sequence):
    """A preimage of ``evaluate(p, hom.images)`` under ``hom``."""
    if len(domain_gens) != hom.generator_count:
        raise ValueError(
            f"arity mismatch: {len(domain_gens)} domain generators for {hom.generator_count} images"
        )
    return evaluate(p, domain_gens)


def adjust_by_kernel(w, kernel: Sequence, pred: Callable[[object], bool]):
    """First ``w * q`` (``q`` in listed order) satisfying ``pred``."""
    for q in kernel:
        x = w * q
        if pred(x):
            return x
    raise NotFound("no kernel coset representative satisfies the predicate")


def compose(p: Slp, programs: Sequence[Slp]) -> Slp:
    """Program for ``p`` with generator slot ``i`` replaced by ``programs[i]``.

    If ``programs`` express elements ``y_i`` over ``g`` then the result
    evaluates on ``g`` to ``evaluate(p, y)``.
    """
    if p.arity > len(programs):
        raise SlpError(f"program needs {p.arity} generators, got {len(programs)}")
    ins: list[Instruction] = []
    top = 0
    slot_reg: dict[int, int] = {}
    for i in sorted({x[2] for x in p.instructions if x[0] == "gen"}):
        q = programs[i].shifted(top)
        ins.extend(q.instructions)
        top = q.next_register()
        slot_reg[i] = q.result
    remap: dict[int, int] = {}
    for x in p.instructions:
        op = x[0]
        if op == "gen":
            remap[x[1]] = slot_reg[x[2]]
            continue
        dst = top
        top += 1
        if op == "mul":
            ins.append(("mul", dst, remap[x[2]], remap[x[3]]))
        elif op == "inv":
            ins.append(("inv", dst, remap[x[2]]))
        else:
            ins.append(("pow", dst, remap[x[2]], x[3]))
        remap[x[1]] = dst
    if p.result in remap and ins and remap[p.result] == ins[-1][1]:
        return Slp(ins, remap[p.result])
    # result is a bare generator slot (or not the last instruction): copy it out
    dst = top
    ins.append(("pow", dst, remap[p.result], 1))
    return Slp(ins, dst)


def extract(instructions: Sequence[Instruction], result: int) -> Slp:
    """The sub-program of ``instructions`` needed to compute register ``result``,
    renumbered from zero."""
    by_dst = {ins[1]: ins for ins in instructions}
    need: set[int] = set()
    stack = [result]
    while stack:
        r = stack.pop()
        if r in need:
            continue
        need.add(r)
        ins = by_dst[r]
        if ins[0] == "mul":
            stack.extend((ins[2], ins[3]))
        elif ins[0] in ("inv", "pow"):
            stack.append(ins[2])
    order = [ins[1] for ins in instructions if ins[1] in need]
    new = {r: i for i, r in enumerate(order)}
    out: list[Instruction] = []
    for r in order:
        ins = by_dst[r]
        op = ins[0]
        if op == "gen":
            out.append(("gen", new[r], ins[2]))
        elif op == "mul":
            out.append(("mul", new[r], new[ins[2]], new[ins[3]]))
        elif op == "inv":
            out.append(("inv", new[r], new[ins[2]]))
        else:
            out.append(("pow", new[r], new[ins[2]], ins[3]))
    return Slp(out, new[result])
