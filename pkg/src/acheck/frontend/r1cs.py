"""Binary ``.r1cs`` files (iden3 layout) and their lowering to polynomials.

Layout::

    "r1cs" u32:version u32:n_sections
    repeat: u32:type u64:size payload
      type 1  header       u32 n8, prime[n8], u32 wires, u32 pub_out, u32 pub_in,
                           u32 prv_in, u64 labels, u32 constraints
      type 2  constraints  3 x (u32 nnz, nnz x (u32 wire, coeff[n8])) per row
      type 3  wire->label  wires x u64

All integers are little-endian.  Rows mean ``A*B - C = 0``.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field

from ..circuit import ConstraintSystem, WireLayout, partition_variables
from ..errors import FormatError
from ..field import Prime
from ..poly import Polynomial
from .sym import SymTable

log = logging.getLogger(__name__)

MAGIC = b"r1cs"
VERSION = 1
HEADER, CONSTRAINTS, WIRE2LABEL = 1, 2, 3

LinearCombination = list  # list[tuple[int, int]] of (wire id, coefficient)


@dataclass
class R1csFile:
    field_size: int
    prime: int
    n_wires: int
    n_pub_out: int
    n_pub_in: int
    n_prv_in: int
    n_labels: int
    constraints: list = field(default_factory=list)  # list[(A, B, C)]
    wire_to_label: list = field(default_factory=list)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)


class _Reader:
    def __init__(self, data: bytes, start: int = 0, end: int | None = None):
        self.data = data
        self.pos = start
        self.end = len(data) if end is None else end

    def take(self, n: int) -> bytes:
        if self.pos + n > self.end:
            raise FormatError(f"truncated data: wanted {n} bytes", offset=self.pos)
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]


def parse_r1cs(data: bytes) -> R1csFile:
    r = _Reader(data)
    if len(data) < 4 or r.take(4) != MAGIC:
        raise FormatError("bad magic, expected 'r1cs'", offset=0)
    version = r.u32()
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    n_sections = r.u32()
    sections: dict[int, tuple[int, int]] = {}
    for _ in range(n_sections):
        at = r.pos
        typ = r.u32()
        size = r.u64()
        start = r.pos
        r.take(size)
        if typ in sections:
            raise FormatError(f"duplicate section type {typ}", offset=at)
        if typ in (HEADER, CONSTRAINTS, WIRE2LABEL):
            sections[typ] = (start, start + size)
        else:
            log.debug("skipping unknown section type %d (%d bytes)", typ, size)
    if HEADER not in sections:
        raise FormatError("missing header section", offset=r.pos)

    h = _Reader(data, *sections[HEADER])
    n8 = h.u32()
    if n8 == 0:
        raise FormatError("field size of zero bytes", offset=h.pos - 4)
    prime = int.from_bytes(h.take(n8), "little")
    n_wires, n_pub_out, n_pub_in, n_prv_in = (h.u32() for _ in range(4))
    n_labels = h.u64()
    n_constraints = h.u32()
    try:
        Prime(prime)
    except ValueError as e:
        raise FormatError(str(e), offset=sections[HEADER][0] + 4) from None

    f = R1csFile(n8, prime, n_wires, n_pub_out, n_pub_in, n_prv_in, n_labels)
    if CONSTRAINTS in sections:
        c = _Reader(data, *sections[CONSTRAINTS])
        for _ in range(n_constraints):
            row = []
            for _ in range(3):
                nnz = c.u32()
                lc = []
                for _ in range(nnz):
                    at = c.pos
                    wire = c.u32()
                    if wire >= n_wires:
                        raise FormatError(f"wire id {wire} >= {n_wires}", offset=at)
                    lc.append((wire, int.from_bytes(c.take(n8), "little") % prime))
                row.append(lc)
            f.constraints.append(tuple(row))
        if c.pos != c.end:
            raise FormatError("constraint section has trailing bytes", offset=c.pos)
    elif n_constraints:
        raise FormatError(f"header declares {n_constraints} constraints but no constraint section")
    if WIRE2LABEL in sections:
        w = _Reader(data, *sections[WIRE2LABEL])
        f.wire_to_label = [w.u64() for _ in range(n_wires)]
    return f


def write_r1cs(f: R1csFile) -> bytes:
    n8 = f.field_size
    header = b"".join(
        [
            struct.pack("<I", n8),
            f.prime.to_bytes(n8, "little"),
            struct.pack("<IIIIQI", f.n_wires, f.n_pub_out, f.n_pub_in, f.n_prv_in,
                        f.n_labels, len(f.constraints)),
        ]
    )
    body = bytearray()
    for row in f.constraints:
        for lc in row:
            body += struct.pack("<I", len(lc))
            for wire, coeff in lc:
                body += struct.pack("<I", wire) + coeff.to_bytes(n8, "little")
    sections = [(HEADER, header), (CONSTRAINTS, bytes(body))]
    if f.wire_to_label:
        sections.append((WIRE2LABEL, b"".join(struct.pack("<Q", x) for x in f.wire_to_label)))
    out = bytearray(MAGIC + struct.pack("<II", VERSION, len(sections)))
    for typ, payload in sections:
        out += struct.pack("<IQ", typ, len(payload)) + payload
    return bytes(out)


def lower_r1cs(
    r: R1csFile,
    sym: SymTable | None = None,
    output_names=None,
    c_sign: str = "neg",
    name: str = "",
) -> ConstraintSystem:
    """Expand every row into one polynomial ``A*B + C' = 0``.

    With ``c_sign="neg"`` (the compiler convention ``A*B - C = 0``) the C
    coefficients are negated; ``"pos"`` takes them as written.
    """
    if c_sign not in ("neg", "pos"):
        raise ValueError(f"c_sign must be 'neg' or 'pos', not {c_sign!r}")
    prime = Prime(r.prime)
    p = r.prime
    names = sym.wire_names() if sym is not None else {}
    used = {w for row in r.constraints for lc in row for w, _ in lc}
    layout = WireLayout(r.n_wires, r.n_pub_out, r.n_pub_in, r.n_prv_in, names, output_names)
    known, temp, output = partition_variables(layout, used)
    by_wire = {v.index: v for v in known + temp + output}
    unnamed = sorted(w for w in used if w and w not in names)
    if sym is not None and unnamed:
        log.warning("%d referenced wires have no symbol, treated as temporaries: %s",
                    len(unnamed), unnamed[:10])
    if c_sign == "neg":
        log.info("negating C coefficients (A*B - C = 0 file convention)")

    def lc_poly(lc) -> Polynomial:
        terms: dict = {}
        for wire, coeff in lc:
            m = () if wire == 0 else ((by_wire[wire], 1),)
            terms[m] = (terms.get(m, 0) + coeff) % p
        return Polynomial(p, terms)

    rows = []
    for a, b, c in r.constraints:
        cp = lc_poly(c)
        f = lc_poly(a) * lc_poly(b) + (-cp if c_sign == "neg" else cp)
        if not f.is_zero():
            rows.append(f)
    return ConstraintSystem(prime, tuple(by_wire.values()), tuple(rows), name)
