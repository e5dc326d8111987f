from __future__ import annotations

import itertools
import random
import struct
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acheck.errors import FormatError
from acheck.field import BN254
from acheck.frontend import (
    R1csFile,
    SymRow,
    SymTable,
    format_polyir,
    format_sym,
    lower_r1cs,
    parse_polyir,
    parse_r1cs,
    parse_sym,
    write_r1cs,
)
from acheck.poly import Kind

FIXTURES = Path(__file__).parent / "fixtures"


def random_r1cs(rng: random.Random, prime: int | None = None) -> R1csFile:
    prime = prime or rng.choice([7, 13, 65537, BN254])
    n8 = (prime.bit_length() + 63) // 64 * 8
    n_wires = rng.randint(1, 12)
    n_pub_out = rng.randint(0, max(0, (n_wires - 1) // 2))
    n_pub_in = rng.randint(0, n_wires - 1 - n_pub_out)
    n_prv_in = rng.randint(0, n_wires - 1 - n_pub_out - n_pub_in)

    def lc():
        return [(rng.randrange(n_wires), rng.randrange(prime)) for _ in range(rng.randint(0, 3))]

    rows = [(lc(), lc(), lc()) for _ in range(rng.randint(0, 6))]
    labels = [rng.randrange(2**40) for _ in range(n_wires)] if rng.random() < 0.7 else []
    return R1csFile(n8, prime, n_wires, n_pub_out, n_pub_in, n_prv_in, rng.randrange(100), rows, labels)


# ------------------------------------------------------------------- r1cs


@settings(max_examples=100)
@given(st.integers(0, 2**32))
def test_r1cs_round_trip_is_byte_exact(seed):
    f = random_r1cs(random.Random(seed))
    data = write_r1cs(f)
    g = parse_r1cs(data)
    assert g == f
    assert write_r1cs(g) == data


def test_minimal_hand_built_file():
    n8 = 32
    header = struct.pack("<I", n8) + BN254.to_bytes(n8, "little") + struct.pack("<IIIIQI", 3, 1, 1, 0, 3, 1)
    lc = lambda w: struct.pack("<I", 1) + struct.pack("<I", w) + (1).to_bytes(n8, "little")  # noqa: E731
    body = lc(1) + lc(2) + struct.pack("<I", 0)
    data = b"r1cs" + struct.pack("<II", 1, 2)
    data += struct.pack("<IQ", 1, len(header)) + header
    data += struct.pack("<IQ", 2, len(body)) + body
    assert data[:4] == bytes([0x72, 0x31, 0x63, 0x73])
    f = parse_r1cs(data)
    assert f.n_constraints == 1
    assert f.constraints[0] == ([(1, 1)], [(2, 1)], [])
    assert write_r1cs(f) == data


def test_zero_constraints():
    f = R1csFile(8, 7, 2, 1, 0, 0, 2)
    assert parse_r1cs(write_r1cs(f)).constraints == []


def test_unknown_sections_are_skipped():
    f = random_r1cs(random.Random(5))
    data = bytearray(write_r1cs(f))
    n = struct.unpack_from("<I", data, 8)[0]
    struct.pack_into("<I", data, 8, n + 1)
    data += struct.pack("<IQ", 99, 3) + b"xyz"
    assert parse_r1cs(bytes(data)) == f


@pytest.mark.parametrize(
    "mutate, offset",
    [
        (lambda d: b"", 0),
        (lambda d: b"R1CS" + d[4:], 0),
        (lambda d: d[:4] + struct.pack("<I", 2) + d[8:], 4),
        (lambda d: d[:-3], None),
    ],
    ids=["empty", "magic", "version", "truncated"],
)
def test_r1cs_errors_carry_offsets(mutate, offset):
    data = write_r1cs(random_r1cs(random.Random(2), prime=7))
    with pytest.raises(FormatError) as e:
        parse_r1cs(mutate(data))
    assert e.value.offset is not None
    if offset is not None:
        assert e.value.offset == offset


def test_duplicate_header_section():
    f = R1csFile(8, 7, 2, 1, 0, 0, 2)
    data = bytearray(write_r1cs(f))
    hsize = struct.unpack_from("<Q", data, 16)[0]
    section = bytes(data[12 : 24 + hsize])
    struct.pack_into("<I", data, 8, struct.unpack_from("<I", data, 8)[0] + 1)
    data += section
    with pytest.raises(FormatError, match="duplicate"):
        parse_r1cs(bytes(data))


def test_wire_out_of_range():
    f = R1csFile(8, 7, 2, 1, 0, 0, 2, [([(5, 1)], [], [])])
    with pytest.raises(FormatError, match="wire id 5"):
        parse_r1cs(write_r1cs(f))


def test_non_prime_modulus():
    f = R1csFile(8, 9, 2, 1, 0, 0, 2)
    with pytest.raises(FormatError, match="not prime"):
        parse_r1cs(write_r1cs(f))


# -------------------------------------------------------------------- sym


def test_sym_rows():
    t = parse_sym("1,1,0,main.inp\n\n2,-1,0,main.gone\n")
    assert t.rows[0] == SymRow(1, 1, 0, "main.inp")
    assert t.wire_names() == {1: "main.inp"}
    assert parse_sym(format_sym(t)) == t


def test_sym_empty_and_errors():
    assert len(parse_sym("")) == 0
    with pytest.raises(FormatError) as e:
        parse_sym("1,1,0,a\nx,y")
    assert e.value.line == 2
    with pytest.raises(FormatError):
        parse_sym("1,a,0,main.x")
    with pytest.raises(FormatError, match="duplicate"):
        parse_sym("1,1,0,a\n2,2,0,a")


# --------------------------------------------------------------- lowering


def test_lower_decoder_fixture_matches_polyir():
    r = parse_r1cs((FIXTURES / "decoder.r1cs").read_bytes())
    sym = parse_sym((FIXTURES / "decoder.sym").read_text())
    lowered = lower_r1cs(r, sym)
    poly = parse_polyir((FIXTURES / "decoder.polyir").read_text())
    assert [v.name for v in lowered.output] == ["main.out0", "main.out1", "main.success"]
    assert [v.name for v in lowered.known] == ["main.inp"]

    def shape(sys):
        rename = {v.index: v.name.removeprefix("main.") for v in sys.variables}
        return sorted(
            sorted((tuple(sorted((rename[v.index], e) for v, e in m)), c) for m, c in f.terms.items())
            for f in sys.constraints
        )

    assert shape(lowered) == shape(poly)


def test_lower_empty_a_is_linear():
    r = R1csFile(8, 7, 3, 1, 1, 0, 3, [([], [(2, 1)], [(1, 1), (0, 3)])])
    sys = lower_r1cs(r)
    (f,) = sys.constraints
    assert f.total_degree() == 1


def test_lower_constant_row_is_vacuous_with_positive_c():
    # 2*3 + 1 = 7 = 0 mod 7 when C is added
    r = R1csFile(8, 7, 1, 0, 0, 0, 1, [([(0, 2)], [(0, 3)], [(0, 1)])])
    assert lower_r1cs(r, c_sign="pos").constraints == ()
    # with the compiler's A*B - C convention the row reads 6 - 1 = 5 != 0
    (f,) = lower_r1cs(r).constraints
    assert f.constant == 5


def test_lower_warns_about_unnamed_wires(caplog):
    r = R1csFile(8, 7, 3, 1, 0, 0, 3, [([(1, 1)], [(2, 1)], [])])
    sys = lower_r1cs(r, SymTable([SymRow(1, 1, 0, "main.o")]))
    assert "no symbol" in caplog.text
    assert sys.by_name("w2").kind is Kind.TEMP


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([5, 7, 11, 13]), st.sampled_from(["neg", "pos"]))
def test_lowering_preserves_satisfiability(seed, p, c_sign):
    rng = random.Random(seed)
    n_wires = rng.randint(2, 4)  # wire 0 plus at most three signals
    f = random_r1cs(rng, prime=p)
    f.n_wires, f.n_pub_out, f.n_pub_in, f.n_prv_in = n_wires, 1, min(1, n_wires - 2), 0
    f.constraints = [
        tuple([(rng.randrange(n_wires), rng.randrange(p)) for _ in range(rng.randint(0, 2))] for _ in range(3))
        for _ in range(rng.randint(1, 3))
    ]
    f.wire_to_label = []
    sys = lower_r1cs(f, c_sign=c_sign)
    by_wire = {v.index: v for v in sys.variables}
    sign = -1 if c_sign == "neg" else 1

    def dot(lc, w):
        return sum(c * w[i] for i, c in lc)

    for xs in itertools.product(range(p), repeat=n_wires - 1):
        w = (1,) + xs
        raw = all((dot(a, w) * dot(b, w) + sign * dot(c, w)) % p == 0 for a, b, c in f.constraints)
        pt = {v: w[i] for i, v in by_wire.items()}
        assert raw == sys.is_satisfied(pt)


# ----------------------------------------------------------------- polyir


def test_polyir_basic():
    sys = parse_polyir("prime 7; input x; output y; eq y - x*x;")
    assert len(sys.constraints) == 1
    assert [v.name for v in sys.known] == ["x"]
    assert [v.name for v in sys.output] == ["y"]


def test_polyir_cube_is_reduced():
    sys = parse_polyir("prime 7; output y; temp x; eq y - x^3;")
    assert len(sys.constraints) == 2
    assert len(sys.aux) == 1


def test_polyir_default_prime_comments_and_equations():
    sys = parse_polyir("# header\ninput k; output o;\neq o*k = k + 1;  # trailing\n")
    assert sys.p == BN254
    assert sys.constraints[0].evaluate({sys.by_name("k"): 1, sys.by_name("o"): 2}) == 0


def test_polyir_signal_paths_as_names():
    sys = parse_polyir("prime 11; input main.a[0]; output main.b; eq main.b - 2*main.a[0];")
    assert sys.by_name("main.a[0]").is_known


@pytest.mark.parametrize(
    "text, message",
    [
        ("prime 9;", "not prime"),
        ("input x; input x;", "duplicate"),
        ("output y; eq y - z;", "undeclared"),
        ("output y; eq y^0;", "exponent"),
        ("output y; eq y^-1;", "exponent"),
        ("output y; eq (y;", "expected"),
        ("output y; eq y @ 1;", "unexpected character"),
        ("output y; prime 7;", "prime"),
    ],
)
def test_polyir_errors(text, message):
    with pytest.raises(FormatError, match=message):
        parse_polyir(text)


def test_polyir_error_line_numbers():
    with pytest.raises(FormatError) as e:
        parse_polyir("prime 7;\noutput y;\n\neq y - q;\n")
    assert e.value.line == 4


def product_doc(n: int) -> str:
    names = [f"t{i}" for i in range(n)]
    return "prime 7; output y;" + "".join(f"temp {x};" for x in names) + f"eq y - {'*'.join(names)};"


def test_polyir_degree_overflow():
    # each round splits off one pair, so n distinct factors need n - 2 rounds
    assert len(parse_polyir(product_doc(66)).aux) == 64
    with pytest.raises(FormatError, match="did not converge"):
        parse_polyir(product_doc(67))


def test_polyir_prime_override():
    sys = parse_polyir((FIXTURES / "decoder.polyir").read_text(), prime=5)
    assert sys.p == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([5, 7, 11, 13, BN254]))
def test_polyir_print_parse_round_trip(seed, p):
    from acheck.circuit import CircuitClass

    from helpers import random_system

    rng = random.Random(seed)
    sys = random_system(rng, rng.choice(list(CircuitClass)), p)
    text = format_polyir(sys)
    back = parse_polyir(text)
    assert back == sys
    assert [(v.name, v.kind) for v in back.variables] == [(v.name, v.kind) for v in sys.variables]
    assert format_polyir(back) == text
    # whitespace is insignificant
    assert parse_polyir(text.replace(" ", "  ").replace("\n", "\n\n")) == sys
