import glob
import os

import pytest

from conftest import GOLDEN, make_sys1, make_sys1_circuit
from wnash import formats
from wnash.errors import ForwardRef, MissingTransitionRow, ParseError, ValidationError
from wnash.model import unfold
from wnash.realizability import realize

GOLDENS = sorted(glob.glob(os.path.join(GOLDEN, "*.*")))


@pytest.mark.parametrize("path", GOLDENS, ids=os.path.basename)
def test_golden_round_trip(path):
    text = open(path, encoding="utf-8").read()
    obj = formats.parse_any(text)
    assert formats.serialize_any(obj) == text


def test_sys1_document():
    text = formats.serialize_emas(make_sys1())
    assert sum(line.startswith("trans:") for line in text.splitlines()) == 12
    assert formats.parse_emas(text) == make_sys1()


def test_missing_trans_line():
    text = formats.serialize_emas(make_sys1()).replace("trans: s0 a x -> s1\n", "")
    with pytest.raises(ValidationError) as exc:
        formats.parse_emas(text)
    assert any(isinstance(p, MissingTransitionRow) for p in exc.value.problems)


def test_bad_header():
    with pytest.raises(ParseError):
        formats.parse_emas("emas v2\n")
    with pytest.raises(ParseError):
        formats.detect_kind("")


def test_parse_error_line_number():
    text = formats.serialize_emas(make_sys1()).replace("trans: s0 a y -> s0", "trans: s0 a -> s0")
    with pytest.raises(ParseError) as exc:
        formats.parse_emas(text)
    assert exc.value.line == 10


def test_identity_cmas_unfolds_to_two_states():
    text = "\n".join([
        "cmas v1", "state_vars: 1", "init: 0", "agents: 1", "action_vars 0: 1",
        "circuit phi", "inputs: 2", "outputs: i0", "end",
        "circuit goal0", "inputs: 1", "g0 = CONST0", "outputs: g0", "end", "",
    ])
    csys = formats.parse_cmas(text)
    assert formats.serialize_cmas(csys) == text
    assert len(unfold(csys).states) == 2


def test_forward_ref_netlist():
    text = "circuit c\ninputs: 1\ng0 = AND g1 i0\ng1 = NOT i0\noutputs: g0\nend\n"
    with pytest.raises(ValidationError) as exc:
        formats.parse_netlist(text)
    assert any(isinstance(p, ForwardRef) for p in exc.value.problems)


def test_bad_gate_line():
    with pytest.raises(ParseError):
        formats.parse_netlist("circuit c\ninputs: 1\ng0 = XOR i0 i0\noutputs: g0\nend\n")


def test_circuit_file_matches_explicit():
    csys = formats.parse_cmas(open(os.path.join(GOLDEN, "sys1.cmas")).read())
    esys = formats.parse_emas(open(os.path.join(GOLDEN, "sys1.emas")).read())
    for W in ({0}, {1}, {0, 1}, set()):
        assert realize(csys, W).answer == realize(esys, W).answer


def test_verdict_document_fields():
    doc = formats.realize_verdict_doc(realize(make_sys1(), {1}))
    assert doc.get("answer") == "YES" and doc.get("prefix") == "b,y"
    assert doc.get("receipt 0") == "s0|b,y s2|a,x"
    assert formats.parse_document(formats.serialize_document(doc)) == doc
