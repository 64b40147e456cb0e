import json

import numpy as np
import pytest

from orfq import serialize as ser
from orfq.errors import BadSpec
from orfq.extc import INF, GammaSequence
from orfq.ratfun import RationalFunction, equal


@pytest.mark.parametrize("obj, val", [({"re": 1, "im": -2}, 1 - 2j), ("inf", INF), ("0.5+1j", 0.5 + 1j),
                                      ([0.1, 0.2], 0.1 + 0.2j), (3, 3 + 0j)])
def test_complex_parsing(obj, val):
    assert ser.complex_from_json(obj) == val


@pytest.mark.parametrize("bad", ["nope", {"re": "x"}, None, True])
def test_complex_parsing_rejects(bad):
    with pytest.raises(BadSpec):
        ser.complex_from_json(bad)


def test_sequence_formats_agree():
    a = ser.sequence_from_json({"gamma0": "0", "poles": [0.3, "inf", "2j"]})
    b = ser.sequence_from_json({"alphas": [0.3, 0, 0.5j], "side": "ABB"})
    assert a == b
    assert ser.sequence_from_json(ser.sequence_to_json(a)) == a
    assert ser.sequence_from_json({"gamma0": "inf", "alphas": [0.1]}).gamma0_side == "B"


def test_sequence_errors():
    with pytest.raises(BadSpec):
        ser.sequence_from_json({"gamma0": "0"})
    with pytest.raises(BadSpec):
        ser.sequence_from_json({"alphas": [0.1], "gamma0": 0.5})
    with pytest.raises(BadSpec):
        ser.sequence_from_json([1, 2])


def test_ratfun_round_trip():
    f = RationalFunction(np.array([1, 2j, -0.5]), (0.2, INF), 2)
    g = ser.ratfun_from_json(json.loads(ser.dumps(ser.ratfun_to_json(f))))
    assert equal(f, g, 0)


def test_load_json_errors(tmp_path):
    with pytest.raises(BadSpec):
        ser.load_json(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(BadSpec):
        ser.load_json(p)


def test_dumps_numpy_and_inf():
    text = ser.dumps({"b": np.float64(1.5), "a": [np.complex128(1j), INF], "c": np.bool_(True)})
    assert json.loads(text) == {"a": [{"re": 0.0, "im": 1.0}, "inf"], "b": 1.5, "c": True}
    assert text.index('"a"') < text.index('"b"')
