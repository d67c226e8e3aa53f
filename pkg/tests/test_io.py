import io
import json
import math

import numpy as np
import pytest

from uurel.errors import InvariantError, ParseError
from uurel.io import (
    ensemble_to_document,
    evaluate_expression,
    example1_text,
    format_float,
    load_ensemble,
    loads_ensemble,
    read_csv,
    write_csv,
)
from uurel.multi import MeasurementEnsemble, example1_ensemble
from uurel.quantum import Povm, computational_basis, haar_random_basis


class TestExpressions:
    @pytest.mark.parametrize("text,value", [
        ("1/sqrt(2)", 1 / math.sqrt(2)),
        ("-2/sqrt(6)", -2 / math.sqrt(6)),
        ("2**-0.5", 2**-0.5),
        ("cos(pi/3)", 0.5),
        ("+3 - 1.5", 1.5),
    ])
    def test_whitelist(self, text, value):
        assert evaluate_expression(text) == pytest.approx(value, abs=1e-15)

    @pytest.mark.parametrize("text", ["__import__('os')", "x", "sqrt(1, 2)", "1/0", "abs(-1)", "(1).real", "True"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            evaluate_expression(text)


class TestParsing:
    def test_example1_fixture_is_exact(self):
        ens = loads_ensemble(example1_text())
        for got, want in zip(ens.measurements, example1_ensemble().measurements):
            np.testing.assert_array_equal(got.vectors, want.vectors)

    def test_complex_pairs(self):
        doc = {"dim": 2, "measurements": [
            {"kind": "basis", "vectors": [[1, 0], [0, 1]]},
            {"kind": "basis", "vectors": [["1/sqrt(2)", [0, "1/sqrt(2)"]], ["1/sqrt(2)", ["0", "-1/sqrt(2)"]]]},
        ]}
        ens = loads_ensemble(json.dumps(doc))
        assert ens.measurements[1].vectors[1, 1] == pytest.approx(-1j / math.sqrt(2))

    def test_povm(self):
        doc = {"dim": 2, "measurements": [
            {"kind": "basis", "vectors": [[1, 0], [0, 1]]},
            {"kind": "povm", "elements": [[[0.5, 0], [0, 0]], [[0.5, 0], [0, 1]]]},
        ]}
        ens = loads_ensemble(json.dumps(doc))
        assert isinstance(ens.measurements[1], Povm)

    def test_json_error_reports_position(self):
        with pytest.raises(ParseError, match="line 2"):
            loads_ensemble('{"dim": 2,\n "measurements": [}')

    @pytest.mark.parametrize("doc,where", [
        ({"dim": 0, "measurements": []}, "dim"),
        ({"dim": 2, "measurements": [{"kind": "basis", "vectors": [[1, 0], [0, 1]]}]}, "measurements"),
        ({"dim": 2, "measurements": [{"kind": "basis", "vectors": [[1, 0], [0, 1]]},
                                     {"kind": "spin", "vectors": []}]}, "measurements[1].kind"),
        ({"dim": 2, "measurements": [{"kind": "basis", "vectors": [[1, 0], [0, 1]]},
                                     {"kind": "basis", "vectors": [[1, 0], [0, "oops"]]}]},
         "measurements[1].vectors[1][1]"),
        ({"dim": 2, "measurements": [{"kind": "basis", "vectors": [[1, 0], [0, 1]]},
                                     {"kind": "basis", "vectors": [[1, 0]]}]}, "measurements[1].vectors"),
    ])
    def test_field_errors(self, doc, where):
        with pytest.raises(ParseError) as err:
            loads_ensemble(json.dumps(doc))
        assert where in str(err.value)

    def test_invariant_violation_keeps_location(self):
        doc = {"dim": 2, "measurements": [
            {"kind": "basis", "vectors": [[1, 0], [0, 1]]},
            {"kind": "basis", "vectors": [[1, 0], [1, 0]]},
        ]}
        with pytest.raises(InvariantError, match=r"measurements\[1\]"):
            loads_ensemble(json.dumps(doc))

    def test_file_errors_name_the_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{")
        with pytest.raises(ParseError, match="bad.json"):
            load_ensemble(p)


class TestRoundTrip:
    def test_ensemble_document(self):
        rng = np.random.default_rng(0)
        ens = MeasurementEnsemble((haar_random_basis(3, rng), computational_basis(3).as_povm()))
        back = loads_ensemble(json.dumps(ensemble_to_document(ens)))
        np.testing.assert_array_equal(back.measurements[0].vectors, ens.measurements[0].vectors)
        np.testing.assert_array_equal(back.measurements[1].elements, ens.measurements[1].elements)

    @pytest.mark.parametrize("x", [0.7285533905932737, 1 / 3, 1e-300, 0.1 + 0.2, math.pi])
    def test_float_format_is_lossless(self, x):
        assert float(format_float(x)) == x

    def test_csv(self, tmp_path):
        rows = [(0, 1 / 3, "a"), (1, 2 / 3, "b")]
        p = tmp_path / "t.csv"
        write_csv(p, ("i", "x", "s"), rows)
        header, back = read_csv(p)
        assert header == ["i", "x", "s"]
        assert [float(r[1]) for r in back] == [1 / 3, 2 / 3]

    def test_csv_to_stream(self):
        buf = io.StringIO()
        write_csv(buf, ("x",), [(0.5,)])
        assert buf.getvalue() == "x\n0.5\n"
