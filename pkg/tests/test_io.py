import json

import numpy as np
import pytest

from stereoshape import io
from stereoshape.exceptions import InvalidInputError


def test_matrix_json_round_trip(tmp_path):
    A = np.arange(20, dtype=float).reshape(4, 5)
    path = tmp_path / "a.json"
    path.write_text(json.dumps(io.matrix_to_json_obj(A)))
    np.testing.assert_array_equal(io.load_matrix(path), A)


def test_matrix_csv(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1,2,3,4\n5,6,7,8\n9,10,11,12\n1,1,1,1\n")
    np.testing.assert_array_equal(io.load_matrix(path)[3], np.ones(4))


@pytest.mark.parametrize("obj", [
    {"rows": 4, "cols": 2, "data": [1, 2, 3]},
    {"rows": 3, "cols": 1, "data": [1, 2, 3]},
    {"rows": 4, "cols": 1, "data": [1, 2, 3, "x"]},
    {"rows": 4, "cols": 1, "data": [1, 2, 3, True]},
    {"cols": 1, "data": [1, 2, 3, 4]},
    [1, 2, 3],
])
def test_matrix_json_rejects(obj):
    with pytest.raises(InvalidInputError):
        io.matrix_from_json_obj(obj)


def test_matrix_json_rejects_non_finite(tmp_path):
    path = tmp_path / "a.json"
    path.write_text('{"rows": 4, "cols": 1, "data": [1, NaN, 3, 4]}')
    with pytest.raises(InvalidInputError):
        io.load_matrix(path)


@pytest.mark.parametrize("text", ["1,2\n3,4\n5,6\n", "1,2\n3,4\n5,6\n7\n", "1,2\n3,4\n5,inf\n7,8\n", "1,a\n3,4\n5,6\n7,8\n"])
def test_matrix_csv_rejects(text):
    with pytest.raises(InvalidInputError):
        io.matrix_from_csv_text(text)


def test_transform_json():
    g, d = io.transform_from_json_obj({"g": list(range(16)), "d": [1, 2]})
    assert g.shape == (4, 4) and g[1, 0] == 4 and d.tolist() == [1, 2]
    assert io.transform_to_json_obj(g, d) == {"g": [float(v) for v in range(16)], "d": [1.0, 2.0]}
    with pytest.raises(InvalidInputError):
        io.transform_from_json_obj({"g": [1] * 15, "d": [1]})


def test_missing_file(tmp_path):
    with pytest.raises(InvalidInputError):
        io.load_matrix(tmp_path / "nope.json")


def test_dumps_is_sorted_and_plain():
    text = io.dumps({"b": np.float64(1.5), "a": np.array([1, 2]), "c": np.bool_(True)})
    assert text == '{"a": [1, 2], "b": 1.5, "c": true}'
