import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from eigloc.matcore import IntervalMatrix, RealMatrix
from eigloc.oracle import eigenvalues, sample_interval
from eigloc.regions import DiscFamily, Region, Stadium, build_families, build_interval_families
from eigloc.serialize import InputError, dumps, matrix_to_json, parse_matrix, parse_problem, parse_system, read_points
from eigloc.svg import Canvas, render_svg

from conftest import Q_COMPLEX


def test_parse_matrix_and_round_trip(diag_model):
    q = parse_matrix({"n": 2, "entries": [[-1, -2.5], [-0.5, -2]]})
    assert isinstance(q, RealMatrix)
    back = parse_matrix(json.loads(dumps(matrix_to_json(diag_model))))
    assert isinstance(back, IntervalMatrix)
    np.testing.assert_array_equal(back.offdiag_mag, diag_model.offdiag_mag)
    np.testing.assert_array_equal(back.diag_lo, diag_model.diag_lo)


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"n": 2, "entries": [[1, 2], [3]]}, r"entries\[1\]"),
        ({"n": 3, "entries": [[1, 2], [3, 4]]}, "rows"),
        ({"n": 2, "entries": [[1, "x"], [3, 4]]}, r"entries\[0\]\[1\]"),
        ({"n": 2, "entries": [[1, 2], [3, 1e400]]}, r"entries\[1\]\[1\]"),
        ({"n": 2, "entries": [[1, 2], [3, 4]], "diag_lo": [0, 1], "diag_hi": [0, 0]}, r"diag_lo\[1\]"),
        ({"n": 2, "entries": [[1, 2], [3, 4]], "offdiag_mag": [[0, -1], [0, 0]]}, r"offdiag_mag\[0\]\[1\]"),
        ({"entries": 5}, "entries"),
        ([1, 2], "object"),
    ],
)
def test_parse_matrix_diagnostics(doc, where):
    with pytest.raises(InputError, match=where):
        parse_matrix(doc)


def test_parse_problem_and_system():
    p = parse_problem({"A0": [[0, 1], [-1, 0]], "B0": [0, 1], "alpha_rate": 0.3})
    assert p.B0.shape == (2, 1) and p.alpha_rate == 0.3
    with pytest.raises(InputError):
        parse_problem({"A0": [[0, 1], [-1, 0]]})
    with pytest.raises(InputError):
        parse_problem({"A0": [[0, 1], [-1, 0]], "B0": [0, 1], "b_range": [-1, 1]})
    s = parse_system({"matrix": {"entries": [[-1, 0], [0, -1]]}})
    assert isinstance(s["matrix"], IntervalMatrix) and s["x0"].size == 2


def test_read_points():
    pts = read_points("# re,im\n-1.5,1\n\n-1.5,-1\n")
    np.testing.assert_array_equal(pts, [-1.5 + 1j, -1.5 - 1j])
    with pytest.raises(InputError, match="line 1"):
        read_points("1,2,3\n")


def _parse(svg):
    return ET.fromstring(svg.split("\n", 1)[1])


def _tags(root, name):
    return [e for e in root.iter() if e.tag.endswith(name)]


def test_svg_structure():
    region = Region(build_families(Q_COMPLEX))
    root = _parse(render_svg(region, eigenvalues(Q_COMPLEX).values))
    assert root.get("version") == "1.1"
    assert len(_tags(root, "path")) >= 1
    assert len([c for c in _tags(root, "circle") if c.get("class") == "marker"]) == 2


def test_svg_empty_region_has_axes_only():
    empty = Region([DiscFamily([Stadium.disc(0, 1)]), DiscFamily([Stadium.disc(3, 1)])])
    root = _parse(render_svg(empty))
    assert not _tags(root, "path") and len(_tags(root, "line")) == 2


def test_svg_zero_canvas():
    with pytest.raises(ValueError):
        render_svg(Region(build_families(Q_COMPLEX)), canvas=Canvas(width=0))


def test_svg_markers_inside_gray_area(diag_model):
    region = Region(build_interval_families(diag_model))
    pts = np.concatenate([eigenvalues(q).values for q in sample_interval(diag_model, 0, 200)])
    svg = render_svg(region, pts, Canvas(samples=2000))
    root = _parse(svg)
    assert len([c for c in _tags(root, "circle") if c.get("class") == "marker"]) == pts.size
    assert all(region.contains(z, 1e-9) for z in pts)
    # polygon check: each marker lies under the traced outline at its abscissa
    path = _tags(root, "path")[0].get("d")
    xy = np.array([list(map(float, p.split(","))) for p in path.replace("M ", "").replace(" Z", "").split(" L ")])
    for c in [c for c in _tags(root, "circle") if c.get("class") == "marker"]:
        cx, cy = float(c.get("cx")), float(c.get("cy"))
        ys = xy[np.abs(xy[:, 0] - cx) < 2.0][:, 1]
        assert ys.min() - 2 <= cy <= ys.max() + 2
