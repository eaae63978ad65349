import pytest

import okamoto


def test_unique_slice():
    cert = okamoto.slice("5/3", "3/8")
    assert cert["claim"]["type"] == "ExactlyN"
    assert cert["claim"]["n"] == 1
    assert cert["certified"]
    assert okamoto.check(cert)["valid"]


def test_odd_cardinality():
    cert = okamoto.bonacci_verify(k=3, m=2)
    assert cert["alive_paths"] == 5


def test_box_dimension():
    cert = okamoto.dimension("3/2", "1/2", method="box")
    lo, hi = (float(v) for v in cert["box_estimate"])
    assert 0.3 < lo <= hi < 0.6


def test_errors_carry_kind():
    with pytest.raises(okamoto.OkamotoError) as info:
        okamoto.slice("2", "1/2")
    assert info.value.args[0] == "InputError"
    assert okamoto.exit_code(info.value.args[0]) == 1
    assert okamoto.exit_code("NotFound") == 2


def test_render():
    svg = okamoto.render_svg("5/3", iterations=1, ys=["3/8"])
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "0.000,600.000 200.000,240.000 400.000,360.000 600.000,0.000" in svg
