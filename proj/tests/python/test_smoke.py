import math

import pytest

import potcenter as pc


def test_disc_closed_form():
    disc = pc.ball(1.5)
    v = pc.evaluate(disc, {"type": "renormalized", "alpha": -1}, [0.0, 0.0])
    assert v["value"] == pytest.approx(-2 * math.pi / 1.5, rel=1e-3)
    assert v["location_class"] == "interior"


def test_body_queries():
    tri = pc.polygon([(0, 0), (4, 0), (1, 1)], cone=(math.pi / 2, 0.3))
    assert tri.dim == 2
    assert tri.volume == pytest.approx(2.0)
    assert tri.cone == pytest.approx((math.pi / 2, 0.3))
    assert tri.contains([1.5, 0.3])
    assert not tri.contains([3.0, 0.9])
    assert tri.signed_distance([1.5, 0.3]) > 0


def test_centers_on_dumbbell_are_symmetric():
    cs = pc.find_centers(pc.dumbbell(0.1), {"type": "renormalized", "alpha": -1}, resolution=0.1)
    pts = cs["points"]
    assert len(pts) >= 2
    mirrored = [[-x, y] for x, y in pts]
    assert pc.hausdorff_distance(pts, mirrored) <= cs["resolution"]


def test_halfspace_constant():
    rt = pc.r_tilde(-1.0, math.pi, math.inf, 6.0, 1.0, 2)
    assert 1 / math.pi < rt < 1
    assert rt == pytest.approx(pc.closed_form_root(6.0, 1.0, 2), abs=1e-4)


def test_errors_are_raised():
    with pytest.raises(pc.PotcenterError):
        pc.ball(-1.0)
    with pytest.raises(pc.PotcenterError):
        pc.evaluate(pc.ball(1.0), {"type": "poisson", "h": -1}, [0.0, 0.0])


def test_run_writes_outputs(tmp_path):
    result, files = pc.run({"experiment": "summability"}, tmp_path)
    assert result["all_pass"]
    assert any(f.endswith("summability.csv") for f in files)
