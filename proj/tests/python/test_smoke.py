"""Smoke tests for the python bindings (the heavy lifting is covered by the
C++ unit and acceptance suites)."""

import json

import pytest

import bonnetlab


def test_lorentz_basics():
    assert bonnetlab.inner((1, 0, 0), (1, 0, 0)) == -1.0
    assert bonnetlab.inner((0, 1, 0), (0, 1, 0)) == 1.0
    assert bonnetlab.causal_character((2, 0, 0)) == "timelike"
    assert bonnetlab.causal_character((1, 1, 0)) == "null"
    # the fixed vector-product convention
    assert bonnetlab.cross((1, 0, 0), (0, 1, 0)) == [0.0, 0.0, 1.0]


def test_orthonormalize():
    e1, e2, e3 = bonnetlab.lorentz_orthonormalize((1, 0, 0), (0, 1, 1e-3), (0, 0, 1))
    assert abs(bonnetlab.inner(e1, e1) + 1.0) < 1e-12
    assert abs(bonnetlab.inner(e2, e3)) < 1e-12


def test_parse_and_eval():
    printed = bonnetlab.parse_immersion("(t, r*cos(s), r*sin(s))")
    assert "cos(s)" in printed
    jet = bonnetlab.eval_jet("(t, cos(s), sin(s))", {}, 0.0, 0.0)
    assert jet["x"] == [0.0, 1.0, 0.0]
    assert jet["xs"] == [0.0, 0.0, 1.0]
    assert jet["xss"] == [0.0, -1.0, 0.0]
    with pytest.raises(ValueError):
        bonnetlab.parse_immersion("(t, cos(s)")


def test_check_cylinder():
    config = json.dumps({"surface": "cylinder", "resolution": [33, 33]})
    report = json.loads(bonnetlab.check(config))
    assert report["bonnet"]["classification"] == "CMCFlatNormalBonnet"
    inv = report["invariants"]
    assert abs(abs(inv["H"]["max"]) - 0.5) < 1e-10
    assert inv["K"]["maxAbs"] < 1e-10


def test_deform_cylinder(tmp_path):
    config = json.dumps(
        {
            "surface": "cylinder",
            "resolution": [33, 33],
            "deformations": [{"phi0": 0.5}],
        }
    )
    report = json.loads(bonnetlab.deform(config, str(tmp_path)))
    entry = report["deformations"][0]
    assert entry["metricErr"] < 5e-3  # 33x33 smoke resolution
    assert entry["curvErr"] < 2e-2
    assert (tmp_path / "report.json").exists()

    # The deformed unit cylinder is congruent to a cylinder whose timelike
    # axis is the (constant) deformed frame vector e1-bar at the seed and
    # which passes through the origin. Every OBJ vertex must sit at
    # Lorentzian distance 1 from that axis.
    import math

    obj = (tmp_path / "deform_0.obj").read_text().splitlines()
    verts = [tuple(map(float, l.split()[1:])) for l in obj if l.startswith("v ")]
    faces = [l for l in obj if l.startswith("f ")]
    assert len(verts) == 33 * 33
    assert len(faces) == 32 * 32

    # seed frame at the center node (s = pi, t = 0): e1 = (1,0,0),
    # e2 = (0,0,1), so e1-bar = cosh(.5) e1 - sinh(.5) e2
    axis = (math.cosh(0.5), 0.0, -math.sinh(0.5))
    worst = 0.0
    for p in verts:
        along = bonnetlab.inner(p, axis)  # <axis,axis> = -1
        q = tuple(pc + along * ac for pc, ac in zip(p, axis))
        worst = max(worst, abs(bonnetlab.inner(q, q) - 1.0))
    assert worst < 5e-3


def test_geometry_errors_surface():
    config = json.dumps({"surface": "plane"})
    with pytest.raises(RuntimeError, match="Umbilic"):
        bonnetlab.analyze(config)
