import json
import os
import subprocess
import sys

import pytest

import reggecurv as rc

PAPER_F = "1/2*(x^2+y^2) - 1/12*(x^4+y^4)"

SMOKE_CONFIG = {
    "metric": {"graph": PAPER_F},
    "domain": {"origin": [0, 0], "extent": [1, 1]},
    "mesh": {"n0": 2, "levels": 2, "perturb_amplitude": 0.25, "seed": 7},
    "degrees": [0],
    "boundary": {
        "dirichlet_tags": ["right", "bottom"],
        "neumann_tags": ["left", "top"],
        "dirichlet": {"right": "auto", "bottom": "auto"},
        "neumann": {"left": "0", "top": "auto"},
    },
    "connection": {"space": "bdm", "essential_tags": "none"},
}


def test_expr_roundtrip():
    e = rc.parse(PAPER_F)
    assert abs(e(1.0, 1.0) - 5.0 / 6.0) < 1e-14
    dx = e.diff("x")
    assert abs(dx(1.0, 1.0) - 2.0 / 3.0) < 1e-14
    with pytest.raises(rc.ExprParseError):
        rc.parse("sin(x")


def test_mesh_and_metric():
    mesh = rc.structured_unit_square(2)
    assert mesh.n_vertices == 9
    assert mesh.n_edges == 16
    assert mesh.n_triangles == 8

    g = rc.AnalyticMetric.graph(PAPER_F)
    assert abs(g.gauss_curvature(0.0, 0.0) - 1.0) < 1e-12
    assert abs(g.gauss_curvature(1.0, 1.0)) < 1e-12
    assert abs(g.geodesic_curvature(0.0, 0.5, 0.0, -1.0)) < 1e-12


def test_flat_metric_lifts_to_zero_curvature():
    mesh = rc.perturb(rc.structured_unit_square(3), 0.25, 5)
    identity = rc.AnalyticMetric.entries("1", "0", "1")
    space = rc.build_space(mesh, "regge", 1)
    g = rc.regge_interpolate(identity, space, 8)
    tags = {"left", "right", "top", "bottom"}
    V = rc.build_space(mesh, "lagrange", 2, tags)
    kh = rc.lift_curvature(
        g, V, identity, dirichlet_tags=tags,
        dirichlet={t: "0" for t in tags})
    assert max(abs(c) for c in kh.coeffs) < 1e-10


def test_curvature_pipeline_accuracy():
    mesh = rc.perturb(rc.structured_unit_square(4), 0.25, 11)
    gex = rc.AnalyticMetric.graph(PAPER_F)
    space = rc.build_space(mesh, "regge", 2)
    g = rc.regge_interpolate(gex, space, 12)
    V = rc.build_space(mesh, "lagrange", 3, {"right", "bottom"})
    kexpr = "81*(1-x^2)*(1-y^2)/(9+x^2*(x^2-3)^2+y^2*(y^2-3)^2)^2"
    ktop = ("-27*(x^2-1)*y*(y^2-3)/(sqrt((x^2*(x^2-3)^2+9)^3)"
            "*sqrt(x^2*(x^2-3)^2+y^2*(y^2-3)^2+9))")
    kh = rc.lift_curvature(
        g, V, gex,
        dirichlet_tags={"right", "bottom"},
        dirichlet={"right": kexpr, "bottom": kexpr},
        neumann_tags={"left", "top"},
        neumann={"left": "0", "top": ktop})
    err = rc.l2_error_scalar(mesh, kh, lambda x, y: gex.gauss_curvature(x, y), 12)
    assert err < 5e-3


def test_run_study_deterministic():
    cfg = json.dumps(SMOKE_CONFIG)
    a = rc.run_study("curvature", cfg)
    b = rc.run_study("curvature", cfg)
    assert a.keys() == b.keys()
    for name in a:
        assert a[name] == b[name]
    header = a["curvature_k0.csv"].splitlines()[0]
    assert header == "level,n,h,ndof,hminus1,l2,hminus1_eoc,l2_eoc"


def test_config_error():
    bad = dict(SMOKE_CONFIG)
    bad["boundary"] = {"neumann_tags": ["top"], "neumann": {}}
    with pytest.raises(rc.ConfigError):
        rc.run_study("curvature", json.dumps(bad))


@pytest.mark.skipif("REGGECURV_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_end_to_end(tmp_path):
    cli = os.environ["REGGECURV_CLI"]
    config = tmp_path / "smoke.json"
    config.write_text(json.dumps(SMOKE_CONFIG))

    out1 = tmp_path / "out1"
    out2 = tmp_path / "out2"
    for out in (out1, out2):
        r = subprocess.run(
            [cli, "curvature", "--config", str(config), "--out", str(out)],
            capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
    csv1 = (out1 / "curvature_k0.csv").read_bytes()
    csv2 = (out2 / "curvature_k0.csv").read_bytes()
    assert csv1 == csv2

    bad = tmp_path / "bad.json"
    bad.write_text("{")
    r = subprocess.run(
        [cli, "curvature", "--config", str(bad), "--out", str(tmp_path / "o")],
        capture_output=True, text=True)
    assert r.returncode == 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
