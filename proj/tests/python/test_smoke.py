"""End-to-end smoke tests for the serrinlab python bindings."""

import math

import pytest

import serrinlab as sl


def test_torsion_ball_radial():
    sf = sl.SpaceForm(2, 0.0)
    dom = sl.RadialDomain.ball(1.0)
    sol = sl.solve_radial(sf, dom, sl.Nonlinearity([2.0]), 0.0, 128)
    # u = (1 - r^2)/2
    assert sol.u_max() == pytest.approx(0.5, abs=1e-10)
    assert sol.value_at(0.6) == pytest.approx((1.0 - 0.36) / 2.0, abs=1e-10)
    assert sol.deriv_at(0.6) == pytest.approx(-0.6, abs=1e-10)
    assert len(sol.boundary) == 1
    assert sol.boundary[0].u_nu == pytest.approx(-1.0, abs=1e-10)
    assert sol.boundary[0].H == pytest.approx(1.0)
    assert sol.boundary[0].area == pytest.approx(2.0 * math.pi)


def test_closed_form_spherical_annulus_constants():
    sf = sl.SpaceForm(2, 1.0)
    cf = sl.closed_form_linear(sf, sl.RadialDomain.annulus(0.5, 1.2))
    assert cf.a == pytest.approx(1.4218677565153808, rel=1e-12)
    assert cf.c0 == pytest.approx(-2.5721516221263183, rel=1e-12)
    assert cf.c1 == pytest.approx(1.3230723854567474, rel=1e-12)
    assert cf.a + 1.0 == pytest.approx(math.cos(0.5) / math.cos(1.2))
    assert cf.c0 == pytest.approx(-math.tan(1.2))


def test_run_checks_all_pass_on_radial_ball():
    sf = sl.SpaceForm(3, 0.0)
    dom = sl.RadialDomain.ball(1.0)
    f = sl.Nonlinearity.linear_family(sf)
    sol = sl.solve_radial(sf, dom, f, 0.0, 256)
    prob = sl.SolvedProblem.from_radial(sol)
    reports = sl.run_checks(prob, ["all"])
    names = [r.name for r in reports]
    assert names == [
        "divergence_closure",
        "heintze_karcher",
        "soap_bubble",
        "reilly_residual",
        "p_function",
        "shear_stress",
    ]
    assert all(r.verdict == sl.Verdict.PASS for r in reports)
    shear = next(r for r in reports if r.name == "shear_stress")
    # tau = 2/n with rigidity flagged on the exact ball solution
    assert shear.lhs == pytest.approx(2.0 / 3.0, abs=1e-8)
    assert shear.values["rigidity_flag"] == 1.0


def test_rigidity_gate():
    sf = sl.SpaceForm(3, 0.0)
    f = sl.Nonlinearity.linear_family(sf)
    # lhs = (n-1) f(0) h(R) / (n h'(R)) = 2*3*1/3 = 2
    gate = sl.rigidity_gate(sf, 1.0, f, 2.5)
    assert gate.holds and gate.lhs == pytest.approx(2.0)
    assert not sl.rigidity_gate(sf, 1.0, f, 1.5).holds


def test_p_function_constant_on_torsion_disk():
    sf = sl.SpaceForm(2, 0.0)
    sol = sl.solve_radial(sf, sl.RadialDomain.ball(1.0), sl.Nonlinearity([2.0]),
                          0.0, 128)
    res = sl.p_function(sl.SolvedProblem.from_radial(sol))
    # P = |grad u|^2 + (2/n) F(u) = r^2 + (1 - r^2) = 1 on the whole disk
    assert res.report.verdict == sl.Verdict.PASS
    assert min(res.p) == pytest.approx(1.0, abs=1e-9)
    assert max(res.p) == pytest.approx(1.0, abs=1e-9)


def test_fem_disk_matches_radial_and_closes_divergence():
    sf = sl.SpaceForm(2, 0.0)
    dom = sl.PlanarDomain(sf, sl.StarCurve.circle(1.0))
    mesh = sl.build_mesh(dom, 0.1)
    prob = sl.SolvedProblem.from_fem(dom, mesh, sl.Nonlinearity([2.0]), [0.0])
    assert prob.u_max() == pytest.approx(0.5, abs=5e-3)
    closure = sl.divergence_closure(prob)
    assert closure.verdict == sl.Verdict.PASS
    assert abs(closure.residual) < 1e-9
    # boundary flux of the torsion solution: integral of u_nu = -2 * area
    assert prob.outer().integral_flux() == pytest.approx(-2.0 * prob.volume(),
                                                         abs=1e-9)


def test_mesh_text_roundtrip():
    dom = sl.PlanarDomain(sl.SpaceForm(2, -1.0), sl.StarCurve.circle(1.0))
    mesh = sl.build_mesh(dom, 0.2)
    text = sl.mesh_to_text(mesh)
    back = sl.mesh_from_text(text)
    assert back.n_vertices() == mesh.n_vertices()
    assert back.n_triangles() == mesh.n_triangles()
    assert sl.mesh_to_text(back) == text


def test_exception_hierarchy():
    sf = sl.SpaceForm(2, 1.0)
    with pytest.raises(sl.DegenerateAnnulus):
        sl.closed_form_linear(sf, sl.RadialDomain.ball(math.pi / 2.0))
    with pytest.raises(sl.SerrinlabError):
        sl.closed_form_linear(sf, sl.RadialDomain.ball(math.pi / 2.0))
    with pytest.raises(sl.InvalidArgument):
        sl.build_mesh(sl.PlanarDomain(sl.SpaceForm(2, 0.0),
                                      sl.StarCurve.circle(1.0)), 0.0)
    with pytest.raises(sl.InadmissibleDomain):
        sl.validate_domain(sf, sl.RadialDomain.ball(4.0))


def test_config_parse_and_digest():
    text = """{
      "geometry": {"n": 2, "k": 0.0,
                   "domain": {"type": "ball", "radius": 1.0}},
      "checks": ["heintze_karcher"]
    }"""
    cfg = sl.parse_config_text(text)
    assert cfg.mode == "radial"
    assert cfg.checks == ["heintze_karcher"]
    assert len(cfg.digest) == 16
    # reparsing the canonical echo reproduces the digest
    assert sl.parse_config_text(cfg.canonical_text).digest == cfg.digest
    # FNV-1a 64-bit offset basis
    assert sl.fnv1a_digest("") == "cbf29ce484222325"
    patched = sl.patch_config_text(text, "solver.grid_size", "128")
    assert sl.parse_config_text(patched).digest != cfg.digest
    with pytest.raises(sl.ConfigError):
        sl.parse_config_text('{"geometry": {"bogus": 1}}')
