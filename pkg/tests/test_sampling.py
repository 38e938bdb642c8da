import numpy as np
from hypothesis import given, settings, strategies as st

from helpers import automorphisms, model_structures, simple_structures
from siegelcr import sampling
from siegelcr.algebra import Poly
from siegelcr.autgroup import as_polymap
from siegelcr.maps import PolyMap, check_component_system, check_pseudoholomorphic
from siegelcr.structures import SimpleModelStructure, nijenhuis_vanishes

B12 = SimpleModelStructure(3, [[0, 1], [-1, 0]])
STD3 = SimpleModelStructure.standard(3)
z = [Poly.z(3, j) for j in (1, 2, 3)]
zb = [Poly.zbar(3, j) for j in (1, 2, 3)]


def test_real_coordinates_roundtrip():
    w = np.array([1 + 2j, -3j, 0.5])
    assert np.allclose(sampling.from_real(sampling.to_real(w)), w)


def test_float_structure_matches_complex_action():
    S = sampling.FloatStructure(B12)
    rng = np.random.default_rng(3)
    for zpt in sampling.random_points(3, 10, rng):
        w = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert np.allclose(S.real_matrix(zpt) @ sampling.to_real(w), sampling.to_real(S.apply(zpt, w)))


def test_boundary_sampler_lands_on_boundary():
    pts = sampling.random_boundary_points(4, 30, np.random.default_rng(1))
    assert max(abs(sampling.rho_float(p)) for p in pts) < 1e-12


def test_structure_and_frame_checks_pass():
    for J in (STD3, B12):
        assert sampling.sample_structure(J).passed
        assert sampling.sample_frame(J).passed


def test_nijenhuis_sampling_separates_integrable():
    assert sampling.sample_nijenhuis(STD3) < 1e-6
    assert sampling.sample_nijenhuis(B12) > 1e-2


def test_identity_passes_float_checks():
    F = PolyMap.identity(3)
    assert sampling.sample_pseudoholomorphic(B12, B12, F).passed
    assert sampling.sample_component_system(B12, F).passed
    assert sampling.sample_boundary(F).passed
    assert sampling.sample_cr(B12, B12, F).passed


def test_float_checks_detect_planted_failures():
    bad = PolyMap(3, (z[0], z[1], z[2] + zb[0]))
    assert not sampling.sample_pseudoholomorphic(B12, B12, bad).passed
    assert not sampling.sample_component_system(B12, bad).passed
    scaled = PolyMap(3, (z[0], z[1], z[2].scale(3)))
    assert not sampling.sample_component_system(B12, scaled).passed
    assert sampling.sample_component_system(STD3, scaled).passed
    assert not sampling.sample_boundary(PolyMap(3, (z[0], z[1], z[2] + 1))).passed
    assert not sampling.sample_cr(B12, B12, PolyMap(3, (zb[0], z[1], z[2]))).passed


def test_report_json():
    report = sampling.sample_structure(B12, count=5)
    out = report.to_json()
    assert out["check"] == "structure" and out["samples"] == 5 and out["verdict"] == "pass"


# properties ----------------------------------------------------------------------------

@settings(max_examples=15)
@given(model_structures())
def test_float_frame_and_structure_agree_with_exact(J):
    assert sampling.sample_structure(J, count=10).passed
    assert sampling.sample_frame(J, count=10).passed
    integrable = nijenhuis_vanishes(J)
    assert (sampling.sample_nijenhuis(J, count=10) < 1e-5) == integrable


@settings(max_examples=15)
@given(st.data())
def test_float_map_checks_agree_with_exact(data):
    B = data.draw(simple_structures(n=3, nonzero=True))
    G = data.draw(automorphisms(B))
    F = as_polymap(G)
    assert sampling.sample_pseudoholomorphic(B, B, F, count=10).passed == check_pseudoholomorphic(B, B, F).passed
    assert sampling.sample_component_system(B, F, count=10).passed == check_component_system(B, F).passed
    assert sampling.sample_rho_scaling(F, float(G.c), count=10).passed
    assert sampling.sample_cr(B, B, F, count=10).passed
