import math

import pytest

import ruledrel


def test_fixtures_listed():
    assert set(ruledrel.fixture_names()) >= {"HEL1", "ORT1", "EDL1", "RCON"}


def test_helicoid_point():
    s = ruledrel.Surface.fixture("HEL1")
    assert s.domain == pytest.approx((0.0, 2 * math.pi))
    p = s.point(0.0, -2.0)
    assert p["w"] == pytest.approx(math.sqrt(5.0), abs=1e-12)
    assert p["gauss"] == pytest.approx(-0.04, abs=1e-12)
    assert p["x"] == pytest.approx([-2.0, 0.0, 0.0], abs=1e-12)


def test_frame_orthonormal():
    s = ruledrel.Surface("1 + 0.2*cos(u)", "sin(u)", "0.5", (0.0, 3.0))
    fr = s.frame(2.5)
    e, n, z = fr["e"], fr["n"], fr["z"]
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    assert dot(e, e) == pytest.approx(1.0, abs=1e-9)
    assert dot(e, n) == pytest.approx(0.0, abs=1e-9)
    assert dot(n, z) == pytest.approx(0.0, abs=1e-9)
    assert s.invariants(0.0) == pytest.approx([1.2, 0.0, 0.5])


def test_constants_and_errors():
    s = ruledrel.Surface("a", "0", "0", (0.0, 1.0), constants={"a": 2.0})
    assert s.invariants(0.5)[0] == pytest.approx(2.0)
    with pytest.raises(ruledrel.ParseError):
        ruledrel.Surface("1 +", "0", "0", (0.0, 1.0))
    with pytest.raises(ruledrel.SpecError):
        ruledrel.Surface("u - 0.5", "0", "0", (0.0, 1.0))
    with pytest.raises(ruledrel.DegenerationError):
        ruledrel.asymptotic_image(ruledrel.Surface.fixture("RCON"), "1")


def test_relative_shape_and_pick():
    s = ruledrel.Surface.fixture("EDL1")
    r = ruledrel.relative_shape(s, "1", 1.0, 0.3)
    assert r["H"] == pytest.approx(-1.0, abs=1e-10)
    assert r["K"] == pytest.approx(1.0, abs=1e-10)
    assert ruledrel.pick_invariant(s, "1", 1.0) == 0.0


def test_vector_identities():
    s = ruledrel.Surface.fixture("ORT1")
    r = ruledrel.vector_identities(s, "1", 0.7, -0.4)
    assert max(r.values()) < 1e-9
    q = ruledrel.equiaffine_support(s, 0.7, -0.4)
    assert q == pytest.approx(1.0 / math.sqrt(1.16), abs=1e-12)


def test_classify_edlinger():
    verdicts = {v["key"]: v for v in ruledrel.classify(ruledrel.Surface.fixture("EDL1"), "1")}
    assert verdicts["proper_sphere"]["holds"]
    assert not verdicts["conoidal"]["holds"]


def test_image_of_orthoid():
    img = ruledrel.asymptotic_image(ruledrel.Surface.fixture("ORT1"), "1")
    assert isinstance(img, ruledrel.Surface)
    assert img.jet_order == 2


def test_field_calculus():
    c = ruledrel.field_calculus(ruledrel.Surface.fixture("EDL1"), "1", 1.0, 0.5)
    for key in ("curlI_Q", "divG_T", "curlG_T", "curlG_Q", "A0", "A1", "A2", "A3"):
        assert c[key] == pytest.approx(0.0, abs=1e-12)
    verdicts = {v["key"]: v for v in ruledrel.alignment_classify(ruledrel.Surface.fixture("HEL1"), "1")}
    assert verdicts["divG_Q_zero"]["holds"]


def test_verify_and_cli():
    suites = ruledrel.verify()
    assert suites and all(s["passed"] for s in suites)
    assert any(not s["passed"] for s in ruledrel.verify(corruption=1e-3))
    code, out, _ = ruledrel.run_cli(["verify"])
    assert code == 0
    assert out.rstrip().endswith(f"{len(suites)}/{len(suites)} suites passed")
    code, _, err = ruledrel.run_cli(["eval", "--spec", "/nonexistent.json"])
    assert code == 2
