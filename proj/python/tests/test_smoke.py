import json
import math
import pathlib

import numpy as np
import pytest

import sympidx

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def rotation(weight, duration=1.0):
    return sympidx.realize({"type": "rotation", "weight": weight, "duration": duration})


def test_rotation_indices():
    p = rotation(1 / 3)
    assert p.dim == 2
    assert sympidx.cz_index(p) == 1
    assert sympidx.mean_index(p) == pytest.approx(2 / 3, abs=1e-9)
    assert sympidx.nullity(p) == 0
    assert sympidx.cz_index(rotation(1.25)) == 3


def test_endpoint_is_symplectic():
    p = rotation(0.2)
    m = p.endpoint
    J = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(m.T @ J @ m, J, atol=1e-10)
    assert len(p) == len(p.times)


def test_iterate_reaches_identity():
    p = sympidx.iterate(rotation(1 / 3), 3)
    assert sympidx.nullity(p) == 2
    assert sympidx.bott(p, 1.0) == sympidx.bott(rotation(1.0), 1.0)


def test_shear_document():
    p = sympidx.realize((DATA / "shear.json").read_text())
    assert sympidx.cz_index(p) == 0
    assert sympidx.nullity(p) == 1
    assert sympidx.defect(p) == -1


def test_direct_sum_additive():
    a, b = rotation(1 / 3), rotation(1.25)
    s = sympidx.direct_sum([a, b])
    assert s.dim == 4
    assert sympidx.cz_index(s) == sympidx.cz_index(a) + sympidx.cz_index(b)
    for angle in (0.5, math.pi, 4.0):
        assert sympidx.bott(s, angle) == sympidx.bott(a, angle) + sympidx.bott(b, angle)


def test_splitting_and_report():
    p = sympidx.realize((DATA / "circle_action_n3.json").read_text())
    assert sympidx.bott(p, math.pi) == -4
    assert sympidx.bott_plus(p, math.pi) == 4
    plus, minus = sympidx.splitting_numbers(p, math.pi)
    assert plus >= 0 and minus >= 0
    report = sympidx.index_report(p, grid=8)
    assert report["mu"] == sympidx.cz_index(p)
    assert report["defect"] == sympidx.defect(p)


def test_irt_round_trip():
    paths = [rotation(1 / 3), rotation(1.25)]
    cert = sympidx.find_irt(paths, eta=0.5, ell0=3, N=4)
    assert cert is not None
    assert cert["d"] % 4 == 0
    ledger = sympidx.verify_irt(paths, cert)
    assert ledger["passed"]
    assert len(cert["k"]) == 2


def test_perturbed_gamma0():
    r = sympidx.perturbed_gamma0(n=2, eps_num=1, eps_den=20)
    assert r["sdc"] == 2
    assert r["mu_unshifted"] == -2


def test_errors_carry_kind():
    with pytest.raises(sympidx.Error) as e:
        sympidx.realize('{"schema_version": 2, "path": {}}')
    assert e.value.kind == "Schema"
    with pytest.raises(sympidx.Error) as e:
        sympidx.perturbed_gamma0(C=0.9)
    assert e.value.kind == "InvalidParams"
