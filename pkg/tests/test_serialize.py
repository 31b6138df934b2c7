"""Round trips for the JSON layer plus the exact feasibility solver."""

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cantorwalk import serialize as ser
from cantorwalk.certify import (FiniteOrbitCertificate, PingPongCertificate,
                                check_morse_smale, find_finite_orbit,
                                solve_invariant_measure)
from cantorwalk.fixtures import cantor_space, fixture, named_generators
from cantorwalk.giet import rotation
from cantorwalk.maps import equals
from cantorwalk.measure_solver import solve_feasibility
from cantorwalk.space import Piece, Region, epsilon_neighborhood_of_values

K = cantor_space(3)


# -- feasibility solver ------------------------------------------------------


def test_solver_feasible_system():
    rows = [[F(1), F(1)], [F(1), F(-1)]]
    rhs = [F(1), F(0)]
    res = solve_feasibility(rows, rhs)
    assert res.feasible and res.gap == 0
    assert res.solution == (F(1, 2), F(1, 2))


def test_solver_infeasible_has_exact_gap():
    # x >= 0 with x = -1 is infeasible by exactly 1
    res = solve_feasibility([[F(1)]], [F(-1)])
    assert not res.feasible
    assert res.solution is None
    assert res.gap == 1


def test_solver_empty_system():
    res = solve_feasibility([], [])
    assert res.feasible and res.solution == ()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                min_size=1, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solver_solutions_satisfy_system(rows, rhs):
    rows = [[F(v) for v in row] for row in rows]
    rhs = [F(v) for v in rhs[:len(rows)]]
    res = solve_feasibility(rows, rhs)
    if res.feasible:
        assert all(x >= 0 for x in res.solution)
        for row, b in zip(rows, rhs):
            assert sum(c * x for c, x in zip(row, res.solution)) == b
    else:
        assert res.gap > 0


# -- space / map / region round trips ---------------------------------------


def test_space_round_trip():
    for space in (K, ser.space_from_obj({"intervals": [["0", "1/3"], ["2/3", "1"]]})):
        again = ser.space_from_obj(ser.space_to_obj(space))
        assert again.intervals == space.intervals
        assert (again.ifs is None) == (space.ifs is None)


def test_map_round_trip():
    for name in ("H", "R", "G3", "A1", "A2"):
        f = fixture(name, K)
        g = ser.map_from_obj(K, ser.map_to_obj(f))
        assert equals(f, g)
        assert g.label == f.label


def test_region_round_trip():
    reg = epsilon_neighborhood_of_values([F(0), F(1)], F(1, 27), K).union(
        Region.from_pieces(K, (Piece(F(2, 9), F(1, 3), True, False),)))
    again = ser.region_from_obj(K, ser.region_to_obj(reg))
    assert again.same_set(reg)
    assert again.pieces == reg.pieces


def test_giet_round_trip():
    g = rotation((0, 1), F(1, 3))
    again = ser.giet_from_obj(ser.giet_to_obj(g))
    assert again.branches == g.branches


# -- certificates ------------------------------------------------------------


def test_ping_pong_certificate_round_trip():
    cert = PingPongCertificate(
        fixture("A1", K), fixture("A2", K),
        Region.cylinder(K, "22"), Region.cylinder(K, "02"),
        Region.cylinder(K, "00"), Region.cylinder(K, "20"))
    obj = ser.certificate_to_obj(cert)
    assert obj["type"] == "ping-pong"
    assert ser.verify_certificate(obj)
    # round trip through canonical JSON text
    obj2 = json.loads(ser.dumps(obj))
    assert ser.verify_certificate(obj2)


def test_invariant_measure_certificate_round_trip():
    gens = named_generators(["H", "R"])
    cert = solve_invariant_measure(gens, 1)
    obj = ser.certificate_to_obj(cert, gens)
    assert obj["type"] == "invariant-measure"
    assert obj["masses"] == ["1/2", "1/2"]
    assert ser.verify_certificate(obj)
    with pytest.raises(ser.SerializeError):
        ser.certificate_to_obj(cert)  # generators are required


def test_finite_orbit_certificate_round_trip():
    gens = named_generators(["H", "R"])
    cert = find_finite_orbit(gens, [F(0)])
    obj = ser.certificate_to_obj(cert, gens)
    assert obj["type"] == "finite-orbit"
    assert ser.verify_certificate(obj)


def test_morse_smale_certificate_round_trip():
    A1 = fixture("A1", K)
    A = Region.from_pieces(K, (Piece(F(8, 9), F(1), False, True),))
    B = Region.from_intervals(K, [(0, F(1, 3))])
    cert = check_morse_smale(A1, A, B)
    assert cert
    obj = ser.certificate_to_obj(cert)
    assert obj["type"] == "morse-smale"
    assert ser.verify_certificate(obj)


def test_verify_rejects_corrupted_certificate():
    gens = named_generators(["H", "R"])
    cert = find_finite_orbit(gens, [F(0)])
    obj = ser.certificate_to_obj(cert, gens)
    obj["orbit"] = obj["orbit"][:-1]  # drop a point: closure breaks
    assert not ser.verify_certificate(obj)
    with pytest.raises(ser.SerializeError):
        ser.certificate_from_obj({"type": "nonsense", "space": ser.space_to_obj(K)})


def test_dumps_is_canonical():
    text = ser.dumps({"b": 1, "a": "2/3"})
    assert text == '{\n  "a": "2/3",\n  "b": 1\n}\n'


def test_atomic_write(tmp_path):
    path = str(tmp_path / "sub" / "out.json")
    ser.write_json_atomic(path, {"x": 1})
    with open(path) as fh:
        assert json.load(fh) == {"x": 1}
