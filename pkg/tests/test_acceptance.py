"""One test per acceptance criterion; all comparisons are exact."""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from hkatomic import charclass
from hkatomic.atomicity import is_atomic_codim, is_atomic_obstruction, spherical_verdict
from hkatomic.cli import main
from hkatomic.lagrangian import example_restriction, ext_dims_structure_sheaf
from hkatomic.presets import lattice_preset
from hkatomic.suite import DEFAULT_SIZES, _instances, random_hodge_class, run_invariant


def _cli(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.acceptance(1, "verbitsky dims --b2 23 --n 2 gives 324 in under 10 s")
def test_verbitsky_dimension():
    start = time.perf_counter()
    out = subprocess.run(
        [sys.executable, "-m", "hkatomic", "verbitsky", "dims", "--b2", "23", "--n", "2"],
        capture_output=True, text=True, check=True,
    )
    elapsed = time.perf_counter() - start
    doc = json.loads(out.stdout)
    assert doc["dim_sh"] == 324 == doc["dim_sym"] - 1
    assert elapsed < 10, elapsed


@pytest.mark.acceptance(2, "tangent-bundle --n 2 gives (576, -432), not atomic")
def test_tangent_bundle(capsys):
    code, doc = _cli(capsys, "tangent-bundle", "--n", "2")
    assert code == 0
    assert (Fraction(doc["c2sq"]), Fraction(doc["c4"])) == (576, -432)
    assert doc["verdict"] == "not_atomic"


@pytest.mark.acceptance(3, "100 td^(1/2)_4 and v(T_X)_4 coefficients at n = 2")
def test_todd_coefficients():
    hk = charclass.hk_chern_ring(4)
    c2, c4 = hk.var("c2"), hk.var("c4")
    _, half = charclass.todd_and_sqrt(charclass.total_chern(hk))
    assert half.part(4) * 100 == c2 * c2 * Fraction(35, 288) - c4 * Fraction(5, 72)
    v = charclass.tangent_mukai_degree4(2)
    assert v.part(4) == c2 * c2 * Fraction(67, 1440) - c4 * Fraction(61, 360)


@pytest.mark.acceptance(4, "degree <= 4 tangent Mukai vector coefficients for n = 1..6")
def test_tangent_coefficients_in_n():
    for n in range(1, 7):
        v = charclass.tangent_mukai_degree4(n)
        assert v.constant_term() == 2 * n
        assert v.coefficient(c2=1) == Fraction(2 * n - 24, 24)
        assert v.coefficient(c2=2) == Fraction(120 + 7 * n, 2880)
        assert v.coefficient(c4=1) == -Fraction(120 + n, 720)


@pytest.mark.acceptance(5, "k = (2n - 24)/(2n) r_X for n in {2, 12, 24}")
def test_k_relation():
    for n in (2, 12, 24):
        for r in (1, 2, Fraction(3, 5)):
            assert charclass.k_relation(n, r) == Fraction(2 * n - 24, 2 * n) * r


@pytest.mark.acceptance(6, "Q(x) Q(-x)^-1 = e^x to order 16")
def test_lagrangian_series_identity():
    assert charclass.verify_lagrangian_identity(16)


@pytest.mark.acceptance(7, "EPW preset Ext dimensions (1, 0, 190)")
def test_epw_ext_dimensions():
    _, hd = example_restriction("epw")
    assert ext_dims_structure_sheaf(hd)[:3] == [1, 0, 190]


@pytest.mark.acceptance(8, "codimension and obstruction criteria agree on 200 random instances in under 5 min")
def test_criterion_equivalence():
    start = time.perf_counter()
    rng = random.Random("acceptance:criterion_equivalence")
    count = 200
    verdicts = {True: 0, False: 0}
    sizes_seen = set()
    for space, hd, n in _instances(rng, list(DEFAULT_SIZES), count):
        _, x = random_hodge_class(rng, space, hd, n)
        a, b = is_atomic_codim(x), is_atomic_obstruction(x, hd)
        assert a.atomic == b.atomic
        verdicts[a.atomic] += 1
        sizes_seen.add((space.b2, n))
    elapsed = time.perf_counter() - start
    print(f"atomic {verdicts[True]}, not atomic {verdicts[False]}, {elapsed:.1f} s")
    assert sizes_seen == {(b, n) for b in (3, 4, 5) for n in (2, 3)}
    assert verdicts[True] and verdicts[False]
    assert elapsed < 300


SUITES = (
    "sl2_relations",
    "t_equivariance",
    "laplacian_exactness",
    "isometry_invariants",
    "transport_invariance",
    "atomic_implies_modular",
    "sym_form_skew_invariance",
)


@pytest.mark.acceptance(9, "seven property suites pass on 100 seeded instances each")
def test_property_suites():
    reports = {name: run_invariant(name, seed=0, count=100) for name in SUITES}
    for name, r in reports.items():
        print(name, r)
    assert all(r["count"] >= 100 and r["failed"] == 0 for r in reports.values())


@pytest.mark.acceptance(10, "spherical verdicts for K3^[n] (n > 1), OG10 and K3")
def test_spherical_verdicts():
    for n in (2, 3, 5):
        assert spherical_verdict(lattice_preset("k3n", n).metadata).label == "no_spherical_objects"
    assert spherical_verdict("og10").label == "no_spherical_objects"
    assert spherical_verdict("k3").label == "not_excluded"


@pytest.mark.acceptance(11, "Fujiki check with derived inputs (828, 324) at n = 2: T_X not atomic")
def test_fujiki_consistency():
    d = charclass.derive_k3n2_fujiki_inputs()
    assert (d["C_c2sq"], d["C_c4"]) == (828, 324)
    v = charclass.fujiki_consistency(2, d["C_c2sq"], d["C_c4"])
    assert v.label == "not_atomic" and "T_X not atomic" in v.notes
