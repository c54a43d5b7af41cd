import random
from math import ceil

import pytest

from pindist.errors import CapExceeded
from pindist.experiments import (
    CSV_COLUMNS,
    Caps,
    GenSpec,
    SweepConfig,
    case_seed,
    exhaustive_verify,
    format_csv,
    generate_set,
    run_case,
    run_sweep,
)
from pindist.geometry import PointSet2, distance_set, isosceles_count, pinned_distance_set

from conftest import brute_isosceles


def test_genspec_parse():
    assert GenSpec.parse("ap:1:3") == GenSpec("arithmetic_progression", (1, 3))
    assert GenSpec.parse("gp:2:3").kind == "geometric_progression"
    assert GenSpec.parse("random", seed=5) == GenSpec("random_subset", (), 5)
    assert str(GenSpec.parse("arithmetic_progression:1:3")) == "ap:1:3"
    with pytest.raises(ValueError, match="bogus"):
        GenSpec.parse("bogus:1")
    with pytest.raises(ValueError, match="x"):
        GenSpec.parse("ap:1:x")


def test_generator_examples():
    assert generate_set(GenSpec("interval"), 4, 13) == {0, 1, 2, 3}
    assert generate_set(GenSpec.parse("ap:1:3"), 4, 13) == {1, 4, 7, 10}
    assert generate_set(GenSpec.parse("gp:1:2"), 4, 13) == {1, 2, 4, 8}
    assert generate_set(GenSpec.parse("list:3:16:5"), 2, 13) == {3, 5}
    # 5^2 = 25 = -1 mod 13
    assert generate_set(GenSpec.parse("iso"), 3, 13) == {0, 5, 10}
    a = generate_set(GenSpec("random", seed=99), 7, 101)
    assert a == generate_set(GenSpec("random", seed=99), 7, 101)
    assert len(a) == 7 and all(0 <= x < 101 for x in a)


@pytest.mark.parametrize("text,size,p", [
    ("gp:1:0", 3, 13),
    ("gp:1:1", 3, 13),
    ("gp:1:3", 4, 13),  # 3 has order 3 mod 13
    ("gp:0:2", 2, 13),
    ("ap:1:13", 3, 13),
    ("ap:1", 3, 13),
    ("iso", 3, 7),
    ("list:1:2", 3, 13),
    ("interval", 14, 13),
])
def test_generator_errors(text, size, p):
    with pytest.raises(ValueError):
        generate_set(GenSpec.parse(text), size, p)


def test_run_case_small_example():
    rep = run_case([0, 1], 3)
    assert rep.n_total == 24
    assert rep.best_pin_size == 3
    assert rep.delta_size == 3
    assert rep.theorem_ratio == round(3 / 2 ** 1.5, 9) == 1.060660172
    assert rep.n_restricted + rep.n_degenerate == rep.n_total
    assert rep.incidences == rep.n_restricted
    assert rep.p_card == 4
    assert rep.flag_a_vs_p23 is True


def test_run_case_isotropic_slope_section():
    rep = run_case([0, 1, 2], 5)
    E = PointSet2.cartesian([0, 1, 2], 5)
    assert rep.n_total == brute_isosceles(E.points, 5)
    assert rep.delta_size == len(distance_set(E))
    assert rep.flag_a_vs_p23 is False  # 27 > 25
    assert rep.flag_p_vs_p2 is True  # |P| = 18 <= 25
    assert rep.error == ""


def test_run_case_row_invariants_random():
    rng = random.Random(12)
    for _ in range(25):
        p = rng.choice([7, 11, 13, 31, 53])
        A = rng.sample(range(p), rng.randint(1, min(p, 7)))
        rep = run_case(A, p)
        assert rep.best_pin_size >= ceil(rep.guaranteed_bound)
        assert rep.n_restricted + rep.n_degenerate == rep.n_total
        assert rep.delta_size == len(distance_set(PointSet2.cartesian(A, p)))
        assert rep.guaranteed_pin_size * rep.n_total >= (len(A) ** 2) ** 3


def test_run_case_partial_row_on_cap():
    rep = run_case(range(6), 13, Caps(instance=100))
    assert rep.n_total is not None and rep.best_pin_size is not None
    assert rep.incidences is None and rep.k_max is None
    assert rep.error.startswith("incidence:")
    row = rep.as_row()
    assert row["incidences"] == "" and row["n_total"] != ""


def test_run_case_naive_counter():
    a = run_case([1, 2, 6], 11, Caps(use_naive=True))
    b = run_case([1, 2, 6], 11)
    assert a.incidences == b.incidences == a.n_restricted


def test_csv_header_and_absent_fields():
    text = format_csv([run_case([4], 7)])
    header, row = text.splitlines()
    assert header.split(",") == list(CSV_COLUMNS)
    cells = row.split(",")
    assert len(cells) == len(CSV_COLUMNS)
    assert cells[CSV_COLUMNS.index("incidences")] == ""
    assert format_csv([]) == ",".join(CSV_COLUMNS) + "\n"


def test_empty_sweep():
    res = run_sweep(SweepConfig())
    assert res.rows == [] and res.summary is None


def test_sweep_interval_grid():
    cfg = SweepConfig(primes=[7, 11, 13], sizes=[2, 3, 4], specs=[GenSpec("interval")])
    res = run_sweep(cfg)
    assert len(res.rows) == 9
    assert [(r.p, r.size_a) for r in res.rows] == [(p, s) for p in (7, 11, 13) for s in (2, 3, 4)]
    assert res.summary.min_theorem_ratio > 0
    assert res.summary.max_rudnev_ratio is not None
    assert res.summary.errors == 0


def test_sweep_records_errors_in_row():
    cfg = SweepConfig(primes=[7, 13], sizes=[3], specs=[GenSpec.parse("iso"), GenSpec("interval")])
    res = run_sweep(cfg)
    assert len(res.rows) == 4
    bad = res.rows[0]
    assert bad.p == 7 and "isotropic" in bad.error and bad.n_total is None
    assert res.rows[2].error == ""  # iso at p = 13
    assert res.summary.errors == 1


def test_sweep_determinism_across_threads():
    cfg = SweepConfig(primes=[11, 13, 29], sizes=[3, 5], specs=[GenSpec("random"), GenSpec.parse("ap:2:3")],
                      seed=77)
    a = run_sweep(cfg, threads=1).to_csv()
    b = run_sweep(cfg, threads=4).to_csv()
    c = run_sweep(cfg, threads=2).to_csv()
    assert a == b == c
    other = run_sweep(SweepConfig(cfg.primes, cfg.sizes, cfg.specs, seed=78), threads=1).to_csv()
    assert other != a


def test_case_seed_scheme():
    assert case_seed(1, 0) == case_seed(1, 0)
    assert len({case_seed(1, i) for i in range(100)}) == 100
    assert case_seed(1, 0) != case_seed(2, 0)


def test_config_parse():
    cfg = SweepConfig.parse("""
        # demo
        primes = 7, 11
        sizes = 2,3
        specs = interval, ap:1:3, random
        seed = 9
        out = rows.csv
        instance = 5000
        use_naive = true
    """)
    assert cfg.primes == [7, 11] and cfg.sizes == [2, 3]
    assert [str(s) for s in cfg.specs] == ["interval", "ap:1:3", "random"]
    assert cfg.seed == 9 and cfg.out == "rows.csv"
    assert cfg.caps.instance == 5000 and cfg.caps.use_naive is True
    with pytest.raises(ValueError, match="colour"):
        SweepConfig.parse("colour = blue")
    with pytest.raises(ValueError):
        SweepConfig.parse("primes = 7, 9")
    with pytest.raises(ValueError, match="abc"):
        SweepConfig.parse("sizes = 2, abc")


def test_exhaustive_verify_small():
    s = exhaustive_verify(3, 2)
    assert s.ok and s.cases == 3 + 3
    assert s.min_theorem_ratio > 0
    s5 = exhaustive_verify(5, 3)
    assert s5.ok and s5.cases == 5 + 10 + 10


@pytest.mark.parametrize("p,k", [(5, 3), (7, 4)])
def test_symmetry_reduction_same_minimum(p, k):
    full = exhaustive_verify(p, k)
    reduced = exhaustive_verify(p, k, symmetry_reduction=True)
    assert reduced.cases < full.cases
    assert reduced.min_theorem_ratio == full.min_theorem_ratio
    assert reduced.ok and full.ok


def test_exhaustive_verify_guard():
    with pytest.raises(CapExceeded):
        exhaustive_verify(17, 2)
    with pytest.raises(CapExceeded):
        exhaustive_verify(5, 6)
    assert exhaustive_verify(17, 1, force=True).cases == 17


def test_pinned_sets_monotone_in_E():
    rng = random.Random(21)
    for _ in range(30):
        p = rng.choice([7, 11, 13])
        pts = [(rng.randrange(p), rng.randrange(p)) for _ in range(rng.randint(1, 20))]
        extra = (rng.randrange(p), rng.randrange(p))
        u = pts[0]
        small = pinned_distance_set(PointSet2(pts, p), u)
        big = pinned_distance_set(PointSet2(pts + [extra], p), u)
        assert small <= big
