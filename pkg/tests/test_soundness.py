import numpy as np
import pytest

from wass_smooth.soundness import (CSV_HEADER, random_measure, run_instance,
                                   run_suite)


def test_random_measure_shapes():
    rng = np.random.default_rng(0)
    m = random_measure("torus2", rng)
    assert m.space == "torus" and m.dim == 2 and 2 <= m.n_atoms <= 12
    assert np.max(np.abs(m.weights - m.weights[0])) < 1e-15
    s = random_measure("sphere2", rng)
    assert np.allclose(np.linalg.norm(s.points, axis=1), 1.0)


def test_rows_structure_and_soundness():
    rows = run_instance("torus1", 3, 5, [1.0, 4.0])
    assert len(rows) == 2 * 2  # two p values, two methods
    for row in rows:
        assert row.instance == 5 and row.space == "torus1"
        assert not row.violated
        assert row.bound >= row.oracle_lower
        assert CSV_HEADER.count(",") == row.csv().count(",")


def test_thread_count_does_not_change_rows():
    seq_rows, v1 = run_suite("torus1", 4, 11, [1.0], threads=1)
    par_rows, v2 = run_suite("torus1", 4, 11, [1.0], threads=3)
    assert v1 == v2 == 0
    assert [r.csv() for r in seq_rows] == [r.csv() for r in par_rows]


def test_unknown_space_rejected():
    with pytest.raises(ValueError):
        run_suite("klein", 1, 0, [1.0])
