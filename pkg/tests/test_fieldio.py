import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from presym.errors import InputError
from presym.fieldio import (
    format_config,
    parse_config,
    read_field,
    read_gauge_path,
    write_field,
    write_gauge_path,
)
from presym.torus import TorusGrid

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seeds, st.sampled_from([(), (2,), (2, 2)]))
def test_field_roundtrip_is_bit_exact(tmp_path, seed, comp):
    grid = TorusGrid(2, 8)
    vals = np.random.default_rng(seed).standard_normal(grid.shape + comp) * 1e3
    path = tmp_path / "f.csv"
    write_field(path, vals, grid, len(comp))
    g, deg, back = read_field(path)
    assert g == grid and deg == len(comp)
    assert np.array_equal(back, vals)


def test_rows_may_come_in_any_order(tmp_path):
    grid = TorusGrid(1, 8)
    rows = [f"{i},{float(i)}" for i in reversed(range(8))]
    p = tmp_path / "f.csv"
    p.write_text("torusfield v1; n=1; N=8; degree=0; shape=1\n" + "\n".join(rows) + "\n")
    _, _, vals = read_field(p)
    assert np.array_equal(vals, np.arange(8.0))


@pytest.mark.parametrize(
    "body",
    [
        "nonsense header\n",
        "torusfield v1; n=1; N=8; degree=0; shape=1\n0,1.0\n",
        "torusfield v1; n=1; N=8; degree=0; shape=1\n" + "\n".join(f"{i},1,2" for i in range(8)),
        "torusfield v1; n=1; N=8; degree=0; shape=1\n" + "\n".join(f"{i + 1},1" for i in range(8)),
        "torusfield v1; n=1; N=8; degree=0; shape=1\n" + "\n".join(f"{i},nan" for i in range(8)),
        "torusfield v1; n=1; N=8; degree=0; shape=1\n" + "\n".join(f"{i},x" for i in range(8)),
        "torusfield v1; n=1; N=12; degree=0; shape=1\n",
    ],
)
def test_malformed_fields_raise_input_error(tmp_path, body):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(InputError):
        read_field(p)


def test_gauge_path_roundtrip(tmp_path):
    grid = TorusGrid(2, 8)
    rng = np.random.default_rng(0)
    times = np.linspace(0, 1, 5)
    b = [rng.standard_normal(grid.shape + (2, 2)) for _ in times]
    a = [rng.standard_normal(grid.shape + (2,)) for _ in times]
    write_gauge_path(tmp_path / "gp", times, {"beta": b, "alpha": a}, grid, {"beta": 2, "alpha": 1})
    t, fields, g, deg = read_gauge_path(tmp_path / "gp")
    assert np.array_equal(t, times) and g == grid and deg == {"beta": 2, "alpha": 1}
    assert all(np.array_equal(x, y) for x, y in zip(fields["beta"], b))


def test_missing_manifest(tmp_path):
    with pytest.raises(InputError):
        read_gauge_path(tmp_path)


def test_config_roundtrip_and_errors():
    cfg = {"model": "T3", "eta": [[1, 2, 1.0]], "seed": 4, "tol_mc": 1e-7}
    assert parse_config(format_config(cfg)) == cfg
    assert parse_config("# comment\nmodel = T3\n") == {"model": "T3"}
    with pytest.raises(InputError):
        parse_config("no equals sign")
    with pytest.raises(InputError):
        parse_config("bad key! = 1")
