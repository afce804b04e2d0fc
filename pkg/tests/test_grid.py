import numpy as np
import pytest

from degenma import grid as gr


def unit_spec(n=17, lo=-1.0, hi=1.0):
    return gr.GridSpec(lo, hi, lo, hi, n, n)


def test_spec_validation():
    with pytest.raises(ValueError):
        gr.GridSpec(1.0, 0.0, 0.0, 1.0, 5, 5)
    with pytest.raises(ValueError):
        gr.GridSpec(0.0, 1.0, 0.0, 1.0, 2, 5)


def test_spacings_and_nodes():
    spec = gr.GridSpec(0.0, 1.0, -2.0, 2.0, 5, 9)
    assert spec.hx == pytest.approx(0.25)
    assert spec.hy == pytest.approx(0.5)
    assert spec.x_nodes()[0] == 0.0 and spec.x_nodes()[-1] == 1.0
    assert spec.y_nodes()[4] == pytest.approx(0.0)


def test_flat_index_round_trip():
    spec = gr.GridSpec(0.0, 1.0, 0.0, 1.0, 7, 5)
    for i in range(spec.nx):
        for j in range(spec.ny):
            assert spec.from_flat(spec.flat_index(i, j)) == (i, j)
    # x1 varies fastest in the flat layout
    u = gr.sample(spec, lambda X, Y: X + 10.0 * Y)
    flat = u.flat()
    assert flat[1] - flat[0] == pytest.approx(spec.hx)


def test_grid_function_validation():
    spec = unit_spec(5)
    with pytest.raises(ValueError):
        gr.GridFunction(spec, np.zeros((4, 5)))
    with pytest.raises(ValueError):
        gr.GridFunction(spec, np.full((5, 5), np.nan))


def test_stencils_exact_on_quadratics():
    spec = unit_spec(33)
    inner = gr.interior_slice
    u = gr.sample(spec, lambda X, Y: X**2)
    assert np.max(np.abs(gr.d11(u)[inner] - 2.0)) <= 1e-13
    assert np.max(np.abs(gr.d22(u)[inner])) <= 1e-13
    v = gr.sample(spec, lambda X, Y: X * Y)
    assert np.max(np.abs(gr.d12(v)[inner] - 1.0)) <= 1e-13
    w = gr.sample(spec, lambda X, Y: np.full(np.broadcast(X, Y).shape, 3.25))
    for stencil in (gr.d11, gr.d22, gr.d12):
        out = stencil(w)
        assert np.max(np.abs(out[inner])) <= 1e-13
        assert np.all(np.isnan(out[0, :])) and np.all(np.isnan(out[:, -1]))


def test_second_difference_convergence_order():
    errs = []
    hs = []
    for n in (33, 65, 129):
        spec = gr.GridSpec(0.0, 1.0, 0.0, 1.0, n, n)
        u = gr.sample(spec, lambda X, Y: np.sin(X) * np.sin(Y))
        exact = gr.sample(spec, lambda X, Y: -np.sin(X) * np.sin(Y))
        err = np.max(np.abs(gr.d11(u)[gr.interior_slice] - exact.values[gr.interior_slice]))
        errs.append(err)
        hs.append(spec.hx)
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert order >= 1.9


def test_sup_norm_and_mask():
    spec = unit_spec(9)
    u = gr.sample(spec, lambda X, Y: np.full(np.broadcast(X, Y).shape, -3.0))
    assert gr.sup_norm(u) == 3.0
    mask = np.zeros((9, 9), dtype=bool)
    mask[4, 4] = True
    assert gr.sup_norm(u, mask) == 3.0
    with pytest.raises(ValueError):
        gr.sup_norm(u, np.zeros((9, 9), dtype=bool))


def test_holder_seminorm_examples():
    spec = unit_spec(33)
    const = gr.sample(spec, lambda X, Y: np.full(np.broadcast(X, Y).shape, 3.0))
    pair = np.array([[[0.0, 0.0], [0.0, 0.25]]])
    assert gr.holder_seminorm(const, 0.5, pair) == pytest.approx(0.0, abs=1e-13)
    u = gr.sample(spec, lambda X, Y: Y + 0.0 * X)
    assert gr.holder_seminorm(u, 0.5, pair) == pytest.approx(0.5)
    # adding pairs never decreases the max
    more = np.concatenate([pair, np.array([[[0.1, 0.1], [0.2, 0.3]]])])
    assert gr.holder_seminorm(u, 0.5, more) >= gr.holder_seminorm(u, 0.5, pair)
    with pytest.raises(ValueError):
        gr.holder_seminorm(u, 1.5, pair)


def test_interp_bilinear():
    spec = unit_spec(17)
    u = gr.sample(spec, lambda X, Y: X * Y)
    assert gr.interp_bilinear(u, (0.5, 0.5)) == pytest.approx(0.25, abs=1e-14)
    # node value reproduced
    assert gr.interp_bilinear(u, (spec.x_nodes()[3], spec.y_nodes()[5])) == pytest.approx(
        u.values[3, 5], abs=1e-14
    )
    # quadratic at a cell midpoint picks up the h^2/4 average offset
    q = gr.sample(spec, lambda X, Y: X**2)
    x_mid = spec.x_nodes()[4] + spec.hx / 2
    assert gr.interp_bilinear(q, (x_mid, 0.0)) == pytest.approx(x_mid**2 + spec.hx**2 / 4)
    with pytest.raises(ValueError):
        gr.interp_bilinear(u, (1.5, 0.0))


def test_csv_round_trip(tmp_path):
    spec = gr.GridSpec(-1.0, 1.0, 0.0, 2.0, 7, 5)
    rng = np.random.default_rng(3)
    u = gr.GridFunction(spec, rng.normal(size=(7, 5)))
    path = tmp_path / "u.csv"
    gr.write_csv(u, path)
    header = path.read_text().splitlines()[0]
    assert header == "x1,x2,value"
    v = gr.read_csv(path)
    assert v.spec == spec
    np.testing.assert_array_equal(v.values, u.values)
