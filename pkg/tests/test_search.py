import math

import numpy as np
import pytest

from qswlab import _kernels, graphs, search
from qswlab.exceptions import (
    DegenerateTopError,
    DisconnectedGraphError,
    OracleNeverSucceeds,
)


def test_graph_hamiltonian_top_eigenvalue_one():
    g = graphs.gen_er(30, 0.3, seed=2)
    g = graphs.giant_component(g)
    for kind in search.GRAPH_MATRIX_KINDS:
        h = search.graph_hamiltonian(g, kind)
        assert abs(np.linalg.eigvalsh(h)[-1] - 1.0) < 1e-10


def test_graph_hamiltonian_disconnected():
    g = graphs.Graph(4, frozenset({(0, 1), (2, 3)}))
    with pytest.raises(DisconnectedGraphError):
        search.graph_hamiltonian(g, "laplacian")


def test_laplacian_kind_top_eigenvector_uniform():
    g = graphs.gen_ba(40, 2, seed=8)
    h = search.graph_hamiltonian(g, "laplacian")
    w, v = np.linalg.eigh(h)
    vec = np.abs(v[:, -1])
    assert np.abs(vec - 1 / math.sqrt(40)).max() < 1e-10


def test_normalized_laplacian_top_eigenvector_sqrt_degrees():
    g = graphs.gen_ba(40, 2, seed=8)
    h = search.graph_hamiltonian(g, "normalized_laplacian")
    w, v = np.linalg.eigh(h)
    want = np.sqrt(g.degrees() / (2 * len(g.edges)))
    assert np.abs(np.abs(v[:, -1]) - want).max() < 1e-10


def test_shift_rescale_balances_spectrum():
    g = graphs.star(100)
    h = search.shift_rescale(graphs.adjacency(g))
    w = np.linalg.eigvalsh(h)
    assert abs(w[-1] - 1.0) < 1e-10
    assert abs(abs(w[-2]) - abs(w[0])) < 1e-10
    assert abs(w[-2] - 1 / 3) < 1e-9  # the star balance point


def test_shift_rescale_idempotent_and_degenerate():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((6, 6))
    h = search.shift_rescale(m + m.T)
    assert np.abs(search.shift_rescale(h) - h).max() < 1e-12
    with pytest.raises(DegenerateTopError):
        search.shift_rescale(np.eye(4))


def test_optimal_shift_success_bound():
    assert search.optimal_shift_success_bound(0.2, 0.2) == 1.0
    assert search.optimal_shift_success_bound(1.0 - 1e-15, -0.5) < 1e-12


def test_search_stats_examples():
    n = 50
    hg = search.graph_hamiltonian(graphs.complete(n), "adjacency")
    st = search.search_stats(hg, 7)
    assert abs(st.eps - 1 / n) < 1e-10

    star = graphs.star(n)
    hub = search.search_stats(search.graph_hamiltonian(star, "adjacency"), 0)
    assert abs(hub.eps - 0.5) < 1e-10

    g = graphs.gen_ba(30, 2, seed=1)
    hnl = search.graph_hamiltonian(g, "normalized_laplacian")
    for w in (0, 15):
        st = search.search_stats(hnl, w)
        assert abs(st.eps - g.degree(w) / (2 * len(g.edges))) < 1e-10


def test_search_stats_vertex_transitive_independent_of_w():
    hg = search.graph_hamiltonian(graphs.complete(12), "adjacency")
    stats = [search.search_stats(hg, w) for w in range(12)]
    for st in stats[1:]:
        assert abs(st.s1 - stats[0].s1) < 1e-10
        assert abs(st.predicted_t - stats[0].predicted_t) < 1e-10


def test_run_search_complete_graph():
    n = 64
    a = graphs.adjacency(graphs.complete(n))
    good = search.run_search(a, 0, 1 / (n - 2), "uniform",
                             np.array([math.pi * math.sqrt(n) / 2]))
    assert good.probs[0] >= 0.9
    late = search.run_search(a, 0, 1 / (n - 2), "uniform",
                             np.array([math.pi * math.sqrt(n)]))
    assert late.probs[0] < 5.0 / n


def test_run_search_sign_flip_invariance():
    g = graphs.gen_er(12, 0.5, seed=3)
    g = graphs.giant_component(g)
    hg = search.graph_hamiltonian(g, "laplacian")
    times = np.linspace(0, 10, 21)
    # flipping the sign of the whole search Hamiltonian conjugates the
    # amplitudes, so probabilities are unchanged for real H and real start
    h_full = 0.7 * hg
    h_full[2, 2] += 1.0
    direct = search.run_search(-h_full, 2, 0.0, "uniform", times)
    ref = search.run_search(h_full, 2, 0.0, "uniform", times)
    assert np.abs(direct.probs - ref.probs).max() < 1e-12


def test_run_search_p0_is_eps_from_principal_start():
    g = graphs.gen_ba(20, 2, seed=9)
    hg = search.graph_hamiltonian(g, "normalized_laplacian")
    st = search.search_stats(hg, 5)
    run = search.run_search(hg, 5, "S1", "principal", np.array([0.0]))
    assert abs(run.probs[0] - st.eps) < 1e-10


def test_caption_gamma_value():
    hg = search.graph_hamiltonian(graphs.complete(10), "adjacency")
    st = search.search_stats(hg, 0)
    assert abs(search.caption_gamma(hg, 0) - st.s1 / (1 - st.eps)) < 1e-12


def test_classical_mfpt_closed_values():
    # complete graph: (n-1)^2 / n
    assert search.classical_mfpt(graphs.complete(5), 0) == pytest.approx(16 / 5)
    # star hub: 1/2 regardless of size
    assert search.classical_mfpt(graphs.star(20), 0) == pytest.approx(0.5)


def test_classical_mfpt_vs_monte_carlo():
    for g, w in ((graphs.complete(5), 0), (graphs.star(12), 3)):
        exact = search.classical_mfpt(g, w)
        est = search.classical_mfpt_mc(g, w, walks=40000, seed=17)
        assert abs(est - exact) / exact < 0.05


def test_classical_mfpt_lower_bound_random_graphs():
    rng = np.random.default_rng(23)
    checked = 0
    while checked < 30:
        g = graphs.gen_er(rng.integers(5, 15), 0.4, int(rng.integers(2**32)))
        if not graphs.is_connected(g):
            continue
        w = int(rng.integers(g.n))
        assert search.classical_mfpt(g, w) >= search.classical_mfpt_lower_bound(g, w) - 1e-9
        checked += 1


def test_kernel_backends_agree():
    g = graphs.gen_er(40, 0.2, seed=31)
    g = graphs.giant_component(g)
    indptr, indices = search._csr_arrays(g)
    rng = np.random.default_rng(0)
    starts = rng.integers(0, g.n, size=500).astype(np.int64)
    raw = rng.random((500, 2000))
    args = (indptr, indices, starts, np.int64(0), np.int64(2000), raw)
    a = _kernels.hitting_steps_numpy(*args)
    b = _kernels.hitting_steps_kernel(*args)
    assert np.array_equal(a, b)


def test_geometric_schedule():
    total, k = search.geometric_schedule(0.0, 1.0, 2.0, 100, lambda t: True, c=3.0)
    assert k == 0 and total == 3.0

    seen = []
    with pytest.raises(OracleNeverSucceeds):
        search.geometric_schedule(0.0, 1.0, 1.5, 50,
                                  lambda t: (seen.append(t), False)[1])
    ratios = np.diff(np.log(seen))
    assert np.abs(ratios - 1.0 / 1.5).max() < 1e-12

    # total cost stays within the geometric-series factor of the hit time
    alpha = 0.43
    for n in (100, 1000, 10000):
        total, k = search.geometric_schedule(0.1, 1.0, 2.0, n,
                                             lambda t, n=n: t >= n**alpha)
        factor = math.exp(1.0 / 2.0) / (1 - math.exp(-1.0 / 2.0))
        assert total / n**alpha <= factor + 1e-9


def test_lambert_bound():
    assert search.lambert_bound(1.0 + 1e-9) < 1e-3
    assert search.lambert_bound(1e6) > 0.99
    with pytest.raises(ValueError):
        search.lambert_bound(0.5)
    # defining-equation residuals
    for p0 in (1.5, 2.0, 10.0):
        x = (1 - p0) / (math.e * p0)
        for branch in (0, -1):
            w = search._lambert_branch(x, branch)
            assert abs(w * math.exp(w) - x) <= 1e-12


def test_spectral_report():
    rep = search.spectral_report(graphs.complete(16))
    assert rep.overlap == pytest.approx(1.0)
    assert rep.maxdev < 1e-12
    g = graphs.gen_er(400, 0.1, seed=77)
    rep = search.spectral_report(g)
    np_ = 400 * 0.1
    assert abs(rep.lam1 / np_ - 1.0) <= math.sqrt(8 * math.log(math.sqrt(2) * 400) / np_)


def test_complete_plus_leaf_eps_scaling():
    """Leaf overlap falls like 1/n^2, interior overlap like 1/n."""
    eps_leaf, eps_int = [], []
    for n in (40, 80, 160):
        g = graphs.complete_plus_leaf(n)
        h = search.graph_hamiltonian(g, "normalized_laplacian")
        eps_leaf.append(search.search_stats(h, n - 1).eps)
        eps_int.append(search.search_stats(h, 2).eps)
    slope = np.polyfit(np.log([40, 80, 160]), np.log(eps_leaf), 1)[0]
    assert -2.4 < slope < -1.6
    slope_i = np.polyfit(np.log([40, 80, 160]), np.log(eps_int), 1)[0]
    assert -1.4 < slope_i < -0.6
