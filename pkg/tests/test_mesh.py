import numpy as np
import pytest

from tmcopt.mesh import build_grid, select_elements, select_nodes


def test_single_element_counts():
    m = build_grid(1, 1, 1.0, 1.0)
    assert m.n_nodes == 4
    assert m.n_dof == 8
    assert m.n_elems == 1
    assert sorted(m.elem_dof_map[0]) == list(range(8))


def test_dof_count_formula():
    assert build_grid(62, 30, 105.0, 50.0).n_dof == 2 * 63 * 31 == 3906
    assert build_grid(160, 160, 100.0, 100.0).n_dof == 51842


@pytest.mark.parametrize("nelx,nely,Lx,Ly", [(0, 3, 1, 1), (3, 0, 1, 1),
                                             (3, 3, -1, 1), (3, 3, 1, 0)])
def test_invalid_dimensions_rejected(nelx, nely, Lx, Ly):
    with pytest.raises(ValueError):
        build_grid(nelx, nely, Lx, Ly)


def test_dof_indices_in_range_and_unique_per_element():
    m = build_grid(5, 4, 2.5, 2.0)
    assert m.elem_dof_map.min() >= 0
    assert m.elem_dof_map.max() < m.n_dof
    for row in m.elem_dof_map:
        assert len(set(row)) == 8


def test_every_dof_touched():
    m = build_grid(4, 3, 4.0, 3.0)
    counts = np.bincount(m.elem_dof_map.ravel(), minlength=m.n_dof)
    assert counts.min() >= 1


def test_node_sharing_counts():
    m = build_grid(3, 3, 3.0, 3.0)
    node_counts = np.bincount((m.elem_dof_map[:, 0::2] // 2).ravel(),
                              minlength=m.n_nodes)
    # corners touch 1 element, interior nodes 4
    corner_ids = [m.node_id(i, j) for i in (0, 3) for j in (0, 3)]
    for c in corner_ids:
        assert node_counts[c] == 1
    interior = [m.node_id(i, j) for i in (1, 2) for j in (1, 2)]
    for n in interior:
        assert node_counts[n] == 4


def test_connectivity_independent_of_extent():
    a = build_grid(4, 3, 1.0, 1.0)
    b = build_grid(4, 3, 40.0, 7.5)
    np.testing.assert_array_equal(a.elem_dof_map, b.elem_dof_map)


def test_node_order_counterclockwise():
    m = build_grid(3, 2, 3.0, 2.0)
    coords = m.node_coords
    for row in m.elem_dof_map:
        nodes = row[0::2] // 2
        x, y = coords[nodes, 0], coords[nodes, 1]
        shoelace = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        assert shoelace > 0
        assert shoelace == pytest.approx(m.dx * m.dy, rel=1e-12)


def test_numbering_convention():
    # nodes run down each column, columns left to right; node 0 top-left
    m = build_grid(2, 2, 2.0, 2.0)
    np.testing.assert_allclose(m.node_coords[0], [0.0, 2.0])
    np.testing.assert_allclose(m.node_coords[1], [0.0, 1.0])
    np.testing.assert_allclose(m.node_coords[3], [1.0, 2.0])
    # first element: upper-left corner block, CCW from its upper-left node
    nodes = m.elem_dof_map[0, 0::2] // 2
    np.testing.assert_allclose(m.node_coords[nodes],
                               [[0, 2], [0, 1], [1, 1], [1, 2]])


def test_select_nodes():
    m = build_grid(1, 1, 1.0, 1.0)
    left = select_nodes(m, lambda x, y: x == 0.0)
    assert left.tolist() == [0, 1]

    m2 = build_grid(62, 30, 105.0, 50.0)
    top = select_nodes(m2, lambda x, y: y == m2.Ly)
    assert top.size == 63

    none = select_nodes(m2, lambda x, y: np.zeros_like(x, dtype=bool))
    assert none.size == 0


def test_select_elements_centroids():
    m = build_grid(4, 4, 4.0, 4.0)
    bottom = select_elements(m, lambda cx, cy: cy < 1.0)
    assert bottom.size == 4
    c = m.elem_centroids()
    assert np.all(c[bottom, 1] < 1.0)
