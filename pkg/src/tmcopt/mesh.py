"""Structured bilinear-quad grid: node/element numbering and DOF maps.

Numbering convention: nodes are numbered column-major, increasing down
each column (top-left node is 0), columns left to right.  Each element
lists its four nodes counterclockwise starting at the upper-left corner:
(UL, LL, LR, UR).  Node ``n`` owns DOFs ``2n`` (x) and ``2n + 1`` (y).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["GridMesh", "build_grid", "select_nodes", "select_elements"]


@dataclass(frozen=True)
class GridMesh:
    """Immutable structured grid of bilinear quads.

    Attributes
    ----------
    nelx, nely : int
        Element counts along x and y.
    Lx, Ly : float
        Physical extents (mm).
    node_coords : (n_nodes, 2) float array
        Reference coordinates, y measured upward from the bottom edge.
    elem_dof_map : (n_elems, 8) int array
        Global DOF indices per element, node order (UL, LL, LR, UR),
        x-DOF before y-DOF for each node.
    """

    nelx: int
    nely: int
    Lx: float
    Ly: float
    node_coords: np.ndarray
    elem_dof_map: np.ndarray

    @property
    def n_nodes(self):
        return (self.nelx + 1) * (self.nely + 1)

    @property
    def n_dof(self):
        return 2 * self.n_nodes

    @property
    def n_elems(self):
        return self.nelx * self.nely

    @property
    def dx(self):
        return self.Lx / self.nelx

    @property
    def dy(self):
        return self.Ly / self.nely

    def node_id(self, i, j_top):
        """Node index for column ``i`` and row ``j_top`` counted from the top."""
        return i * (self.nely + 1) + j_top

    def elem_centroids(self):
        """(n_elems, 2) centroid coordinates, ordered like elem_dof_map rows."""
        ei = np.arange(self.n_elems) // self.nely
        ej = np.arange(self.n_elems) % self.nely  # counted from the top
        cx = (ei + 0.5) * self.dx
        cy = self.Ly - (ej + 0.5) * self.dy
        return np.column_stack([cx, cy])


def build_grid(nelx, nely, Lx, Ly):
    """Build a ``nelx`` x ``nely`` grid over a ``Lx`` x ``Ly`` rectangle.

    Elements are numbered column-major, down each column then left to
    right, matching the node numbering.
    """
    if nelx < 1 or nely < 1:
        raise ValueError(f"element counts must be >= 1, got ({nelx}, {nely})")
    if Lx <= 0 or Ly <= 0:
        raise ValueError(f"domain extents must be positive, got ({Lx}, {Ly})")

    nelx, nely = int(nelx), int(nely)
    dx, dy = Lx / nelx, Ly / nely

    cols, rows = np.meshgrid(np.arange(nelx + 1), np.arange(nely + 1), indexing="ij")
    coords = np.column_stack([(cols * dx).ravel(), (Ly - rows * dy).ravel()])

    ei = np.arange(nelx * nely) // nely
    ej = np.arange(nelx * nely) % nely
    n_ul = ei * (nely + 1) + ej
    nodes = np.column_stack([n_ul, n_ul + 1, n_ul + nely + 2, n_ul + nely + 1])
    edof = np.empty((nelx * nely, 8), dtype=np.int64)
    edof[:, 0::2] = 2 * nodes
    edof[:, 1::2] = 2 * nodes + 1

    coords.setflags(write=False)
    edof.setflags(write=False)
    return GridMesh(nelx, nely, float(Lx), float(Ly), coords, edof)


def select_nodes(mesh, predicate):
    """Node indices (ascending) whose coordinates satisfy ``predicate``.

    ``predicate`` receives the x and y coordinate arrays and must return
    a boolean mask.
    """
    mask = np.asarray(predicate(mesh.node_coords[:, 0], mesh.node_coords[:, 1]))
    return np.flatnonzero(mask)


def select_elements(mesh, predicate):
    """Element indices (ascending) whose centroids satisfy ``predicate``."""
    c = mesh.elem_centroids()
    mask = np.asarray(predicate(c[:, 0], c[:, 1]))
    return np.flatnonzero(mask)
