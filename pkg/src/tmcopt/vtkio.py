"""Legacy ASCII VTK export and CSV trace writers.

Legacy ASCII keeps the artifacts diffable in tests and readable by every
post-processor.  All numbers are printed with 9 significant digits in
locale-independent form; identical inputs produce byte-identical files.
"""

import numpy as np

__all__ = ["export_vtk", "sed_log_rel", "write_csv"]


def _fmt(v):
    return f"{float(v):.9g}"


def sed_log_rel(sed):
    """log10 of the field normalized by its max, floored at 1e-12."""
    sed = np.asarray(sed, dtype=float)
    m = sed.max() if sed.size else 0.0
    if m <= 0.0:
        return np.full(sed.shape, -12.0)
    return np.log10(np.maximum(sed / m, 1e-12))


def export_vtk(mesh, u, cell_fields, path):
    """Write the deformed mesh with displacement and cell scalar fields.

    Points are the deformed coordinates x0 + u; cells are quads in the
    mesh's node order (counterclockwise).  ``cell_fields`` maps field
    names to per-element arrays.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.n_dof,):
        raise ValueError(f"displacement must have shape ({mesh.n_dof},)")
    for name, f in cell_fields.items():
        if np.asarray(f).shape != (mesh.n_elems,):
            raise ValueError(f"cell field {name!r} does not match the element count")

    disp = u.reshape(-1, 2)
    pts = mesh.node_coords + disp
    conn = mesh.elem_dof_map[:, 0::2] // 2  # node ids in (UL, LL, LR, UR) order

    lines = [
        "# vtk DataFile Version 3.0",
        "tmcopt export",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {mesh.n_nodes} double",
    ]
    for x, y in pts:
        lines.append(f"{_fmt(x)} {_fmt(y)} 0")
    lines.append(f"CELLS {mesh.n_elems} {5 * mesh.n_elems}")
    for row in conn:
        lines.append("4 " + " ".join(str(int(n)) for n in row))
    lines.append(f"CELL_TYPES {mesh.n_elems}")
    lines.extend(["9"] * mesh.n_elems)
    lines.append(f"POINT_DATA {mesh.n_nodes}")
    lines.append("VECTORS displacement double")
    for ux, uy in disp:
        lines.append(f"{_fmt(ux)} {_fmt(uy)} 0")
    lines.append(f"CELL_DATA {mesh.n_elems}")
    for name, f in cell_fields.items():
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(_fmt(v) for v in np.asarray(f, dtype=float))

    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_csv(path, header, rows):
    """Plain CSV with a header row; floats at 12 significant digits."""

    def cell(v):
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return f"{float(v):.12g}"

    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell(v) for v in row) + "\n")
    return path
