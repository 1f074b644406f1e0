"""Deterministic synthetic point datasets with spatially varying correlation.

Observations are scattered uniformly over a 1000-unit planar square (the
extent deliberately exceeds lon/lat bounds so nothing downstream mistakes it
for geographic degrees). Two smooth latent fields are mixed with
location-dependent coefficients; in particular the correlation between the
first two variables follows cos(pi * x/side), so it is strongly positive on
the west edge, strongly negative on the east edge, and near zero globally.
Small-bandwidth surfaces therefore attain both signs while full-extent
windows flatten out.
"""

import numpy as np

from .geodata import Dataset, _schema_from_table


def synth_dataset(n: int, n_vars: int = 3, seed: int = 0) -> Dataset:
    """Generate ``n`` points with ``n_vars`` correlated variables.

    The same (n, n_vars, seed) triple always produces the same bytes.
    """
    if n < 10:
        raise ValueError(f"need n >= 10, got {n}")
    if n_vars < 2:
        raise ValueError(f"need at least 2 variables, got {n_vars}")
    side = 1000.0
    rng = np.random.default_rng(seed)
    xy = rng.uniform(0.0, side, size=(n, 2))
    sx = xy[:, 0] / side
    sy = xy[:, 1] / side

    f1 = np.sin(2.0 * np.pi * sx) * np.cos(np.pi * sy) + 0.6 * np.sin(3.1 * sx + 1.7 * sy)
    f2 = np.cos(2.0 * np.pi * sy) * np.sin(np.pi * sx) + 0.6 * np.cos(2.3 * sx - 1.1 * sy)
    noise = rng.normal(0.0, 0.15, size=(n, n_vars))

    cols = []
    for c in range(n_vars):
        if c == 0:
            base = f1
        elif c == 1:
            # Sign-varying local association with var_0.
            base = np.cos(np.pi * sx) * f1 + 0.4 * f2
        elif c == 2:
            base = f2
        else:
            base = (np.cos(1.3 * c + np.pi * sx) * f1
                    + np.sin(0.7 * c + np.pi * sy) * f2)
        cols.append(base + noise[:, c])
    values = np.column_stack(cols)
    names = tuple(f"var_{c}" for c in range(n_vars))

    features = tuple({"type": "Point", "coordinates": [float(x), float(y)]}
                     for x, y in xy)
    return Dataset(
        id=f"synth-{seed}-{n}-{n_vars}",
        features=features,
        coords=xy,
        values=values,
        variable_names=names,
        schema=_schema_from_table(values, names),
        geometry_kind="point",
        projected=False,
    )
