"""GeoJSON and point-CSV ingestion plus result serialization.

Incoming features become an immutable dataset: original geometries kept for
rendering, one planar representative coordinate per feature, and a numeric
table over every property that is present in all features and numeric in at
least one. Longitude/latitude inputs (detected by bounds, overridable) are
projected with a local equirectangular projection about the dataset
centroid. Surfaces are serialized back to GeoJSON in the original feature
order, with dropped observations present but null.
"""

import csv
import io
import json
import math
import uuid
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import DataMatrix, GwSurface, apply_significance_mask
from .errors import (
    EmptyCollectionError,
    FewerThanThreeFeaturesError,
    IndexMismatchError,
    MalformedInputError,
    MissingColumnError,
    MixedGeometryError,
    NonNumericCoordinateError,
    SpecMismatchError,
    TooFewCompleteError,
)

EARTH_RADIUS_M = 6371008.8

#: Result property names, in serialization order.
RESULT_PROPS = ("coef", "pval", "valid", "sig_001", "sig_005",
                "value_a", "value_b", "effective_n")


@dataclass(frozen=True)
class VariableStats:
    name: str
    missing: int
    vmin: Optional[float]
    vmax: Optional[float]

    def to_dict(self) -> dict:
        return {"name": self.name, "missing": self.missing,
                "min": self.vmin, "max": self.vmax}


@dataclass(frozen=True)
class VariableSchema:
    variables: tuple

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise MalformedInputError("duplicate variable names")

    @property
    def names(self) -> tuple:
        return tuple(v.name for v in self.variables)

    def to_dict(self) -> dict:
        return {"variables": [v.to_dict() for v in self.variables]}


@dataclass(frozen=True)
class Dataset:
    """Immutable ingested dataset: geometries, planar coords, numeric table."""

    id: str
    features: tuple  # original geometry dicts, input order
    coords: np.ndarray  # (n, 2) planar
    values: np.ndarray  # (n, m) float64, NaN where missing
    variable_names: tuple
    schema: VariableSchema
    geometry_kind: str  # "point" | "polygon"
    projected: bool  # True when lon/lat input was projected

    @property
    def n(self) -> int:
        return len(self.features)


def _schema_from_table(values: np.ndarray, names) -> VariableSchema:
    stats = []
    for c, name in enumerate(names):
        col = values[:, c]
        finite = col[np.isfinite(col)]
        stats.append(VariableStats(
            name=name,
            missing=int(col.size - finite.size),
            vmin=float(finite.min()) if finite.size else None,
            vmax=float(finite.max()) if finite.size else None,
        ))
    return VariableSchema(variables=tuple(stats))


def _looks_lonlat(coords: np.ndarray) -> bool:
    x = coords[:, 0]
    y = coords[:, 1]
    return bool(np.all(np.abs(x) <= 180.0) and np.all(np.abs(y) <= 90.0))


def project_lonlat(coords: np.ndarray) -> np.ndarray:
    """Local equirectangular projection about the dataset centroid (meters)."""
    lon = np.radians(coords[:, 0])
    lat = np.radians(coords[:, 1])
    phi0 = float(lat.mean())
    x = EARTH_RADIUS_M * lon * math.cos(phi0)
    y = EARTH_RADIUS_M * lat
    return np.column_stack([x, y])


def _finalize_coords(raw: np.ndarray, assume_planar: bool):
    if not assume_planar and _looks_lonlat(raw):
        return project_lonlat(raw), True
    return raw, False


# --- polygon anchors ---

def _ring_sums(ring):
    # Shoelace accumulators: (2*area, 6*area*cx, 6*area*cy).
    a2 = 0.0
    cx6 = 0.0
    cy6 = 0.0
    npts = len(ring)
    for e in range(npts):
        x0, y0 = float(ring[e][0]), float(ring[e][1])
        x1, y1 = float(ring[(e + 1) % npts][0]), float(ring[(e + 1) % npts][1])
        cross = x0 * y1 - x1 * y0
        a2 += cross
        cx6 += (x0 + x1) * cross
        cy6 += (y0 + y1) * cross
    return a2, cx6, cy6


def _ring_vertices(ring):
    pts = [(float(p[0]), float(p[1])) for p in ring]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    return pts


def _centroid_from_rings(all_rings):
    a2 = 0.0
    cx6 = 0.0
    cy6 = 0.0
    vertices = []
    for ring in all_rings:
        if len(ring) < 3:
            vertices.extend(_ring_vertices(ring))
            continue
        ra, rcx, rcy = _ring_sums(ring)
        a2 += ra
        cx6 += rcx
        cy6 += rcy
        vertices.extend(_ring_vertices(ring))
    if not vertices:
        raise MalformedInputError("polygon has no vertices")
    xs = [p[0] for p in vertices]
    ys = [p[1] for p in vertices]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    # Degenerate (zero-area) geometry: fall back to the vertex mean.
    if abs(a2 / 2.0) <= 1e-12 * span * span:
        return (sum(xs) / len(xs), sum(ys) / len(ys))
    area = a2 / 2.0
    return (cx6 / (6.0 * area), cy6 / (6.0 * area))


def representative_point(polygon) -> tuple:
    """Area-weighted centroid of a polygon (list of rings); holes subtract.

    Rings are combined through signed shoelace areas, so any consistent
    winding works and oppositely wound holes subtract. Zero-area polygons
    fall back to the mean of their vertices.
    """
    if not polygon:
        raise MalformedInputError("polygon has no rings")
    return _centroid_from_rings(polygon)


def representative_point_multi(parts) -> tuple:
    """Area-weighted centroid of a multipolygon (list of polygons)."""
    if not parts:
        raise MalformedInputError("multipolygon has no parts")
    rings = [ring for part in parts for ring in part]
    return _centroid_from_rings(rings)


# --- parsing ---

def _as_number(value) -> float:
    # JSON booleans are ints in Python; they are not numeric variables.
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return float("nan")
    v = float(value)
    return v if math.isfinite(v) else float("nan")


def _decode(data) -> str:
    if isinstance(data, str):
        return data
    try:
        return bytes(data).decode("utf-8-sig")
    except (UnicodeDecodeError, TypeError) as err:
        raise MalformedInputError(f"input is not valid UTF-8: {err}") from err


def _point_coord(geom, idx):
    c = geom.get("coordinates")
    if (not isinstance(c, (list, tuple)) or len(c) < 2
            or isinstance(c[0], bool) or isinstance(c[1], bool)
            or not isinstance(c[0], (int, float)) or not isinstance(c[1], (int, float))):
        raise MalformedInputError(f"feature {idx}: malformed Point coordinates")
    x, y = float(c[0]), float(c[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise MalformedInputError(f"feature {idx}: non-finite coordinates")
    return (x, y)


def parse_geojson(data, assume_planar: bool = False) -> Dataset:
    """Parse a GeoJSON FeatureCollection of points or (multi)polygons.

    Polygons are anchored at their area-weighted centroid. Properties
    present in every feature and numeric in at least one become schema
    variables; non-numeric or absent cells are missing. Coordinates whose
    bounds fit [-180, 180] x [-90, 90] are treated as lon/lat and projected
    unless ``assume_planar`` is set.
    """
    text = _decode(data)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise MalformedInputError(f"invalid JSON: {err}") from err
    if not isinstance(obj, dict) or obj.get("type") != "FeatureCollection":
        raise MalformedInputError("expected a GeoJSON FeatureCollection")
    feats = obj.get("features")
    if not isinstance(feats, list):
        raise MalformedInputError("FeatureCollection has no features array")
    if len(feats) == 0:
        raise EmptyCollectionError("FeatureCollection is empty")
    if len(feats) < 3:
        raise FewerThanThreeFeaturesError(f"need at least 3 features, got {len(feats)}")

    kinds = set()
    geoms = []
    props_list = []
    for idx, f in enumerate(feats):
        if not isinstance(f, dict) or f.get("type") != "Feature":
            raise MalformedInputError(f"feature {idx} is not a GeoJSON Feature")
        geom = f.get("geometry")
        if not isinstance(geom, dict):
            raise MalformedInputError(f"feature {idx} has no geometry")
        gtype = geom.get("type")
        if gtype == "Point":
            kinds.add("point")
        elif gtype in ("Polygon", "MultiPolygon"):
            kinds.add("polygon")
        else:
            raise MixedGeometryError(
                f"feature {idx}: unsupported geometry type {gtype!r} "
                "(only Point, Polygon, MultiPolygon)")
        geoms.append(geom)
        props = f.get("properties")
        if props is None:
            props = {}
        if not isinstance(props, dict):
            raise MalformedInputError(f"feature {idx} has non-object properties")
        props_list.append(props)
    if len(kinds) != 1:
        raise MixedGeometryError("collection mixes point and polygon geometries")
    geometry_kind = kinds.pop()

    raw_coords = np.empty((len(feats), 2))
    for idx, geom in enumerate(geoms):
        if geom["type"] == "Point":
            raw_coords[idx] = _point_coord(geom, idx)
        else:
            rings = geom.get("coordinates")
            if not isinstance(rings, list) or not rings:
                raise MalformedInputError(f"feature {idx}: malformed polygon coordinates")
            try:
                if geom["type"] == "Polygon":
                    raw_coords[idx] = representative_point(rings)
                else:
                    raw_coords[idx] = representative_point_multi(rings)
            except (TypeError, ValueError, IndexError) as err:
                raise MalformedInputError(f"feature {idx}: malformed polygon: {err}") from err
        if not np.all(np.isfinite(raw_coords[idx])):
            raise MalformedInputError(f"feature {idx}: non-finite anchor coordinate")

    shared = [k for k in props_list[0] if all(k in p for p in props_list)]
    columns = {}
    for key in shared:
        col = np.array([_as_number(p[key]) for p in props_list])
        if np.any(np.isfinite(col)):
            columns[str(key)] = col
    names = tuple(columns)
    if names:
        values = np.column_stack([columns[k] for k in names])
    else:
        values = np.empty((len(feats), 0))

    coords, projected = _finalize_coords(raw_coords, assume_planar)
    return Dataset(
        id=uuid.uuid4().hex,
        features=tuple(geoms),
        coords=coords,
        values=values,
        variable_names=names,
        schema=_schema_from_table(values, names),
        geometry_kind=geometry_kind,
        projected=projected,
    )


def _csv_cell(cell: str) -> float:
    cell = cell.strip()
    if not cell:
        return float("nan")
    try:
        v = float(cell)
    except ValueError:
        return float("nan")
    return v if math.isfinite(v) else float("nan")


def parse_point_csv(data, x_col: str, y_col: str, assume_planar: bool = False) -> Dataset:
    """Parse a headered, comma-delimited CSV of point observations.

    ``x_col``/``y_col`` must exist and parse as finite numbers in every row;
    the remaining columns become schema variables when numeric in at least
    one row.
    """
    text = _decode(data)
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise MalformedInputError("CSV input is empty")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise MalformedInputError("duplicate CSV column names")
    for needed in (x_col, y_col):
        if needed not in header:
            raise MissingColumnError(f"column {needed!r} not in CSV header")
    body = rows[1:]
    if len(body) < 3:
        raise FewerThanThreeFeaturesError(f"need at least 3 rows, got {len(body)}")

    xi = header.index(x_col)
    yi = header.index(y_col)
    n = len(body)
    raw_coords = np.empty((n, 2))
    for r, row in enumerate(body):
        if len(row) != len(header):
            raise MalformedInputError(
                f"row {r + 1} has {len(row)} cells, expected {len(header)}")
        try:
            x = float(row[xi])
            y = float(row[yi])
        except ValueError as err:
            raise NonNumericCoordinateError(f"row {r + 1}: {err}") from err
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonNumericCoordinateError(f"row {r + 1}: non-finite coordinate")
        raw_coords[r] = (x, y)

    var_cols = [c for c in range(len(header)) if c not in (xi, yi)]
    columns = {}
    for c in var_cols:
        col = np.array([_csv_cell(row[c]) for row in body])
        if np.any(np.isfinite(col)):
            columns[header[c]] = col
    names = tuple(columns)
    if names:
        values = np.column_stack([columns[k] for k in names])
    else:
        values = np.empty((n, 0))

    features = tuple({"type": "Point", "coordinates": [float(x), float(y)]}
                     for x, y in raw_coords)
    coords, projected = _finalize_coords(raw_coords, assume_planar)
    return Dataset(
        id=uuid.uuid4().hex,
        features=features,
        coords=coords,
        values=values,
        variable_names=names,
        schema=_schema_from_table(values, names),
        geometry_kind="point",
        projected=projected,
    )


# --- completion and serialization ---

def listwise_complete(dataset: Dataset, variables):
    """Drop observations with a missing cell among the selected variables only.

    Returns ``(DataMatrix, coords, kept_indices)``; ``kept_indices`` aligns
    results back to the original feature order.
    """
    variables = list(variables)
    for v in variables:
        if v not in dataset.variable_names:
            raise SpecMismatchError(f"variable {v!r} not in dataset")
    idx = [dataset.variable_names.index(v) for v in variables]
    sub = dataset.values[:, idx]
    keep = np.all(np.isfinite(sub), axis=1)
    kept = np.flatnonzero(keep)
    if kept.size < 3:
        raise TooFewCompleteError(
            f"only {kept.size} complete observations among {variables}")
    dm = DataMatrix(values=sub[keep], variable_names=tuple(variables))
    return dm, dataset.coords[keep], kept


def _jsonable(v: float):
    return None if (v is None or not math.isfinite(v)) else float(v)


def serialize_result(dataset: Dataset, surface: GwSurface, displayed_pair,
                     kept_indices) -> dict:
    """Surface as a GeoJSON FeatureCollection in the original feature order.

    Kept observations carry coef/pval/valid/sig_001/sig_005/value_a/value_b/
    effective_n; dropped observations appear with every result property
    null. Invalid cells serialize coef as null and are never significant.
    """
    kept = np.asarray(kept_indices, dtype=np.int64)
    n_total = dataset.n
    if kept.ndim != 1 or kept.size != len(surface):
        raise IndexMismatchError("kept_indices length must match the surface")
    if kept.size and (kept.min() < 0 or kept.max() >= n_total):
        raise IndexMismatchError("kept_indices out of range for the dataset")
    if np.any(np.diff(kept) <= 0):
        raise IndexMismatchError("kept_indices must be strictly increasing")

    q = surface.pair_index(displayed_pair[0], displayed_pair[1])
    # value_a/value_b follow the requested pair orientation.
    col_a = dataset.variable_names.index(displayed_pair[0])
    col_b = dataset.variable_names.index(displayed_pair[1])

    sig001 = apply_significance_mask(surface, displayed_pair, 0.01).significant
    sig005 = apply_significance_mask(surface, displayed_pair, 0.05).significant

    pos = np.full(n_total, -1, dtype=np.int64)
    pos[kept] = np.arange(kept.size)

    features_out = []
    for orig in range(n_total):
        j = int(pos[orig])
        if j < 0:
            props = {key: None for key in RESULT_PROPS}
        else:
            props = {
                "coef": _jsonable(surface.coefficients[j, q]),
                "pval": _jsonable(surface.p_values[j, q]),
                "valid": bool(surface.valid[j, q]),
                "sig_001": bool(sig001[j]),
                "sig_005": bool(sig005[j]),
                "value_a": _jsonable(dataset.values[orig, col_a]),
                "value_b": _jsonable(dataset.values[orig, col_b]),
                "effective_n": _jsonable(surface.effective_n[j]),
            }
        features_out.append({
            "type": "Feature",
            "geometry": dataset.features[orig],
            "properties": props,
        })
    return {"type": "FeatureCollection", "features": features_out}


def document_to_json(doc: dict) -> str:
    """Canonical compact JSON used by both the CLI and the HTTP service.

    Floats round-trip exactly (shortest-repr serialization), which more than
    covers the 12-significant-digit contract.
    """
    return json.dumps(doc, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def dataset_to_geojson(dataset: Dataset) -> dict:
    """Dataset back out as GeoJSON (used for synthetic sample files)."""
    features = []
    for i in range(dataset.n):
        props = {}
        for c, name in enumerate(dataset.variable_names):
            props[name] = _jsonable(dataset.values[i, c])
        features.append({
            "type": "Feature",
            "geometry": dataset.features[i],
            "properties": props,
        })
    return {"type": "FeatureCollection", "features": features}
