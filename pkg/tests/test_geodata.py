import json
import math

import numpy as np
import pytest

from gwcorr.engine import AnalysisSpec, compute_surface
from gwcorr.errors import (
    EmptyCollectionError,
    FewerThanThreeFeaturesError,
    IndexMismatchError,
    MalformedInputError,
    MissingColumnError,
    MixedGeometryError,
    NonNumericCoordinateError,
    PairNotInSurfaceError,
    SpecMismatchError,
    TooFewCompleteError,
)
from gwcorr.geodata import (
    dataset_to_geojson,
    document_to_json,
    listwise_complete,
    parse_geojson,
    parse_point_csv,
    representative_point,
    representative_point_multi,
    serialize_result,
)


def point_fc(points, props):
    return json.dumps({
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature",
             "geometry": {"type": "Point", "coordinates": list(xy)},
             "properties": p}
            for xy, p in zip(points, props)
        ],
    })


PLANAR = [(0.0, 0.0), (1000.0, 0.0), (0.0, 1000.0), (1000.0, 1000.0)]


# --- parse_geojson ---

def test_parse_three_points_with_pop():
    doc = point_fc(PLANAR[:3], [{"pop": 1}, {"pop": 2}, {"pop": 3}])
    ds = parse_geojson(doc)
    assert ds.n == 3
    assert ds.geometry_kind == "point"
    assert ds.variable_names == ("pop",)
    assert ds.schema.variables[0].missing == 0
    assert (ds.schema.variables[0].vmin, ds.schema.variables[0].vmax) == (1.0, 3.0)


def test_parse_polygon_unit_square_anchor():
    square = [[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]
    doc = json.dumps({
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature",
             "geometry": {"type": "Polygon",
                          "coordinates": [[[c[0] + dx, c[1]] for c in square[0]]]},
             "properties": {"v": i}}
            for i, dx in enumerate((0.0, 5.0, 10.0))
        ],
    })
    ds = parse_geojson(doc, assume_planar=True)
    assert ds.geometry_kind == "polygon"
    np.testing.assert_allclose(ds.coords[0], (0.5, 0.5), atol=1e-12)
    np.testing.assert_allclose(ds.coords[1], (5.5, 0.5), atol=1e-12)


def test_parse_rejects_linestring():
    doc = json.dumps({
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "geometry": {"type": "Point", "coordinates": [0, 0]},
             "properties": {}},
            {"type": "Feature",
             "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]},
             "properties": {}},
            {"type": "Feature", "geometry": {"type": "Point", "coordinates": [1, 1]},
             "properties": {}},
        ],
    })
    with pytest.raises(MixedGeometryError):
        parse_geojson(doc)


def test_parse_rejects_mixed_point_polygon():
    doc = json.dumps({
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "geometry": {"type": "Point", "coordinates": [0, 0]},
             "properties": {}},
            {"type": "Feature",
             "geometry": {"type": "Polygon",
                          "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 0]]]},
             "properties": {}},
            {"type": "Feature", "geometry": {"type": "Point", "coordinates": [1, 1]},
             "properties": {}},
        ],
    })
    with pytest.raises(MixedGeometryError):
        parse_geojson(doc)


def test_parse_empty_collection():
    with pytest.raises(EmptyCollectionError):
        parse_geojson(json.dumps({"type": "FeatureCollection", "features": []}))


def test_parse_fewer_than_three():
    doc = point_fc(PLANAR[:2], [{}, {}])
    with pytest.raises(FewerThanThreeFeaturesError):
        parse_geojson(doc)


def test_parse_malformed_json():
    with pytest.raises(MalformedInputError):
        parse_geojson(b"{not json")
    with pytest.raises(MalformedInputError):
        parse_geojson(json.dumps({"type": "Topology"}))


def test_parse_variable_selection_rules():
    props = [
        {"a": 1, "b": "x", "c": 2.5, "d": True},
        {"a": 2, "b": "y", "c": None, "d": False},
        {"a": 3, "b": "z", "c": 7.0, "d": True, "extra": 9},
    ]
    ds = parse_geojson(point_fc(PLANAR[:3], props))
    # b is never numeric, d is boolean, extra is not shared -> only a and c
    assert ds.variable_names == ("a", "c")
    stats = {v.name: v for v in ds.schema.variables}
    assert stats["a"].missing == 0
    assert stats["c"].missing == 1  # the None cell


def test_parse_lonlat_detection_and_projection():
    pts = [(139.70, 35.60), (139.75, 35.65), (139.72, 35.68)]
    ds = parse_geojson(point_fc(pts, [{"v": i} for i in range(3)]))
    assert ds.projected
    # planar override leaves coordinates untouched
    ds2 = parse_geojson(point_fc(pts, [{"v": i} for i in range(3)]), assume_planar=True)
    assert not ds2.projected
    np.testing.assert_array_equal(ds2.coords, np.asarray(pts))
    # original geometry is echoed unprojected
    assert ds.features[0]["coordinates"] == [139.70, 35.60]


def _haversine(p, q):
    R = 6371008.8
    lon1, lat1, lon2, lat2 = map(math.radians, (p[0], p[1], q[0], q[1]))
    a = (math.sin((lat2 - lat1) / 2) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2)
    return 2 * R * math.asin(math.sqrt(a))


def test_projection_distance_sanity():
    rng = np.random.default_rng(17)
    pts = np.column_stack([rng.uniform(139.3, 139.8, 40), rng.uniform(35.3, 35.8, 40)])
    ds = parse_geojson(point_fc(pts.tolist(), [{"v": 0}] * 40))
    assert ds.projected
    for i in range(0, 40, 5):
        for j in range(i + 1, 40, 7):
            planar = math.dist(ds.coords[i], ds.coords[j])
            great_circle = _haversine(pts[i], pts[j])
            assert planar == pytest.approx(great_circle, rel=5e-3)


# --- representative_point ---

def test_representative_point_unit_square():
    ring = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]
    assert representative_point([ring]) == pytest.approx((0.5, 0.5))


def test_representative_point_triangle():
    ring = [[0, 0], [1, 0], [0, 1], [0, 0]]
    assert representative_point([ring]) == pytest.approx((1 / 3, 1 / 3))


def test_representative_point_winding_invariant():
    ccw = [[0, 0], [2, 0], [2, 2], [0, 2], [0, 0]]
    cw = list(reversed(ccw))
    assert representative_point([ccw]) == pytest.approx(representative_point([cw]))


def test_representative_point_hole_subtracts():
    # 4x4 square with a 1x1 hole in the left half shifts the centroid right.
    outer = [[0, 0], [4, 0], [4, 4], [0, 4], [0, 0]]
    hole = list(reversed([[0.5, 1.5], [1.5, 1.5], [1.5, 2.5], [0.5, 2.5], [0.5, 1.5]]))
    cx, cy = representative_point([outer, hole])
    # analytic: (16*2 - 1*1) / 15 for x, y stays 2
    assert cx == pytest.approx((16 * 2 - 1 * 1) / 15, abs=1e-12)
    assert cy == pytest.approx(2.0, abs=1e-12)


def test_representative_point_degenerate_falls_back_to_vertex_mean():
    collinear = [[0, 0], [1, 1], [2, 2], [0, 0]]
    assert representative_point([collinear]) == pytest.approx((1.0, 1.0))


def test_representative_point_multipolygon_area_weighted():
    # 1x1 square at origin plus 3x3 square based at (10, 0): weights 1 and 9.
    small = [[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]
    big = [[[10, 0], [13, 0], [13, 3], [10, 3], [10, 0]]]
    cx, cy = representative_point_multi([small, big])
    assert cx == pytest.approx((1 * 0.5 + 9 * 11.5) / 10, abs=1e-12)
    assert cy == pytest.approx((1 * 0.5 + 9 * 1.5) / 10, abs=1e-12)


def test_representative_point_monte_carlo_oracle():
    rng = np.random.default_rng(19)
    # random convex polygon: hull of points around a center
    angles = np.sort(rng.uniform(0, 2 * np.pi, 9))
    radii = rng.uniform(0.2, 0.5, 9)
    ring = [[0.45 + r * math.cos(t), 0.55 + r * math.sin(t)]
            for t, r in zip(angles, radii)]
    ring.append(ring[0])
    got = representative_point([ring])

    def inside(px, py):
        # ray casting
        hits = 0
        n = len(ring) - 1
        for e in range(n):
            x0, y0 = ring[e]
            x1, y1 = ring[e + 1]
            if (y0 > py) != (y1 > py):
                xcr = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
                if xcr > px:
                    hits += 1
        return hits % 2 == 1

    samples = rng.uniform(0.0, 1.0, size=(400_000, 2))
    kept = np.array([s for s in samples if inside(s[0], s[1])])
    assert abs(got[0] - kept[:, 0].mean()) < 1.5e-3
    assert abs(got[1] - kept[:, 1].mean()) < 1.5e-3


# --- parse_point_csv ---

def test_parse_csv_basic():
    ds = parse_point_csv(b"x,y,v\n0,0,1\n1000,0,2\n0,1000,3\n", "x", "y")
    assert ds.n == 3
    assert ds.variable_names == ("v",)
    assert ds.geometry_kind == "point"
    np.testing.assert_array_equal(ds.values[:, 0], [1.0, 2.0, 3.0])


def test_parse_csv_missing_column():
    with pytest.raises(MissingColumnError):
        parse_point_csv(b"x,v\n0,1\n1,2\n2,3\n", "x", "y")


def test_parse_csv_non_numeric_coordinate():
    with pytest.raises(NonNumericCoordinateError):
        parse_point_csv(b"x,y,v\n0,0,1\n1,oops,2\n2,0,3\n", "x", "y")


def test_parse_csv_missing_cells_become_nan():
    ds = parse_point_csv(b"x,y,v,w\n0,0,1,\n1000,0,,5\n0,1000,3,6\n", "x", "y")
    assert ds.variable_names == ("v", "w")
    assert math.isnan(ds.values[1, 0])
    assert math.isnan(ds.values[0, 1])
    stats = {v.name: v for v in ds.schema.variables}
    assert stats["v"].missing == 1
    assert stats["w"].missing == 1


def test_parse_csv_round_trip_through_geojson():
    rng = np.random.default_rng(23)
    n = 1000
    xs = rng.uniform(0, 5000, n)
    ys = rng.uniform(0, 5000, n)
    vals = rng.normal(size=(n, 2))
    vals[rng.uniform(size=n) < 0.1, 0] = np.nan
    lines = ["x,y,a,b"]
    for i in range(n):
        a = "" if math.isnan(vals[i, 0]) else repr(float(vals[i, 0]))
        lines.append(f"{float(xs[i])!r},{float(ys[i])!r},{a},{float(vals[i, 1])!r}")
    ds = parse_point_csv("\n".join(lines).encode(), "x", "y")
    doc = document_to_json(dataset_to_geojson(ds))
    ds2 = parse_geojson(doc)
    assert ds2.variable_names == ds.variable_names
    assert np.array_equal(ds2.values, ds.values, equal_nan=True)
    assert np.array_equal(ds2.coords, ds.coords)


# --- listwise_complete ---

def _dataset_with_missing():
    return parse_point_csv(
        b"x,y,a,b,c\n"
        b"0,0,1,5,\n"
        b"1000,0,2,6,1\n"
        b"0,1000,3,,2\n"
        b"1000,1000,4,8,3\n"
        b"500,500,5,9,4\n",
        "x", "y")


def test_listwise_identity_when_complete():
    ds = parse_point_csv(
        b"x,y,a,b\n0,0,1,5\n1000,0,2,6\n0,1000,3,7\n1000,1000,4,8\n", "x", "y")
    dm, coords, kept = listwise_complete(ds, ["a", "b"])
    assert dm.n == 4
    np.testing.assert_array_equal(kept, np.arange(4))
    np.testing.assert_array_equal(dm.values[:, 0], [1.0, 2.0, 3.0, 4.0])


def test_listwise_drops_rows_missing_selected():
    ds = _dataset_with_missing()
    dm, coords, kept = listwise_complete(ds, ["a", "b"])
    np.testing.assert_array_equal(kept, [0, 1, 3, 4])
    assert dm.n == 4
    assert coords.shape == (4, 2)


def test_listwise_ignores_unselected_missing():
    ds = _dataset_with_missing()
    dm, _, kept = listwise_complete(ds, ["a", "b"])  # c has a gap at row 0
    assert 0 in kept


def test_listwise_too_few_complete():
    ds = parse_point_csv(
        b"x,y,a,b\n0,0,1,\n1000,0,,2\n0,1000,3,\n1000,1000,,4\n", "x", "y")
    with pytest.raises(TooFewCompleteError):
        listwise_complete(ds, ["a", "b"])


def test_listwise_unknown_variable():
    ds = _dataset_with_missing()
    with pytest.raises(SpecMismatchError):
        listwise_complete(ds, ["a", "zz"])


# --- serialize_result ---

def _mini_pipeline(proportion=0.8):
    ds = _dataset_with_missing()
    spec = AnalysisSpec("correlation", "pearson", "a", "b",
                        kernel="gaussian", bandwidth_proportion=proportion)
    dm, coords, kept = listwise_complete(ds, spec.variable_set)
    surface = compute_surface(dm, coords, spec)
    return ds, spec, surface, kept


def test_serialize_populates_kept_and_nulls_dropped():
    ds, spec, surface, kept = _mini_pipeline()
    doc = serialize_result(ds, surface, ("a", "b"), kept)
    assert len(doc["features"]) == ds.n
    dropped = doc["features"][2]["properties"]
    assert all(dropped[k] is None for k in dropped)
    kept_props = doc["features"][0]["properties"]
    assert kept_props["valid"] is True
    assert isinstance(kept_props["coef"], float)
    assert kept_props["value_a"] == 1.0
    assert kept_props["value_b"] == 5.0
    assert set(kept_props) == {"coef", "pval", "valid", "sig_001", "sig_005",
                               "value_a", "value_b", "effective_n"}


def test_serialize_preserves_feature_order():
    ds, spec, surface, kept = _mini_pipeline()
    doc = serialize_result(ds, surface, ("a", "b"), kept)
    for k, feature in enumerate(doc["features"]):
        assert feature["geometry"] == ds.features[k]


def test_serialize_invalid_cell_is_null_and_insignificant():
    ds = parse_point_csv(
        b"x,y,a,b\n0,0,7,1\n1000,0,7,2\n0,1000,7,3\n1000,1000,7,4\n", "x", "y")
    spec = AnalysisSpec("correlation", "pearson", "a", "b",
                        kernel="boxcar", bandwidth_proportion=1.0)
    dm, coords, kept = listwise_complete(ds, spec.variable_set)
    surface = compute_surface(dm, coords, spec)  # constant a -> all invalid
    doc = serialize_result(ds, surface, ("a", "b"), kept)
    props = doc["features"][0]["properties"]
    assert props["coef"] is None
    assert props["valid"] is False
    assert props["sig_001"] is False and props["sig_005"] is False
    assert props["value_a"] == 7.0  # raw data still present


def test_serialize_round_trip_preserves_floats_exactly():
    ds, spec, surface, kept = _mini_pipeline()
    doc = serialize_result(ds, surface, ("a", "b"), kept)
    parsed = json.loads(document_to_json(doc))
    pos = {int(k): j for j, k in enumerate(kept)}
    for orig, feature in enumerate(parsed["features"]):
        if orig not in pos:
            continue
        j = pos[orig]
        assert feature["properties"]["coef"] == surface.coefficients[j, 0]
        assert feature["properties"]["pval"] == surface.p_values[j, 0]
        assert feature["properties"]["effective_n"] == surface.effective_n[j]


def test_serialize_index_mismatch():
    ds, spec, surface, kept = _mini_pipeline()
    with pytest.raises(IndexMismatchError):
        serialize_result(ds, surface, ("a", "b"), kept[:-1])
    with pytest.raises(IndexMismatchError):
        serialize_result(ds, surface, ("a", "b"), np.array([0, 1, 2, 99]))


def test_serialize_unknown_pair():
    ds, spec, surface, kept = _mini_pipeline()
    with pytest.raises(PairNotInSurfaceError):
        serialize_result(ds, surface, ("a", "zz"), kept)
