"""Regenerate the frontend test fixtures from the real backend.

Captures actual wire payloads (upload, schema, analysis summary, result
documents for two displayed pairs, scatter records, config) for a point
dataset and a polygon dataset, so the frontend tests exercise the exact
contract the service speaks. Run from the repo root:

    python3 frontend/scripts/make_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from gwcorr import dataset_to_geojson, document_to_json, synth_dataset
from gwcorr.service import ServiceConfig, create_app

OUT = Path(__file__).parent.parent / "tests" / "fixtures"


def write(name, payload):
    path = OUT / name
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


def polygon_grid_geojson():
    """4x4 grid of unit squares in lon/lat with the synth values attached."""
    ds = synth_dataset(16, 3, seed=21)
    features = []
    for i in range(16):
        r, c = divmod(i, 4)
        x0, y0 = 139.5 + c * 0.05, 35.5 + r * 0.05
        ring = [[x0, y0], [x0 + 0.05, y0], [x0 + 0.05, y0 + 0.05],
                [x0, y0 + 0.05], [x0, y0]]
        props = {name: ds.values[i, k] for k, name in enumerate(ds.variable_names)}
        if i == 5:
            props["var_2"] = None  # one dropped row for null handling
        features.append({"type": "Feature",
                         "geometry": {"type": "Polygon", "coordinates": [ring]},
                         "properties": props})
    return {"type": "FeatureCollection", "features": features}


def capture(client, body, tag, controls):
    upload = client.post("/datasets", content=body,
                         headers={"content-type": "application/geo+json"}).json()
    write(f"{tag}_upload.json", upload)
    analysis = client.post("/analyses", json={
        "dataset_id": upload["dataset_id"],
        "mode": "partial_correlation",
        "method": "pearson",
        "var_a": "var_0",
        "var_b": "var_1",
        "controls": controls,
        "kernel": "bisquare",
        "bandwidth_proportion": 0.6,
    }).json()
    analysis["summary"]["wall_ms"] = 1.0  # timing is not part of the contract
    write(f"{tag}_analysis.json", analysis)
    aid = analysis["analysis_id"]
    write(f"{tag}_result_var0_var1.json",
          client.get(f"/analyses/{aid}/result").json())
    write(f"{tag}_result_var0_var2.json",
          client.get(f"/analyses/{aid}/result", params={"pair": "var_0,var_2"}).json())
    write(f"{tag}_scatter_var0_var1.json",
          client.get(f"/analyses/{aid}/scatter").json())


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(ServiceConfig(
        tiles_url="https://tiles.example/{z}/{x}/{y}.png")))
    write("config.json", client.get("/config").json())

    points = document_to_json(dataset_to_geojson(synth_dataset(60, 3, seed=2))).encode()
    capture(client, points, "points", ["var_2"])

    polys = json.dumps(polygon_grid_geojson()).encode()
    capture(client, polys, "polygons", ["var_2"])


if __name__ == "__main__":
    main()
