"""
Driving the HTTP service
========================

The explorer UI consumes a small JSON API: upload a dataset, run an
analysis, then pull the map document and the scatter records. Switching
the displayed pair of a partial analysis re-serializes from the cached
surface; nothing is recomputed. This script runs the real server on a
local port and talks to it over HTTP.
"""

import socket
import threading
import time

import httpx
import uvicorn

from gwcorr import dataset_to_geojson, document_to_json, synth_dataset
from gwcorr.service import ServiceConfig, create_app

sock = socket.socket()
sock.bind(("127.0.0.1", 0))
port = sock.getsockname()[1]
sock.close()

server = uvicorn.Server(uvicorn.Config(create_app(ServiceConfig()),
                                       host="127.0.0.1", port=port,
                                       log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = f"http://127.0.0.1:{port}"
print(f"service listening on {base}")

body = document_to_json(dataset_to_geojson(synth_dataset(120, 3, seed=8))).encode()
upload = httpx.post(f"{base}/datasets", content=body,
                    headers={"content-type": "application/geo+json"}).json()
print(f"uploaded dataset {upload['dataset_id']}: n={upload['n']}, "
      f"variables={[v['name'] for v in upload['schema']['variables']]}")

analysis = httpx.post(f"{base}/analyses", json={
    "dataset_id": upload["dataset_id"],
    "mode": "partial_correlation",
    "method": "pearson",
    "var_a": "var_0",
    "var_b": "var_1",
    "controls": ["var_2"],
    "kernel": "bisquare",
    "bandwidth_proportion": 0.25,
}, timeout=120.0).json()
summary = analysis["summary"]
print(f"analysis {analysis['analysis_id']}: coef mean "
      f"{summary['coef_mean']:+.3f}, significant@0.05 "
      f"{summary['significant_at_005']}/{summary['n_used']}, "
      f"{summary['wall_ms']:.1f} ms")

result = httpx.get(f"{base}/analyses/{analysis['analysis_id']}/result").json()
print(f"map document: {len(result['features'])} features")

scatter = httpx.get(f"{base}/analyses/{analysis['analysis_id']}/scatter").json()
print(f"scatter records: {len(scatter)}; first -> {scatter[0]}")

# Pair switching is pure re-serialization of the cached all-pairs surface.
other = httpx.get(f"{base}/analyses/{analysis['analysis_id']}/result",
                  params={"pair": "var_0,var_2"})
print(f"switched pair document: {other.status_code}, "
      f"{len(other.json()['features'])} features (no recompute)")

server.should_exit = True
thread.join(timeout=10)
