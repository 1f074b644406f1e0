"""
How it scales
=============

The per-location sweep is O(n^2) in observations; this times correlation
surfaces (one per variable pair, three variables) on synthetic datasets of
increasing size. The same harness backs the ``gwcorr bench`` subcommand.
"""

from gwcorr.cli import run_bench

rows = run_bench(sizes=[250, 500, 1000, 2000], n_vars=3,
                 kernel="bisquare", proportion=0.2, seed=0, repeats=2)

print(f"{'n':>6} {'wall_s':>9} {'peak_mb':>9}")
for row in rows:
    print(f"{row['n']:>6} {row['wall_s']:>9.4f} {row['peak_mb']:>9.1f}")

if rows[0]["wall_s"] > 0:
    ratio = rows[-1]["wall_s"] / rows[0]["wall_s"]
    print(f"\n{rows[-1]['n'] // rows[0]['n']}x the observations -> "
          f"{ratio:.0f}x the time (quadratic core)")
