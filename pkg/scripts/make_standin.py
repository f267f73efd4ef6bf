"""Regenerate the bundled synthetic stand-in pair file.

The pairs are simulated, not observed: they are drawn at fixed parameter
values with a fixed seed so the application workflow can be exercised
without a real data set, which is not available here.
"""
from pathlib import Path

from bsimplex import dataio

target = Path(__file__).resolve().parents[1] / "src" / "bsimplex" / "data" / dataio.STANDIN_FILE
data = dataio.generate_standin()
header = ("# SYNTHETIC stand-in data, NOT real observations.\n"
          f"# Simulated at theta={dataio.STANDIN_THETA}, n={dataio.STANDIN_N}, "
          f"seed={dataio.STANDIN_SEED}; regenerate with scripts/make_standin.py\n")
target.write_text(header + dataio.format_pairs(data))
print(f"wrote {len(data)} pairs to {target}")
