"""
Sweeps from a config file, with a result cache
==============================================

The same runs are available as ``prodrep run CONFIG``.
"""
import tempfile
from pathlib import Path

from prodrep.harness import ExperimentConfig, ResultCache, run

cfg = ExperimentConfig.loads("""
[run]
seed = 0

[m-table]
ks = 2-4
n_max = 10

[fk-sweep]
family = x^3
k = 2
q_max = 31
""")
print(cfg.dumps())

tmp = Path(tempfile.mkdtemp())
cache = ResultCache(tmp / "cache.jsonl")
run(cfg, out_dir=tmp, cache=cache)
run(cfg, out_dir=tmp, cache=cache)      # second pass is served from the cache
print((tmp / "fk-sweep.csv").read_text())
