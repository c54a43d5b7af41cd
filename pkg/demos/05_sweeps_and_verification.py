# %% [markdown]
# Parameter sweeps and exhaustive small-field checks.
#
# A sweep runs every (prime, size, generator) combination and returns one
# CSV row per case. Output is byte-identical for a given seed whatever the
# thread count.

# %%
from pathlib import Path

from pindist import SweepConfig, exhaustive_verify, run_sweep

cfg = SweepConfig.parse((Path(__file__).parent / "sweep.cfg").read_text())
res = run_sweep(cfg, threads=1)
print(res.to_csv())
print(res.summary)
assert res.to_csv() == run_sweep(cfg, threads=4).to_csv()

# %%
s = exhaustive_verify(7, 4, symmetry_reduction=True)
print(f"p=7, |A|<=4: {s.cases} cases, min theorem ratio {s.min_theorem_ratio:.4f}, ok={s.ok}")
