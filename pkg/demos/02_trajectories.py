"""
Inferential trajectories over simulated draws
=============================================

Draw a thousand balls from box 1 (propensity of White 0.2) with a fixed
seed, split the record into ten runs of one hundred, and follow the
probability story draw by draw: the posterior over compositions, the
forecast for the next color, and the two naive baselines (relative
frequency and the mis-applied rule of succession).  Writes the full
trajectory as CSV next to this script.
"""

from pathlib import Path

from sixbox import BoxModel, generate, split_runs, trajectory, uniform_prior
from sixbox.analysis import trajectory_to_csv

model = BoxModel()
prior = uniform_prior(model)

seq = generate(model, box=1, n=1000, seed=20240703)
print(f"generated {len(seq)} draws from box 1, {seq.summary().x} White")

# run-by-run: each run analyzed independently from the uniform prior
for k, run in enumerate(split_runs(seq, 100).runs, start=1):
    points = trajectory(run, prior)
    final = points[-1]
    mode = max(range(6), key=lambda i: final.posterior[i])
    print(
        f"run {k:2d}: x={run.summary().x:3d}  mode=B{mode}"
        f"  P(White next)={final.predictive_white:.6f}"
        f"  frequency={final.frequency_white:.3f}"
        f"  'Laplace'={final.laplace_white:.6f}"
    )

# whole-sequence story: watch the forecast settle just above 1/5
points = trajectory(seq, prior)
print("\nstep   P(W next)   freq     'Laplace'")
for step in (1, 3, 10, 30, 100, 300, 1000):
    p = points[step - 1]
    freq = "  --  " if p.frequency_white is None else f"{p.frequency_white:.4f}"
    print(f"{p.step:5d}  {p.predictive_white:.6f}   {freq}   {p.laplace_white:.6f}")

out = Path(__file__).with_name("trajectory_box1.csv")
with out.open("w", encoding="utf-8") as fh:
    trajectory_to_csv(points, fh)
print(f"\nwrote {out.name}; posterior columns are ready for a log-scale plot")
