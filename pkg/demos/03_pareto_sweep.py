# Sweep weight vectors, keep the non-dominated returns and pick the fair point.
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from morlgrid import environment as env
from morlgrid import pareto
from morlgrid.learner import LearnerParams
from morlgrid.model import default_system

config = default_system()
day = env.load_timeseries(env.sample_day_path())

# H = 2 gives 10 weight vectors; the default experiment uses H = 5 (56 runs).
archive = pareto.sweep(config, day, "chebyshev", 2, LearnerParams(episodes=2000))
print(len(archive.candidates), "runs,", len(archive), "non-dominated")

returns = archive.returns()
for e in archive:
    print(e.weights, np.round(e.objectives.as_tuple(), 1))

i = pareto.fair_point_index(archive)
print("fair point", archive.entries[i].weights)
print("normalized", np.round(pareto.normalized_returns(archive)[i], 3))

fig, ax = plt.subplots(figsize=(5, 4))
sc = ax.scatter(returns[:, 0], returns[:, 2], c=returns[:, 1], cmap="viridis")
ax.scatter(returns[i, 0], returns[i, 2], s=150, facecolors="none", edgecolors="red")
ax.set_xlabel("welfare")
ax.set_ylabel("grid profit")
fig.colorbar(sc, label="stored energy")
fig.tight_layout()
fig.savefig("front.png", dpi=100)
print("wrote front.png")
