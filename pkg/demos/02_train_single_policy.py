# Train one chebyshev policy on the bundled day and plot how it converges.
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from morlgrid import environment as env
from morlgrid import learner
from morlgrid.model import default_system

config = default_system()
day = env.load_timeseries(env.sample_day_path())
print("series:", day.names, "baseload peak", day.baseload.max(axis=1))

spec = learner.ScalarizationSpec("chebyshev", weights=(0.4, 0.2, 0.4, 0.0))
params = learner.LearnerParams(episodes=3000, seed=1)
result = learner.train(config, day, spec, params)
print("utopian point", np.round(result.spec.utopian, 1))

ret, traj = env.rollout(result.policy, day, config)
print("greedy return", ret)

# Smooth the per-episode returns a little to see the trend.
kernel = np.ones(50) / 50
fig, axes = plt.subplots(1, 3, figsize=(12, 3))
for ax, k, name in zip(axes, range(3), ("welfare", "stored energy", "grid profit")):
    ax.plot(np.convolve(result.log.returns[:, k], kernel, mode="valid"))
    ax.set_title(name)
    ax.set_xlabel("episode")
fig.tight_layout()
fig.savefig("convergence.png", dpi=100)
print("wrote convergence.png")
