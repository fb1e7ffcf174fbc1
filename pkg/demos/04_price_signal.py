# The 24-hour price signal and storage schedule of a trained policy.
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from morlgrid import environment as env
from morlgrid import learner
from morlgrid.model import default_system

config = default_system()
day = env.load_timeseries(env.sample_day_path())

spec = learner.ScalarizationSpec("chebyshev", weights=(0.0, 0.6, 0.4, 0.0))
result = learner.train(config, day, spec, learner.LearnerParams())
ret, traj = env.rollout(result.policy, day, config)

for h in range(24):
    print(f"{h:2d}h  price {traj.prices[h]:.1f}  {traj.commands[h]:<9s} soc {traj.soc_fraction[h]:.2f}")

fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
top.step(traj.hours, traj.prices, where="post")
top.set_ylabel("price")
bottom.plot(traj.hours, traj.soc_fraction, marker="o")
bottom.plot(traj.hours, traj.demands.sum(axis=1) / traj.demands.sum(axis=1).max(), "--", label="demand (scaled)")
bottom.set_ylabel("state of charge")
bottom.set_xlabel("hour")
bottom.legend()
fig.tight_layout()
fig.savefig("price_signal.png", dpi=100)
print("wrote price_signal.png")
