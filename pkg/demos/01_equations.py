# The price response and the three participant objectives, evaluated by hand.
import numpy as np

from morlgrid import model

econ = model.EconomicParams()
print(econ)

# Demand follows the advertised price through a clipped linear elasticity.
prices = np.array(model.DEFAULT_PRICE_GRID)
print("price  ->  demand for a 100 kWh baseload")
for lam in prices:
    print(f"{lam:4.1f}  {model.demand(lam, 100.0, econ):7.2f}")

# A consumer stops buying once the marginal benefit omega - alpha * p_d
# reaches the price. The utility is flat past omega / alpha.
omega, alpha = 6.0, econ.alpha
xs = np.linspace(0, 200, 9)
print("utility", [round(float(model.user_utility(x, omega, alpha)), 1) for x in xs])
print("welfare-optimal demand at each price",
      [float(model.welfare_optimal_demand(lam, omega, alpha)) for lam in prices])

# The grid buys the shortfall p_d + ds - p_r and sells it at the price.
p_g = model.grid_power(demand=80.0, renewable=30.0, delta_s=10.0)
print("grid power", p_g, "profit at 3.0", model.grid_profit(3.0, p_g, econ))

# Storage feasibility is scored by the penalty objective.
spec = model.StorageSpec.from_capacity(200)
print("penalty, feasible move ", model.constraint_penalty([110.0], [100.0], [spec]))
print("penalty, ramp too large", model.constraint_penalty([140.0], [100.0], [spec]))
