# Equal-throughput scheduling: solve for the stationary scheduling
# probabilities p_n that level every user's long-run rate, then check whether
# a rank-restricted scheduler can actually realize them.
#
# The feasibility conditions bite when the channel spread is extreme: the
# weak users then need to be scheduled so often that no selection rule
# confined to the allowed ranks can deliver the required probabilities.

from swiptsched import (
    AllowedOrderSet,
    FadingParams,
    Scenario,
    et_analysis,
    et_feasibility,
)

indoor = Scenario(
    users=tuple(FadingParams(omega=n * 1e-5, k_factor=6.0) for n in range(1, 8)),
    tx_power_w=1.0,
    noise_power_w=2.511886431509582e-13,  # -96 dBm
    eta=0.5,
)


def show(scenario, orders):
    analysis, sol = et_analysis(scenario, AllowedOrderSet(orders))
    tag = "feasible" if sol.feasible else "INFEASIBLE"
    print(f"S_a={{{','.join(map(str, orders))}}}  r={sol.equal_throughput_r:.4f} b/s/Hz  [{tag}]")
    print("   p_n:", "  ".join(f"{p:.4f}" for p in sol.probabilities))
    for v in sol.violations:
        print(f"   violated {v.condition_id}: L={v.l_value} users={v.subset} "
              f"lhs={v.lhs:.4f} rhs={v.rhs:.4f}")


print("indoor scenario, 7 users")
for orders in ((1, 2), (3, 4), (6, 7), (1, 2, 3, 4, 5, 6, 7)):
    show(indoor, orders)

# now an engineered two-tier network. two strong users, two users ten
# orders of magnitude weaker. leveling the rates forces almost all slots
# to the weak pair.
print()
print("extreme spread, 4 users, allowed orders {3,4}")
for weak in (1e-10, 1e-11):
    spread = Scenario(
        users=(
            FadingParams(omega=1.0),
            FadingParams(omega=1.0),
            FadingParams(omega=weak),
            FadingParams(omega=weak),
        ),
        tx_power_w=1.0,
        noise_power_w=2.3255813953488373e-13,
        eta=0.5,
    )
    print(f"weak omega = {weak:g}")
    show(spread, (3, 4))

# the checker also works on bare probability vectors
print()
verdict = et_feasibility((0.45, 0.45, 0.05, 0.05), allowed_size=2, n_users=4)
print("hand-built p=(0.45,0.45,0.05,0.05), |S_a|=2:",
      "feasible" if verdict.feasible else "INFEASIBLE")
