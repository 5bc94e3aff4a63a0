"""Cross-validation: penalized dynamics vs the catching-up recursion.

For A = gamma*I and a convex state-independent set, the rescaled image
z = gamma*x follows the classical projection recursion
z_{k+1} = proj_{C(t_{k+1})}(z_k).  That recursion is an independent oracle:
its trajectory must stay within O(lam + h) of the penalized one.
"""

import numpy as np

import sweepsolve as sw


def run_pair(name, scenario, lam=0.02, h=0.01):
    my = sw.integrate(scenario, lam)
    cu = sw.catching_up(scenario, h)
    gap = sw.sup_diff(my, cu)
    tol = 5.0 * (lam + h)
    print(f"{name:28s} sup|x_MY - x_CU| = {gap:.4f}  (tolerance {tol:.2f})")
    return my, cu


def main():
    print("== drifting half-line {z >= t} ==")
    for gamma in (1.0, 2.0):
        op = sw.IdentityOperator() if gamma == 1.0 else sw.ScaledIdentityOperator(gamma)
        sc = sw.Scenario(n=1, T=1.0, x0=np.zeros(1), operator=op,
                         moving_set=sw.HalfSpaceSpec(normal=[-1.0], drift=-1.0),
                         lambdas=(0.02,))
        my, cu = run_pair(f"gamma = {gamma:g}", sc)
    print("terminal states: penalized", my.states[-1], " catching-up", cu.states[-1])

    print("\n== ball sliding away at unit speed ==")
    for gamma in (1.0, 2.0):
        op = sw.IdentityOperator() if gamma == 1.0 else sw.ScaledIdentityOperator(gamma)
        sc = sw.Scenario(n=2, T=2.0, x0=np.zeros(2), operator=op,
                         moving_set=sw.BallSpec(center=[0.0, 0.0],
                                                velocity=[1.0, 0.0], radius=1.0),
                         lambdas=(0.02,))
        my, cu = run_pair(f"gamma = {gamma:g}", sc)
    print("the state idles until the trailing boundary reaches it at t = 1,")
    print("then follows at unit speed: x(2) =", np.round(my.states[-1], 3))

    print("\n== the oracle refuses anything outside its validity domain ==")
    sc = sw.Scenario(n=2, T=1.0, x0=np.zeros(2),
                     operator=sw.LinearSPDOperator([[1.0, 0.0], [0.0, 4.0]]),
                     moving_set=sw.BallSpec(center=[0.0, 0.0], radius=1.0),
                     lambdas=(0.05,))
    try:
        sw.catching_up(sc, 0.01)
    except sw.UnsupportedScenario as err:
        print("UnsupportedScenario:", err)


if __name__ == "__main__":
    main()
