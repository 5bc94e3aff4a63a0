"""Penalized dynamics against closed-form solutions.

Two scalar problems with known solutions:
  * static half-line {z <= 0}, A = I:   x(t) = x0 * exp(-t/lam)
  * same set, A = 2I (degenerate case): x(t) = x0 * exp(-2 t/lam)
The second shows how the operator constant m enters the decay rate.
A small refinement study recovers the nominal integrator orders.
"""

import math

import numpy as np

import sweepsolve as sw


def scenario(gamma, T, method="rk4", h_max=math.inf, safety=0.2):
    op = sw.IdentityOperator() if gamma == 1.0 else sw.ScaledIdentityOperator(gamma)
    return sw.Scenario(
        n=1, T=T, x0=np.array([1.0]), operator=op,
        moving_set=sw.HalfSpaceSpec(normal=[1.0]),
        lambdas=(0.1,),
        integrator=sw.IntegratorConfig(method=method, h_max=h_max, safety=safety),
        allow_infeasible_start=True)


def main():
    lam = 0.1

    print("== A = I:  x(t) = exp(-t/lam) ==")
    traj = sw.integrate(scenario(1.0, T=0.1), lam)
    print(f"computed x(0.1) = {traj.states[-1, 0]:.8f}")
    print(f"exact    x(0.1) = {math.exp(-1.0):.8f}")

    print("\n== A = 2I: x(t) = exp(-2t/lam) ==")
    traj = sw.integrate(scenario(2.0, T=0.1, h_max=lam / 100), lam)
    print(f"computed x(0.1) = {traj.states[-1, 0]:.8f}")
    print(f"exact    x(0.1) = {math.exp(-2.0):.8f}")
    print(f"phi starts at {traj.phis[0]:.3f} (= |A(x0)| outside) and "
          f"decays to {traj.phis[-1]:.2e}")

    print("\n== observed convergence orders on the 2I problem ==")
    T = 0.2
    exact = math.exp(-2.0 * T / lam)
    for method, nominal, steps in (("euler", 1, (16, 32)), ("rk4", 4, (16, 32))):
        errs = []
        for k in steps:
            sc = scenario(2.0, T=T, method=method, h_max=lam / k, safety=1.0)
            errs.append(abs(sw.integrate(sc, lam).states[-1, 0] - exact))
        order = math.log2(errs[0] / errs[1])
        print(f"{method:6s}: errors {errs[0]:.3e} -> {errs[1]:.3e}, "
              f"observed order {order:.2f} (nominal {nominal})")

    print("\n== adaptive stepping on the same problem ==")
    sc = scenario(2.0, T=0.2, method="adaptive")
    traj = sw.integrate(sc, lam)
    print(f"steps accepted/rejected: {traj.stats.n_accepted}/{traj.stats.n_rejected}, "
          f"final error {abs(traj.states[-1, 0] - exact):.2e}")


if __name__ == "__main__":
    main()
