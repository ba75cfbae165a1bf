"""Profile fields f(z) e3 on Sol: the governing ODE and its exponential solutions.

Run: python demos/sol_ode.py
"""
from sesqui.cases import derive_sol_ode, rational_sqrt, verify_sol_solution
from sesqui.engine import DeltaPair

op = derive_sol_ode()
print("ODE:", op)

for d in [DeltaPair(1, 1), DeltaPair(-5, -1), DeltaPair(3, 2)]:
    c0, c1, c2 = op.characteristic(d)
    print(f"\ndeltas ({d.delta1}, {d.delta2}): ({c2}) mu^2 + ({c1}) mu + ({c0}) = 0, mu = lambda^2")
    mu2 = (d.delta1 + 2 * d.delta2) / d.delta2
    for mu in (2, mu2):
        root = rational_sqrt(mu)
        label = f"lambda = +-{root}" if root is not None else f"lambda = +-sqrt({mu})"
        print(f"  mu = {mu}: {label}")
    print("  exponential combination solves the ODE:", verify_sol_solution(d))
