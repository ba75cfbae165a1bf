"""Connection, curvature and the sesqui-harmonic conditions on the Heisenberg group.

Run: python demos/nil_geometry.py
"""
from sesqui import PolyRing, VectorFieldExpr, nil
from sesqui.fields import horizontal_terms, rough_laplacian, s_of_x, vertical_condition
from sesqui.cases import nil_systems

fa = nil()
names = ["e1", "e2", "e3"]


def show(vec):
    parts = [f"({c})*{n}" for c, n in zip(vec, names) if c]
    return " + ".join(parts) or "0"


print("Levi-Civita connection, nabla_{e_i} e_j:")
for i in range(3):
    for j in range(3):
        print(f"  nabla_{names[i]} {names[j]} = {show(fa.connection.gamma[i][j])}")

print("\nCurvature R(e_i, e_j) e_k for i < j:")
for i in range(3):
    for j in range(i + 1, 3):
        for k in range(3):
            print(f"  R({names[i]},{names[j]}){names[k]} = {show(fa.curvature.r[i][j][k])}")

R = PolyRing(["a", "b", "g", "d1", "d2"])
a, b, g, d1, d2 = R.gens
X = VectorFieldExpr(fa, [a, b, g])
print("\nFor X = a e1 + b e2 + g e3:")
print("  lap X      =", rough_laplacian(X))
print("  lap lap X  =", rough_laplacian(rough_laplacian(X)))
print("  S(X)       =", s_of_x(X))
print("  vertical   =", vertical_condition(X, d1, d2))
print("\nHorizontal building blocks:")
for name, value in horizontal_terms(X).items():
    print(f"  {name:40s} {value}")

s = nil_systems()
print("\nCleared systems (times 16):")
for p in s.vertical_system:
    print("  vertical  :", p)
for p in s.horizontal_system:
    print("  horizontal:", p)
