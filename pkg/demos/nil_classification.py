"""Walk through the Nil solution families for a few choices of (delta1, delta2).

Run: python demos/nil_classification.py
"""
from sesqui import same_sign_scan, nil
from sesqui.cases import nil_systems, verify_nil_families

for d in [(1, 2), (-1, -3)]:
    print(f"deltas {d}: {same_sign_scan(nil(), d).describe()}")

for d in [(1, -1), (1, -2), (5, -2)]:
    rep = verify_nil_families(d)
    print(f"\ndeltas {d}, t = {rep.t}")
    for m in rep.members:
        pt = tuple(str(x) for x in m.point)
        flag = "vector field" if m.vector_field else "-"
        flag += ", map" if m.is_map else ""
        stated = "claimed map" if m.stated_map_holds else ""
        print(f"  {m.family:10s} {str(pt):22s} in regime: {m.in_regime!s:5s} {flag:20s} {stated}")
    for c in rep.controls:
        print(f"  control    {tuple(str(x) for x in c.point)} residuals {tuple(str(x) for x in c.vertical_system)}")

print("\nA field solving the vertical system but not the horizontal one:")
vert, hor = nil_systems(("5/2", -1)).evaluate((4, 4, 0))
print("  X = 4 e1 + 4 e2 at (5/2, -1):", [str(x) for x in vert], [str(x) for x in hor])
