import sys
from fractions import Fraction

import pyheckekit as hk

gl2 = hk.RootDatum("GL", 2)
assert gl2.rank == 2 and gl2.weyl_order() == 2
assert gl2.weights([1, 0]) == {(0, 1): 1, (1, 0): 1}
assert gl2.weyl_dim([2, 0]) == 3
assert gl2.dominant_representative([0, 3])[0] == [3, 0]

kernels = gl2.transfer_kernels([1, 0], ["", "s1"])
print("kernels", kernels)

hom, avg = gl2.hom_multiplicity([1, 0], 2, [[1, 1]], [1])
assert (hom, avg) == (2, Fraction(2))
assert gl2.kottwitz_rhs([1, 0], 2, [[1, 1]], {"pi": [0]}, [1]) == {"pi": -2}

g2 = hk.RootDatum("G2")
assert g2.weyl_dim([1, 2]) == 7
print("classify", g2.classify([1, 2]))
print("character", gl2.character([1, 0], [Fraction(1, 2), 0]))

try:
    hk.RootDatum("F4-ad").weights([220, 420, 300, 160])
    raise SystemExit("expected a cost guard")
except hk.CostGuardError as e:
    print("guard", e)

ok, report = hk.run_checks("gl2-paper")
for e in report["entries"]:
    print(e["status"], e["id"])
sys.exit(0 if ok else 1)
