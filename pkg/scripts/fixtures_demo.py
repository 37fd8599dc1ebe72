"""Walk through the 2x2 Jordan-block fixture and the block-diagonal equality case."""

import numpy as np

from sdlab.algebra import BlockStructure, phi
from sdlab.errors import SdlabError
from sdlab.factorization import newton_sqrt
from sdlab.funcspec import parse
from sdlab.inequalities import CHECKERS, run_check
from sdlab.linalg import singular_values
from sdlab.spectral import fk_det, sigma_profile

a = np.array([[1.0, 1.0], [0.0, 1.0]])
b = BlockStructure.ones(2)
pa = phi(a, b)

print("a =\n", a.real)
print("singular values of a:", singular_values(a).values)
print("Sigma profile of a:", sigma_profile(a), " of phi(a):", sigma_profile(pa))
print("FK determinant of a and phi(a):", fk_det(a), fk_det(pa))
print()
for name in CHECKERS:
    try:
        rep = run_check(name, a, b, f=parse("pow:1"))
    except SdlabError as exc:
        print(f"{name:<16} skipped: {exc}")
        continue
    margin = "-" if rep.margin is None else f"{rep.margin:+.6f}"
    print(f"{name:<16} {rep.status:<18} margin {margin}")

print("\nblock-diagonal input, blocks 2,1:")
d = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 3.0]])
rep = run_check("jensen_main", d, BlockStructure.parse("2,1"))
print(f"jensen_main      {rep.status:<18} margin {rep.margin:+.3e}")

res = newton_sqrt(np.diag([4.0, 9.0]))
print("\nsqrt(diag(4, 9)) =", np.diag(res.result).real, f"after {len(res.iterates) - 1} iterations")
