"""
Roots of eigenpolynomials of (z**2 - 1) d**2/dz**2.

The balanced polynomial (z**2 - 1) C**2 - 1 gives the operator; its degree-n
eigenvalue on the principal sequence is sqrt(n (n - 1)). The roots fill
[-1, 1] with the arcsine law, and L_n = p'/(lambda p) approaches a solution
of (z**2 - 1) L**2 = 1.
"""
import sys
from pathlib import Path

import numpy as np

from motherbody import io
from motherbody.eigen import (eigenpolynomial, log_derivative_ratio, operator_from_balanced,
                              root_measure, select_principal_sequence, symbol_residual)
from motherbody.polyalg import BiPoly

op = operator_from_balanced(BiPoly({(2, 2): 1, (2, 0): -1, (0, 0): -1}))
n = int(sys.argv[1]) if len(sys.argv) > 1 else 120

(_, lam), = select_principal_sequence(op, n, n_min=n)
pair = eigenpolynomial(op, n, lam)
x = np.sort(root_measure(pair).points.real)

F = 0.5 + np.arcsin(x) / np.pi
ks = max(np.max(np.arange(1, n + 1) / n - F), np.max(F - np.arange(n) / n))
print(f"n={n} lambda={lam.real:.6f} KS distance to arcsine={ks:.4f}")

counts, edges = np.histogram(x, bins=10, range=(-1, 1))
want = n * np.diff(np.arcsin(edges)) / np.pi
for a, b, c, w in zip(edges[:-1], edges[1:], counts, want):
    print(f"[{a:+.1f}, {b:+.1f})  {c:4d}  expected {w:6.1f}")

for m in (n // 4, n // 2, n):
    p = eigenpolynomial(op, m, np.sqrt(m * (m - 1)))
    print(m, "symbol residual at z=3:", symbol_residual(op, log_derivative_ratio(p, 3.0), 3.0))

Path("roots.svg").write_text(io.roots_svg(x + 0j))
print("wrote roots.svg")
