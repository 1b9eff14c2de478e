#!/usr/bin/env python3
"""Smoke test for the takagi_py extension module.

Builds are expected at target/{release,debug}/libtakagi_py.so; run
`cargo build -p takagi-py` first. The library is staged under a temp
directory with the import name Python expects.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    for profile in ("release", "debug"):
        built = ROOT / "target" / profile / "libtakagi_py.so"
        if built.exists():
            stage = Path(tempfile.mkdtemp(prefix="takagi-py-"))
            shutil.copy2(built, stage / "takagi_py.so")
            return stage
    sys.exit("libtakagi_py.so not found; run `cargo build -p takagi-py` first")


sys.path.insert(0, str(stage_module()))
import takagi_py  # noqa: E402


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


# composition: (D - 1)(z^2 - 1) = 2z - z^2 + 1
f = takagi_py.Polynomial([-1, 1])
g = takagi_py.Polynomial([-1, 0, 1])
h = takagi_py.differential_compose(f, g)
assert h.degree() == 2
assert [complex(c) for c in h.coeffs()] == [1 + 0j, 2 + 0j, -1 + 0j]

# zeros of h are 1 +- sqrt 2
roots, residuals = takagi_py.find_roots(h)
assert close(sorted(z.real for z in roots)[0], 1 - math.sqrt(2))
assert close(sorted(z.real for z in roots)[1], 1 + math.sqrt(2))
assert all(r < 1e-10 for r in residuals)

# the closed form agrees
near, far = takagi_py.quadratic_closed_form(1, 1)
assert close(far, 1 + math.sqrt(2)) and close(near, 1 - math.sqrt(2))

# full analysis: region is the segment [-1, 3], both zeros contained
result = takagi_py.analyze(f, g)
assert result["contained"] and not result["identically_zero"]
assert result["region"]["kind"] == "segment"
vs = sorted(v.real for v in result["region"]["vertices"])
assert close(vs[0], -1.0) and close(vs[1], 3.0)

# certificate at the far zero: convex weights plus kappa within the bound
cert = takagi_py.certificate(far, [1, -1], 1)
assert all(l > 0 for l in cert["lambdas"])
assert close(sum(cert["lambdas"]), 1.0, 1e-12)
assert close(cert["reconstruction"], far, 1e-12)
assert cert["kappa"] <= cert["schwarz_bound"] * (1 + 1e-9)

# operator with origin multiplicity 3 annihilates a quadratic
z3 = takagi_py.Polynomial([0, 0, 0, 1])
assert z3.origin_multiplicity() == 3
assert takagi_py.differential_compose(z3, g).is_zero()

# evaluation round trip through from_roots
p = takagi_py.Polynomial.from_roots(2, [1j, -1j])
assert close(p.evaluate(0), 2.0)
assert p.derivative().degree() == 1

print("smoke test: all checks passed")
