import json
import os
import subprocess
import sys

import pytest

SCRIPT = """
import json
import fracckn
from fracckn import specfun
from fracckn.constants import Parameters, C_alpha
from fracckn.solver import solve_ground_state
from fracckn.spectral import Grid
res = solve_ground_state(Parameters(3, 0.5, -0.5, -0.3), Grid(30.0, 1024))
print(json.dumps({"backend": fracckn.BACKEND,
                  "hyp": specfun.hyp2f1(1.75, 1.5, 1.5, 0.99),
                  "C": C_alpha(Parameters(3, 0.5, -0.9, -0.89)),
                  "energy": res.energy}))
"""


def run_with(backend):
    env = dict(os.environ, FRACCKN_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True,
                         text=True, check=True, timeout=300)
    return json.loads(out.stdout)


def test_forced_python_backend_matches_default():
    py = run_with("python")
    auto = run_with("auto")
    assert py["backend"] == "python"
    for key in ("hyp", "C", "energy"):
        assert py[key] == pytest.approx(auto[key], rel=1e-12)


def test_compiled_backend_selected_when_built():
    pytest.importorskip("fracckn._kernels")
    assert run_with("auto")["backend"] == "compiled"
