import os
import sys

import sympy as sp
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# shared symbols of the sympy oracle
lam, t = sp.symbols("lam t")
b0, b1, b2 = sp.symbols("b0 b1 b2")
z0, z1, w0, w1 = sp.symbols("z0 z1 w0 w1")
