import pytest
from hypothesis import HealthCheck, settings

from wclose.fields import QQ
from wclose.parser import parse_operator
from wclose.weyl import AlgebraSignature

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def W_xy():
    return AlgebraSignature(["x", "y"], field=QQ)


@pytest.fixture
def cusp_ops(W_xy):
    """g1, g2 (annihilating 1/(x^2 - y^3)) and the Euler-type operator."""
    g1 = parse_operator("Dx*(x^2 - y^3)", W_xy)
    g2 = parse_operator("Dy*(x^2 - y^3)", W_xy)
    euler = parse_operator("3*x*Dx + 2*y*Dy + 6", W_xy)
    return g1, g2, euler
