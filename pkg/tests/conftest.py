import pytest

from polycert import SggiSpec, certify, realize, tight_quotient_presentation


@pytest.fixture(scope="session")
def tight44():
    """The order-32 tight group of type {4,4}, realized once for the session."""
    p = tight_quotient_presentation((4, 4))
    return p, realize(p), certify(SggiSpec(p, (4, 4)))
