import pytest
from hypothesis import HealthCheck, settings

from kbdbg import parse_kb

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

KB_A_TEXT = """\
[ontology]
a1: A -> B
a2: B -> C
a3: A
a4: ~C
"""

KB_B_TEXT = """\
[ontology]
a1: A
a2: A -> B
a3: ~B
a4: C
a5: C -> D
a6: ~D
"""

KB_C_TEXT = """\
[ontology]
a1: A -> B
a2: A -> ~B

[background]
b1: A
"""


@pytest.fixture
def kb_a():
    return parse_kb(KB_A_TEXT)


@pytest.fixture
def kb_b():
    return parse_kb(KB_B_TEXT)


@pytest.fixture
def kb_c():
    return parse_kb(KB_C_TEXT)
