import pytest

from cases import EXAMPLE_SHIFTS
from gcsim.assignment import dynamic_assignment_matrix


@pytest.fixture
def example_assignment():
    return dynamic_assignment_matrix(12, 4, 2, shifts=EXAMPLE_SHIFTS)
