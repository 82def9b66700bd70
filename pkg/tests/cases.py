"""Shared test constants: the canonical K=12, P=4, n=2 worked example."""

import numpy as np

# group shifts (0,1), (3,2), (0,3) reproduce the 6x4 eligibility matrix below
EXAMPLE_SHIFTS = ((0, 1), (3, 2), (0, 3))
EXAMPLE_MATRIX = [
    [1, 2, 3, 4],
    [6, 7, 8, 5],
    [9, 10, 11, 12],
    [4, 1, 2, 3],
    [7, 8, 5, 6],
    [10, 11, 12, 9],
]
# straggler realization used with it (1 = not straggling)
EXAMPLE_STATE = np.array([1, 1, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1])
