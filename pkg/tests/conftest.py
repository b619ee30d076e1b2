import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from unitcover.equations import Equation, solution_set_from_tuples
from unitcover.groups import FinRankGroup


@pytest.fixture(scope="session")
def torsion_group_2():
    """Coordinatewise powers of 2 with all sign patterns, dimension 2."""
    return FinRankGroup(2, [(2, 1), (1, 2)], sign_torsion=True)


@pytest.fixture(scope="session")
def torsion_group_23():
    """Coordinatewise products of powers of 2 and 3 with signs, dimension 3."""
    return FinRankGroup(
        3,
        [(2, 1, 1), (3, 1, 1), (1, 2, 1), (1, 3, 1), (1, 1, 2), (1, 1, 3)],
        sign_torsion=True,
    )


@pytest.fixture(scope="session")
def family_solution_set(torsion_group_23):
    """Curated one-parameter family (t, t, 2t-1) of solutions of
    x1 + x2 - x3 = 1, anchored at the all-ones tuple."""
    eq = Equation((1, 1, -1), torsion_group_23)
    members = [
        (1, 1, 1),
        (2, 2, 3),
        (-1, -1, -3),
        (Fraction(1, 3), Fraction(1, 3), Fraction(-1, 3)),
    ]
    return solution_set_from_tuples(eq, members)
