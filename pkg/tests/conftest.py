import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dstiling.dsym import parse  # noqa: E402
from dstiling.enumerate import enumerate_all  # noqa: E402
from dstiling.store import write_db  # noqa: E402

S8_TEXT = ("<8:1 2 4 3 7 6 5 8,1 3 2 6 5 4 8 7,2 1 5 7 3 8 4 6:"
           "3 4 4 4 3 4 3 3,4 4 4 6 4 6 6 6>")

# a spread of shapes: mirrors, cones and crosscaps
# in all three geometries (orbifold names in the comments)
FIXTURES = [
    "<1:1,1,1:3,3>",  # *332
    "<1:1,1,1:4,4>",  # *442
    "<1:1,1,1:3,7>",  # *732
    "<2:1 2,2 1,2 1:4 4,3 3>",  # 3*2
    "<2:1 2,2 1,2 1:6 6,3 3>",  # 3*3
    "<2:2 1,1 2,2 1:4 4,6 6>",  # 2*32
    "<2:2 1,2 1,2 1:3 3,5 5>",  # 532
    "<2:2 1,2 1,2 1:3 3,6 6>",  # 632
    "<3:1 3 2,2 1 3,1 3 2:6 6 6,6 6 6>",  # 2*222
    "<4:1 4 3 2,2 1 4 3,3 4 1 2:4 4 4 4,4 4 4 4>",  # 22*
    "<4:2 1 4 3,3 4 1 2,2 1 4 3:4 4 4 4,4 4 4 4>",  # 2222
    "<4:2 1 4 3,3 4 1 2,4 3 2 1:4 4 4 4,4 4 4 4>",  # 22x
    "<4:2 1 4 3,3 4 1 2,4 3 2 1:4 4 4 4,6 6 6 6>",  # 32x
    "<5:1 2 4 3 5,1 3 2 5 4,2 1 3 4 5:3 4 4 4 4,6 6 6 4 4>",  # *3222
    "<6:1 4 3 2 6 5,2 1 5 4 3 6,3 2 1 4 5 6:3 3 3 3 3 3,8 8 8 3 8 5>",  # *532
    "<6:1 2 4 3 5 6,1 3 2 5 4 6,2 1 4 3 6 5:3 4 4 4 4 3,6 6 6 6 6 6>",  # 2*33
    "<7:1 3 2 6 7 4 5,2 1 5 4 3 6 7,1 4 6 2 5 3 7:5 5 5 10 5 10 5,3 3 3 3 3 3 4>",  # *542
    "<7:1 2 4 3 6 5 7,1 3 2 4 5 7 6,2 1 5 6 3 4 7:3 3 3 3 3 3 3,4 4 4 18 4 18 18>",  # *632
    "<7:1 2 4 3 6 5 7,1 3 2 4 5 7 6,2 1 5 6 3 4 7:3 6 6 6 3 3 3,4 4 4 6 4 6 6>",  # *3222
    S8_TEXT,  # 3*3
]


@pytest.fixture(scope="session")
def s8():
    return parse(S8_TEXT)


@pytest.fixture(scope="session")
def records6():
    return list(enumerate_all(6))


@pytest.fixture(scope="session")
def db6(tmp_path_factory, records6):
    path = str(tmp_path_factory.mktemp("db") / "d6.tdb")
    write_db(records6, path)
    return path


# per-size counts (spherical, euclidean, hyperbolic) of geometry-minimal tilings
CENSUS = {
    1: (5, 3, 4), 2: (13, 15, 22), 3: (15, 8, 13), 4: (30, 37, 71), 5: (26, 15, 41),
    6: (119, 86, 221), 7: (104, 64, 201), 8: (252, 217, 796), 9: (296, 185, 858),
    10: (697, 527, 2974), 11: (771, 506, 3993), 12: (2014, 1573, 13987),
    13: (2364, 1575, 22162), 14: (5428, 4227, 75270),
}


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split(".")[0])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
