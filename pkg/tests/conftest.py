import os
import sys
from pathlib import Path

# every SAT model is re-checked against its clause list during tests
os.environ.setdefault("DFADECOMP_VERIFY_MODELS", "1")
sys.path.insert(0, str(Path(__file__).parent))

import pytest

from dfadecomp import taskgen
from dfadecomp.automata import Decomposition, Dfa
from dfadecomp.sample import LabeledSample

TOY = ("y", "r", "b", "n")


def word(text):
    return tuple(text.split())


@pytest.fixture
def toy_truth():
    return taskgen.ground_truth(taskgen.toy_task())


@pytest.fixture(scope="session")
def toy_exhaustive():
    """Every toy word up to length 4; forces 9 states for n=1 and (3,3) for n=2."""
    return taskgen.exhaustive_sample(taskgen.toy_task(), 4)


@pytest.fixture
def wait_done_fail():
    """Hand-built "y before r" DFA: WAIT(0, accepting) -y-> DONE(1, accepting),
    WAIT -r-> FAIL(2, sink)."""
    def step(q, s):
        if q == 0 and s == "y":
            return 1
        if q == 0 and s == "r":
            return 2
        return q
    return Dfa.from_function(TOY, 3, 0, [0, 1], step)


@pytest.fixture
def diss_sample():
    """Four positives and thirteen negatives conjectured for a grid-world task."""
    pos = ["y", "y y", "y b", "b n y"]
    neg = ["b", "r", "b r", "b n", "b y", "r n", "r b r", "b r y", "b r n y", "r y n r",
           "b r b r y", "r y r y r", "r b r b r y"]
    return LabeledSample.create([word(w) for w in pos], [word(w) for w in neg], alphabet=TOY)
