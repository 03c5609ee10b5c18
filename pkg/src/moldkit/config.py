"""Runtime configuration knobs.

All values are ordinary module globals so tests can monkeypatch them;
MOLDKIT_MAX_DEGREE in the environment overrides the degree cap at import.
"""

import os

DEFAULT_MAX_DEGREE = 8

# Dense exact arithmetic is O(n^4)-ish; desk scale needs n <= 5.
MAX_DEGREE = int(os.environ.get("MOLDKIT_MAX_DEGREE", DEFAULT_MAX_DEGREE))

# Default bound for the word search backing the pivot condition.
DEFAULT_MAX_WORD_LEN = 4

# enumerate_molds refuses larger candidate sets unless overridden.
CENSUS_CANDIDATE_LIMIT = 10**7
