"""Expected values produced by the independent oracles in ``oracles.py``.

The n = 3 tables are cheap to regenerate (``test_oracles.py`` does so on
every run).  The five-dimensional Iwasawa tables took the dense oracle a few
minutes, so they are stored here and only the engine is checked against them.
"""

PAGES = {
    "torus3": {
        1: [[1, 3, 3, 1], [3, 9, 9, 3], [3, 9, 9, 3], [1, 3, 3, 1]],
        2: [[1, 3, 3, 1], [3, 9, 9, 3], [3, 9, 9, 3], [1, 3, 3, 1]],
    },
    "iwasawa3": {
        1: [[1, 2, 2, 1], [3, 6, 6, 3], [3, 6, 6, 3], [1, 2, 2, 1]],
        2: [[1, 2, 2, 1], [2, 4, 4, 2], [2, 4, 4, 2], [1, 2, 2, 1]],
    },
    "nakamura3a": {
        1: [[1, 1, 1, 1], [3, 3, 3, 3], [3, 3, 3, 3], [1, 1, 1, 1]],
        2: [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]],
    },
    "nakamura3b": {
        1: [[1, 3, 3, 1], [3, 9, 9, 3], [3, 9, 9, 3], [1, 3, 3, 1]],
        2: [[1, 1, 1, 1], [1, 3, 3, 1], [1, 3, 3, 1], [1, 1, 1, 1]],
    },
    "iwasawa5": {
        1: [[1, 2, 3, 3, 2, 1], [5, 10, 15, 15, 10, 5], [10, 20, 30, 30, 20, 10],
            [10, 20, 30, 30, 20, 10], [5, 10, 15, 15, 10, 5], [1, 2, 3, 3, 2, 1]],
        2: [[1, 2, 3, 3, 2, 1], [2, 4, 6, 6, 4, 2], [3, 6, 9, 9, 6, 3],
            [3, 6, 9, 9, 6, 3], [2, 4, 6, 6, 4, 2], [1, 2, 3, 3, 2, 1]],
    },
}

BETTI = {
    "torus3": [1, 6, 15, 20, 15, 6, 1],
    "iwasawa3": [1, 4, 8, 10, 8, 4, 1],
    "nakamura3a": [1, 2, 3, 4, 3, 2, 1],
    "nakamura3b": [1, 2, 5, 8, 5, 2, 1],
}

# brute-force centralizer and ∂̄-cohomology of (0,1)-forms
CENTRE_DIM = {"torus3": 3, "iwasawa3": 1, "iwasawa5": 2}
H01 = {"torus3": 3, "iwasawa3": 2, "iwasawa5": 2, "nakamura3b": 3}

# order-2 monomials of the full nine-parameter Nakamura (3b) family whose
# right-hand side is not ∂̄-exact (scan of every pair with the rank oracle)
NAKAMURA3B_OBSTRUCTED = [
    "t1·t6", "t1·t8", "t2·t3", "t2·t8", "t3·t6", "t3·t7",
    "t3·t8", "t3·t9", "t6·t8", "t6·t9", "t7·t8",
]
