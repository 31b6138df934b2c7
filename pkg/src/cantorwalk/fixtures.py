"""Canonical maps on the ternary Cantor set, used across tests and the CLI.

All addresses are over the alphabet {0, 2}; orientations are +1 unless
noted.  H swaps the two halves, R is the reflection, G3 translates mass
toward 0, and A1/A2 admit an exact ping-pong certificate.
"""

from .maps import PAHomeo, PrefixTable, from_prefix_table, invert
from .space import CompactSet, ternary_cantor

H_TABLE = PrefixTable((("0", "2", 1), ("2", "0", 1)))
R_TABLE = PrefixTable((("", "", -1),))
G3_TABLE = PrefixTable((("0", "00", 1), ("20", "02", 1), ("22", "2", 1)))
A1_TABLE = PrefixTable((("0", "020", 1), ("20", "022", 1),
                        ("220", "00", 1), ("222", "2", 1)))
A2_TABLE = PrefixTable((("2", "202", 1), ("02", "200", 1),
                        ("000", "22", 1), ("002", "0", 1)))

TABLES = {"H": H_TABLE, "R": R_TABLE, "G3": G3_TABLE,
          "A1": A1_TABLE, "A2": A2_TABLE}

DEFAULT_DEPTH = 3


def cantor_space(depth: int = DEFAULT_DEPTH) -> CompactSet:
    return ternary_cantor(depth)


def fixture(name: str, space: CompactSet = None) -> PAHomeo:
    if space is None:
        space = cantor_space()
    return from_prefix_table(TABLES[name], space, label=(name,))


def named_generators(names, space: CompactSet = None,
                     with_inverses: bool = False) -> dict:
    """Ordered name -> PAHomeo dict; inverses appended as name^-1."""
    if space is None:
        space = cantor_space()
    gens = {n: fixture(n, space) for n in names}
    if with_inverses:
        for n in list(gens):
            gens[n + "^-1"] = invert(gens[n])
    return gens
