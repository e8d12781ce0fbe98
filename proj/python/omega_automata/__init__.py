"""Büchi complementation, determinisation and MSO decision over (N, <=)."""

from ._omega import (
    DEFAULT_CAP,
    Alphabet,
    BuchiAutomaton,
    CapExceeded,
    Error,
    Lasso,
    ParseError,
    RabinAutomaton,
    TransitionMatrix,
    ValidationError,
    complement,
    complement_detailed,
    determinize,
    emptiness,
    lasso_to_text,
    mso,
    parse_lasso,
    ramsey_factorize,
    random_buchi,
    random_lassos,
    semigroup_size,
    transition_matrix,
    trim,
)

__all__ = [name for name in dir() if not name.startswith("_")]
