"""Moving-frame invariants, Bonnet integrability and isometric deformations
of timelike surface patches in a Lorentzian 3-manifold."""

from ._core import (
    BonnetlabError,
    ConfigError,
    DslParseError,
    __version__,
    analyze,
    causal_character,
    check,
    cross,
    deform,
    eval_jet,
    inner,
    lorentz_orthonormalize,
    parse_immersion,
)

__all__ = [
    "BonnetlabError",
    "ConfigError",
    "DslParseError",
    "__version__",
    "analyze",
    "causal_character",
    "check",
    "cross",
    "deform",
    "eval_jet",
    "inner",
    "lorentz_orthonormalize",
    "parse_immersion",
]
