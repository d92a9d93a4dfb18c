"""Exact algebra for hermitian K-theory of split tori and its completions."""

__version__ = "0.1.0"

from .torus_ring import (
    LaurentElement,
    ParseError,
    PresentedElement,
    RankMismatch,
    TruncatedElement,
    augmentation,
    borel_project,
    format_element,
    involution,
    nilpotency_index,
    parse_element,
    to_laurent,
    to_presented,
)
from .abelian import FGAbelianGroup, Homomorphism, Tower, lim_lim1, mittag_leffler
from .ideal_engine import (
    IdealSpec,
    augmentation_ideal,
    find_power_inclusion,
    hermitian_ideal,
    lemma27_decompose,
    member,
)
from .hermitian import CoefficientTheory, GWElement, TheoryError, preset
from .completion import adic_tower, borel_tower, cofinality_report, theorem36_pi0_report

__all__ = [name for name in dir() if not name.startswith("_")]
