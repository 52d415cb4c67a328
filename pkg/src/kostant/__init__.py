"""Kostant operators at the base point and the forms phi_bar, phi, psi"""
from src.kostant.cache import GramCache, gram_cache
from src.kostant.forms import (
    phi_bar,
    phi_bar_form,
    phi_bar_gram,
    phi_orbit,
    phi_orbit_gram,
    psi_form,
    psi_invariance_residual,
)
from src.kostant.operators import (
    KostantBlocks,
    KostantOperator,
    KostantReport,
    isotropy_bracket_residual,
    kostant,
    kostant_blocks,
    kostant_report,
    orthonormal_frame,
)
