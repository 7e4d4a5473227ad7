"""tdk: truncated Witt vectors and truncated displays over finite rings.

Subpackages by topic:

* :mod:`tdk.rings` - finite commutative rings, homomorphisms, nilpotent algebras, thickenings;
* :mod:`tdk.witt`, :mod:`tdk.cwitt` - W_n(R), 𝒲_n(R), I_{n+1}(R) and 𝒥_{n+1};
* :mod:`tdk.display` - the matrix category of truncated displays;
* :mod:`tdk.relative` - relative displays, the lifting solver, crystals and Hodge lifts;
* :mod:`tdk.points` - the points functor FG_n and BT_m on nilpotent algebras;
* :mod:`tdk.descent` - Čech complexes for product coverings and finite field extensions;
* :mod:`tdk.serialize`, :mod:`tdk.cli` - JSON files and the ``tdk`` command.
"""

from .abgroup import AbGroupPresentation, smith_invariants
from .cwitt import CWitt, JElement, cwitt_ring, kernel_by_enumeration, kernel_of_projection
from .descent import acyclicity_check, cech_complex, covering_make, exact_sequence_check, homology
from .display import (DisplayError, DisplayMorphism, NotNilpotent, TruncatedDisplay, base_change,
                      display_make, etale_display, identity_morphism, morphism_compose, morphism_validate,
                      multiplicative_display, nilpotence_order, reconstruct_J, supersingular_display,
                      truncate)
from .points import bt_points, fg_points, mu_oracle
from .relative import (LiftError, RelDisplay, coordinate_lift, crystal_comparison, crystal_eval,
                       hodge_lift_display, lift_solve, rel_morphism_validate)
from .rings import (FiniteRing, RingError, RingHom, fp_poly_quot, nil_algebra, product, ring_make,
                    square_zero_ext, thickening_make, zmod)
from .witt import WittVector, frobenius, ghost, teichmuller, verschiebung, witt_ring

__version__ = "0.1.0"

__all__ = [
    "AbGroupPresentation", "smith_invariants",
    "CWitt", "JElement", "cwitt_ring", "kernel_by_enumeration", "kernel_of_projection",
    "acyclicity_check", "cech_complex", "covering_make", "exact_sequence_check", "homology",
    "DisplayError", "DisplayMorphism", "NotNilpotent", "TruncatedDisplay", "base_change", "display_make",
    "etale_display", "identity_morphism", "morphism_compose", "morphism_validate", "multiplicative_display",
    "nilpotence_order", "reconstruct_J", "supersingular_display", "truncate",
    "bt_points", "fg_points", "mu_oracle",
    "LiftError", "RelDisplay", "coordinate_lift", "crystal_comparison", "crystal_eval", "hodge_lift_display",
    "lift_solve", "rel_morphism_validate",
    "FiniteRing", "RingError", "RingHom", "fp_poly_quot", "nil_algebra", "product", "ring_make",
    "square_zero_ext", "thickening_make", "zmod",
    "WittVector", "frobenius", "ghost", "teichmuller", "verschiebung", "witt_ring",
]
