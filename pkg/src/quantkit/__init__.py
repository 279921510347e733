"""quantkit: a workbench for quantifier logic.

Core pieces: terms and formulas with capture-avoiding substitution, finite
powerset Boolean algebras with filters and ultrafilters, Boolean-valued
functional models, a bounded witness-based model constructor with a
brute-force search oracle, ultraproducts of two-valued models, and
set-indexed quantifiers.
"""

__version__ = "0.1.0"
