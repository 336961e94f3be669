"""Rational homology balls bounded by positive integral surgeries on torus knots.

Modules: ``seq`` (Fibonacci and Pell-type sequences), ``cfrac`` (negative
continued fractions), ``plumbing`` (plumbing trees and their lattices),
``lattice`` (embeddings into the standard lattice), ``floer`` (V invariants
and correction terms), ``lisca`` (lens spaces bounding rational balls) and
``classify`` (the eighteen families and cross-checks).
"""
from .classify import FamilyTag, family_enumerate, family_member
from .plumbing import SurgeryTriple

# ``qhball.classify`` is the module; the classifier is qhball.classify.classify.
__all__ = ["SurgeryTriple", "FamilyTag", "family_enumerate", "family_member"]
__version__ = "0.1.0"
