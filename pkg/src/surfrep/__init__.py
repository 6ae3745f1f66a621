"""surfrep: a numerical laboratory for surface-group representations.

Constructs explicit Fuchsian, irreducibly embedded, and diagonal
symplectic representations of a genus-2 surface group, evaluates cross
ratios on the boundary circle, periods, displacement and energy
functionals, and checks the identities and inequalities tying them
together.
"""

__version__ = "0.1.0"
