"""popuc - paraorthogonal polynomials on the unit circle, their ODEs and electrostatics."""

__version__ = "0.3.0"
