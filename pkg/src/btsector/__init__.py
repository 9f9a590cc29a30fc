"""Exact combinatorics of the Bruhat-Tits building of SL_n over F_q(t).

The package works with the valuation at infinity on F_q(t), whose
uniformizer is 1/t.  It provides the lattice-class model of the building,
the fundamental sector and its simplex stabilizers, finite Tits-system
checks, integer homology of sector windows, and the simplicial algebra of
the algebraic simplices, together with a CLI that runs the verification
suites and emits JSON reports, DOT graphs, and PNG figures.
"""

__version__ = "0.1.0"
