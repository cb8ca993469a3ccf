"""kellerlab: a desk-scale laboratory for planar polynomial maps with
constant Jacobian determinant.

Exact polynomial arithmetic over the Gaussian rationals, tame automorphism
words, resultant-based fiber counting, asymptotic tracts, characteristic
sets, and seeded Monte Carlo experiments on the image symmetric-difference
metric.
"""

__version__ = "0.1.0"
