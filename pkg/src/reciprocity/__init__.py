"""Compute, tabulate and machine-check explicit reciprocity laws.

The package is split along the arithmetic it needs:

- ``modarith``: primes, modular powers, residue symbols
- ``polyring``: polynomials over Z and F_p, root counts, cyclotomic polynomials
- ``qseries``: exact truncated q-expansions (eta products, theta series)
- ``ellcurve``: Weierstrass curves over F_p, traces, torsion
- ``laws``: one verification routine per reciprocity law
- ``cli``: the ``recip`` command line front end
"""

from reciprocity.report import Histogram, LawReport

__version__ = "0.1.0"

__all__ = ["Histogram", "LawReport", "__version__"]
