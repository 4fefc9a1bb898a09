"""Exact structure theory for finitary classical matrix algebras.

Decidable index sets, generalized flags, their stabilizer subalgebras, exact
Levi and Jordan-Chevalley decompositions, real forms with Iwasawa-style MAN
data, and desk-scale induced modules, all over exact scalar arithmetic with
finite-window cross-checks.
"""

__version__ = "0.1.0"
