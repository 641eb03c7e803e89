"""qhopf: exact-arithmetic engine for finite-dimensional quasi-Hopf algebras.

Submodules
----------
scalars     exact cyclotomic arithmetic (CycScalar)
algebra     structure-constant algebras, tensor powers, radical filtration
quasihopf   quasi-Hopf data, axiom verifier, twisting, duals, iso checks
catalog     constructors for the named algebra families
groupcoh    cyclic group cohomology with root-of-unity exponents
semidirect  cyclic extensions, quotients, untwisting pipeline, gauge moves
hochschild  Hochschild cohomology via the normalized bar complex
weylcheck   rank-<=2 root systems and the vanishing-criterion combinatorics
kernels     mod-p sparse rank (compiled when available, pure Python otherwise)
serialize   JSON wire formats
cli         command-line driver (`qhopf ...`)
"""

__version__ = "0.1.0"
