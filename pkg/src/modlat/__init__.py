"""Identity-based encryption over the lattice of subspaces of F_q^n."""
from .gf import FieldSpec, Matrix, kernel, random_matrix, rank, rref
from .ibe import (Ciphertext, MasterKey, ParamPolicy, PrivateKey, PublicParams, decrypt, encrypt, extract, h1, h2,
                  setup)
from .lattice import (BooleanLattice, FiniteLattice, Interval, ProductLattice, Subspace, SubspaceLattice,
                      check_distributive_triple, check_modular_triple, complement_of, is_complement)
from .pairing import PairingContext, check_bilinear, leak_value, pair
from .rng import SeededRng

__version__ = "0.1.0"
