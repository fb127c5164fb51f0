"""Cryptanalysis workbench for a subset-product cipher whose public values
hide a private coprime sequence behind per-position modular powers.

The package covers the whole life of the scheme: key generation, the
two-chain decryption walk, continued-fraction and intersection attacks
against both constant and varying hidden exponents, a record-keeping
exponent oracle with a forgery routine, and seeded frequency experiments.
"""

from .contfrac import (
    EQ2PRIME,
    EQ4,
    EQ4DOUBLEPRIME,
    EQ4PRIME,
    EQ5,
    ContinuedFraction,
    Convergent,
    DiscriminantHit,
    cf_expand,
    convergents,
    discriminant5_scan,
    legendre_scan,
)
from .coprime import (
    BitBlock,
    CoprimeSequence,
    coprime_sequence_violation,
    gen_coprime_sequence,
    is_coprime_sequence,
    iter_blocks,
    subset_product,
)
from .errors import (
    AttackBudgetExhausted,
    BadFactorization,
    FactorizationTooHard,
    GenerationExhausted,
    InvalidKeyMaterial,
    LeverlabError,
    NoSolution,
    NotACiphertext,
    NotInvertible,
    SearchExhausted,
    ShapeError,
)
from .numtheory import (
    Factorization,
    Modulus,
    RootSet,
    discrete_log,
    element_order,
    factorize,
    find_generator,
    find_prime_in_progression,
    is_probable_prime,
    mod_inv,
    mod_pow,
    mod_roots,
)
from .scheme import (
    Ciphertext,
    ConstantKeyMaterial,
    LeverAssignment,
    PrivateKey,
    PublicKey,
    decrypt,
    encrypt,
    gen_constant_key,
    keygen,
    omega_pm,
    parse_private_key,
    parse_public_key,
    public_from_private,
    serialize_private_key,
    serialize_public_key,
    strict_modulus_step,
)

__version__ = "0.1.0"

__all__ = [
    "AttackBudgetExhausted",
    "BadFactorization",
    "BitBlock",
    "Ciphertext",
    "ConstantKeyMaterial",
    "ContinuedFraction",
    "Convergent",
    "CoprimeSequence",
    "DiscriminantHit",
    "EQ2PRIME",
    "EQ4",
    "EQ4DOUBLEPRIME",
    "EQ4PRIME",
    "EQ5",
    "Factorization",
    "FactorizationTooHard",
    "GenerationExhausted",
    "InvalidKeyMaterial",
    "LeverAssignment",
    "LeverlabError",
    "Modulus",
    "NoSolution",
    "NotACiphertext",
    "NotInvertible",
    "PrivateKey",
    "PublicKey",
    "RootSet",
    "SearchExhausted",
    "ShapeError",
    "cf_expand",
    "convergents",
    "coprime_sequence_violation",
    "decrypt",
    "discrete_log",
    "discriminant5_scan",
    "element_order",
    "encrypt",
    "factorize",
    "find_generator",
    "find_prime_in_progression",
    "gen_constant_key",
    "gen_coprime_sequence",
    "is_coprime_sequence",
    "is_probable_prime",
    "iter_blocks",
    "keygen",
    "legendre_scan",
    "mod_inv",
    "mod_pow",
    "mod_roots",
    "omega_pm",
    "parse_private_key",
    "parse_public_key",
    "public_from_private",
    "serialize_private_key",
    "serialize_public_key",
    "strict_modulus_step",
    "subset_product",
    "__version__",
]
