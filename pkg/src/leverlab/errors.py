"""Exception taxonomy shared by every module."""


class LeverlabError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class NotInvertible(LeverlabError):
    """Modular inverse of a non-unit was requested."""


class FactorizationTooHard(LeverlabError):
    """Factoring budget exhausted, or a group-order factor exceeds the dlog bound."""


class BadFactorization(LeverlabError):
    """A supplied factorization does not multiply back to the expected value."""


class SearchExhausted(LeverlabError):
    """A bounded search (prime in progression, generator sampling) ran out of budget."""


class NoSolution(LeverlabError):
    """The congruence has no solution (dlog subgroup miss, unsolvable root equation)."""


class GenerationExhausted(LeverlabError):
    """Random generation retries exhausted (infeasible coprime-sequence request)."""


class InvalidKeyMaterial(LeverlabError):
    """Injected or parsed key components violate a key invariant."""


class ShapeError(LeverlabError):
    """Sequence lengths disagree (bit block vs key length and the like)."""


class NotACiphertext(LeverlabError):
    """Decryption chains exhausted their step budget without a full factorization."""


class AttackBudgetExhausted(LeverlabError):
    """An attack scan would exceed its configured enumeration budget."""
