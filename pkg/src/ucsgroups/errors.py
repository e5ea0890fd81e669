"""Exception types shared by every module.

Each failure mode has its own class so callers (and the CLI) can map them
to exit codes without parsing messages.
"""


class UcsError(Exception):
    """Base class for all library errors."""


class NonPrime(UcsError, ValueError):
    pass


class DegreeZero(UcsError, ValueError):
    pass


class ZeroElement(UcsError, ValueError):
    pass


class NotCoprime(UcsError, ValueError):
    pass


class AmbientMismatch(UcsError, ValueError):
    pass


class NotSquare(UcsError, ValueError):
    pass


class CtxMismatch(UcsError, ValueError):
    pass


class GenCountMismatch(UcsError, ValueError):
    pass


class BudgetExceeded(UcsError, RuntimeError):
    pass


class ZeroDim(UcsError, ValueError):
    pass


class RankMismatch(UcsError, ValueError):
    pass


class RelatorNotInFrattini(UcsError, ValueError):
    pass


class RelatorSyntax(UcsError, ValueError):
    pass


class Singular(UcsError, ValueError):
    pass


class WitnessDoesNotStabilize(UcsError, ValueError):
    pass


class NotInvariant(UcsError, ValueError):
    pass


class NotIso(UcsError, ValueError):
    pass


class NotSymmetric(UcsError, ValueError):
    pass


class EvenCharacteristic(UcsError, ValueError):
    pass


class CharacteristicFive(UcsError, ValueError):
    pass


class OrderMismatch(UcsError, ValueError):
    pass


class CongruenceFailed(UcsError, ValueError):
    pass


class RootOfUnityMissing(UcsError, ValueError):
    pass


class QNotInL(UcsError, ValueError):
    pass


class WrongResidue(UcsError, ValueError):
    pass


class BadJ(UcsError, ValueError):
    pass


class UnknownSubcommand(UcsError, ValueError):
    pass
