"""Exception hierarchy shared by all tilelab modules."""


class TilelabError(ValueError):
    pass


class DimensionMismatch(TilelabError):
    pass


class SingularBasis(TilelabError):
    pass


class ZeroVector(TilelabError):
    pass


# a zero direction is just a zero vector used as a direction
ZeroDirection = ZeroVector


class CommensurableDirections(TilelabError):
    pass


class IncompatibleLattices(TilelabError):
    pass


class PreconditionFailed(TilelabError):
    pass


class DecompositionMismatch(TilelabError):
    """An identity the theory guarantees failed; points at a bug."""


class SingleClass(TilelabError):
    pass


class NoDirectionFound(TilelabError):
    """No candidate direction made a coset one-periodic; points at a bug."""


class PartsNotDisjoint(TilelabError):
    pass


class NotLevelOne(TilelabError):
    pass


class TijdemanRequiresLevelOne(TilelabError):
    pass


class WindowTooLarge(TilelabError):
    pass


class ModulusOverflow(TilelabError, OverflowError):
    pass


class CapTooSmall(UserWarning):
    """Some tilings have a period beyond the enumeration cap."""
