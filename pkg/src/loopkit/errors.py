"""Exception hierarchy.

Every error raised by the library derives from :class:`LoopError` so callers
(including the command line front end) can separate bad input from bugs.
"""


class LoopError(Exception):
    """Base class for all loopkit errors."""


class TableError(LoopError, ValueError):
    """A Cayley table failed to parse or validate."""


class NonSquare(TableError):
    pass


class NotLatin(TableError):
    pass


class SymbolMismatch(TableError):
    pass


class NotNormalized(TableError):
    pass


class ForeignElement(LoopError, ValueError):
    """An element or index does not belong to the quasigroup at hand."""


class NotPowerAssociative(LoopError):
    pass


class EmptyGeneratingSet(LoopError, ValueError):
    pass


class NotASubloop(LoopError, ValueError):
    pass


class NotNormal(LoopError, ValueError):
    pass


class CosetsDoNotPartition(LoopError):
    pass


class DegreeMismatch(LoopError, ValueError):
    pass


class IdentityMoved(LoopError, ValueError):
    pass


class EmptyList(LoopError, ValueError):
    pass


class PointOutOfRange(LoopError, IndexError):
    pass


class NotTransitive(LoopError):
    pass


class UnknownIdentity(LoopError, KeyError):
    pass


class UnknownProperty(LoopError, KeyError):
    pass


class LoopRequired(LoopError, TypeError):
    pass


class DimensionMismatch(LoopError, ValueError):
    pass


class InvalidSpace(LoopError):
    """The triality group failed its consistency gate."""


class ClassNotClosed(LoopError):
    pass


class NotSmallFrattini(LoopError):
    pass


class NotCentral(LoopError):
    pass


class NotPowerOfTwo(LoopError):
    pass


class EqualBlocks(LoopError, ValueError):
    pass


class PreconditionFailed(LoopError, ValueError):
    pass


class OrderTooLarge(LoopError, ValueError):
    pass


class CatalogError(LoopError):
    pass


class MixedOrders(CatalogError, ValueError):
    pass


class BadMagic(CatalogError, ValueError):
    pass


class TruncatedPayload(CatalogError, ValueError):
    pass


class UnknownCatalog(CatalogError, KeyError):
    pass


class IndexOutOfRange(CatalogError, IndexError):
    pass


class AttributeConflict(LoopError):
    """A write-once attribute was set twice with different values."""
