"""Exception hierarchy shared by every module of the package."""


class CochordalError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(CochordalError, ValueError):
    pass


class DuplicateVertex(GraphError):
    pass


class UnknownEndpoint(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownVertex(GraphError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the plain message
        return Exception.__str__(self)


class OrderingMismatch(CochordalError, ValueError):
    """The ordering's domain is not the graph's vertex set."""


class NotHomogeneous(CochordalError, ValueError):
    pass


class MatrixError(CochordalError, ValueError):
    pass


class NotSymmetric(MatrixError):
    pass


class NotPositiveDefinite(MatrixError):
    pass


class NotUnitLowerTriangular(MatrixError):
    pass


class DimensionCap(MatrixError):
    """Exponential enumeration requested above the configured size cap."""


class DimensionMismatch(MatrixError):
    pass


class EmptyIndexSet(MatrixError):
    pass


class IndexOutOfRange(MatrixError, IndexError):
    pass


class NotInPattern(CochordalError, ValueError):
    pass


class NoSuchScheme(CochordalError, ValueError):
    """The graph does not admit the requested elimination scheme."""


class ParseError(CochordalError, ValueError):
    pass
