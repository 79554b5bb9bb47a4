"""Exception types shared across the package."""


class MeshError(Exception):
    """Base class for mesh topology problems."""


class DegenerateCellError(MeshError):
    """A cell repeats a vertex."""


class NonManifoldError(MeshError):
    """An edge is incident to more than two cells."""

    def __init__(self, edge, count):
        super().__init__(f"edge {edge} has {count} incident cells (at most 2 allowed)")
        self.edge = edge
        self.count = count


class DuplicateEdgeError(MeshError):
    """Two distinct topological edges would collapse onto one vertex pair."""


class NotIncidentError(MeshError):
    """The given edge is not an edge of the given cell."""


class UnknownEdgeError(MeshError):
    """The given vertex pair is not an edge of the mesh."""


class UnknownElementError(MeshError):
    """Union-find element id out of range."""


class InvalidSpecError(MeshError):
    """Mesh generator parameters are invalid."""


class InvalidPartitionError(MeshError):
    """The requested partition cannot be built for this mesh."""


class NotARibbonError(MeshError):
    """The given edge set is not an orientation-dependency class of the mesh."""


class MissingEdgeError(MeshError):
    """An orientation map does not cover every edge of the mesh."""


class MoebiusError(Exception):
    """No consistent orientation exists: propagation returned inverted.

    Carries a witness edge together with the two contradicting orientation
    flags so failures are diagnosable and testable.
    """

    def __init__(self, edge=None, expected=None, found=None, detail=""):
        msg = "Moebius strip found"
        if edge is not None:
            msg += f": edge {edge} requires orientation {expected} and {found}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.edge = edge
        self.expected = expected
        self.found = found


class ParseError(Exception):
    """Malformed input text."""


class UnsupportedVersionError(ParseError):
    """The mesh file declares a format version we do not read."""


class MalformedSectionError(ParseError):
    """A required file section is missing or inconsistent."""


class NoQuadranglesError(ParseError):
    """The element list contains no 4-node quadrangles."""


class EmptyInputError(ParseError):
    """Asked to serialise an empty record list."""
