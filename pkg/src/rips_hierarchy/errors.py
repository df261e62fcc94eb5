"""Exception hierarchy shared by every module of the package."""


class RipsHierarchyError(Exception):
    """Base class; the CLI maps it to exit status 2."""


class InputError(RipsHierarchyError, ValueError):
    """Malformed or inconsistent input data (dimension mismatch, duplicates, bad files)."""


class SubcloudError(InputError):
    """A claimed sub-cloud has a point that is not in the super-cloud."""


class DensityError(RipsHierarchyError):
    """The density hypothesis for a requested radius does not hold.

    ``witness`` carries the offending point or tuple when one exists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AboveCapError(RipsHierarchyError):
    """Membership query for a simplex of dimension above the stored cap."""


class EmptyHierarchyError(RipsHierarchyError):
    """The degree-Rips complexes are empty at every scale (fewer than k+1 points)."""


class NoUpperBoundError(RipsHierarchyError):
    """Two hierarchy vertices lie in different trees of a disconnected top layer."""


class ConstructionError(RipsHierarchyError):
    """A derived property of the interleaving construction failed a hard check."""
