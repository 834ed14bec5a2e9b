"""Exception hierarchy shared by every module."""


class YardError(Exception):
    """Base class for all yardga errors."""


class ConfigurationError(YardError, ValueError):
    pass


class BoundsError(YardError, IndexError):
    pass


class OccupancyConflict(YardError):
    """Raised when placing into a cell that already holds a container."""


class DuplicatePlacement(YardError):
    """Raised when a container that is already placed is placed again."""


class NoOccupant(YardError):
    """Raised when removing from an empty cell."""


class UnplacedContainer(YardError, KeyError):
    pass


class IntegrityError(YardError):
    """A layout references a container id the instance does not know."""


class IncompleteLayoutError(YardError):
    pass


class InfeasibleLayoutError(YardError):
    pass


class DomainError(YardError, ValueError):
    pass


class InstanceError(YardError, ValueError):
    """An instance violates one of its structural or capacity invariants."""


class CapacityError(InstanceError):
    """Not enough (refrigerated) cells for the container population."""


class GenerationFailure(YardError):
    """Random feasible construction ran out of restarts."""


class AllocationFailure(YardError):
    """The LIFO allocator found no feasible push for a container."""


class FormatError(YardError, ValueError):
    """Malformed instance or plan file."""
