"""
Exception hierarchy shared by the engines and the command line.
Engines raise these; app.py turns them into exit codes.
"""


class FatPointsError(Exception):
    """Base class for every error raised by this package"""


class PreconditionError(FatPointsError, ValueError):
    """An operation was called outside its stated domain"""


class ModulusError(PreconditionError):
    """Modulus is not prime, or not larger than the degree / multiplicities"""


class CoincidentPointsError(PreconditionError):
    """Two points of a configuration are projectively equal"""


class HyperplanePointError(PreconditionError):
    """A point lies on the slicing hyperplane x0 = 0"""


class CapExceededError(PreconditionError):
    """A scan grid asks for a degree space larger than the configured cap"""


class UsageError(FatPointsError, ValueError):
    """Malformed command-line input"""


class DegenerateInductionError(FatPointsError):
    """Two induced points on the slicing hyperplane coincide"""


class BoundViolationError(FatPointsError):
    """A realized increment exceeded the key-step bound"""


class CacheIntegrityError(FatPointsError):
    """A cache key was re-inserted with a different value"""
