"""Exception hierarchy shared by the package."""


class AutostructError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(AutostructError):
    """Invalid alphabet declaration or a word using unknown symbols."""


class GroupError(AutostructError):
    """Invalid group backend data or an operation on foreign elements."""


class UnreachableError(GroupError):
    """A group element is not reachable from the generating set."""


class RegexError(AutostructError):
    """Malformed regular expression."""


class AutomatonError(AutostructError):
    """Invalid automaton data or an operation on incompatible automata."""


class StructureError(AutostructError):
    """Backend and language disagree about the alphabet."""


class CheckError(AutostructError):
    """Invalid checker parameters or a failed internal re-verification."""


class PlotError(AutostructError):
    """The requested drawing is not possible for this backend."""


class StructureFileError(AutostructError):
    """Malformed structure definition file."""
