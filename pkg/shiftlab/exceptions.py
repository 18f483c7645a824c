"""
Exceptions raised by the shiftlab engine.

Negative answers that are part of an operation's result (an incompatible
join, a sequence outside the image, a window-only evaluation) are returned
as values by the owning module; the classes here signal misuse or a search
that could not finish.
"""


class ShiftlabError(Exception):
    """Base class for shiftlab errors."""


class FormatError(ShiftlabError, ValueError):
    """Text in one of the sequence / cylinder / spec / table formats is bad."""


class InvalidInterval(ShiftlabError, ValueError):
    def __init__(self, a: int, b: int):
        super().__init__(f"invalid interval [{a},{b}]: a > b")
        self.a = a
        self.b = b


class SymbolOutsideAlphabet(ShiftlabError, ValueError):
    def __init__(self, symbol, alphabet):
        super().__init__(f"symbol {symbol!r} is outside alphabet {alphabet}")
        self.symbol = symbol
        self.alphabet = alphabet


class SymbolNotAllowed(ShiftlabError, ValueError):
    """A symbol does not occur in any point of the space."""


class UnsupportedTail(ShiftlabError, ValueError):
    """The operation is not defined for the given tail kind."""


class NotInSpace(ShiftlabError):
    """The input sequence is provably not a point of the morphism's domain."""


class NoCylinder(ShiftlabError):
    def __init__(self, position: int):
        super().__init__(
            f"point shifted by {position} lies in no listed cylinder"
        )
        self.position = position


class AmbiguousCylinder(ShiftlabError):
    def __init__(self, position: int, indexes):
        super().__init__(
            f"point shifted by {position} lies in several cylinders "
            f"{list(indexes)}"
        )
        self.position = position
        self.indexes = tuple(indexes)


class MissingZero(ShiftlabError):
    """The zero locator was applied to a sequence without a unique zero."""


class MissingWindowWord(ShiftlabError, KeyError):
    # KeyError.__str__ would repr() the message.
    __str__ = Exception.__str__

    def __init__(self, word):
        super().__init__(f"local rule is undefined on window word {word}")
        self.word = tuple(word)


class NotStabilized(ShiftlabError):
    def __init__(self, window, k_max: int):
        super().__init__(
            f"image window {window} did not stabilize for k <= {k_max}"
        )
        self.window = window
        self.k_max = k_max


class TraceFailed(ShiftlabError):
    def __init__(self, level: int, coordinate: int, diagnostics: str):
        super().__init__(
            f"trace failed at level={level} coordinate={coordinate}: "
            f"{diagnostics}"
        )
        self.level = level
        self.coordinate = coordinate
        self.diagnostics = diagnostics


class CoverageError(ShiftlabError):
    def __init__(self, gaps):
        super().__init__(f"barrier does not cover checked inputs: {gaps}")
        self.gaps = tuple(gaps)


class RNotFound(ShiftlabError):
    def __init__(self, n_max: int):
        super().__init__(f"no stabilization index r(y) <= {n_max}")
        self.n_max = n_max


class UnknownExample(ShiftlabError, KeyError):
    __str__ = Exception.__str__

    def __init__(self, example_id: str):
        super().__init__(f"unknown example id {example_id!r}")
        self.example_id = example_id
