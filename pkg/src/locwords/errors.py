"""Exception hierarchy.

Every domain error derives from :class:`LocWordsError` (itself a
``ValueError``) so callers can catch the whole family at once; the CLI maps
it to exit code 2.
"""

from __future__ import annotations


class LocWordsError(ValueError):
    pass


class EmptyDomain(LocWordsError):
    def __init__(self) -> None:
        super().__init__("word domain must be nonempty")


class ZeroPosition(LocWordsError):
    def __init__(self) -> None:
        super().__init__("position 0 is not allowed")


class LetterOutOfBound(LocWordsError):
    def __init__(self, position: int, letter: int, bound: int) -> None:
        self.position, self.letter, self.bound = position, letter, bound
        super().__init__(f"letter {letter} at position {position} exceeds bound {bound}")


class DomainOverlap(LocWordsError):
    def __init__(self, position: int) -> None:
        self.position = position
        super().__init__(f"domains overlap at position {position}")


class SubstitutionOutOfBound(LocWordsError):
    pass


class NotZeroClass(LocWordsError):
    pass


class PlanIndexOutOfRange(LocWordsError):
    pass


class OneSidedDomain(LocWordsError):
    pass


class InvalidSequence(LocWordsError):
    pass


class InvalidDomination(LocWordsError):
    pass


class WrongDomination(LocWordsError):
    pass


class ZeroInput(LocWordsError):
    def __init__(self) -> None:
        super().__init__("ZeroInput: zero has no word representation")


class UncoveredValue(LocWordsError):
    def __init__(self, word) -> None:
        self.word = word
        super().__init__(f"net value of {word} lies in no ball")


class ModulusUnavailable(LocWordsError):
    pass


class ChainBudgetExhausted(LocWordsError):
    pass


class NotInvertible(LocWordsError):
    pass


class NotCommuting(LocWordsError):
    pass


class MissingTableEntry(LocWordsError):
    pass


class ConfigError(LocWordsError):
    """Malformed configuration or certificate document (CLI exit code 3)."""
