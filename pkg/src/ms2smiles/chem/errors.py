"""Exception hierarchy for molecule construction.

Any ``ChemError`` marks its input as an invalid structure candidate; callers
that only need a valid/invalid verdict should catch the base class.
"""


class ChemError(ValueError):
    """Base class for every molecule parsing or perception failure."""


class SmilesParseError(ChemError):
    """Malformed SMILES text."""


class EmptyInput(SmilesParseError):
    """Empty or whitespace-only SMILES."""


class UnclosedRing(SmilesParseError):
    """A ring-bond digit was opened but never closed."""


class UnbalancedParen(SmilesParseError):
    """Branch parentheses do not balance."""


class UnknownElement(ChemError):
    """Element symbol outside the supported set.

    Shared by the SMILES reader, the formula parser and mass lookups.
    """


class BadBracketAtom(SmilesParseError):
    """Bracket atom expression that does not match the grammar."""


class BadFormulaSyntax(ChemError):
    """Molecular formula string that does not match ``(Element Count?)+``."""


class PerceptionError(ChemError):
    """Base class for failures while normalizing a parsed molecule."""


class KekulizationFailure(PerceptionError):
    """No alternating single/double assignment exists for an aromatic system."""


class ValenceViolation(PerceptionError):
    """Bond-order sum exceeds every allowed valence for an atom."""
