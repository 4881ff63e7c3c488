"""SMILES reader: text to raw molecular graph.

Covers organic-subset atoms, bracket atoms with isotope/chirality/hcount/
charge/class, branches, ring bonds (digits and %nn), bond symbols - = # :,
dots for multi-component inputs, and the stereo tokens / \\ @ @@ which are
parsed and dropped.  The output still needs ``perception.perceive`` before
any measurement: hydrogen counts are unknown and aromatic systems are not
yet kekulized.
"""

from __future__ import annotations

import re

from .elements import AROMATIC_BRACKET, AROMATIC_ORGANIC, ELEMENT_SYMBOLS
from .errors import (
    BadBracketAtom,
    EmptyInput,
    SmilesParseError,
    UnbalancedParen,
    UnclosedRing,
    UnknownElement,
)
from .mol import Atom, Bond, BondOrder, Molecule

_BRACKET_RE = re.compile(
    r"""^(?P<isotope>\d{1,3})?
         (?P<symbol>[A-Z][a-z]?|[a-z]{1,2})
         (?P<chiral>@{1,2})?
         (?P<hcount>H\d?)?
         (?P<charge>\+{1,3}|-{1,3}|[+-]\d{1,2})?
         (?::(?P<cls>\d+))?$""",
    re.VERBOSE,
)

_BOND_SYMBOLS: dict[str, BondOrder] = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
    # Directional bonds carry E/Z information we discard; the bond is single.
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
}

_UNSET = object()


def _parse_charge(token: str) -> int:
    if token[0] == "+":
        return int(token[1:]) if token[1:].isdigit() else len(token)
    return -int(token[1:]) if token[1:].isdigit() else -len(token)


def _parse_bracket(body: str, source: str) -> Atom:
    match = _BRACKET_RE.match(body)
    if match is None:
        raise BadBracketAtom(f"malformed bracket atom [{body}] in {source!r}")
    symbol = match.group("symbol")
    aromatic = symbol[0].islower()
    if aromatic and symbol not in AROMATIC_BRACKET:
        raise BadBracketAtom(f"element {symbol!r} cannot be aromatic in [{body}]")
    element = symbol.capitalize() if aromatic else symbol
    if element not in ELEMENT_SYMBOLS:
        raise UnknownElement(f"unknown element {symbol!r} in [{body}]")
    hcount = match.group("hcount")
    explicit_h = 0 if hcount is None else (1 if hcount == "H" else int(hcount[1:]))
    charge_tok = match.group("charge")
    charge = 0 if charge_tok is None else _parse_charge(charge_tok)
    isotope_tok = match.group("isotope")
    isotope = int(isotope_tok) if isotope_tok else None
    return Atom(element=element, isotope=isotope, charge=charge, explicit_h=explicit_h, aromatic=aromatic)


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string into a raw (unperceived) molecular graph.

    Raises a ``SmilesParseError`` subclass on malformed input; callers that
    only need validity may catch ``ChemError``.
    """
    s = text.strip()
    if not s:
        raise EmptyInput("empty SMILES string")

    atoms: list[Atom] = []
    bonds: list[Bond] = []
    bond_keys: set[tuple[int, int]] = set()
    prev: int | None = None
    pending = _UNSET
    branch_stack: list[int] = []
    open_rings: dict[int, tuple[int, BondOrder | None]] = {}

    def add_bond(a: int, b: int, order: BondOrder | None) -> None:
        if a == b:
            raise SmilesParseError(f"bond from atom to itself in {text!r}")
        key = (a, b) if a < b else (b, a)
        if key in bond_keys:
            raise SmilesParseError(f"duplicate bond between atoms {a} and {b} in {text!r}")
        bond_keys.add(key)
        bonds.append(Bond(a, b, order))

    def take_pending() -> BondOrder | None | object:
        nonlocal pending
        order = pending
        pending = _UNSET
        return order

    def add_atom(atom: Atom) -> None:
        nonlocal prev
        idx = len(atoms)
        atoms.append(atom)
        order = take_pending()
        if prev is not None:
            if order is _UNSET:
                # Default bond; aromatic-vs-single is settled during perception
                # because it depends on ring membership.
                both_aromatic = atoms[prev].aromatic and atom.aromatic
                order = None if both_aromatic else BondOrder.SINGLE
            add_bond(prev, idx, order)
        elif order is not _UNSET:
            raise SmilesParseError(f"bond symbol with no preceding atom in {text!r}")
        prev = idx

    i, n = 0, len(s)
    while i < n:
        c = s[i]
        if c == "[":
            end = s.find("]", i)
            if end < 0:
                raise BadBracketAtom(f"unterminated bracket atom in {text!r}")
            add_atom(_parse_bracket(s[i + 1 : end], text))
            i = end + 1
        elif s[i : i + 2] in ("Cl", "Br"):
            add_atom(Atom(element=s[i : i + 2]))
            i += 2
        elif c in "BCNOPSFI":
            add_atom(Atom(element=c))
            i += 1
        elif c in AROMATIC_ORGANIC:
            add_atom(Atom(element=c.upper(), aromatic=True))
            i += 1
        elif c in _BOND_SYMBOLS:
            if pending is not _UNSET:
                raise SmilesParseError(f"two bond symbols in a row in {text!r}")
            pending = _BOND_SYMBOLS[c]
            i += 1
        elif c == "(":
            if prev is None:
                raise SmilesParseError(f"branch before any atom in {text!r}")
            if pending is not _UNSET:
                raise SmilesParseError(f"bond symbol before '(' in {text!r}")
            branch_stack.append(prev)
            i += 1
        elif c == ")":
            if not branch_stack:
                raise UnbalancedParen(f"unmatched ')' in {text!r}")
            if pending is not _UNSET:
                raise SmilesParseError(f"dangling bond symbol before ')' in {text!r}")
            prev = branch_stack.pop()
            i += 1
        elif c == ".":
            if pending is not _UNSET:
                raise SmilesParseError(f"bond symbol before '.' in {text!r}")
            if prev is None:
                raise SmilesParseError(f"'.' must follow an atom in {text!r}")
            prev = None
            i += 1
        elif c.isdigit() or c == "%":
            if c == "%":
                if i + 2 >= n or not s[i + 1 : i + 3].isdigit():
                    raise SmilesParseError(f"'%' needs two digits in {text!r}")
                number = int(s[i + 1 : i + 3])
                i += 3
            else:
                number = int(c)
                i += 1
            if prev is None:
                raise SmilesParseError(f"ring-bond digit before any atom in {text!r}")
            order = take_pending()
            order = None if order is _UNSET else order
            if number in open_rings:
                other, opening_order = open_rings.pop(number)
                if opening_order is not None and order is not None and opening_order != order:
                    raise SmilesParseError(f"conflicting orders on ring bond {number} in {text!r}")
                merged = order if order is not None else opening_order
                if merged is None and not (atoms[other].aromatic and atoms[prev].aromatic):
                    merged = BondOrder.SINGLE
                add_bond(other, prev, merged)
            else:
                open_rings[number] = (prev, order)
        else:
            if c.isalpha():
                raise UnknownElement(f"atom token {c!r} is not in the organic subset in {text!r}")
            raise SmilesParseError(f"unexpected character {c!r} in {text!r}")

    if pending is not _UNSET:
        raise SmilesParseError(f"dangling bond symbol at end of {text!r}")
    if prev is None:
        raise SmilesParseError(f"trailing '.' in {text!r}")
    if branch_stack:
        raise UnbalancedParen(f"unclosed '(' in {text!r}")
    if open_rings:
        raise UnclosedRing(f"unclosed ring bonds {sorted(open_rings)} in {text!r}")
    return Molecule(atoms=atoms, bonds=bonds)
