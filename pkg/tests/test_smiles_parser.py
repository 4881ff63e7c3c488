from __future__ import annotations

import pytest

from ms2smiles.chem import (
    BadBracketAtom,
    BondOrder,
    EmptyInput,
    SmilesParseError,
    UnbalancedParen,
    UnclosedRing,
    UnknownElement,
    parse_smiles,
)


def test_branched_amine():
    mol = parse_smiles("CC(C)(C)N")
    assert mol.n_atoms == 5
    assert mol.n_bonds == 4
    assert all(bond.order == BondOrder.SINGLE for bond in mol.bonds)
    assert [a.element for a in mol.atoms] == ["C", "C", "C", "C", "N"]
    # central atom bonded to everything else
    center = [i for i in range(5) if mol.degree(i) == 4]
    assert center == [1]


def test_ethanol_adjacency():
    mol = parse_smiles("CCO")
    assert [a.element for a in mol.atoms] == ["C", "C", "O"]
    assert {b.key() for b in mol.bonds} == {(0, 1), (1, 2)}


def test_tyrosine_shape():
    mol = parse_smiles("NC(Cc1ccc(O)cc1)C(=O)O")
    assert mol.n_atoms == 13
    aromatic = [i for i, a in enumerate(mol.atoms) if a.aromatic]
    assert len(aromatic) == 6
    ring_bonds = [b for b in mol.bonds if b.a in aromatic and b.b in aromatic]
    assert len(ring_bonds) == 6


def test_bracket_atom_fields():
    mol = parse_smiles("[13CH3-]")
    atom = mol.atoms[0]
    assert atom.isotope == 13
    assert atom.explicit_h == 3
    assert atom.charge == -1
    assert parse_smiles("[NH4+]").atoms[0].charge == 1
    assert parse_smiles("[Fe+3]").atoms[0].charge == 3
    assert parse_smiles("[O--]").atoms[0].charge == -2
    assert parse_smiles("[nH]").atoms[0].aromatic


def test_percent_ring_numbers():
    mol = parse_smiles("C%12CCCCC%12")
    assert mol.n_bonds == 6


def test_dots_make_components():
    mol = parse_smiles("CC(=O)[O-].[Na+]")
    assert len(mol.components()) == 2


def test_stereo_tokens_parsed_and_dropped():
    mol = parse_smiles("C/C=C/C")
    assert mol.n_bonds == 3
    assert [int(b.order) for b in mol.bonds] == [1, 2, 1]
    chiral = parse_smiles("C[C@H](N)C(=O)O")
    assert chiral.n_atoms == 6


def test_ring_bond_order_merging():
    mol = parse_smiles("C=1CCCCC=1")
    closure = [b for b in mol.bonds if b.key() == (0, 5)]
    assert closure[0].order == BondOrder.DOUBLE
    with pytest.raises(SmilesParseError):
        parse_smiles("C=1CCCCC#1")


@pytest.mark.parametrize(
    "text,exc",
    [
        ("C1CC", UnclosedRing),
        ("C1CC2CC1", UnclosedRing),
        ("C(C", UnbalancedParen),
        ("C)C", UnbalancedParen),
        ("", EmptyInput),
        ("   ", EmptyInput),
        ("Xx", UnknownElement),
        ("[Xx]", UnknownElement),
        ("K", UnknownElement),
        ("[C@@T]", BadBracketAtom),
        ("[", BadBracketAtom),
        ("[]", BadBracketAtom),
        ("C==C", SmilesParseError),
        ("=C", SmilesParseError),
        ("CC=", SmilesParseError),
        ("C..C", SmilesParseError),
        ("1CC", SmilesParseError),
        ("C11", SmilesParseError),
        ("C%1C", SmilesParseError),
        ("C1CC1C1CC1C11", SmilesParseError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_smiles(text)


def test_duplicate_ring_bond_rejected():
    with pytest.raises(SmilesParseError):
        parse_smiles("C12CC12")
