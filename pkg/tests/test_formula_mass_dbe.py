from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from ms2smiles.chem import (
    BadFormulaSyntax,
    UnknownElement,
    canonical_formula,
    dbe,
    default_mass_table,
    mol_from_smiles,
    molecular_formula,
    monoisotopic_mass,
    parse_formula,
)
PROTON = default_mass_table().proton_mass


def test_parse_formula_examples():
    assert parse_formula("C6H12O6") == {"C": 6, "H": 12, "O": 6}
    assert parse_formula("C4H11N") == {"C": 4, "H": 11, "N": 1}
    assert parse_formula("CH4") == {"C": 1, "H": 4}
    assert parse_formula("CH3COOH") == {"C": 2, "H": 4, "O": 2}


@pytest.mark.parametrize("text,exc", [("", BadFormulaSyntax), ("C0H4", BadFormulaSyntax),
                                      ("c6h6", BadFormulaSyntax), ("C6H12O6!", BadFormulaSyntax),
                                      ("Xx2", UnknownElement)])
def test_parse_formula_errors(text, exc):
    with pytest.raises(exc):
        parse_formula(text)


def test_canonical_formula_hill_order():
    assert canonical_formula({"C": 4, "H": 11, "N": 1}) == "C4H11N"
    assert canonical_formula({"H": 2, "O": 1}) == "H2O"
    assert canonical_formula({"C": 9, "H": 11, "N": 1, "O": 3}) == "C9H11NO3"
    assert canonical_formula({"Cl": 1, "H": 1}) == "ClH"
    assert canonical_formula({"C": 1, "Br": 2, "Cl": 1, "H": 1}) == "CHBr2Cl"


_SYMBOLS = ["C", "H", "N", "O", "S", "P", "Cl", "Br", "F", "I", "Si", "Na", "Se"]


@given(st.dictionaries(st.sampled_from(_SYMBOLS), st.integers(1, 60), min_size=1, max_size=8))
def test_formula_round_trip(counts):
    assert parse_formula(canonical_formula(counts)) == counts


def test_monoisotopic_mass_worked_example():
    counts = parse_formula("C4H11N")
    mass = monoisotopic_mass(counts)
    assert abs(mass - 73.0891) < 0.001
    assert abs(mass + PROTON - 74.0965) < 0.001


def test_carbon_defines_the_scale():
    assert monoisotopic_mass({"C": 1}) == 12.0


def test_mass_table_anchor_values():
    table = default_mass_table()
    assert abs(table.mass_of("H") - 1.00783) < 1e-4
    assert table.mass_of("C") == 12.0
    assert abs(table.mass_of("N") - 14.00307) < 1e-4
    assert abs(table.mass_of("O") - 15.99491) < 1e-4


def test_mass_unknown_element():
    with pytest.raises(UnknownElement):
        monoisotopic_mass({"Og": 1})


@given(
    st.dictionaries(st.sampled_from(_SYMBOLS), st.integers(1, 30), min_size=1, max_size=5),
    st.dictionaries(st.sampled_from(_SYMBOLS), st.integers(1, 30), min_size=1, max_size=5),
)
def test_mass_additivity(a, b):
    merged = dict(a)
    for key, value in b.items():
        merged[key] = merged.get(key, 0) + value
    assert math.isclose(
        monoisotopic_mass(merged), monoisotopic_mass(a) + monoisotopic_mass(b), rel_tol=1e-12
    )


def test_dbe_examples():
    assert dbe(parse_formula("C4H11N")) == 0
    assert dbe(parse_formula("C6H6")) == 4
    assert dbe(parse_formula("C6H12O6")) == 1
    assert dbe(parse_formula("CHCl3")) == 0
    assert dbe(parse_formula("C9H11NO3")) == 5
    # half-integral for ion-like formulas
    assert dbe(parse_formula("C4H10N")) == 0.5


def test_dbe_matches_rings_plus_pi_bonds(corpus):
    checked = 0
    for smiles in corpus:
        mol = mol_from_smiles(smiles)
        if any(a.charge != 0 for a in mol.atoms) or any(a.element == "H" for a in mol.atoms):
            continue
        if any(a.element in ("S", "P", "Se", "As", "B") for a in mol.atoms):
            continue  # hypervalent states fall outside the closed form
        rings = mol.n_bonds - mol.n_atoms + len(mol.components())
        pi = sum(int(b.order) - 1 for b in mol.bonds)
        assert dbe(molecular_formula(mol)) == rings + pi, smiles
        checked += 1
    assert checked >= 400
