#!/usr/bin/env python3
"""Generate the bundled SMILES corpus used by the test suite.

Deterministic (fixed seed): scaffolds x substituents plus a hand-picked set
of small and special-case molecules.  Every emitted string is validated
through parse -> perceive -> canonical round-trip before it is written, and
entries are deduplicated by canonical form.

Usage: python scripts/gen_corpus.py [out_path]
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ms2smiles.chem import ChemError, canonical_smiles, mol_from_smiles, molecules_equal

SEED = 20250808
TARGET = 1100

# Small molecules (<= 8 heavy atoms) that anchor the exact-search tests.
SMALL = [
    "C", "O", "N", "CC", "CO", "CN", "CCO", "CCC", "CCN", "OCC", "CC=O", "C=C",
    "C#C", "CC#N", "C1CC1", "C1CCC1", "C1CCCC1", "C1CCCCC1", "c1ccccc1",
    "c1ccncc1", "c1cc[nH]c1", "c1ccoc1", "c1ccsc1", "CC(C)O", "CC(C)N",
    "CC(C)C", "CC(C)=O", "CC(N)C(=O)O", "NCC(=O)O", "OC=O", "CC(=O)O",
    "COC", "CCOC", "CSC", "CCS", "NCCO", "OCCO", "ClCCCl", "FC(F)F",
    "BrCCBr", "ICI", "C1CCOC1", "C1CCNC1", "C1COCCN1", "OC1CCCC1", "CC(Cl)C",
    "C=CC=C", "CC=CC", "N#CC#N", "OCC(O)C", "CNC", "CN(C)C", "CCNC", "CC(F)C",
    "c1cnc[nH]1", "CC1CC1", "OC(=O)C=C", "COC=O", "CSSC", "CC(C)(C)N",
    "CC(C)(C)O", "NC=O", "CNC=O", "CC(=O)N", "C1CS1", "C1CO1", "CC(Br)C",
]

# Special grammar and chemistry coverage.
SPECIAL = [
    "CC(=O)[O-].[Na+]",
    "[NH3+]CC([O-])=O",
    "[NH4+].[Cl-]",
    "C[N+](C)(C)C.[I-]",
    "[13CH3]CO",
    "[2H]OC([2H])([2H])C",
    "O=[N+]([O-])c1ccccc1",
    "C[S+](C)C.[Br-]",
    "C%10CCCCC%10",
    "C%12CC%12",
    "C/C=C/C(=O)O",
    "C/C=C\\C",
    "N[C@@H](C)C(=O)O",
    "N[C@H](CC)C(=O)O",
    "O[C@H]1CC[C@@H](O)CC1",
    "c1ccc2c(c1)cc[nH]2",
    "c1ccc2ncccc2c1",
    "c1ccc2c(c1)oc1ccccc12",
    "c1cnc2[nH]ccc2c1",
    "O=c1cccc[nH]1",
    "O=c1cc[nH]c(=O)[nH]1",
    "c1cnc2nc[nH]c2n1",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "c1ccc(-c2ccccc2)cc1",
    "c1ccc(Oc2ccccc2)cc1",
    "C1CCC2(CC1)CCCCC2",
    "C1CC2CCC1CC2",
    "OC1=CC=CC=C1",
    "C1=CC=CC=C1",
    "C1=CC2=CC=CC=C2C=C1",
    "[O-]C(=O)c1ccccc1[NH3+]",
    "[Na+].[O-]S(=O)(=O)c1ccccc1",
    "OS(=O)(=O)O",
    "OP(=O)(O)O",
    "COP(=O)(OC)OC",
    "CB(O)O",
    "C[Si](C)(C)C",
    "Cl[Se]Cl",
    "[Se]1C=CC=C1",
    "O=S1(=O)CCCC1",
]

SCAFFOLDS = [
    "c1ccc{a}cc1",
    "c1cc{a}cc{b}c1",
    "c1ccc{a}c{b}c1",
    "Oc1ccc{a}cc1",
    "Nc1ccc{a}cc1",
    "Clc1ccc{a}cc1",
    "c1ccc(cc1)C{a}",
    "c1ccc(cc1)CC{a}",
    "c1ccc(cc1)OC{a}",
    "c1ccc(cc1)C(=O)C{a}",
    "c1ccc(cc1)C(=O)N{a}",
    "c1ccc(cc1)C(=O)O{a}",
    "c1ccnc{a}c1",
    "c1cnc{a}cn1",
    "c1csc{a}c1",
    "c1coc{a}c1",
    "Cn1ccc{a}c1",
    "c1cc2ccccc2c{a}c1",
    "c1ccc2c(c1)cccc2{a}",
    "C1CCC{a}CC1",
    "C1CCN{a}CC1",
    "O1CCN{a}CC1",
    "C1CCOC1{a}",
    "C1CCNC1{a}",
    "CC(C{a})C(=O)O",
    "NC(C{a})C(=O)O",
    "CC(N)C(=O)OC{a}",
    "CC(=O)NC{a}",
    "CC(=O)OC{a}",
    "CCOC(=O)C{a}",
    "OCC(O)C{a}",
    "CC(O)CC{a}",
    "CCCCCC{a}",
    "CCCCCCCC{a}",
    "CC(C)CCC{a}",
    "C=CCC{a}",
    "CC#CC{a}",
    "OC(=O)CCC(=O)O{a}",
    "NCCNCC{a}",
    "OCC1OC(O{a})C(O)C(O)C1O",
    "CC1=CC(=O)C=CC1{a}",
    "CN1CCC(C{a})CC1",
    "O=C1CCCCC1{a}",
    "O=C1NC(=O)NC(=O)C1{a}",
    "c1ccc(cc1)S(=O)(=O)N{a}",
    "c1ccc(cc1)S(=O)(=O)O{a}",
]

SUBSTITUENTS = [
    "", "(C)", "(CC)", "(CCC)", "(C(C)C)", "(C(C)(C)C)", "(O)", "(OC)", "(OCC)",
    "(N)", "(NC)", "(N(C)C)", "(F)", "(Cl)", "(Br)", "(I)", "(C#N)", "(C=C)",
    "(C(=O)O)", "(C(=O)N)", "(C(=O)C)", "(C(F)(F)F)", "(CO)", "(CCO)", "(CN)",
    "(CC(=O)O)", "(OC(C)=O)", "(NC(C)=O)", "(S)", "(SC)", "(CCl)", "(C(=O)OC)",
    "([N+](=O)[O-])", "(c1ccccc1)", "(Cc1ccccc1)", "(Oc1ccccc1)", "(c1ccncc1)",
    "(c1cc[nH]c1)", "(C2CC2)", "(N2CCOCC2)",
]


def main() -> int:
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus_smiles.txt"
    )
    rng = random.Random(SEED)
    accepted: list[str] = []
    seen_canonical: set[str] = set()
    rejected = 0

    def consider(smiles: str) -> None:
        nonlocal rejected
        try:
            mol = mol_from_smiles(smiles)
            canonical = canonical_smiles(mol)
            if not molecules_equal(mol, mol_from_smiles(canonical)):
                raise ChemError("round-trip mismatch")
        except ChemError:
            rejected += 1
            return
        if canonical in seen_canonical:
            return
        seen_canonical.add(canonical)
        accepted.append(smiles)

    for smiles in SMALL + SPECIAL:
        consider(smiles)
    base = len(accepted)

    attempts = 0
    while len(accepted) < TARGET and attempts < 100_000:
        attempts += 1
        scaffold = rng.choice(SCAFFOLDS)
        text = scaffold.replace("{a}", rng.choice(SUBSTITUENTS))
        if "{b}" in text:
            text = text.replace("{b}", rng.choice(SUBSTITUENTS))
        consider(text)

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(f"# SMILES corpus for round-trip and similarity tests (seed {SEED})\n")
        fh.write("# generated by scripts/gen_corpus.py; one SMILES per line\n")
        for smiles in accepted:
            fh.write(smiles + "\n")
    print(f"wrote {len(accepted)} molecules ({base} fixed, {rejected} rejected) to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
