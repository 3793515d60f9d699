"""Rebuild the golden matrix files from the reachability oracle.

Run from the repository root:  python3 tests/golden/regenerate.py
Only the oracle is used here, never infer_matrix.
"""
import json
from importlib.resources import files
from pathlib import Path

from presabs.matrix import PresenceAbsenceMatrix, load_matrix, matrix_stats, write_matrix
from presabs.oracle import oracle_presence
from presabs.syntax import parse_ontology

HERE = Path(__file__).parent


def main():
    data = files("presabs").joinpath("data")
    anatomy = parse_ontology(data.joinpath("demo.ofn").read_text(encoding="utf-8"))
    m = load_matrix(data.joinpath("toy_matrix.json").read_text(encoding="utf-8"))
    ref = oracle_presence(m, anatomy)
    pm = PresenceAbsenceMatrix(m.taxa, tuple(sorted(ref.columns)), ref.cells)
    (HERE / "toy_matrix.csv").write_text(write_matrix(pm, "csv"), encoding="utf-8")
    (HERE / "toy_matrix.json").write_text(write_matrix(pm, "json"), encoding="utf-8")
    (HERE / "toy_stats.json").write_text(
        json.dumps(matrix_stats(pm).as_dict(), indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
