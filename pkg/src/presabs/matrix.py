"""Character matrices in, presence/absence matrices out."""
from __future__ import annotations

import csv
import enum
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import jsonschema

from .eq import EqAnnotation, translate_all
from .model import Iri, Ontology
from .pipeline import PipelineReport, run_pipeline
from .vocabulary import DEFAULT_PREFIXES, Vocabulary, resolve_iri


class MatrixError(ValueError):
    pass


class CellState(enum.Enum):
    ASSERTED_PRESENT = "P!"
    INFERRED_PRESENT = "P"
    ASSERTED_ABSENT = "A!"
    INFERRED_ABSENT = "A"
    CONFLICT = "C"
    UNKNOWN = ""

    @property
    def token(self) -> str:
        return self.value

    @property
    def asserted(self) -> bool:
        return self in (CellState.ASSERTED_PRESENT, CellState.ASSERTED_ABSENT)

    @property
    def inferred(self) -> bool:
        return self in (CellState.INFERRED_PRESENT, CellState.INFERRED_ABSENT)


@dataclass(frozen=True)
class Taxon:
    id: Iri
    label: str = ""


@dataclass(frozen=True)
class State:
    id: str
    label: str
    annotations: tuple = ()


@dataclass(frozen=True)
class Character:
    id: str
    label: str
    states: tuple = ()

    def state(self, state_id: str) -> State | None:
        return next((s for s in self.states if s.id == state_id), None)


@dataclass(frozen=True)
class Cell:
    taxon: Iri
    character: str
    state: str


@dataclass(frozen=True)
class CharacterMatrix:
    taxa: tuple
    characters: tuple
    cells: tuple

    @property
    def potential_cells(self) -> int:
        return len(self.taxa) * len(self.characters)

    @property
    def filled_cells(self) -> int:
        return len({(c.taxon, c.character) for c in self.cells})

    def character(self, char_id: str) -> Character:
        return next(c for c in self.characters if c.id == char_id)

    def annotations_for(self, taxon: Iri) -> list:
        out = []
        for cell in self.cells:
            if cell.taxon == taxon:
                out.extend(self.character(cell.character).state(cell.state).annotations)
        return out

    def annotations(self) -> set:
        return {a for ch in self.characters for s in ch.states for a in s.annotations}


_STR = {"type": "string", "minLength": 1}

_PHENOTYPE = {
    "type": "object",
    "required": ["entity", "quality"],
    "properties": {"entity": _STR, "quality": _STR, "related_entity": _STR},
    "additionalProperties": False,
}

_STATE = {
    "type": "object",
    "required": ["id"],
    "properties": {"id": _STR, "label": {"type": "string"},
                   "phenotypes": {"type": "array", "items": _PHENOTYPE}},
}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["taxa", "characters", "cells"],
    "properties": {
        "prefixes": {"type": "object", "additionalProperties": {"type": "string"}},
        "taxa": {"type": "array", "items": {
            "type": "object", "required": ["id"],
            "properties": {"id": _STR, "label": {"type": "string"}}}},
        "characters": {"type": "array", "items": {
            "type": "object", "required": ["id", "states"],
            "properties": {"id": _STR, "label": {"type": "string"},
                           "states": {"type": "array", "items": _STATE}}}},
        "cells": {"type": "array", "items": {
            "type": "object", "required": ["taxon", "character", "state"],
            "properties": {"taxon": _STR, "character": _STR, "state": _STR}}},
    },
}


def _path(parts) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


def load_matrix(document: str, allow_polymorphic: bool = False,
                prefixes: Mapping[str, str] | None = None) -> CharacterMatrix:
    try:
        data = json.loads(document)
    except json.JSONDecodeError as e:
        raise MatrixError(f"not valid JSON: {e}") from None
    errors = sorted(jsonschema.Draft7Validator(MATRIX_SCHEMA).iter_errors(data),
                    key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise MatrixError(f"{_path(e.absolute_path)}: {e.message}")

    pmap = {**DEFAULT_PREFIXES, **(prefixes or {}), **data.get("prefixes", {})}

    def iri(text, where):
        try:
            return resolve_iri(text, pmap)
        except KeyError as e:
            raise MatrixError(f"{where}: {e.args[0]}") from None

    taxa = []
    for i, t in enumerate(data["taxa"]):
        taxa.append(Taxon(iri(t["id"], f"$.taxa[{i}].id"), t.get("label", "")))
    if len({t.id for t in taxa}) != len(taxa):
        raise MatrixError("$.taxa: duplicate taxon id")

    characters = []
    for i, ch in enumerate(data["characters"]):
        states = []
        for j, st in enumerate(ch["states"]):
            anns = []
            for k, ph in enumerate(st.get("phenotypes", [])):
                where = f"$.characters[{i}].states[{j}].phenotypes[{k}]"
                rel = ph.get("related_entity")
                anns.append(EqAnnotation(iri(ph["entity"], where + ".entity"),
                                         iri(ph["quality"], where + ".quality"),
                                         iri(rel, where + ".related_entity") if rel else None))
            states.append(State(st["id"], st.get("label", ""), tuple(anns)))
        if len({s.id for s in states}) != len(states):
            raise MatrixError(f"$.characters[{i}].states: duplicate state id")
        characters.append(Character(ch["id"], ch.get("label", ""), tuple(states)))
    if len({c.id for c in characters}) != len(characters):
        raise MatrixError("$.characters: duplicate character id")

    taxon_ids = {t.id for t in taxa}
    by_char = {c.id: c for c in characters}
    cells = []
    seen: set = set()
    for i, c in enumerate(data["cells"]):
        where = f"$.cells[{i}]"
        taxon = iri(c["taxon"], where + ".taxon")
        if taxon not in taxon_ids:
            raise MatrixError(f"{where}: undeclared taxon {c['taxon']!r}")
        ch = by_char.get(c["character"])
        if ch is None:
            raise MatrixError(f"{where}: undeclared character {c['character']!r}")
        if ch.state(c["state"]) is None:
            raise MatrixError(
                f"{where}: undeclared state {c['state']!r} of character {ch.id!r}")
        key = (taxon, ch.id)
        if key in seen and not allow_polymorphic:
            raise MatrixError(
                f"{where}: taxon {c['taxon']!r} already has a state for character {ch.id!r}")
        seen.add(key)
        cells.append(Cell(taxon, ch.id, c["state"]))
    return CharacterMatrix(tuple(taxa), tuple(characters), tuple(cells))


@dataclass(frozen=True)
class PresenceAbsenceMatrix:
    taxa: tuple
    columns: tuple
    cells: Mapping  # (taxon, entity) -> CellState, populated cells only

    def cell(self, taxon: Iri, entity: Iri) -> CellState:
        return self.cells.get((taxon, entity), CellState.UNKNOWN)

    def as_cell_map(self) -> dict:
        return {k: v for k, v in self.cells.items() if v is not CellState.UNKNOWN}


def infer_matrix(m: CharacterMatrix, anatomy: Ontology, v: Vocabulary | None = None,
                 fixpoint: bool = False, base: str | None = None) -> tuple:
    """Return ``(PresenceAbsenceMatrix, PipelineReport)``."""
    v = v or Vocabulary.default()
    if base is None and anatomy.ontology_iri is not None:
        base = anatomy.ontology_iri.value
    kw = {"base": base} if base else {}
    phenotypes = translate_all(m.annotations(), v, **kw)
    result = run_pipeline(anatomy, [pc.axiom() for pc in phenotypes.values()], v,
                          fixpoint=fixpoint, **kw)
    names, h = result.names, result.hierarchy
    entities = names.entities
    by_presence = {names.presence[e]: e for e in entities}
    by_absence = {names.absent[e]: e for e in entities}

    implied: dict = {}
    for a, pc in phenotypes.items():
        sup = h.superclasses(pc.iri)
        implied[a] = ({by_presence[c] for c in sup if c in by_presence},
                      {by_absence[c] for c in sup if c in by_absence})

    cells = {}
    for taxon in m.taxa:
        present, absent, said_present, said_absent = set(), set(), set(), set()
        for a in m.annotations_for(taxon.id):
            p, ab = implied[a]
            present |= p
            absent |= ab
            if a.quality == v.quality_present:
                said_present.add(a.entity)
            elif a.quality == v.quality_absent:
                said_absent.add(a.entity)
        for e in present | absent:
            if e in present and e in absent:
                state = CellState.CONFLICT
            elif e in present:
                state = (CellState.ASSERTED_PRESENT if e in said_present
                         else CellState.INFERRED_PRESENT)
            else:
                state = (CellState.ASSERTED_ABSENT if e in said_absent
                         else CellState.INFERRED_ABSENT)
            cells[(taxon.id, e)] = state
    pm = PresenceAbsenceMatrix(tuple(m.taxa), tuple(sorted(entities)), cells)
    return pm, result.report


@dataclass(frozen=True)
class MatrixStats:
    total_cells: int
    populated_cells: int
    asserted_populated: int
    inferred_populated: int
    conflict_cells: int
    columns_total: int
    columns_without_assertion: int
    columns_inferred_only: int
    per_code: dict

    @property
    def populated_pct(self) -> float:
        return round(100.0 * self.populated_cells / self.total_cells, 1) if self.total_cells else 0.0

    @property
    def inferred_pct(self) -> float:
        """Share of populated cells that come from inference alone."""
        if not self.populated_cells:
            return 0.0
        return round(100.0 * self.inferred_populated / self.populated_cells, 1)

    def as_dict(self) -> dict:
        return {
            "total_cells": self.total_cells,
            "populated_cells": self.populated_cells,
            "asserted_populated": self.asserted_populated,
            "inferred_populated": self.inferred_populated,
            "conflict_cells": self.conflict_cells,
            "columns_total": self.columns_total,
            "columns_without_assertion": self.columns_without_assertion,
            "columns_inferred_only": self.columns_inferred_only,
            "per_code": dict(self.per_code),
            "populated_pct": self.populated_pct,
            "inferred_pct": self.inferred_pct,
        }


def matrix_stats(pm: PresenceAbsenceMatrix) -> MatrixStats:
    counts = Counter()
    asserted_cols, populated_cols = set(), set()
    for (_, entity), state in pm.cells.items():
        if state is CellState.UNKNOWN:
            continue
        counts[state] += 1
        populated_cols.add(entity)
        if state.asserted:
            asserted_cols.add(entity)
    total = len(pm.taxa) * len(pm.columns)
    populated = sum(counts.values())
    per_code = {s.name: counts.get(s, 0) for s in CellState if s is not CellState.UNKNOWN}
    per_code[CellState.UNKNOWN.name] = total - populated
    return MatrixStats(
        total_cells=total,
        populated_cells=populated,
        asserted_populated=counts[CellState.ASSERTED_PRESENT] + counts[CellState.ASSERTED_ABSENT],
        inferred_populated=counts[CellState.INFERRED_PRESENT] + counts[CellState.INFERRED_ABSENT],
        conflict_cells=counts[CellState.CONFLICT],
        columns_total=len(pm.columns),
        columns_without_assertion=sum(1 for c in pm.columns if c not in asserted_cols),
        columns_inferred_only=len(populated_cols - asserted_cols),
        per_code=per_code,
    )


def write_matrix(pm: PresenceAbsenceMatrix, format: str = "csv") -> str:
    columns = sorted(pm.columns)
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["taxon"] + [c.value for c in columns])
        for t in pm.taxa:
            w.writerow([t.id.value] + [pm.cell(t.id, c).token for c in columns])
        return buf.getvalue()
    if format == "json":
        doc = {
            "taxa": [{"id": t.id.value, "label": t.label} for t in pm.taxa],
            "columns": [c.value for c in columns],
            "cells": [{"taxon": t.id.value, "entity": c.value, "state": pm.cell(t.id, c).name}
                      for t in pm.taxa for c in columns
                      if pm.cell(t.id, c) is not CellState.UNKNOWN],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown matrix format {format!r}")
