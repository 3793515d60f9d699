"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v -s`` (or
``python3 tests/test_acceptance.py``) to see the summary lines.
"""
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import d, data_text
from presabs.cli import main
from presabs.fuzz import check_classify, check_inversion, random_anatomy, random_el_ontology
from presabs.matrix import infer_matrix, load_matrix, matrix_stats
from presabs.model import EquivalentClasses, Named, Ontology, SubClassOf
from presabs.pipeline import run_pipeline
from presabs.syntax import parse_ontology, serialize_ontology

GOLDEN = Path(__file__).parent / "golden"
RESULTS = []


@pytest.fixture()
def report(request, capsys):
    """Yields a dict the test fills in; prints the verdict line afterwards."""
    info = {"detail": ""}
    start = time.perf_counter()
    yield info
    elapsed = time.perf_counter() - start
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    line = (f"{'FAIL' if failed else 'PASS'} criterion {info['id']}: {info['name']} "
            f"({elapsed:.2f}s) {info['detail']}").rstrip()
    RESULTS.append(line)
    with capsys.disabled():
        print("\n" + line)


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def _closure(axioms):
    up = {}
    for ax in axioms:
        if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named) and isinstance(ax.sup, Named):
            up.setdefault(ax.sub.iri, set()).add(ax.sup.iri)
        elif isinstance(ax, EquivalentClasses) and isinstance(ax.a, Named) and isinstance(ax.b, Named):
            up.setdefault(ax.a.iri, set()).add(ax.b.iri)
            up.setdefault(ax.b.iri, set()).add(ax.a.iri)

    def below(a, b):
        seen, stack = {a}, [a]
        while stack:
            x = stack.pop()
            if x == b:
                return True
            for y in up.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False
    return below


def test_criterion_1_demo_entailments(report, tmp_path):
    report.update(id=1, name="demo entailment suite (< 1 s)")
    main(["demo", str(tmp_path)])
    hier = tmp_path / "hierarchy.ofn"
    argv = ["pipeline", "--anatomy", str(tmp_path / "demo.ofn"),
            "--phenotypes", str(tmp_path / "demo_phenotypes.ofn"),
            "--out", str(tmp_path / "enriched.ofn"), "--hierarchy", str(hier)]

    def run():
        assert main(argv) == 0
        return _closure(parse_ontology(hier.read_text()).axioms)
    sub, elapsed = _timed(run)

    def absent(e):
        return d(f"absent+{e}")

    def presence(e):
        return d(f"presence+{e}")
    checks = {
        "a": sub(absent("fin"), absent("dorsal_fin")) and sub(absent("fin"), absent("pectoral_fin")),
        "b": sub(d("phenotype+shape+dorsal_fin"), presence("fin")),
        "c": all(sub(d("phenotype+bifurcated+humerus"), presence(e))
                 for e in ("forelimb", "limb", "limb_bud")),
        "d": sub(absent("limb_bud"), absent("limb")),
        "e": sub(absent("forelimb"), absent("humerus")),
        "f": all(not sub(absent(e.local_name), presence(e.local_name))
                 for e in parse_ontology(data_text("demo.ofn")).classes()
                 if e.value.startswith("http://purl.org/phenoscape/demo#")),
        "g": all(sub(d("phenotype+in_contact_with+internal_trochanter+diaphysis_of_femur"),
                     presence(e)) for e in ("internal_trochanter", "diaphysis_of_femur")),
    }
    report["detail"] = " ".join(f"{k}={'ok' if v else 'NO'}" for k, v in checks.items())
    assert all(checks.values())
    assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_2_oracle_equivalence(report):
    report.update(id=2, name="EL engine vs oracle on 200 seeds (< 10 s)")

    def run():
        return [s for s in range(200) if not check_classify(random_el_ontology(s)).empty]
    bad, elapsed = _timed(run)
    report["detail"] = f"diffs on {len(bad)} seed(s) {bad[:5]}"
    assert not bad
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_3_inversion(report):
    report.update(id=3, name="inversion vs oracle on 100 anatomies (< 20 s)")

    def run():
        bad, diverged = [], []
        for s in range(100):
            c = check_inversion(random_anatomy(s))
            if not c.diff.empty:
                bad.append(s)
            if not c.single_vs_fixpoint.empty:
                diverged.append(s)
        return bad, diverged
    (bad, diverged), elapsed = _timed(run)
    report["detail"] = f"oracle diffs {len(bad)}, single/fixpoint divergences {len(diverged)}"
    assert not bad and not diverged
    assert elapsed < 20.0, f"took {elapsed:.2f}s"


def test_criterion_4_matrix_amplification(report):
    report.update(id=4, name="toy matrix amplification (< 1 s)")
    anatomy = parse_ontology(data_text("demo.ofn"))

    def run():
        m = load_matrix(data_text("toy_matrix.json"))
        return matrix_stats(infer_matrix(m, anatomy)[0])
    stats, elapsed = _timed(run)
    golden = json.loads((GOLDEN / "toy_stats.json").read_text())
    report["detail"] = (f"inferred {stats.inferred_populated} > asserted {stats.asserted_populated}, "
                        f"{stats.inferred_pct}% of populated cells inferred")
    assert stats.as_dict() == golden
    assert stats.inferred_populated > stats.asserted_populated
    assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_5_determinism(report, tmp_path):
    report.update(id=5, name="determinism and idempotence")
    main(["demo", str(tmp_path)])
    demo = parse_ontology(data_text("demo.ofn"))
    axs = list(demo.axioms)
    random.Random(11).shuffle(axs)
    (tmp_path / "shuffled.ofn").write_text(
        serialize_ontology(Ontology(tuple(axs), demo.prefixes, demo.ontology_iri)))
    matrix = json.loads(data_text("toy_matrix.json"))
    random.Random(12).shuffle(matrix["cells"])
    (tmp_path / "shuffled.json").write_text(json.dumps(matrix))

    outputs = {}
    for tag, anatomy, mtx in (("orig", "demo.ofn", "toy_matrix.json"),
                              ("shuf", "shuffled.ofn", "shuffled.json")):
        assert main(["pipeline", "--anatomy", str(tmp_path / anatomy),
                     "--phenotypes", str(tmp_path / "demo_phenotypes.ofn"),
                     "--out", str(tmp_path / f"{tag}.ofn"), "--hierarchy", str(tmp_path / f"{tag}.h"),
                     "--report", str(tmp_path / f"{tag}.json")]) == 0
        assert main(["infer-matrix", "--anatomy", str(tmp_path / anatomy),
                     "--matrix", str(tmp_path / mtx), "--out", str(tmp_path / f"{tag}.csv"),
                     "--stats", str(tmp_path / f"{tag}.stats")]) == 0
        outputs[tag] = [(tmp_path / f"{tag}{ext}").read_bytes()
                        for ext in (".ofn", ".h", ".json", ".csv", ".stats")]
    identical = outputs["orig"] == outputs["shuf"]

    first = run_pipeline(demo)
    again = run_pipeline(first.ontology)
    idempotent = again.hierarchy == first.hierarchy
    report["detail"] = f"byte-identical={identical} idempotent={idempotent}"
    assert identical and idempotent


SCALE_SCRIPT = """
import json, resource, time
from presabs.fuzz import synthetic_anatomy
from presabs.pipeline import run_pipeline
o = synthetic_anatomy(10_000, seed=0)
t = time.perf_counter()
r = run_pipeline(o)
elapsed = time.perf_counter() - t
g = r.report.generated
print(json.dumps({
    "seconds": elapsed,
    "classes": len(o.classes()),
    "generated": sum(g[k] for k in ("step1_absence_classes", "step2_has_part_classes",
                                    "step3_negates", "part_of_workaround")),
    "step4": r.report.subsumptions_step4,
    "step6": r.report.subsumptions_step6,
    "maxrss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024,
}))
"""


def test_criterion_6_scale(report):
    report.update(id=6, name="10,000-class synthetic anatomy (< 60 s, < 2 GB)")
    proc = subprocess.run([sys.executable, "-c", SCALE_SCRIPT], capture_output=True, text=True,
                          timeout=600)
    assert proc.returncode == 0, proc.stderr
    r = json.loads(proc.stdout.strip().splitlines()[-1])
    report["detail"] = (f"{r['seconds']:.1f}s, {r['maxrss_mb']:.0f} MB, {r['generated']} generated "
                        f"axioms, subsumptions {r['step4']} -> {r['step6']}")
    assert r["classes"] >= 10_000
    assert 49_000 <= r["generated"] <= 51_000
    assert r["step6"] >= r["step4"]
    assert r["seconds"] < 60.0
    assert r["maxrss_mb"] < 2048


def test_criterion_7_roundtrip(report):
    report.update(id=7, name="serialize/parse round trip")
    demo = parse_ontology(data_text("demo.ofn"))
    enriched = run_pipeline(demo, parse_ontology(data_text("demo_phenotypes.ofn")).axioms).ontology
    corpus = [("demo", demo), ("enriched", enriched)]
    corpus += [(f"fuzz{s}", random_el_ontology(s)) for s in range(50)]
    bad = [name for name, o in corpus
           if not parse_ontology(serialize_ontology(o)).structurally_equal(o)]
    report["detail"] = f"{len(corpus) - len(bad)}/{len(corpus)} documents"
    assert not bad


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
