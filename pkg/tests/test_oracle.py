import pytest

from isospine.arith import primes_between
from isospine.classgrp import class_number, prime_form_order
from isospine.graph import build_fp_graph, build_full_graph, omega_analysis, spine
from isospine.oracle import (
    P3_EXCEPTIONS,
    brute_force_fp_loops,
    predict_fp_anomalies,
    predict_spine_diameters,
    predict_spine_structure,
    verify,
)


def test_anomaly_examples():
    assert predict_fp_anomalies(2, 7).loops
    assert predict_fp_anomalies(3, 5).multi_edges
    assert predict_fp_anomalies(5, 19).loops
    assert not predict_fp_anomalies(2, 11).loops
    with pytest.raises(ValueError):
        predict_fp_anomalies(5, 5)
    with pytest.raises(ValueError):
        predict_fp_anomalies(3, 2)


def test_loop_prediction_matches_norm_form_search():
    for ell in primes_between(2, 60):
        for p in primes_between(ell + 1, 400):
            assert predict_fp_anomalies(ell, p).loops == brute_force_fp_loops(ell, p), (ell, p)


def test_anomaly_prediction_matches_built_graphs():
    for p in primes_between(5, 300):
        for ell in (2, 3):
            if p == ell:
                continue
            pred = predict_fp_anomalies(ell, p)
            fp = build_fp_graph(p, ell)
            assert pred.loops == bool(fp.loops()), (ell, p)
            assert pred.multi_edges == fp.has_directed_multi_edges(), (ell, p)


def test_structure_examples():
    pred = predict_spine_structure(29, 2)
    assert pred.fold_contains == [8000 % 29] and pred.attaching and pred.component_diameters == {2: 1}
    pred = predict_spine_structure(373, 2)
    assert 373 % 120 == 13
    assert pred.fold_count == 1 and pred.fold_contains == [8000 % 373]
    assert pred.attaching is False and pred.component_diameters[0] == 1
    pred = predict_spine_structure(311, 3)
    assert pred.fold_count == 2 and pred.vertex_attachment_js == [1728 % 311]
    assert pred.new_edge_count == 3 and pred.new_edges_disjoint


def test_structure_indeterminate_classes():
    for p in (71, 191, 239, 311, 431, 1319):
        pred = predict_spine_structure(p, 2)
        assert pred.attaching is None and pred.attaching_indeterminate
    assert not predict_spine_structure(79, 2).attaching_indeterminate


def test_structure_routing_and_errors():
    assert predict_spine_structure(13, 2).routed
    for p in P3_EXCEPTIONS:
        if p >= 5:
            assert predict_spine_structure(p, 3).routed
    with pytest.raises(ValueError):
        predict_spine_structure(29, 5)
    with pytest.raises(ValueError):
        predict_spine_structure(33, 2)


def test_ell3_tables_cover_every_admissible_residue():
    for p in primes_between(17, 5000):
        if p not in P3_EXCEPTIONS:
            pred = predict_spine_structure(p, 3)
            assert pred.new_edge_count in (0, 1, 2, 3)


def test_diameter_predictions():
    d = predict_spine_diameters(23)
    assert d.rim_length == prime_form_order(2, -23) == 3 and d.spine_diameter == 3
    assert predict_spine_diameters(59).component_diameters == {4: 1}
    assert set(predict_spine_diameters(241).component_diameters) == {1}
    assert predict_spine_diameters(71).indeterminate
    with pytest.raises(ValueError):
        predict_spine_diameters(13)
    with pytest.raises(ValueError):
        predict_spine_diameters(29, 3)


def test_verify_examples():
    rep = verify(71, 2)
    assert rep.status == "INDETERMINATE-RESOLVED" and rep.resolution == "new edge, not attaching"
    rep = verify(1319, 2)
    assert rep.status == "INDETERMINATE-RESOLVED" and rep.resolution == "attaching at 446-1103"
    assert verify(29, 2).status == "PASS"
    assert verify(311, 3).status == "PASS"
    rep = verify(11, 3)
    assert rep.status == "ROUTED" and "folds=" in rep.description


def test_verify_reports_a_diff_on_disagreement():
    # analysis of a different prime in the same congruence class must disagree somewhere
    analysis = omega_analysis(build_fp_graph(41, 2), spine(build_full_graph(41, 2)), 2)
    rep = verify(89, 2, analysis)
    assert rep.verdict == "FAIL" and ("spine_vertex_count" in rep.diff or "fp_vertex_count" in rep.diff)
    assert set(rep.to_dict()) >= {"p", "ell", "verdict", "diff"}


def test_vertex_count_expressions():
    assert predict_spine_structure(41, 2).spine_vertex_count == class_number(-164) // 2
    assert predict_spine_structure(43, 2).spine_vertex_count == 2 * class_number(-43)
    assert predict_spine_structure(47, 2).spine_vertex_count == class_number(-47)
