import json
import math

import trustmesh


def test_apply_update_oracles():
    assert math.isclose(trustmesh.apply_update(0.8, 0.7), 0.804, abs_tol=1e-9)
    assert math.isclose(trustmesh.apply_update(0.6, 0.2), 0.588, abs_tol=1e-9)
    assert trustmesh.apply_update(1.0, 0.0) == 1.0


def test_confidence_oracle():
    entry = trustmesh.RecommenderLedgerEntry()
    entry.recommender_id = "r1"
    entry.last_trust = 0.8
    entry.recommendation_trust = 0.6
    rec = trustmesh.Recommendation()
    rec.recommender_id = "r1"
    rec.target_id = "t"
    rec.value = 0.9
    assert math.isclose(trustmesh.confidence(entry, rec), 0.67, abs_tol=1e-9)


def test_mismatched_confidence_raises():
    entry = trustmesh.RecommenderLedgerEntry()
    entry.recommender_id = "a"
    rec = trustmesh.Recommendation()
    rec.recommender_id = "b"
    rec.target_id = "t"
    try:
        trustmesh.confidence(entry, rec)
    except trustmesh.EngineError:
        pass
    else:
        raise AssertionError("expected EngineError")


def test_score_target_bootstrap():
    state = trustmesh.score_target("me", "p", None, trustmesh.Evidence(), now=12.0)
    assert state.provisional
    assert math.isclose(state.score, 0.5, abs_tol=1e-9)
    assert state.evidence_interactions == 0
    assert state.updated_at == 12.0


def test_score_target_uses_feedback():
    evidence = trustmesh.Evidence()
    fb = trustmesh.FeedbackRecord()
    fb.source_id = "me"
    fb.target_id = "p"
    fb.satisfaction = 1.0
    evidence.feedback = [fb]
    state = trustmesh.score_target("me", "p", None, evidence)
    assert not state.provisional
    assert state.evidence_interactions == 1
    assert state.score > 0.0


CONFIG = json.dumps(
    {
        "scenario": {
            "seed": 11,
            "domains": 3,
            "providers_per_domain": 1,
            "offers_per_provider": 1,
            "windows": 3,
            "history_rounds": 2,
        }
    }
)


def test_scenario_outputs_deterministic():
    first = trustmesh.scenario_outputs(CONFIG)
    second = trustmesh.scenario_outputs(CONFIG)
    assert set(first) == {
        "metrics.csv",
        "ranking.csv",
        "trajectories.jsonl",
        "run-manifest.json",
    }
    assert first == second

    with_parallel = json.loads(CONFIG)
    with_parallel["scenario"]["parallel"] = True
    third = trustmesh.scenario_outputs(json.dumps(with_parallel))
    assert third == first


def test_bad_config_raises_config_error():
    try:
        trustmesh.scenario_outputs('{"unknown_section": 1}')
    except trustmesh.ConfigError:
        pass
    else:
        raise AssertionError("expected ConfigError")


def test_engine_version():
    assert trustmesh.ENGINE_VERSION == "0.1.0"
