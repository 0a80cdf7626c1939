import json

import numpy as np

from avglab.config import load_config
from avglab.verify import random_coefficients, random_nu, verify_all


def _small(tmp_path, **kw):
    base = dict(out_dir=str(tmp_path), integral_points=4, pipeline_sets=3, wronskian_points=3,
                sharpness_random=2, zero_vectors=20)
    base.update(kw)
    return load_config(env={}, **base)


def test_fast_stages_pass_and_write_artifacts(tmp_path):
    cfg = _small(tmp_path, stages=["integrals", "pipeline", "wronskian", "certificates", "ect",
                                   "sharpness", "zero-count"])
    s = verify_all(cfg)
    assert s["ok"] and s["first_failure"] is None
    assert s["headline"] == {"bound_full": 6, "bound_smooth": 3}
    for name in ("summary.json", "timings.json", "integrals.csv", "wronskians.csv", "ect.json",
                 "sharpness.json", "certificates/g2.json", "curve_g1.svg"):
        assert (tmp_path / name).exists(), name
    meta = json.loads((tmp_path / "summary.json").read_text())["meta"]
    assert meta == {"config_hash": cfg.hash(), "seed": 0}


def test_summary_is_byte_identical_across_runs(tmp_path):
    texts = []
    for sub in ("a", "b"):
        cfg = _small(tmp_path / sub, stages=["integrals", "pipeline", "zero-count"], seed=11)
        verify_all(cfg)
        texts.append((tmp_path / sub / "summary.json").read_bytes())
    assert texts[0] == texts[1]


def test_stop_on_failure(tmp_path):
    cfg = _small(tmp_path, stages=["integrals", "pipeline"], integral_tol=1e-30)
    s = verify_all(cfg)
    assert s["first_failure"] == "integrals" and "pipeline" not in s["stages"]
    cfg = _small(tmp_path, stages=["integrals", "pipeline"], integral_tol=1e-30,
                 stop_on_failure=False)
    s = verify_all(cfg)
    assert s["first_failure"] == "integrals" and s["stages"]["pipeline"]["ok"]


def test_incomplete_window_fails_ect(tmp_path):
    cfg = _small(tmp_path, stages=["certificates", "ect"], cert_r_lo=1.0, cert_r_hi=2.0,
                 head_tail=False, emit_svg=False)
    s = verify_all(cfg)
    assert s["stages"]["certificates"]["ok"]
    assert not s["stages"]["ect"]["ok"]
    assert s["stages"]["ect"]["full7"]["verdict"] == "incomplete"
    assert not (tmp_path / "curve_g1.svg").exists()


def test_random_generators():
    rng = np.random.default_rng(0)
    c = random_coefficients(rng)
    assert not c.is_zero()
    nu = random_nu(rng, smooth=True)
    assert nu[0] == nu[4] == nu[5] == 0
