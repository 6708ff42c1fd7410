import csv
import io

from exactmatch.bench import COLUMNS, SuiteConfig, run_suite
from exactmatch.generate import GeneratorSpec


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_empty_config():
    assert run_suite(SuiteConfig()) == ",".join(COLUMNS) + "\n"
    assert run_suite(SuiteConfig(solvers=["tkpm-0.5"])) == ",".join(COLUMNS) + "\n"


def test_deterministic():
    cfg = {"solvers": ["tkpm-0.5", "tkpm-0.8", "em-relaxed"], "record_time": False,
           "instances": [{"family": "random-bipartite-with-planted-pm", "n": 6, "count": 4, "seed": 3}]}
    a = run_suite(SuiteConfig.from_dict(cfg))
    b = run_suite(SuiteConfig.from_dict(cfg))
    assert a == b
    assert len(rows(a)) == 4 * 3 + 3


def test_half_approx_band():
    cfg = SuiteConfig.from_dict({"solvers": ["tkpm-0.5"], "instances": [
        {"family": "random-bipartite-with-planted-pm", "n": 8, "count": 50},
        {"family": "random-general-with-planted-pm", "n": 8, "count": 50},
    ]})
    out = rows(run_suite(cfg))
    body = [r for r in out if r["instance"] != "summary"]
    assert len(body) == 100
    assert all(r["band_ok"] == "true" for r in body)
    summary = out[-1]
    assert summary["solver"] == "tkpm-0.5" and float(summary["min_ratio"]) >= 0.5
    assert float(summary["mean_ratio"]) >= float(summary["min_ratio"])


def test_failures_become_rows():
    # the bipartite-only solver on a general graph raises; the suite carries on
    cfg = SuiteConfig(solvers=["tkpm-0.8", "tkpm-0.5", "bogus"],
                      instances=[GeneratorSpec("random-general-with-planted-pm", 6, seed=1)])
    out = rows(run_suite(cfg))
    status = {r["solver"]: r["status"] for r in out if r["instance"] == "0"}
    assert status == {"tkpm-0.8": "error:InvalidParameter", "tkpm-0.5": "ok", "bogus": "error:ValueError"}


def test_all_solvers_run():
    cfg = SuiteConfig(solvers=["tkpm-0.5", "tkpm-0.8", "tkpm-fpt-alpha", "tkpm-fpt-beta", "min-tkpm",
                               "em-relaxed", "ewpm-relaxed", "em-fpt-circ"],
                      instances=[GeneratorSpec("complete-bipartite", 6, seed=s) for s in range(2)],
                      record_time=False)
    body = [r for r in rows(run_suite(cfg)) if r["instance"] != "summary"]
    assert all(not r["status"].startswith("error") for r in body)
    assert all(r["band_ok"] in ("true", "") for r in body)
