import json

import pytest

from parabolic_moduli import verify as vf
from parabolic_moduli.modulimaps import ModuliParams

FAST = ("elliptic_*", "stability_*", "gamma_*", "covering_conjugacy", "involutivity", "sigma_pointwise",
        "ramification", "twist_tangent_action", "conic_through_points", "theta_consistency")


@pytest.fixture(scope="module")
def full_symbolic():
    return vf.run_suite(vf.VerifyPlan())


def test_full_symbolic_suite_passes(full_symbolic):
    bad = [(c.name, c.witness) for c in full_symbolic if c.status == "fail"]
    assert not bad
    assert len(full_symbolic) == len(vf.REGISTRY)


def test_report_schema_and_counts(full_symbolic):
    doc = vf.report(full_symbolic)
    assert set(doc) == {"suite", "summary"}
    s = doc["summary"]
    assert s["pass"] + s["fail"] + s["skipped"] == len(vf.registered_checks())


def test_report_trivial_cases():
    assert vf.report([])["summary"] == {"pass": 0, "fail": 0, "skipped": 0}
    one = vf.Certificate("x", "pass", {})
    assert vf.report([one])["summary"]["pass"] == 1


def test_manifest_covers_registry_once():
    names = list(vf.INVARIANT_MANIFEST.values())
    assert len(names) == len(set(names))
    assert set(names) <= set(vf.REGISTRY)
    modules = {m for m, _ in vf.INVARIANT_MANIFEST}
    assert modules == {"elliptic", "stability", "modulimaps"}


def test_deterministic_report_bytes():
    plan = vf.VerifyPlan(patterns=FAST, seed=11)
    a = vf.report_json(vf.run_suite(plan), seed=11, mode="symbolic")
    b = vf.report_json(vf.run_suite(plan), seed=11, mode="symbolic")
    assert a == b
    json.loads(a)


def test_parallel_matches_serial():
    plan = vf.VerifyPlan(patterns=("elliptic_*", "stability_*"))
    serial = vf.report(vf.run_suite(plan))
    par = vf.report(vf.run_suite(vf.VerifyPlan(patterns=plan.patterns, jobs=3)))
    assert serial == par


def test_specialized_agrees_with_symbolic(full_symbolic):
    spec = vf.run_suite(vf.VerifyPlan(mode="specialized", params=((2, 5),)))
    sym = {c.name: c.status for c in full_symbolic}
    for c in spec:
        if c.status != "skipped" and sym[c.name] != "skipped":
            assert c.status == sym[c.name], c.name


def test_theta_skips_without_rational_root():
    (cert,) = vf.run_suite(vf.VerifyPlan(mode="specialized", params=((2, 5),), patterns=("theta_consistency",)))
    assert cert.status == "skipped" and cert.reason


def test_invalid_plans():
    with pytest.raises(vf.InvalidPlan):
        vf.run_suite(vf.VerifyPlan(mode="specialized"))
    with pytest.raises(vf.InvalidPlan):
        vf.run_suite(vf.VerifyPlan(mode="specialized", params=((2, 2),)))
    with pytest.raises(vf.InvalidPlan):
        vf.run_suite(vf.VerifyPlan(mode="numeric"))


def test_tau_mutation_caught_with_witness():
    plan = vf.VerifyPlan(mutation=("tau", 2, 0))
    cert = vf.run_check("tau_involution", plan)
    assert cert.status == "fail"
    assert cert.witness and any(r != "0" for r in cert.witness["tau^2"])


def test_printed_checks_fail_with_witnesses():
    certs = vf.run_suite(vf.VerifyPlan(patterns=("printed_*",), include_printed=True))
    by = {c.name: c for c in certs}
    assert set(by) == set(vf.PRINTED_CHECKS)
    for name in ("printed_conic", "printed_tau", "printed_phiW", "printed_action_table"):
        assert by[name].status == "fail" and by[name].witness


def test_failed_certificate_always_has_witness():
    cert = vf.run_check("gamma_invariance", vf.VerifyPlan(mutation=("gamma", 0, 1)))
    assert cert.status == "fail" and cert.witness


def test_mutation_sites_cover_every_term():
    sym = ModuliParams.symbolic()
    assert len(vf.mutation_sites(sym, "gamma")) == len(vf.Formulas(sym).gamma.poly.terms)
