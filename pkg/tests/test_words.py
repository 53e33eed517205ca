import json

import pytest

from cremona_dec.birmap import BirMap
from cremona_dec.decomp import (FactorStep, absorb_linear, compose_word, conic, express_quadratic_in_sigma,
                                inverse_word, lambda_ab, load_certificate, make_factorization, merge_linear,
                                mu_c, sigma_ab, verify_factorization)
from cremona_dec.errors import PreconditionError, VerificationFailed


def test_certificate_roundtrip(Q):
    tau = lambda_ab(3, 1, Q).to_birmap().compose(sigma_ab(0, 0, Q))
    f = express_quadratic_in_sigma(tau, (2, 1))
    g = load_certificate(f.dumps())
    assert g.target == f.target and g.maps == f.maps and g.curve == f.curve
    assert verify_factorization(g)["verified"]


def test_certificate_over_prime_field(F101):
    f = express_quadratic_in_sigma(sigma_ab(3, 0, F101), (2, 1))
    g = load_certificate(json.loads(f.dumps()))
    assert g.target.field == F101 and verify_factorization(g)["verified"]


def test_tampered_step_flagged(Q):
    f = express_quadratic_in_sigma(sigma_ab(0, 0, Q), (2, 1))
    data = f.to_json()
    k = next(i for i, s in enumerate(data["steps"]) if s["kind"] == "linear")
    data["steps"][k]["map"] = str(mu_c(7, Q).to_birmap())
    rep = verify_factorization(load_certificate(data))
    assert not rep["verified"] and not rep["composition_ok"]
    assert "composition differs from target" in rep["failures"]


def test_step_outside_dec_flagged(Q):
    f = make_factorization(BirMap.identity(Q), conic(Q), [])
    f.steps = [FactorStep.of(BirMap.parse("[x : y : 2*z]", Q))]
    f.target = f.steps[0].map
    rep = verify_factorization(f)
    assert rep["composition_ok"] and not rep["verified"]


def test_empty_factorization(Q):
    f = make_factorization(BirMap.identity(Q), conic(Q), [])
    rep = verify_factorization(f)
    assert rep["verified"] and rep["quadratic_count"] == 0 and f.verified
    with pytest.raises(VerificationFailed):
        make_factorization(sigma_ab(2, 1, Q), conic(Q), [])


def test_word_helpers(Q):
    s, lam, mu = sigma_ab(2, 1, Q), lambda_ab(2, 1, Q).to_birmap(), mu_c(3, Q).to_birmap()
    word = [lam, mu, s, lam]
    assert compose_word(word + inverse_word(word), Q).is_identity()
    merged = merge_linear(word, Q)
    assert len(merged) == 3 and compose_word(merged, Q) == compose_word(word, Q)
    absorbed = absorb_linear(word, Q)
    assert [m.degree for m in absorbed] == [2] and compose_word(absorbed, Q) == compose_word(word, Q)
    high = s.compose(lam).compose(sigma_ab(3, 1, Q))
    assert high.degree > 2
    with pytest.raises(PreconditionError):
        FactorStep.of(high)
