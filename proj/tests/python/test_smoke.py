import pytest

import fmmpde

MATURITIES = [0.25, 0.5, 0.75, 1.0, 1.25]
FORWARDS = [0.01, 0.013, 0.014, 0.015, 0.016]
VOLS = [0.2, 0.15, 0.25, 0.26, 0.27]

ATM_PRICE = 9.666517e-5  # converged two-rate at-the-money value


def make_md(n=2):
    return fmmpde.make_market(MATURITIES[:n], FORWARDS[:n], VOLS[:n], 0.5)


def test_market_basics():
    md = make_md(5)
    assert md.num_rates == 5
    assert md.forward(1) == 0.01
    assert md.rho(1, 2) == 0.5
    assert md.rho(3, 3) == 1.0
    assert md.sigma(2, 0.1) == 0.15
    assert abs(fmmpde.atm_strike(md, 1, 2) - 0.013) < 1e-15
    assert abs(fmmpde.annuity(md, 1, 2) - 0.24856871029503244) < 1e-14
    assert abs(fmmpde.initial_discount(md, 2) - 0.9942748411801298) < 1e-14
    assert fmmpde.default_r_max(md, 1, 2) == pytest.approx(5.0 * 0.013)


def test_correlation_matrix_form():
    md = fmmpde.make_market(
        MATURITIES[:2], FORWARDS[:2], VOLS[:2], [[1.0, 0.3], [0.3, 1.0]]
    )
    assert md.rho(1, 2) == 0.3


def test_pde_price_and_implied_vol():
    md = make_md()
    spec = fmmpde.SwaptionSpec(1, 2, 0.013)
    assert spec.european()
    rep = fmmpde.price_pde(md, spec, fmmpde.PdeConfig(resolution=[32], dt_divisor=64))
    assert rep.method == "pde"
    assert abs(rep.price / ATM_PRICE - 1.0) < 0.01
    assert rep.implied_vol is not None
    assert abs(rep.implied_vol - 0.15) < 0.003
    assert rep.ci is None


def test_mc_confidence_interval_brackets_pde():
    md = make_md()
    spec = fmmpde.SwaptionSpec(1, 2, 0.013)
    pde = fmmpde.price_pde(md, spec, fmmpde.PdeConfig(resolution=[32], dt_divisor=64))
    mc = fmmpde.price_mc(md, spec, fmmpde.MCConfig(paths=100000, steps=25, seed=2))
    assert mc.method == "mc"
    assert mc.ci is not None
    assert mc.ci.num_paths == 100000
    assert mc.ci.lower() < mc.ci.upper()
    assert mc.ci.contains(pde.price)


def test_implied_vol_roundtrip():
    md = make_md()
    iv = fmmpde.implied_vol(md, 1, 2, 0.013, ATM_PRICE)
    assert abs(iv - 0.150003) < 2e-6


def test_convergence_study():
    md = make_md()
    spec = fmmpde.SwaptionSpec(1, 2, 0.013)
    study = fmmpde.convergence_study(
        md, spec, [8, 16], 32, fmmpde.PdeConfig(resolution=[0], dt_divisor=64)
    )
    assert [row.level for row in study.rows] == [8, 16]
    assert study.rows[1].l2_error < study.rows[0].l2_error
    assert study.ref_price > 0.0


def test_invalid_product_is_rejected():
    md = make_md()
    with pytest.raises(ValueError):
        fmmpde.price_pde(
            md,
            fmmpde.SwaptionSpec(2, 2, 0.013),
            fmmpde.PdeConfig(resolution=[8]),
        )


def test_multi_exercise_dominates_european():
    md = make_md(3)
    atm = fmmpde.atm_strike(md, 2, 3)
    cfg = fmmpde.PdeConfig(resolution=[12], dt_divisor=24)
    euro = fmmpde.price_pde(md, fmmpde.SwaptionSpec(2, 3, atm, [2]), cfg)
    multi = fmmpde.price_pde(md, fmmpde.SwaptionSpec(2, 3, atm, [1, 2]), cfg)
    assert multi.price >= euro.price - 1e-15
    assert multi.implied_vol is None
