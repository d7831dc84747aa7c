import math

import numpy as np
import pytest

from quasaropt.errors import InvalidArgumentError
from quasaropt.schedules import (QasgdPhase, QuasarParams, SvrgOption,
                                 params_qagd, params_qasgd, params_qasgd_sgc,
                                 params_qasvrg, qasgd_eta, stage_length,
                                 svrg_batch_size)


def test_quasar_params_validation():
    with pytest.raises(InvalidArgumentError):
        QuasarParams(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        QuasarParams(1.1, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        QuasarParams(0.5, 0.0, 0.0, 1.0)
    # kappa floor: gamma=1 needs kappa >= 1
    with pytest.raises(InvalidArgumentError):
        QuasarParams(1.0, 5.0, 1.0, 1.0)
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)
    assert qp.kappa == 4.0


def test_kappa_undefined_for_mu_zero():
    qp = QuasarParams(0.5, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        qp.kappa


def test_qagd_mu_zero_k0_values():
    qp = QuasarParams(1.0, 0.0, 1.0, 1.0)
    sp = params_qagd(0, qp, eps=1e-3)
    assert sp.A_k == pytest.approx(0.25)
    assert sp.A_next == pytest.approx(1.0)
    assert sp.beta_k == pytest.approx(4.0 / 3.0)
    assert sp.c == pytest.approx(1.0 / 3.0)
    assert sp.rho_k == pytest.approx(1.0)
    assert sp.b == 0.0
    assert sp.eps_tilde == pytest.approx(0.5e-3)


def test_qagd_mu_zero_requires_positive_eps():
    qp = QuasarParams(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        params_qagd(0, qp, eps=0.0)


def test_qagd_strong_case_k0():
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)  # kappa = 4
    sp = params_qagd(0, qp, eps=0.0)
    assert sp.A_k == pytest.approx(1.0)
    assert sp.A_next == pytest.approx(1.25)
    assert sp.alpha_k == pytest.approx(1.0)  # gamma*mu
    assert sp.B_k == pytest.approx(1.0)
    assert sp.eps_tilde == 0.0


def test_qasgd_plain_eta_example():
    qp = QuasarParams(1.0, 0.0, 1.0, 2.0)
    eta = qasgd_eta(qp, t=3, sigma=1.0, R=1.0)
    assert eta == pytest.approx(0.25)


def test_qasgd_plain_requires_mu_zero():
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)
    with pytest.raises(InvalidArgumentError):
        params_qasgd(0, 10, QasgdPhase.PLAIN, qp, 1.0, 1.0, 1e-3)


def test_qasgd_step1_growth_ratio():
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)
    sp = params_qasgd(0, 10, QasgdPhase.STEP1, qp, 1.0, 1.0, 0.0)
    assert sp.A_next / sp.A_k == pytest.approx(1.0 + 1.0 / 16.0)
    assert sp.rho_k == 0.0


def test_qasgd_step2_initial_weight():
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)
    sp = params_qasgd(0, 10, QasgdPhase.STEP2, qp, 1.0, 1.0, 0.0)
    # m = 48, A_0 = 48^2/36 = 64
    assert sp.A_k == pytest.approx(64.0)


def test_qasvrg_optii_batch_example():
    qp = QuasarParams(0.5, 0.0, 1.0, 1.0)
    assert svrg_batch_size(0, SvrgOption.OPT_II, qp, 100, p=1.0 / 32.0) == 20


def test_qasvrg_opti_batch_example():
    qp = QuasarParams(1.0, 1.0, 1.0, 4.0)  # kappa=4, sqrt(8k)=sqrt(32)
    assert svrg_batch_size(0, SvrgOption.OPT_I, qp, 100, None) == 35
    assert svrg_batch_size(7, SvrgOption.OPT_I, qp, 100, None) == 35


def test_qasvrg_optii_batches_nondecreasing_and_capped():
    qp = QuasarParams(0.5, 0.0, 1.0, 1.0)
    sizes = [svrg_batch_size(k, SvrgOption.OPT_II, qp, 50, p=0.5 / 16)
             for k in range(200)]
    assert all(1 <= b <= 50 for b in sizes)
    assert all(b2 >= b1 for b1, b2 in zip(sizes, sizes[1:]))


def test_qasvrg_optii_requires_valid_p():
    qp = QuasarParams(0.5, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        params_qasvrg(0, SvrgOption.OPT_II, qp, 100, p=1.0, f_y0=1.0, eps=1e-3)


def test_qasvrg_opti_requires_mu_positive():
    qp = QuasarParams(0.5, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        params_qasvrg(0, SvrgOption.OPT_I, qp, 100, None, 1.0, 1e-3)


def test_sgc_rho_one_matches_plain_schedule():
    for qp in [QuasarParams(1.0, 0.0, 1.0, 1.0),
               QuasarParams(0.8, 0.5, 1.0, 3.0)]:
        for k in [0, 3, 17]:
            a = params_qagd(k, qp, eps=1e-3 if qp.mu == 0 else 1e-3)
            b = params_qasgd_sgc(k, qp, 1.0, eps=1e-3)
            assert a == b


def test_sgc_example_values():
    qp = QuasarParams(1.0, 0.0, 1.0, 1.0)
    sp = params_qasgd_sgc(0, qp, 2.0, eps=1e-3)
    assert sp.A_k == pytest.approx(0.125)
    assert sp.rho_k == pytest.approx(0.5)


def test_stage_length_examples():
    qp = QuasarParams(1.0, 0.0, 1.0, 1.0)
    assert stage_length(SvrgOption.OPT_II, qp, 0.25,
                        D_current=0.5, f_current=2.0) == 5
    qp2 = QuasarParams(1.0, 0.5, 1.0, 1.0)  # kappa=2
    assert stage_length(SvrgOption.OPT_I, qp2, 0.25) == \
        math.ceil(math.log(8.0) / math.log(1.25))


def test_stage_length_validation():
    qp = QuasarParams(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        stage_length(SvrgOption.OPT_II, qp, 0.3, D_current=1.0, f_current=1.0)
    with pytest.raises(InvalidArgumentError):
        stage_length(SvrgOption.OPT_II, qp, 0.25, D_current=1.0, f_current=0.0)


def test_weights_strictly_increasing_across_schedules():
    qp0 = QuasarParams(0.7, 0.0, 1.0, 2.0)
    qp1 = QuasarParams(0.7, 0.3, 1.0, 2.0)
    for k in [0, 1, 10, 100]:
        for sp in [params_qagd(k, qp0, 1e-3), params_qagd(k, qp1, 0.0),
                   params_qasgd(k, 100, QasgdPhase.PLAIN, qp0, 1.0, 1.0, 1e-3),
                   params_qasgd(k, 100, QasgdPhase.STEP1, qp1, 1.0, 1.0, 0.0),
                   params_qasgd(k, 100, QasgdPhase.STEP2, qp1, 1.0, 1.0, 0.0),
                   params_qasvrg(k, SvrgOption.OPT_I, qp1, 50, None, 1.0, 0.0),
                   params_qasvrg(k, SvrgOption.OPT_II, qp0, 50,
                                 0.7 / 16, 1.0, 1e-3)]:
            assert sp.A_next > sp.A_k
            assert sp.B_next >= sp.B_k
            assert sp.beta_k > 0
            if sp.batch_size is not None:
                assert 1 <= sp.batch_size <= 50
