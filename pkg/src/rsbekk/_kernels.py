"""Numba kernels for the likelihood recursions and simulators.

Everything here works on plain float64 scalars and arrays; the public
modules wrap these with the dataclass types.  The parameter layout for one
regime is the 13-vector

    [l10, l11, l12, l20, l21, l22, c11, c12, c22, a11, a22, b11, b22]

and conditional covariances travel as (smm, sbb, smb) triples.

Status codes returned by the path kernels:
    0  success
    1  near-singular conditional covariance (|H_t| < DET_FLOOR)
    2  degenerate mixture likelihood (all state densities zero)
"""

import numpy as np
from numba import njit

LN_2PI = 1.8378770664093453
DET_FLOOR = 1e-18
PROB_FLOOR = 1e-300
CHOL_FLOOR = 1e-12


@njit(cache=True)
def cov_step_kernel(smm, sbb, smb, e1, e2, c11, c12, c22, a11, a22, b11, b22):
    """One BEKK step: H' = CC' + A'ee'A + B'HB with diagonal A, B."""
    smm_n = c11 * c11 + a11 * a11 * e1 * e1 + b11 * b11 * smm
    sbb_n = c12 * c12 + c22 * c22 + a22 * a22 * e2 * e2 + b22 * b22 * sbb
    smb_n = c11 * c12 + a11 * a22 * e1 * e2 + b11 * b22 * smb
    return smm_n, sbb_n, smb_n


@njit(cache=True)
def mean_pair_kernel(smm, sbb, smb, th, d, d0, d1, d2):
    """Conditional means of (rm, rb) given the current covariance.

    ``d`` is the high-volatility dummy for the period (0.0 in the plain
    model) with coefficients (d0, d1, d2) on (1, smm, smb)."""
    mm = th[0] + th[1] * smm + th[2] * smb + d * (d0 + d1 * smm + d2 * smb)
    mb = th[3] + th[4] * smb + th[5] * sbb
    return mm, mb


@njit(cache=True)
def gauss2_logpdf_kernel(e1, e2, smm, sbb, smb, det):
    """Bivariate normal log density with an already-computed determinant."""
    quad = (sbb * e1 * e1 - 2.0 * smb * e1 * e2 + smm * e2 * e2) / det
    return -LN_2PI - 0.5 * np.log(det) - 0.5 * quad


@njit(cache=True)
def bekk_path_kernel(rm, rb, th, dummy, dcoef, h0, eps0):
    """Single-regime likelihood path.

    Returns (loglik, ll_terms, h_path, eps_path, status, t_fail).  The
    covariance path rows are (smm, sbb, smb); eps rows are (em, eb).
    """
    T = rm.shape[0]
    ll_terms = np.zeros(T)
    h_path = np.zeros((T, 3))
    eps_path = np.zeros((T, 2))
    c11, c12, c22 = th[6], th[7], th[8]
    a11, a22, b11, b22 = th[9], th[10], th[11], th[12]
    d0, d1, d2 = dcoef[0], dcoef[1], dcoef[2]

    smm, sbb, smb = h0[0], h0[1], h0[2]
    e1, e2 = eps0[0], eps0[1]
    total = 0.0
    for t in range(T):
        smm, sbb, smb = cov_step_kernel(
            smm, sbb, smb, e1, e2, c11, c12, c22, a11, a22, b11, b22
        )
        det = smm * sbb - smb * smb
        if not (det > DET_FLOOR) or not (smm > 0.0):
            return total, ll_terms, h_path, eps_path, 1, t
        mm, mb = mean_pair_kernel(smm, sbb, smb, th, dummy[t], d0, d1, d2)
        e1 = rm[t] - mm
        e2 = rb[t] - mb
        lt = gauss2_logpdf_kernel(e1, e2, smm, sbb, smb, det)
        ll_terms[t] = lt
        total += lt
        h_path[t, 0] = smm
        h_path[t, 1] = sbb
        h_path[t, 2] = smb
        eps_path[t, 0] = e1
        eps_path[t, 1] = e2
    return total, ll_terms, h_path, eps_path, 0, -1


@njit(cache=True)
def rs_path_kernel(rm, rb, th1, th2, p, q, h0, eps0, filtered_weights, pi1_init):
    """Two-state switching likelihood path with recombination.

    State 1 lives in column 0.  Per period: per-state covariance step from
    the shared recombined pair, per-state densities, mixture increment
    under the ex-ante weights, posterior update, recombination (ex-ante
    weights by default, filtered when ``filtered_weights``), then the
    transition step for the next period's ex-ante probabilities.

    Returns (loglik, ll_terms, ex_ante, filtered, state_cov, agg_cov,
    agg_innov, status, t_fail, s_fail, n_floored).
    """
    T = rm.shape[0]
    ll_terms = np.zeros(T)
    ex_ante = np.zeros((T, 2))
    filtered = np.zeros((T, 2))
    state_cov = np.zeros((T, 2, 3))
    agg_cov = np.zeros((T, 3))
    agg_innov = np.zeros((T, 2))

    # Start the chain from its stationary distribution unless the caller
    # pinned the initial state probability (pi1_init < 0 means stationary).
    if pi1_init >= 0.0:
        pi1 = pi1_init
    else:
        pi1 = (1.0 - q) / (2.0 - p - q)
    pi2 = 1.0 - pi1

    smm_r, sbb_r, smb_r = h0[0], h0[1], h0[2]
    e1_r, e2_r = eps0[0], eps0[1]
    total = 0.0
    n_floored = 0
    for t in range(T):
        smm1, sbb1, smb1 = cov_step_kernel(
            smm_r, sbb_r, smb_r, e1_r, e2_r,
            th1[6], th1[7], th1[8], th1[9], th1[10], th1[11], th1[12],
        )
        smm2, sbb2, smb2 = cov_step_kernel(
            smm_r, sbb_r, smb_r, e1_r, e2_r,
            th2[6], th2[7], th2[8], th2[9], th2[10], th2[11], th2[12],
        )
        det1 = smm1 * sbb1 - smb1 * smb1
        if not (det1 > DET_FLOOR) or not (smm1 > 0.0):
            return (total, ll_terms, ex_ante, filtered, state_cov, agg_cov,
                    agg_innov, 1, t, 1, n_floored)
        det2 = smm2 * sbb2 - smb2 * smb2
        if not (det2 > DET_FLOOR) or not (smm2 > 0.0):
            return (total, ll_terms, ex_ante, filtered, state_cov, agg_cov,
                    agg_innov, 1, t, 2, n_floored)

        mm1, mb1 = mean_pair_kernel(smm1, sbb1, smb1, th1, 0.0, 0.0, 0.0, 0.0)
        mm2, mb2 = mean_pair_kernel(smm2, sbb2, smb2, th2, 0.0, 0.0, 0.0, 0.0)
        em1 = rm[t] - mm1
        eb1 = rb[t] - mb1
        em2 = rm[t] - mm2
        eb2 = rb[t] - mb2
        lf1 = gauss2_logpdf_kernel(em1, eb1, smm1, sbb1, smb1, det1)
        lf2 = gauss2_logpdf_kernel(em2, eb2, smm2, sbb2, smb2, det2)

        # Mixture increment via log-sum-exp with the documented floor.
        m = lf1 if lf1 > lf2 else lf2
        w1 = pi1 * np.exp(lf1 - m)
        w2 = pi2 * np.exp(lf2 - m)
        s = w1 + w2
        if s <= 0.0:
            return (total, ll_terms, ex_ante, filtered, state_cov, agg_cov,
                    agg_innov, 2, t, 0, n_floored)
        if s < PROB_FLOOR:
            n_floored += 1
            lt = m + np.log(PROB_FLOOR)
        else:
            lt = m + np.log(s)
        ll_terms[t] = lt
        total += lt

        f1 = w1 / s
        if f1 < 0.0:
            f1 = 0.0
        elif f1 > 1.0:
            f1 = 1.0
        f2 = 1.0 - f1

        ex_ante[t, 0] = pi1
        ex_ante[t, 1] = pi2
        filtered[t, 0] = f1
        filtered[t, 1] = f2
        state_cov[t, 0, 0] = smm1
        state_cov[t, 0, 1] = sbb1
        state_cov[t, 0, 2] = smb1
        state_cov[t, 1, 0] = smm2
        state_cov[t, 1, 1] = sbb2
        state_cov[t, 1, 2] = smb2

        # Recombine states into the single pair carried into t+1.
        if filtered_weights:
            g1, g2 = f1, f2
        else:
            g1, g2 = pi1, pi2
        mbar_m = g1 * mm1 + g2 * mm2
        mbar_b = g1 * mb1 + g2 * mb2
        # grouped as in regime.recombine: degenerate weights reproduce the
        # surviving state's covariance bit-for-bit
        smm_r = (g1 * smm1 + g2 * smm2) + (
            g1 * mm1 * mm1 + g2 * mm2 * mm2 - mbar_m * mbar_m
        )
        sbb_r = (g1 * sbb1 + g2 * sbb2) + (
            g1 * mb1 * mb1 + g2 * mb2 * mb2 - mbar_b * mbar_b
        )
        smb_r = (g1 * smb1 + g2 * smb2) + (
            g1 * mm1 * mb1 + g2 * mm2 * mb2 - mbar_m * mbar_b
        )
        e1_r = rm[t] - mbar_m
        e2_r = rb[t] - mbar_b
        agg_cov[t, 0] = smm_r
        agg_cov[t, 1] = sbb_r
        agg_cov[t, 2] = smb_r
        agg_innov[t, 0] = e1_r
        agg_innov[t, 1] = e2_r

        # Transition step: ex-ante probabilities for t+1.
        pi1 = p * f1 + (1.0 - q) * f2
        if pi1 < 0.0:
            pi1 = 0.0
        elif pi1 > 1.0:
            pi1 = 1.0
        pi2 = 1.0 - pi1

    return (total, ll_terms, ex_ante, filtered, state_cov, agg_cov,
            agg_innov, 0, -1, 0, n_floored)


@njit(cache=True)
def chol2_kernel(smm, sbb, smb):
    """Closed-form 2x2 Cholesky factor with a floor on the diagonal."""
    v1 = smm if smm > CHOL_FLOOR else CHOL_FLOOR
    l11 = np.sqrt(v1)
    l21 = smb / l11
    v2 = sbb - l21 * l21
    if v2 < CHOL_FLOOR:
        v2 = CHOL_FLOOR
    l22 = np.sqrt(v2)
    return l11, l21, l22


@njit(cache=True)
def simulate_single_kernel(th, h0, eps0, z):
    """Simulate the single-regime model driven by standard normals ``z``.

    Returns (rm, rb, h_path)."""
    T = z.shape[0]
    rm = np.zeros(T)
    rb = np.zeros(T)
    h_path = np.zeros((T, 3))
    smm, sbb, smb = h0[0], h0[1], h0[2]
    e1, e2 = eps0[0], eps0[1]
    for t in range(T):
        smm, sbb, smb = cov_step_kernel(
            smm, sbb, smb, e1, e2,
            th[6], th[7], th[8], th[9], th[10], th[11], th[12],
        )
        mm, mb = mean_pair_kernel(smm, sbb, smb, th, 0.0, 0.0, 0.0, 0.0)
        l11, l21, l22 = chol2_kernel(smm, sbb, smb)
        e1 = l11 * z[t, 0]
        e2 = l21 * z[t, 0] + l22 * z[t, 1]
        rm[t] = mm + e1
        rb[t] = mb + e2
        h_path[t, 0] = smm
        h_path[t, 1] = sbb
        h_path[t, 2] = smb
    return rm, rb, h_path


@njit(cache=True)
def simulate_rs_kernel(th1, th2, p, q, h0, eps0, z, u):
    """Simulate the switching model: the hidden chain from ``u`` uniforms,
    returns driven by ``z`` normals, recursion through the realized state's
    covariance and innovation.

    Returns (rm, rb, states, h_path) with states in {1, 2}."""
    T = z.shape[0]
    rm = np.zeros(T)
    rb = np.zeros(T)
    states = np.zeros(T, dtype=np.int64)
    h_path = np.zeros((T, 3))

    pi1 = (1.0 - q) / (2.0 - p - q)
    smm, sbb, smb = h0[0], h0[1], h0[2]
    e1, e2 = eps0[0], eps0[1]
    state = 1 if u[0] < pi1 else 2
    for t in range(T):
        if t > 0:
            if state == 1:
                state = 1 if u[t] < p else 2
            else:
                state = 2 if u[t] < q else 1
        th = th1 if state == 1 else th2
        smm, sbb, smb = cov_step_kernel(
            smm, sbb, smb, e1, e2,
            th[6], th[7], th[8], th[9], th[10], th[11], th[12],
        )
        mm, mb = mean_pair_kernel(smm, sbb, smb, th, 0.0, 0.0, 0.0, 0.0)
        l11, l21, l22 = chol2_kernel(smm, sbb, smb)
        e1 = l11 * z[t, 0]
        e2 = l21 * z[t, 0] + l22 * z[t, 1]
        rm[t] = mm + e1
        rb[t] = mb + e2
        states[t] = state
        h_path[t, 0] = smm
        h_path[t, 1] = sbb
        h_path[t, 2] = smb
    return rm, rb, states, h_path
