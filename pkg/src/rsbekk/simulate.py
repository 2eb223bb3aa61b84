"""Simulators for the single-regime and switching models.

Randomness comes from ``numpy.random.default_rng(seed)``: the normal draws
for the innovations are taken first, then (for the switching model) the
uniforms that drive the hidden chain, so a given seed pins the whole path.
Innovations are built from the closed-form 2x2 Cholesky factor of the
conditional covariance.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .types import BekkParams, Cov2, RsModelParams


class SimulatedPath(NamedTuple):
    rm: np.ndarray
    rb: np.ndarray
    h_path: np.ndarray


class SimulatedRsPath(NamedTuple):
    rm: np.ndarray
    rb: np.ndarray
    states: np.ndarray
    h_path: np.ndarray


def _check_horizon(T: int) -> None:
    if not isinstance(T, (int, np.integer)) or T < 1:
        raise ValueError(f"horizon must be a positive integer, got {T!r}")


def _seed_arrays(h0: Cov2, eps0) -> tuple[np.ndarray, np.ndarray]:
    h0_arr = np.array([h0.smm, h0.sbb, h0.smb])
    if eps0 is None:
        eps0_arr = np.zeros(2)
    else:
        eps0_arr = np.asarray(eps0, dtype=np.float64).reshape(2)
    return h0_arr, eps0_arr


def implied_unconditional_cov(params: BekkParams) -> Cov2:
    """Long-run covariance implied by the recursion, element by element:
    H_ij = (CC')_ij / (1 - a_i a_j - b_i b_j).

    Falls back to the intercept CC' for elements whose denominator is not
    safely positive (nonstationary dynamics have no finite long-run level).
    """
    cc = params.intercept_cov()
    den_mm = 1.0 - params.a11 * params.a11 - params.b11 * params.b11
    den_bb = 1.0 - params.a22 * params.a22 - params.b22 * params.b22
    den_mb = 1.0 - params.a11 * params.a22 - params.b11 * params.b22
    smm = cc.smm / den_mm if den_mm > 1e-3 else cc.smm
    sbb = cc.sbb / den_bb if den_bb > 1e-3 else cc.sbb
    smb = cc.smb / den_mb if den_mb > 1e-3 else cc.smb
    # Clip the implied correlation into (-1, 1) so the result is a valid
    # covariance even when the per-element denominators disagree.
    bound = 0.999 * np.sqrt(smm * sbb)
    smb = float(np.clip(smb, -bound, bound))
    return Cov2(smm=smm, sbb=sbb, smb=smb)


def simulate_single(
    params: BekkParams,
    T: int,
    h0: Cov2,
    seed: int = 0,
    eps0: Sequence[float] | None = None,
) -> SimulatedPath:
    """Simulate T periods of the single-regime model."""
    _check_horizon(T)
    h0_arr, eps0_arr = _seed_arrays(h0, eps0)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((T, 2))
    rm, rb, h_path = _kernels.simulate_single_kernel(
        params.to_vector(), h0_arr, eps0_arr, z
    )
    return SimulatedPath(rm=rm, rb=rb, h_path=h_path)


def simulate_rs(
    params: RsModelParams,
    T: int,
    h0: Cov2,
    seed: int = 0,
    eps0: Sequence[float] | None = None,
) -> SimulatedRsPath:
    """Simulate T periods of the switching model.

    The hidden chain starts from its stationary distribution.  The
    covariance recursion runs through the realized state's parameters and
    the realized innovations; there is no probability-weighted averaging
    on the simulation side.  Returns the hidden state path (values 1/2)
    alongside the returns.
    """
    _check_horizon(T)
    h0_arr, eps0_arr = _seed_arrays(h0, eps0)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((T, 2))
    u = rng.random(T)
    rm, rb, states, h_path = _kernels.simulate_rs_kernel(
        params.regime1.to_vector(), params.regime2.to_vector(),
        params.p, params.q,
        h0_arr, eps0_arr, z, u,
    )
    return SimulatedRsPath(rm=rm, rb=rb, states=states, h_path=h_path)
