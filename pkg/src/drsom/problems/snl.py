"""Sensor network localization as nonlinear least squares in the plane.

    f(X) = sum_{(i,j) in Nx} (|x_i - x_j|^2 - d_ij^2)^2
         + sum_{(k,j) in Na} (|a_k - x_j|^2 - dbar_kj^2)^2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..objective import Objective

DIST_FLOOR = 1e-6


@dataclass
class SnlInstance:
    anchors: np.ndarray  # (m, 2)
    sensor_edges: np.ndarray  # (E, 2) int, i < j, sensor indices
    sensor_dist: np.ndarray  # (E,)
    anchor_edges: np.ndarray  # (F, 2) int, (anchor k, sensor j)
    anchor_dist: np.ndarray  # (F,)
    n_sensors: int
    truth: Optional[np.ndarray] = None  # (n_sensors, 2), evaluation only
    seed: Optional[int] = None
    radio_range: Optional[float] = None
    noise: Optional[float] = None

    def __post_init__(self) -> None:
        if np.any(self.sensor_dist <= 0) or np.any(self.anchor_dist <= 0):
            raise ValueError("edge distances must be positive")
        self.sensor_edges = np.asarray(self.sensor_edges, dtype=int).reshape(-1, 2)
        self.anchor_edges = np.asarray(self.anchor_edges, dtype=int).reshape(-1, 2)

    @property
    def dim(self) -> int:
        return 2 * self.n_sensors

    def rmse(self, x: np.ndarray) -> float:
        """Root-mean-square positional error against the ground truth."""
        if self.truth is None:
            raise ValueError("instance carries no ground truth")
        err = x.reshape(-1, 2) - self.truth
        return float(np.sqrt(np.mean(np.sum(err**2, axis=1))))


def snl_generate(n: int, m: int, radio_range: float = 0.5, noise: float = 0.05, seed: int = 0) -> SnlInstance:
    """``n`` points uniform in the unit square; the first ``m`` are anchors.

    Measured distances are ``true * (1 + noise * N(0,1))``, floored at 1e-6.
    """
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    if not radio_range > 0 or noise < 0:
        raise ValueError("need radio_range > 0 and noise >= 0")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    anchors, sensors = pts[:m], pts[m:]
    ns = n - m

    diff = sensors[:, None, :] - sensors[None, :, :]
    dss = np.sqrt(np.sum(diff**2, axis=-1))
    ii, jj = np.triu_indices(ns, k=1)
    keep = dss[ii, jj] <= radio_range
    sensor_edges = np.column_stack([ii[keep], jj[keep]])
    true_s = dss[ii, jj][keep]

    das = np.sqrt(np.sum((anchors[:, None, :] - sensors[None, :, :]) ** 2, axis=-1))
    kk, ll = np.nonzero(das <= radio_range)
    anchor_edges = np.column_stack([kk, ll])
    true_a = das[kk, ll]

    nu = rng.standard_normal(true_s.size + true_a.size)
    meas_s = np.maximum(true_s * (1.0 + noise * nu[: true_s.size]), DIST_FLOOR)
    meas_a = np.maximum(true_a * (1.0 + noise * nu[true_s.size :]), DIST_FLOOR)
    return SnlInstance(
        anchors=anchors,
        sensor_edges=sensor_edges,
        sensor_dist=meas_s,
        anchor_edges=anchor_edges,
        anchor_dist=meas_a,
        n_sensors=ns,
        truth=sensors.copy(),
        seed=seed,
        radio_range=radio_range,
        noise=noise,
    )


def snl_objective(inst: SnlInstance) -> Objective:
    I, J = inst.sensor_edges[:, 0], inst.sensor_edges[:, 1]
    K, L = inst.anchor_edges[:, 0], inst.anchor_edges[:, 1]
    d2 = inst.sensor_dist**2
    db2 = inst.anchor_dist**2
    a = inst.anchors
    ns = inst.n_sensors

    def parts(x):
        X = x.reshape(ns, 2)
        u = X[I] - X[J]
        w = X[L] - a[K]
        ru = np.sum(u * u, axis=1) - d2
        rw = np.sum(w * w, axis=1) - db2
        return X, u, w, ru, rw

    def scatter(vals_i, idx_i, vals_j=None, idx_j=None):
        out = np.zeros((ns, 2))
        np.add.at(out, idx_i, vals_i)
        if vals_j is not None:
            np.add.at(out, idx_j, vals_j)
        return out

    def f(x):
        _, _, _, ru, rw = parts(x)
        return float(ru @ ru + rw @ rw)

    def grad(x):
        _, u, w, ru, rw = parts(x)
        gu = 4.0 * ru[:, None] * u
        gw = 4.0 * rw[:, None] * w
        out = scatter(gu, I, -gu, J)
        np.add.at(out, L, gw)
        return out.ravel()

    def hvp(x, v):
        _, u, w, ru, rw = parts(x)
        V = v.reshape(ns, 2)
        du = V[I] - V[J]
        dw = V[L]
        hu = 8.0 * np.sum(u * du, axis=1)[:, None] * u + 4.0 * ru[:, None] * du
        hw = 8.0 * np.sum(w * dw, axis=1)[:, None] * w + 4.0 * rw[:, None] * dw
        out = scatter(hu, I, -hu, J)
        np.add.at(out, L, hw)
        return out.ravel()

    return Objective(2 * ns, f, grad, hvp, name=f"snl_{ns}s_{a.shape[0]}a", meta={"x0": np.zeros(2 * ns)})
