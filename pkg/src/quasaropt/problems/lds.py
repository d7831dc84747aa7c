"""Learning a linear dynamical system from input/output sequences.

The true system is h_{t+1} = A h_t + B x_t, y_t = C h_t + D x_t + noise with
h_0 = 0.  The model shares B (not trainable) and fits (A_hat, C_hat, D_hat),
flattened to a vector of length d^2 + d + 1.  The loss on sequence i averages
the squared output error over the tail window t >= T1 with T1 = T/4, which
skips the transient where the mismatched hidden state dominates.
"""

import json
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import DivergenceError, GenerationError, InvalidArgumentError
from ..oracle import FiniteSumObjective


@dataclass(frozen=True)
class LdsInstance:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float
    inputs: np.ndarray   # (N, T)
    outputs: np.ndarray  # (N, T)
    noise_std: float
    seed: int

    @property
    def N(self) -> int:
        return self.inputs.shape[0]

    @property
    def T(self) -> int:
        return self.inputs.shape[1]

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def T1(self) -> int:
        return self.T // 4

    @property
    def dim(self) -> int:
        return self.d * self.d + self.d + 1

    def true_params(self) -> "LdsModelParams":
        return LdsModelParams(self.A.copy(), self.C.copy(), float(self.D))


@dataclass(frozen=True)
class LdsModelParams:
    """Trainable parameters; B is known and held fixed."""

    A_hat: np.ndarray
    C_hat: np.ndarray
    D_hat: float

    def flatten(self) -> np.ndarray:
        return np.concatenate(
            [self.A_hat.ravel(), self.C_hat.ravel(), [self.D_hat]])

    @staticmethod
    def unflatten(v, d: int) -> "LdsModelParams":
        v = np.asarray(v, dtype=float)
        if v.shape != (d * d + d + 1,):
            raise InvalidArgumentError(
                f"expected length {d * d + d + 1}, got shape {v.shape}")
        return LdsModelParams(v[:d * d].reshape(d, d).copy(),
                              v[d * d:d * d + d].copy(), float(v[-1]))


def _companion(coeffs) -> np.ndarray:
    """Controllable-canonical matrix with the given characteristic row."""
    d = len(coeffs)
    A = np.zeros((d, d))
    if d > 1:
        A[:-1, 1:] = np.eye(d - 1)
    A[-1, :] = -np.asarray(coeffs)[::-1]
    return A


def spectral_radius(M) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def generate_lds(N, d, T, noise_std, seed, budget=1000) -> LdsInstance:
    """Draw a stable system and N length-T input/output sequences.

    A is companion-form with coefficients rejection-sampled until its spectral
    radius is at most 0.9; B, C, D have standard-normal entries; inputs are
    standard normal; outputs follow the recursion plus N(0, noise_std^2).
    """
    if d < 1 or T < 4 or N < 1:
        raise InvalidArgumentError("need d >= 1, T >= 4, N >= 1")
    if noise_std < 0:
        raise InvalidArgumentError("noise_std must be nonnegative")
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        A = _companion(rng.standard_normal(d))
        if spectral_radius(A) <= 0.9:
            break
    else:
        raise GenerationError(
            f"no stable system within {budget} rejection draws")
    B = rng.standard_normal(d)
    C = rng.standard_normal(d)
    D = float(rng.standard_normal())
    x = rng.standard_normal((N, T))
    y = _kernels.simulate(A, B, C, D, x)
    if noise_std > 0:
        y = y + noise_std * rng.standard_normal((N, T))
    return LdsInstance(A, B, C, D, x, y, float(noise_std), int(seed))


def perturbed_init(inst: LdsInstance, scale, seed, budget=1000) -> LdsModelParams:
    """True parameters plus scale-sized Gaussian noise, redrawn until the
    perturbed transition matrix is stable.
    """
    if scale < 0:
        raise InvalidArgumentError("scale must be nonnegative")
    rng = np.random.default_rng(seed)
    d = inst.d
    for _ in range(budget):
        A_hat = inst.A + scale * rng.standard_normal((d, d))
        if spectral_radius(A_hat) < 1.0:
            C_hat = inst.C + scale * rng.standard_normal(d)
            D_hat = float(inst.D + scale * rng.standard_normal())
            return LdsModelParams(A_hat, C_hat, D_hat)
    raise GenerationError(f"no stable init within {budget} rejection draws")


def lds_value_grad(inst: LdsInstance, params: LdsModelParams, idx=None):
    """Tail loss and flattened gradient, over all sequences or a subset.

    ``idx`` selects sequences (multiset); the result is averaged over the
    selection.
    """
    if idx is None:
        x, y = inst.inputs, inst.outputs
    else:
        idx = np.atleast_1d(np.asarray(idx))
        x, y = inst.inputs[idx], inst.outputs[idx]
    loss, dA, dC, dD = _kernels.loss_grad(
        params.A_hat, inst.B, params.C_hat, params.D_hat, x, y, inst.T1)
    if not np.isfinite(loss):
        raise DivergenceError(
            "simulated state overflowed; transition matrix is far from stable")
    return loss, np.concatenate([dA.ravel(), dC, [dD]])


def lds_objective(inst: LdsInstance) -> FiniteSumObjective:
    """Finite-sum oracle over sequences; points are flattened model params."""
    d = inst.d

    def comp_value(i, v):
        return lds_value_grad(inst, LdsModelParams.unflatten(v, d), [i])[0]

    def comp_grad(i, v):
        return lds_value_grad(inst, LdsModelParams.unflatten(v, d), [i])[1]

    def batch_value(idx, v):
        return lds_value_grad(inst, LdsModelParams.unflatten(v, d), idx)[0]

    def batch_grad(idx, v):
        return lds_value_grad(inst, LdsModelParams.unflatten(v, d), idx)[1]

    # smoothness of this objective is not computable in closed form; callers
    # override with a tuned value, this is only a sane default
    return FiniteSumObjective(inst.N, inst.dim, comp_value, comp_grad,
                              smoothness_L=1.0,
                              batch_value_fn=batch_value,
                              batch_grad_fn=batch_grad)


def save_lds(inst: LdsInstance, path):
    blob = {
        "kind": "lds",
        "noise_std": inst.noise_std,
        "seed": inst.seed,
        "A": inst.A.tolist(),
        "B": inst.B.tolist(),
        "C": inst.C.tolist(),
        "D": inst.D,
        "inputs": inst.inputs.tolist(),
        "outputs": inst.outputs.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(blob, fh)


def load_lds(path) -> LdsInstance:
    with open(path) as fh:
        blob = json.load(fh)
    if blob.get("kind") != "lds":
        raise InvalidArgumentError(f"{path} is not a dynamical-system instance")
    return LdsInstance(
        np.asarray(blob["A"], dtype=float), np.asarray(blob["B"], dtype=float),
        np.asarray(blob["C"], dtype=float), float(blob["D"]),
        np.asarray(blob["inputs"], dtype=float),
        np.asarray(blob["outputs"], dtype=float),
        float(blob["noise_std"]), int(blob["seed"]))
