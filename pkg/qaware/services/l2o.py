"""
Optimizador Aprendido L2O-g† - Q-Aware L2O
Julia: "Una LSTM por coordenada que decide paso, dirección y cuánta métrica usar"

Actualización: θ' = θ - η ∘ (B v), η = exp(λ_b α), v = λ_a β,
B = D_{1-γ} g† + D_γ. El gradiente ∇C y g† son constantes para el tape
(política de detach); la pérdida externa usa el sustituto
C(θ̂) + ∇C(θ̂)·(θ - θ̂), cuyo valor es C y cuya derivada es ∇C.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import torch
from torch import nn

from qaware.errors import NonFiniteError, OptimizerConfigError
from qaware.models import L2OMode, MetaConfig, RunRecord
from qaware.services.geometry import pinv_psd
from qaware.services.objective import Objective

logger = logging.getLogger(__name__)

DTYPE = torch.float64

# γ se mantiene en el intervalo abierto (0, 1)
GAMMA_EPS = 1e-12

CoordState = Tuple[torch.Tensor, torch.Tensor]


# === Preprocesamiento ===
def preprocess_grad(grad, p: float = 10.0) -> torch.Tensor:
    """
    (log|∇|/p, sgn ∇) si |∇| >= e^-p, si no (-1, e^p ∇). Regresa (P, 2).
    Diferenciable respecto a `grad` cuando es un tensor con grafo.
    """
    grad = torch.as_tensor(grad, dtype=DTYPE)
    if not torch.all(torch.isfinite(grad)):
        raise NonFiniteError("Gradiente con NaN/Inf en el preprocesamiento")
    threshold = math.exp(-p)
    magnitude = grad.abs()
    big = magnitude >= threshold
    log_part = torch.log(torch.clamp(magnitude, min=threshold)) / p
    first = torch.where(big, log_part, torch.full_like(grad, -1.0))
    second = torch.where(big, torch.sign(grad), math.exp(p) * grad)
    return torch.stack([first, second], dim=-1)


# === Celda ===
class L2OCell(nn.Module):
    """
    LSTM de 2 entradas compartida por todas las coordenadas (cada coordenada es
    un elemento del batch) con tres cabezas lineales α, β, γ.
    """

    def __init__(self, hidden_size: int = 20, num_layers: int = 2):
        super().__init__()
        self.hidden_size = hidden_size
        self.num_layers = num_layers
        self.lstm = nn.LSTM(input_size=2, hidden_size=hidden_size, num_layers=num_layers)
        self.head_alpha = nn.Linear(hidden_size, 1)
        self.head_beta = nn.Linear(hidden_size, 1)
        self.head_gamma = nn.Linear(hidden_size, 1)
        self.to(DTYPE)

    def reset_parameters(self, scale: float = 0.1, generator: Optional[torch.Generator] = None):
        """Uniforme ±scale; α y β arrancan en cero y γ con sesgo 0 (γ = 0.5)"""
        with torch.no_grad():
            for param in self.parameters():
                param.copy_((torch.rand(param.shape, generator=generator, dtype=DTYPE) * 2 - 1) * scale)
            for head in (self.head_alpha, self.head_beta):
                head.weight.zero_()
                head.bias.zero_()
            self.head_gamma.bias.zero_()

    def init_state(self, n_coords: int) -> CoordState:
        shape = (self.num_layers, n_coords, self.hidden_size)
        return torch.zeros(shape, dtype=DTYPE), torch.zeros(shape, dtype=DTYPE)

    def forward(self, z: torch.Tensor, state: CoordState):
        h, c = state
        if z.ndim != 2 or z.shape[1] != 2 or h.shape[1] != z.shape[0] or h.shape[2] != self.hidden_size:
            raise OptimizerConfigError(
                f"Formas incompatibles: z {tuple(z.shape)}, estado {tuple(h.shape)}"
            )
        out, (h_new, c_new) = self.lstm(z.unsqueeze(0), (h, c))
        top = out[0]
        alpha = self.head_alpha(top).squeeze(-1)
        beta = self.head_beta(top).squeeze(-1)
        gamma = torch.clamp(torch.sigmoid(self.head_gamma(top).squeeze(-1)), GAMMA_EPS, 1 - GAMMA_EPS)
        return alpha, beta, gamma, (h_new, c_new)


def l2o_cell(z, state: CoordState, cell: L2OCell):
    return cell(torch.as_tensor(z, dtype=DTYPE), state)


# === Actualización ===
def l2o_update(
    theta: torch.Tensor,
    alpha: torch.Tensor,
    beta: torch.Tensor,
    gamma: torch.Tensor,
    g_pinv: Optional[torch.Tensor],
    lambda_a: float = 0.01,
    lambda_b: float = 0.01,
) -> torch.Tensor:
    """θ - exp(λ_b α) ∘ (B λ_a β); g_pinv=None es el modo B = I"""
    theta, alpha, beta, gamma = (torch.as_tensor(x, dtype=DTYPE) for x in (theta, alpha, beta, gamma))
    if not (theta.shape == alpha.shape == beta.shape == gamma.shape):
        raise OptimizerConfigError("θ, α, β y γ deben tener la misma forma")
    eta = torch.exp(lambda_b * alpha)
    v = lambda_a * beta
    if g_pinv is None:
        direction = v
    else:
        g_pinv = torch.as_tensor(g_pinv, dtype=DTYPE)
        direction = (1 - gamma) * (g_pinv @ v) + gamma * v
    theta_new = theta - eta * direction
    if not torch.all(torch.isfinite(theta_new)):
        raise NonFiniteError("Actualización L2O no finita")
    return theta_new


# === Unroll ===
@dataclass
class UnrollResult:
    outer_loss: torch.Tensor
    losses: List[float]
    thetas: List[np.ndarray]
    diverged: bool = False
    failure: Optional[str] = None
    metric_calls: int = 0
    # Entradas congeladas del tape (para la reproducción sin gradiente)
    features: List[torch.Tensor] = field(default_factory=list)
    preconditioners: List[Optional[np.ndarray]] = field(default_factory=list)
    grads: List[np.ndarray] = field(default_factory=list)
    wall_ms: List[float] = field(default_factory=list)


def _surrogate(cost: float, grad: np.ndarray, theta: torch.Tensor, anchor: np.ndarray) -> torch.Tensor:
    grad_t = torch.as_tensor(grad, dtype=DTYPE)
    return cost + torch.dot(grad_t, theta - torch.as_tensor(anchor, dtype=DTYPE))


def unroll(
    objective: Objective,
    theta0: np.ndarray,
    steps: int,
    cell: L2OCell,
    config: MetaConfig,
    weights: Optional[List[float]] = None,
) -> UnrollResult:
    """
    T pasos de gradiente -> preprocesamiento -> celda -> actualización.
    Pérdida externa Σ_t w_t C(θ_t), t = 1..T. En modo identidad nunca se pide la métrica.
    """
    if steps < 1:
        raise OptimizerConfigError(f"El unroll necesita T >= 1, llegó {steps}")
    weights = config.weights_for(steps) if weights is None else list(weights)
    if len(weights) < steps:
        raise OptimizerConfigError(f"Se necesitan {steps} pesos w_t, llegaron {len(weights)}")
    full = config.mode == L2OMode.FULL

    theta_hat = np.asarray(theta0, dtype=float).copy()
    theta = torch.as_tensor(theta_hat, dtype=DTYPE)
    state = cell.init_state(theta_hat.shape[0])
    metric_before = objective.metric_calls

    cost = objective.cost(theta_hat)
    if not math.isfinite(cost):
        raise NonFiniteError("La pérdida inicial no es finita")
    result = UnrollResult(outer_loss=torch.zeros((), dtype=DTYPE), losses=[cost], thetas=[theta_hat.copy()])

    try:
        grad = objective.grad(theta_hat)
        for t in range(steps):
            start = time.perf_counter()
            if config.detach_gradient:
                grad_input = torch.as_tensor(grad, dtype=DTYPE)
            else:
                hess = torch.as_tensor(objective.hessian(theta_hat), dtype=DTYPE)
                grad_input = torch.as_tensor(grad, dtype=DTYPE) + hess @ (
                    theta - torch.as_tensor(theta_hat, dtype=DTYPE)
                )
            z = preprocess_grad(grad_input, config.preprocess_p)
            g_pinv = pinv_psd(objective.metric(theta_hat)) if full else None

            alpha, beta, gamma, state = l2o_cell(z, state, cell)
            theta = l2o_update(theta, alpha, beta, gamma, g_pinv, config.lambda_a, config.lambda_b)
            theta_hat = theta.detach().numpy().copy()

            cost = objective.cost(theta_hat)
            if not math.isfinite(cost):
                raise NonFiniteError(f"Pérdida no finita en el paso {t + 1}")
            grad = objective.grad(theta_hat)
            if not np.all(np.isfinite(grad)):
                raise NonFiniteError(f"Gradiente no finito en el paso {t + 1}")

            result.outer_loss = result.outer_loss + weights[t] * _surrogate(cost, grad, theta, theta_hat)
            result.losses.append(cost)
            result.thetas.append(theta_hat)
            result.features.append(z.detach())
            result.preconditioners.append(g_pinv)
            result.grads.append(grad)
            result.wall_ms.append((time.perf_counter() - start) * 1000.0)
    except NonFiniteError as e:
        result.diverged = True
        result.failure = str(e)
        result.outer_loss = torch.tensor(math.inf, dtype=DTYPE)

    result.metric_calls = objective.metric_calls - metric_before
    return result


def replay_outer_loss(
    cell: L2OCell, result: UnrollResult, config: MetaConfig, weights: Optional[List[float]] = None
) -> torch.Tensor:
    """
    Re-evalúa la pérdida externa con las features, g† y gradientes grabados fijos.
    Coincide con el tape en los pesos con que se grabó; sirve de oráculo por diferencias finitas.
    """
    steps = len(result.features)
    if steps == 0:
        raise OptimizerConfigError("No hay pasos grabados para reproducir")
    weights = config.weights_for(steps) if weights is None else list(weights)

    theta = torch.as_tensor(result.thetas[0], dtype=DTYPE)
    state = cell.init_state(theta.shape[0])
    outer = torch.zeros((), dtype=DTYPE)
    for t in range(steps):
        alpha, beta, gamma, state = l2o_cell(result.features[t], state, cell)
        theta = l2o_update(theta, alpha, beta, gamma, result.preconditioners[t], config.lambda_a, config.lambda_b)
        outer = outer + weights[t] * _surrogate(result.losses[t + 1], result.grads[t], theta, result.thetas[t + 1])
    return outer


def meta_grad(
    objective: Objective,
    theta0: np.ndarray,
    steps: int,
    cell: L2OCell,
    config: MetaConfig,
    weights: Optional[List[float]] = None,
) -> Tuple[Optional[List[torch.Tensor]], UnrollResult]:
    """Gradiente de la pérdida externa respecto a los pesos de la celda; None si divergió"""
    cell.zero_grad()
    result = unroll(objective, theta0, steps, cell, config, weights)
    if result.diverged:
        return None, result
    result.outer_loss.backward()
    grads = [
        p.grad.detach().clone() if p.grad is not None else torch.zeros_like(p)
        for p in cell.parameters()
    ]
    return grads, result


# === Optimizador para benchmarks ===
class L2OOptimizer:
    """Celda entrenada lista para correr sobre cualquier objetivo"""

    def __init__(self, cell: L2OCell, config: MetaConfig, mode: Optional[L2OMode] = None):
        self.cell = cell
        self.mode = mode or config.mode
        # Sin meta-gradiente los valores no dependen del detach; se evita el Hessiano
        self.config = config.model_copy(update={"mode": self.mode, "detach_gradient": True})
        self.cell.eval()

    def run(
        self,
        objective: Objective,
        theta0: np.ndarray,
        steps: int,
        seed: int = 0,
        replicate: int = 0,
        optimizer_id: str = "l2o",
    ) -> RunRecord:
        with torch.no_grad():
            result = unroll(objective, theta0, steps, self.cell, self.config, [1.0] * steps)
        if result.diverged:
            logger.warning(f"{optimizer_id} divergió en {objective.task_id}: {result.failure}")
        return RunRecord(
            task_id=objective.task_id,
            optimizer_id=optimizer_id,
            seed=seed,
            replicate=replicate,
            losses=result.losses,
            wall_ms=result.wall_ms,
            final_theta=result.thetas[-1].tolist() if not result.diverged else [],
            diverged=result.diverged,
            failure=result.failure,
        )
