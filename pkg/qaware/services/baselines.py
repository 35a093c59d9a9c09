"""
Optimizadores Baseline - Q-Aware L2O
Julia: "GD, Momentum, Adam, Adagrad, RMSprop y QNGD, con los defaults de la tabla"
"""
import logging
import time
from typing import Optional, Tuple, Union

import numpy as np

from qaware.errors import NonFiniteError, OptimizerConfigError
from qaware.models import BaselineConfig, OptimizerKind, OptState, RunRecord, Task
from qaware.services.objective import Objective, make_objective

logger = logging.getLogger(__name__)


def baseline_step(
    config: BaselineConfig,
    state: OptState,
    theta: np.ndarray,
    grad: np.ndarray,
    metric: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, OptState]:
    """Un paso de actualización; no modifica `state` ni `theta`"""
    theta = np.asarray(theta, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if grad.shape != theta.shape:
        raise OptimizerConfigError(f"Gradiente {grad.shape} y θ {theta.shape} no coinciden")
    if not np.all(np.isfinite(grad)):
        raise NonFiniteError("Gradiente con NaN/Inf")
    if config.needs_metric and metric is None:
        raise OptimizerConfigError("QNGD necesita la métrica")

    n = theta.shape[0]
    if state.first_moment is None or state.first_moment.shape != (n,):
        state = OptState.zeros(n)
    step = state.step + 1
    m, v = state.first_moment.copy(), state.second_moment.copy()
    velocity, sq_sum = state.velocity.copy(), state.sq_grad_sum.copy()
    kind = config.kind

    if kind == OptimizerKind.GD:
        update = config.lr * grad
    elif kind == OptimizerKind.MOMENTUM:
        velocity = config.momentum * velocity + grad
        update = config.lr * velocity
    elif kind == OptimizerKind.ADAM:
        m = config.beta1 * m + (1 - config.beta1) * grad
        v = config.beta2 * v + (1 - config.beta2) * grad ** 2
        m_hat = m / (1 - config.beta1 ** step)
        v_hat = v / (1 - config.beta2 ** step)
        update = config.lr * m_hat / (np.sqrt(v_hat) + config.eps)
    elif kind == OptimizerKind.ADAGRAD:
        sq_sum = sq_sum + grad ** 2
        update = config.lr * grad / (np.sqrt(sq_sum) + config.eps)
    elif kind == OptimizerKind.RMSPROP:
        v = config.rho * v + (1 - config.rho) * grad ** 2
        update = config.lr * grad / (np.sqrt(v) + config.eps)
    elif kind == OptimizerKind.QNGD:
        metric = np.asarray(metric, dtype=float)
        if metric.shape != (n, n):
            raise OptimizerConfigError(f"Métrica con forma {metric.shape}, se esperaba ({n}, {n})")
        update = config.lr * np.linalg.solve(metric + config.qng_lambda * np.eye(n), grad)
    else:
        raise OptimizerConfigError(f"Optimizador desconocido: {kind}")

    new_state = OptState(step=step, first_moment=m, second_moment=v, velocity=velocity, sq_grad_sum=sq_sum)
    return theta - update, new_state


def run_baseline(
    task: Union[Task, Objective],
    config: BaselineConfig,
    theta0: np.ndarray,
    steps: int,
    seed: int = 0,
    replicate: int = 0,
    optimizer_id: Optional[str] = None,
) -> RunRecord:
    """
    Corre `steps` actualizaciones. losses[0] es la pérdida inicial; una pérdida o
    gradiente no finito termina la corrida como divergente.
    """
    if steps < 1:
        raise OptimizerConfigError(f"steps debe ser >= 1, llegó {steps}")
    objective = task if isinstance(task, Objective) else make_objective(task)
    theta = np.asarray(theta0, dtype=float).copy()
    state = OptState.zeros(theta.shape[0])

    losses = [objective.cost(theta)]
    wall_ms = []
    diverged, failure = False, None
    if not np.isfinite(losses[0]):
        raise NonFiniteError("La pérdida inicial no es finita")

    for t in range(steps):
        start = time.perf_counter()
        try:
            grad = objective.grad(theta)
            metric = objective.metric(theta) if config.needs_metric else None
            theta, state = baseline_step(config, state, theta, grad, metric)
            loss = objective.cost(theta)
            if not np.isfinite(loss):
                raise NonFiniteError(f"Pérdida no finita en el paso {t + 1}")
        except (NonFiniteError, np.linalg.LinAlgError) as e:
            logger.warning(f"{config.optimizer_id()} divergió en {objective.task_id}, paso {t + 1}: {e}")
            diverged, failure = True, str(e)
            break
        losses.append(float(loss))
        wall_ms.append((time.perf_counter() - start) * 1000.0)

    return RunRecord(
        task_id=objective.task_id,
        optimizer_id=optimizer_id or config.optimizer_id(),
        seed=seed,
        replicate=replicate,
        losses=losses,
        wall_ms=wall_ms,
        final_theta=theta.tolist() if not diverged else [],
        diverged=diverged,
        failure=failure,
    )
