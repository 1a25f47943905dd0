import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from .params import check_occupancy
from .rates import log_rates_from_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CtmcTrajectory:
    """
    Результат симуляции Гиллеспи.

    Поля:
        times, states: моменты скачков и состояния после них (с прореживанием,
            первая строка - начальное состояние в момент 0).
        outcome: COMPLETED_HORIZON или EVENT_CAP_HIT.
        t_reached: время последнего скачка при EVENT_CAP_HIT, иначе t_max.
        events: число выполненных скачков.
        origin_visits: сколько раз цепь приходила в нулевое состояние.
        max_log_rate: наибольший логарифм суммарной интенсивности.
        occupation: время пребывания в каждом состоянии (если запрошено).
    """

    COMPLETED_HORIZON = "CompletedHorizon"
    EVENT_CAP_HIT = "EventCapHit"

    times: np.ndarray
    states: np.ndarray
    outcome: str
    t_reached: float
    events: int
    origin_visits: int
    max_log_rate: float
    occupation: dict = field(default_factory=dict)

    @property
    def exploded(self):
        return self.outcome == self.EVENT_CAP_HIT

    def summary(self):
        return {
            "outcome": self.outcome,
            "t_reached": self.t_reached,
            "events": self.events,
            "origin_visits": self.origin_visits,
            "max_log_rate": self.max_log_rate,
        }

    def to_frame(self):
        frame = pd.DataFrame(
            self.states, columns=[f"x_{v}" for v in range(self.states.shape[1])]
        )
        frame.insert(0, "t", self.times)
        return frame

    def occupation_law(self):
        """Доли времени, проведённого в каждом состоянии."""
        total = sum(self.occupation.values())
        return {state: time / total for state, time in sorted(self.occupation.items())}


def simulate_ctmc(params, x0, t_max, event_cap, rng, thin=1, record_occupation=False):
    """
    Алгоритм Гиллеспи для процесса рождения и гибели на графе.

    Интенсивности хранятся в логарифмической шкале; время до скачка -
    Exp(1)·e^{−log R}, где log R = logsumexp всех логарифмов интенсивностей.
    Остановка по достижении t_max (CompletedHorizon) или после event_cap
    скачков (EventCapHit - эвристический признак взрыва).
    """
    if t_max <= 0:
        raise ValueError("t_max должно быть положительным")
    x = check_occupancy(params, x0 if x0 is not None else np.zeros(params.n, dtype=np.int64)).copy()
    adjacency = params.graph.adjacency
    field_ = adjacency @ x
    n = params.n

    times, states = [0.0], [x.copy()]
    occupation = defaultdict(float)
    t = 0.0
    events = 0
    origin_visits = 0
    max_log_rate = -np.inf
    outcome = CtmcTrajectory.COMPLETED_HORIZON

    while True:
        births, deaths = log_rates_from_field(params, x, field_)
        logs = np.concatenate([births, deaths])
        log_total = logsumexp(logs)
        max_log_rate = max(max_log_rate, float(log_total))
        if not np.isfinite(log_total):
            # поглощающее состояние
            if record_occupation:
                occupation[tuple(int(c) for c in x)] += t_max - t
            break
        dt = rng.exponential() * np.exp(-log_total)
        if t + dt >= t_max:
            if record_occupation:
                occupation[tuple(int(c) for c in x)] += t_max - t
            break
        if events >= event_cap:
            outcome = CtmcTrajectory.EVENT_CAP_HIT
            break
        if record_occupation:
            occupation[tuple(int(c) for c in x)] += dt
        t += dt

        weights = np.exp(logs - log_total)
        index = min(int(np.searchsorted(np.cumsum(weights), rng.random(), side="right")), 2 * n - 1)
        v, sign = (index, 1) if index < n else (index - n, -1)
        x[v] += sign
        field_ += sign * adjacency[v]
        events += 1
        if not x.any():
            origin_visits += 1
        if events % thin == 0:
            times.append(t)
            states.append(x.copy())

    if times[-1] != t:
        times.append(t)
        states.append(x.copy())
    t_reached = t if outcome == CtmcTrajectory.EVENT_CAP_HIT else float(t_max)
    if outcome == CtmcTrajectory.EVENT_CAP_HIT:
        logger.warning(
            f"Достигнут предел {event_cap} скачков к моменту t={t:.6g}: возможен взрыв"
        )
    logger.debug(f"Симуляция: {events} скачков, исход {outcome}")
    return CtmcTrajectory(
        times=np.array(times),
        states=np.vstack(states),
        outcome=outcome,
        t_reached=t_reached,
        events=events,
        origin_visits=origin_visits,
        max_log_rate=max_log_rate,
        occupation=dict(occupation),
    )
