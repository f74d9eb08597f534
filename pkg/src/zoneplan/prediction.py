"""
Object states, next-position kinematics, motion predictors and the
per-step state update.

A history window holds observed states oldest -> most recent. Each state's
``expected_speed``/``expected_direction`` is the motion that brought the
object to ``pose``; predictors forecast the motion for the coming steps.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .geometry import EuclidPoint, PolarPoint, as_xy, euclid_to_polar, wrap_angle, wrap_pi
from .uncertainty import DirectionErrorModel, RngStream, SpeedErrorModel, estimate_sigma

DEFAULT_HISTORY = 5
REST_SPEED = 1e-9
PREDICTORS = ("mean", "naive-ar", "gen-ar")


@dataclass(frozen=True)
class ObjectState:
    pose: PolarPoint
    expected_direction: float
    expected_speed: float
    speed_model: SpeedErrorModel
    direction_model: DirectionErrorModel
    deterministic: bool = False
    step: int = 0

    def __post_init__(self):
        if self.expected_speed < 0:
            raise ValueError("expected_speed must be >= 0")
        object.__setattr__(self, "expected_direction", wrap_angle(self.expected_direction))
        if self.deterministic and not (self.speed_model.deterministic and self.direction_model.deterministic):
            raise ValueError("deterministic state requires point-mass error models")

    @classmethod
    def at(
        cls,
        xy,
        speed: float = 0.0,
        direction: float = 0.0,
        sigma_v: float = 0.0,
        sigma_d: float = 0.0,
        moving: bool | None = None,
        step: int = 0,
    ) -> "ObjectState":
        """State at map position ``xy``; zero sigmas make it deterministic."""
        deterministic = sigma_v == 0.0 and sigma_d == 0.0
        if moving is None:
            moving = deterministic or speed > REST_SPEED
        x, y = as_xy(xy)
        return cls(
            pose=euclid_to_polar(EuclidPoint(x, y)),
            expected_direction=direction,
            expected_speed=speed,
            speed_model=SpeedErrorModel(speed, sigma_v),
            direction_model=DirectionErrorModel(direction, sigma_d, moving),
            deterministic=deterministic,
            step=step,
        )

    @property
    def xy(self) -> np.ndarray:
        return as_xy(self.pose)

    @property
    def sigma_v(self) -> float:
        return self.speed_model.sigma_v

    @property
    def sigma_d(self) -> float:
        return self.direction_model.sigma_d

    @property
    def moving(self) -> bool:
        return self.direction_model.moving

    def with_motion(self, speed: float, direction: float, sigma_v: float | None = None,
                    sigma_d: float | None = None, moving: bool | None = None) -> "ObjectState":
        sv = self.sigma_v if sigma_v is None else sigma_v
        sd = self.sigma_d if sigma_d is None else sigma_d
        mv = self.moving if moving is None else moving
        return replace(
            self,
            expected_speed=speed,
            expected_direction=direction,
            speed_model=SpeedErrorModel(speed, sv),
            direction_model=DirectionErrorModel(direction, sd, mv),
        )


def advance(pose: PolarPoint, speed: float, direction: float) -> PolarPoint:
    """Pose after moving ``speed`` map units along ``direction``."""
    x = pose.radius * math.cos(pose.angle) + speed * math.cos(direction)
    y = pose.radius * math.sin(pose.angle) + speed * math.sin(direction)
    return euclid_to_polar(EuclidPoint(x, y))


def next_position(s: ObjectState) -> PolarPoint:
    """Polar pose one step ahead: current position plus the expected velocity vector."""
    return advance(s.pose, s.expected_speed, s.expected_direction)


@dataclass(frozen=True)
class Prediction:
    k: int
    speed: float
    direction: float
    pose: PolarPoint
    speed_weights: np.ndarray | None = field(default=None, compare=False)
    direction_weights: np.ndarray | None = field(default=None, compare=False)


@dataclass
class StateHistory:
    """Ring buffer of the last ``H`` observed states of one object."""

    H: int = DEFAULT_HISTORY
    states: deque = field(default=None)
    speed_residuals: deque = field(default=None)
    direction_residuals: deque = field(default=None)
    predictions: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.H < 1:
            raise ValueError("history window H must be >= 1")
        self.states = deque(self.states or (), maxlen=self.H)
        self.speed_residuals = deque(self.speed_residuals or (), maxlen=self.H)
        self.direction_residuals = deque(self.direction_residuals or (), maxlen=self.H)

    def __len__(self):
        return len(self.states)

    @property
    def last(self) -> ObjectState:
        if not self.states:
            raise ValueError("empty history")
        return self.states[-1]

    def append(self, s: ObjectState) -> None:
        if self.states and self.states[-1].step == s.step:
            self.states[-1] = s
        else:
            self.states.append(s)

    def speeds(self) -> np.ndarray:
        return np.array([s.expected_speed for s in self.states], dtype=float)

    def directions(self) -> np.ndarray:
        return np.array([s.expected_direction for s in self.states], dtype=float)


# ---------------------------------------------------------------------------
# weights


def naive_ar_weights(n: int) -> np.ndarray:
    """Halving weights over ``n`` past steps, ordered oldest -> most recent."""
    if n < 1:
        raise ValueError("need at least one weight")
    W = 0.5 ** np.arange(n, dtype=float)  # most recent first
    return (W / W.sum())[::-1]


def generalized_ar_weights(n: int, rng: RngStream) -> np.ndarray:
    """Random simplex weights, sorted so the most recent step weighs most."""
    if n < 1:
        raise ValueError("need at least one weight")
    if n == 1:
        return np.ones(1)
    w = np.sort(rng.dirichlet(n))
    return w / w.sum()


def circular_mean(angles: np.ndarray, weights: np.ndarray | None = None) -> float:
    """Weighted mean direction via the resultant vector.

    Falls back to the most recent angle when the resultant vanishes.
    """
    a = np.asarray(angles, dtype=float)
    w = np.full(len(a), 1.0 / len(a)) if weights is None else np.asarray(weights, dtype=float)
    c = float(np.dot(w, np.cos(a)))
    s = float(np.dot(w, np.sin(a)))
    if math.hypot(c, s) < 1e-12:
        return wrap_angle(float(a[-1]))
    return wrap_angle(math.atan2(s, c))


# ---------------------------------------------------------------------------
# predictors

Combiner = Callable[[np.ndarray, np.ndarray], tuple[float, float, np.ndarray, np.ndarray]]


def _forecast(h: StateHistory, k: int, combine: Combiner) -> Prediction:
    if len(h) == 0:
        raise ValueError("cannot predict from an empty history")
    if k < 1:
        raise ValueError("horizon k must be >= 1")
    speeds = list(h.speeds())
    dirs = list(h.directions())
    pose = h.last.pose
    v = d = 0.0
    wv = wd = None
    for _ in range(k):
        sv = np.asarray(speeds[-h.H :])
        sd = np.asarray(dirs[-h.H :])
        v, d, wv, wd = combine(sv, sd)
        v = max(v, 0.0)
        d = wrap_angle(d)
        speeds.append(v)
        dirs.append(d)
        pose = advance(pose, v, d)
    return Prediction(k, v, d, pose, wv, wd)


def predict_moving_average(h: StateHistory, k: int = 1) -> Prediction:
    """Window mean of speeds and circular mean of directions."""

    def combine(sv, sd):
        w = np.full(len(sv), 1.0 / len(sv))
        return float(np.mean(sv)), circular_mean(sd), w, w

    return _forecast(h, k, combine)


def predict_naive_ar(h: StateHistory, k: int = 1) -> Prediction:
    def combine(sv, sd):
        w = naive_ar_weights(len(sv))
        return float(np.dot(w, sv)), circular_mean(sd, w), w, w

    return _forecast(h, k, combine)


def predict_generalized_ar(h: StateHistory, k: int, rng: RngStream, noise_scale: float = 0.0) -> Prediction:
    """Random nondecreasing weights, drawn separately for speed and direction.

    With ``noise_scale > 0`` a weighted sum of white-noise draws is added to
    both forecasts.
    """

    def combine(sv, sd):
        n = len(sv)
        w1 = generalized_ar_weights(n, rng)
        w2 = generalized_ar_weights(n, rng)
        v = float(np.dot(w1, sv))
        d = circular_mean(sd, w2)
        if noise_scale > 0:
            v += noise_scale * float(np.dot(w1, rng.normal(n)))
            d += noise_scale * float(np.dot(w2, rng.normal(n)))
        return v, d, w1, w2

    return _forecast(h, k, combine)


def predict(h: StateHistory, k: int = 1, predictor: str = "mean", rng: RngStream | None = None,
            noise_scale: float = 0.0) -> Prediction:
    if predictor == "mean":
        return predict_moving_average(h, k)
    if predictor == "naive-ar":
        return predict_naive_ar(h, k)
    if predictor == "gen-ar":
        if rng is None:
            raise ValueError("gen-ar predictor needs an RngStream")
        return predict_generalized_ar(h, k, rng, noise_scale)
    raise ValueError(f"unknown predictor {predictor!r}; expected one of {PREDICTORS}")


# ---------------------------------------------------------------------------
# state update


def observe_motion(prev_xy, xy, dt: float = 1.0) -> tuple[float, float]:
    """Speed (per step of length ``dt``) and heading of the move prev_xy -> xy."""
    d = as_xy(xy) - as_xy(prev_xy)
    dist = float(np.hypot(*d))
    if dist <= REST_SPEED:
        return 0.0, 0.0
    return dist / dt, wrap_angle(math.atan2(d[1], d[0]))


def update_states(
    histories: dict,
    observed: Iterable[tuple[str, ObjectState]],
    predictor: str = "mean",
    rng: RngStream | None = None,
    H: int = DEFAULT_HISTORY,
    horizons: Sequence[int] = (1,),
) -> dict:
    """Fold observations for the current step into each object's history.

    The observed state replaces whatever was forecast for this step. The
    residual against the cached one-step forecast feeds the sigma buffers,
    then every cached forecast is recomputed from the corrected window. A
    second observation of the same object in one call overwrites the first
    and leaves a note in ``history.warnings``.

    Returns the (mutated) ``histories`` mapping.
    """
    latest: dict[str, ObjectState] = {}
    duplicates: list[tuple[str, int]] = []
    for obj_id, s in observed:
        if obj_id in latest:
            duplicates.append((obj_id, s.step))
        latest[obj_id] = s

    for obj_id, s in latest.items():
        h = histories.get(obj_id)
        if h is None:
            h = histories[obj_id] = StateHistory(H)
        if not s.moving and s.expected_speed > REST_SPEED:
            s = s.with_motion(s.expected_speed, s.expected_direction, moving=True)
        if s.expected_speed <= REST_SPEED and s.moving and not s.deterministic:
            s = s.with_motion(0.0, s.expected_direction, moving=False)
        prior = h.predictions.get(1)
        if prior is not None and len(h) and h.last.step == s.step - 1:
            h.speed_residuals.append(s.expected_speed - prior.speed)
            if s.moving:
                h.direction_residuals.append(wrap_pi(s.expected_direction - prior.direction))
        h.append(s)
        h.predictions = {k: predict(h, k, predictor, rng) for k in horizons}
    for obj_id, step in duplicates:
        histories[obj_id].warnings.append(
            f"duplicate observation for {obj_id!r} at step {step}; kept the last one"
        )
    return histories


def estimated_sigmas(h: StateHistory, prior_v: float, prior_d: float) -> tuple[float, float]:
    """Residual-based sigma estimates, falling back to the priors with too few residuals."""
    sv = estimate_sigma(h.speed_residuals)
    sd = estimate_sigma(h.direction_residuals)
    return (prior_v if sv is None else sv), (prior_d if sd is None else sd)


def believed_state(h: StateHistory, prior_v: float, prior_d: float) -> ObjectState:
    """Current pose with the forecast motion and estimated error models, for zone building."""
    pred = h.predictions.get(1)
    last = h.last
    if pred is None:
        raise ValueError("no cached forecast; call update_states first")
    sv, sd = estimated_sigmas(h, prior_v, prior_d)
    return ObjectState(
        pose=last.pose,
        expected_direction=pred.direction,
        expected_speed=pred.speed,
        speed_model=SpeedErrorModel(pred.speed, sv),
        direction_model=DirectionErrorModel(pred.direction, sd, last.moving),
        deterministic=False,
        step=last.step,
    )
