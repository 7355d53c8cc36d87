import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .base import (
    DimensionMismatch,
    FeatureMismatch,
    HAM,
    ImproperlyConfigured,
    SPAM,
    TrainingError
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class RpropConfig(object):
    eta_plus: float = 1.2
    eta_minus: float = 0.5
    delta_init: float = 0.1
    delta_max: float = 50.0
    delta_min: float = 1e-6

    def __post_init__(self):
        if not self.eta_minus < 1 < self.eta_plus:
            raise ImproperlyConfigured(
                'RProp factors must satisfy eta_minus < 1 < eta_plus.'
            )
        if not self.delta_min < self.delta_init < self.delta_max:
            raise ImproperlyConfigured(
                'RProp steps must satisfy delta_min < delta_init < delta_max.'
            )


@dataclass(frozen=True)
class TrainingConfig(object):
    epochs: int = 200
    seed: int = 0
    hidden_dim: int = 10
    alpha: float = 2.0
    threshold: float = 0.0
    target_spam: float = 0.9
    target_ham: float = -0.9
    rprop: RpropConfig = field(default_factory=RpropConfig)

    def __post_init__(self):
        if self.epochs < 1:
            raise ImproperlyConfigured('epochs must be at least 1.')
        if self.hidden_dim < 1:
            raise ImproperlyConfigured('hidden_dim must be at least 1.')
        if not self.alpha > 0:
            raise ImproperlyConfigured('alpha must be positive.')
        if not -1 < self.target_ham < self.target_spam < 1:
            raise ImproperlyConfigured(
                'Targets must satisfy -1 < target_ham < target_spam < 1.'
            )

    def target(self, label):
        if label == SPAM:
            return self.target_spam
        if label == HAM:
            return self.target_ham
        raise ValueError('Unknown label {!r}.'.format(label))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data['rprop'] = RpropConfig(**data.get('rprop', {}))
        return cls(**data)


def bipolar_sigmoid(x, alpha=2.0):
    """
    Bipolar sigmoid ``2 / (1 + exp(-alpha * x)) - 1`` with range (-1, 1).

    Evaluated through the identity ``tanh(alpha * x / 2)``, which cannot
    overflow for large ``|x|``.
    """
    if not alpha > 0:
        raise ValueError('alpha must be positive.')
    return np.tanh(np.multiply(alpha / 2.0, x))


def _sigmoid_slope(activation, alpha):
    # Derivative expressed through the activation value f(x).
    return (alpha / 2.0) * (1.0 - activation * activation)


@dataclass
class Gradient(object):
    hidden_weights: np.ndarray
    hidden_bias: np.ndarray
    output_weights: np.ndarray
    output_bias: float

    def flat(self):
        return np.concatenate([
            self.hidden_weights.ravel(),
            self.hidden_bias,
            self.output_weights,
            [self.output_bias],
        ])


class MlpModel(object):
    """
    Single-hidden-layer perceptron with one output neuron. Both layers use
    the bipolar sigmoid with steepness `alpha`.
    """
    def __init__(
        self,
        hidden_weights,
        hidden_bias,
        output_weights,
        output_bias,
        alpha=2.0,
        norm_min=None,
        norm_max=None,
        feature_names=None,
        threshold=0.0,
        training=None
    ):
        self.hidden_weights = np.array(hidden_weights, dtype=np.float64)
        self.hidden_bias = np.array(hidden_bias, dtype=np.float64)
        self.output_weights = np.array(output_weights, dtype=np.float64)
        self.output_bias = float(output_bias)
        self.alpha = float(alpha)
        self.threshold = float(threshold)
        self.training = training

        if self.hidden_weights.ndim != 2:
            raise ImproperlyConfigured('hidden_weights must be a matrix.')
        hidden_dim, input_dim = self.hidden_weights.shape
        if self.hidden_bias.shape != (hidden_dim,):
            raise ImproperlyConfigured('hidden_bias does not match.')
        if self.output_weights.shape != (hidden_dim,):
            raise ImproperlyConfigured('output_weights does not match.')

        self.norm_min = np.array(
            [-1.0] * input_dim if norm_min is None else norm_min,
            dtype=np.float64
        )
        self.norm_max = np.array(
            [1.0] * input_dim if norm_max is None else norm_max,
            dtype=np.float64
        )
        if (
            self.norm_min.shape != (input_dim,) or
            self.norm_max.shape != (input_dim,)
        ):
            raise ImproperlyConfigured('Normalization bounds do not match.')
        if np.any(self.norm_min > self.norm_max):
            raise ImproperlyConfigured('norm_min exceeds norm_max.')
        if feature_names is None:
            feature_names = ['x{}'.format(i) for i in range(input_dim)]
        self.feature_names = tuple(feature_names)
        if len(self.feature_names) != input_dim:
            raise ImproperlyConfigured('feature_names does not match.')
        if not np.all(np.isfinite(self.flat_params())):
            raise ImproperlyConfigured('Model weights must be finite.')

    @property
    def input_dim(self):
        return self.hidden_weights.shape[1]

    @property
    def hidden_dim(self):
        return self.hidden_weights.shape[0]

    def flat_params(self):
        return np.concatenate([
            self.hidden_weights.ravel(),
            self.hidden_bias,
            self.output_weights,
            [self.output_bias],
        ])

    def with_params(self, params):
        """Copy of this model carrying the given flat parameter vector."""
        h, d = self.hidden_dim, self.input_dim
        params = np.asarray(params, dtype=np.float64)
        return MlpModel(
            hidden_weights=params[:h * d].reshape(h, d),
            hidden_bias=params[h * d:h * d + h],
            output_weights=params[h * d + h:h * d + 2 * h],
            output_bias=params[h * d + 2 * h],
            alpha=self.alpha,
            norm_min=self.norm_min,
            norm_max=self.norm_max,
            feature_names=self.feature_names,
            threshold=self.threshold,
            training=self.training
        )

    def to_dict(self):
        return {
            'format_version': FORMAT_VERSION,
            'input_dim': self.input_dim,
            'hidden_dim': self.hidden_dim,
            'alpha': self.alpha,
            'threshold': self.threshold,
            'feature_names': list(self.feature_names),
            'norm_min': self.norm_min.tolist(),
            'norm_max': self.norm_max.tolist(),
            'hidden_weights': self.hidden_weights.tolist(),
            'hidden_bias': self.hidden_bias.tolist(),
            'output_weights': self.output_weights.tolist(),
            'output_bias': self.output_bias,
            'training': self.training,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get('format_version') != FORMAT_VERSION:
            raise ImproperlyConfigured(
                'Unsupported model format version {!r}.'.format(
                    data.get('format_version')
                )
            )
        model = cls(
            hidden_weights=data['hidden_weights'],
            hidden_bias=data['hidden_bias'],
            output_weights=data['output_weights'],
            output_bias=data['output_bias'],
            alpha=data['alpha'],
            norm_min=data['norm_min'],
            norm_max=data['norm_max'],
            feature_names=data['feature_names'],
            threshold=data['threshold'],
            training=data.get('training')
        )
        if (model.input_dim, model.hidden_dim) != (
            data['input_dim'], data['hidden_dim']
        ):
            raise ImproperlyConfigured(
                'Model dimensions disagree with its weights.'
            )
        return model

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write('\n')

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as f:
            return cls.from_dict(json.load(f))

    def __repr__(self):
        return '<{cls} input_dim={input_dim} hidden_dim={hidden_dim}>'.format(
            cls=self.__class__.__name__,
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim
        )


def fit_bounds(matrix):
    matrix = np.asarray(matrix, dtype=np.float64)
    return matrix.min(axis=0), matrix.max(axis=0)


def scale(values, norm_min, norm_max):
    values = np.asarray(values, dtype=np.float64)
    width = values.shape[-1] if values.ndim else 0
    if values.ndim not in (1, 2) or width != len(norm_min):
        raise DimensionMismatch(len(norm_min), width)
    span = norm_max - norm_min
    constant = span == 0
    scaled = 2.0 * (values - norm_min) / np.where(constant, 1.0, span) - 1.0
    scaled = np.where(constant, 0.0, scaled)
    return np.clip(scaled, -1.0, 1.0)


def normalize(values, model):
    """
    Map raw feature values into [-1, 1] with the model's min-max bounds.
    Constant features map to 0 and values outside the bounds are clamped.

    Accepts a single vector or a matrix with one row per page.
    """
    return scale(values, model.norm_min, model.norm_max)


def _check_input(model, inputs):
    inputs = np.asarray(inputs, dtype=np.float64)
    width = inputs.shape[-1] if inputs.ndim else 0
    if inputs.ndim not in (1, 2) or width != model.input_dim:
        raise DimensionMismatch(model.input_dim, width)
    return inputs


def _forward_pass(model, inputs):
    hidden = bipolar_sigmoid(
        inputs @ model.hidden_weights.T + model.hidden_bias,
        model.alpha
    )
    output = bipolar_sigmoid(
        hidden @ model.output_weights + model.output_bias,
        model.alpha
    )
    return hidden, output


def forward(model, normalized_input):
    """
    Network output in (-1, 1) for one normalized input vector, or an array
    of outputs for a matrix of inputs.
    """
    inputs = _check_input(model, normalized_input)
    _, output = _forward_pass(model, inputs)
    if inputs.ndim == 1:
        return float(output)
    return output


def sse(model, inputs, targets):
    _, output = _forward_pass(model, _check_input(model, inputs))
    residual = np.asarray(targets, dtype=np.float64) - output
    return 0.5 * float(np.sum(residual * residual))


def sse_gradient(model, inputs, targets):
    """
    Exact gradient of ``0.5 * sum((target - output) ** 2)`` over the batch
    with respect to every weight and bias of the model.
    """
    inputs = np.atleast_2d(_check_input(model, inputs))
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if not len(inputs):
        raise ValueError('Gradient needs at least one row.')
    if len(targets) != len(inputs):
        raise DimensionMismatch(len(inputs), len(targets))

    hidden, output = _forward_pass(model, inputs)
    output_delta = (output - targets) * _sigmoid_slope(output, model.alpha)
    hidden_delta = (
        np.outer(output_delta, model.output_weights) *
        _sigmoid_slope(hidden, model.alpha)
    )
    return Gradient(
        hidden_weights=hidden_delta.T @ inputs,
        hidden_bias=hidden_delta.sum(axis=0),
        output_weights=hidden.T @ output_delta,
        output_bias=float(output_delta.sum())
    )


def initial_model(input_dim, config, norm_min=None, norm_max=None,
                  feature_names=None):
    rng = np.random.RandomState(config.seed)
    h = config.hidden_dim
    return MlpModel(
        hidden_weights=rng.uniform(-0.5, 0.5, size=(h, input_dim)),
        hidden_bias=rng.uniform(-0.5, 0.5, size=h),
        output_weights=rng.uniform(-0.5, 0.5, size=h),
        output_bias=rng.uniform(-0.5, 0.5),
        alpha=config.alpha,
        norm_min=norm_min,
        norm_max=norm_max,
        feature_names=feature_names,
        threshold=config.threshold,
        training={
            'seed': config.seed,
            'epochs': config.epochs,
            'rprop': asdict(config.rprop),
        }
    )


def _targets(labels, config):
    labels = list(labels)
    if len(labels) < 2:
        raise TrainingError('Training needs at least two rows.')
    if SPAM not in labels or HAM not in labels:
        raise TrainingError(
            'Training data must contain both spam and ham rows.'
        )
    return np.array([config.target(label) for label in labels])


def train_rprop(inputs, labels, config=None, norm_min=None, norm_max=None,
                feature_names=None):
    """
    Train a network with full-batch RProp without weight-backtracking.

    Each weight keeps its own step size. When the gradient keeps its sign
    the step grows by `eta_plus`; when the sign flips the step shrinks by
    `eta_minus` and the weight stays put for that epoch.

    :param inputs: normalized input matrix, one row per page
    :param labels: ``'spam'``/``'ham'`` label per row
    :param config: TrainingConfig
    :return: ``(model, trace)`` where trace holds the SSE before each epoch
    """
    config = config or TrainingConfig()
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = _targets(labels, config)
    if inputs.ndim != 2 or len(inputs) != len(targets):
        raise TrainingError(
            'Expected one input row per label ({} labels).'.format(
                len(targets)
            )
        )

    model = initial_model(
        inputs.shape[1], config, norm_min, norm_max, feature_names
    )
    rprop = config.rprop
    params = model.flat_params()
    steps = np.full_like(params, rprop.delta_init)
    previous = np.zeros_like(params)
    trace = []
    for epoch in range(config.epochs):
        trace.append(sse(model, inputs, targets))
        gradient = sse_gradient(model, inputs, targets).flat()
        agreement = previous * gradient
        steps = np.where(
            agreement > 0,
            np.minimum(steps * rprop.eta_plus, rprop.delta_max),
            np.where(
                agreement < 0,
                np.maximum(steps * rprop.eta_minus, rprop.delta_min),
                steps
            )
        )
        gradient = np.where(agreement < 0, 0.0, gradient)
        params = params - np.sign(gradient) * steps
        previous = gradient
        model = model.with_params(params)
    logger.debug(
        'Trained %r for %d epochs, SSE %.6f -> %.6f',
        model, config.epochs, trace[0], sse(model, inputs, targets)
    )
    return model, trace


def train(matrix, labels, config=None, feature_names=None):
    """
    Fit min-max bounds on the raw training matrix, normalize it and train.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or not len(matrix):
        raise TrainingError('Training matrix must have at least one row.')
    norm_min, norm_max = fit_bounds(matrix)
    return train_rprop(
        scale(matrix, norm_min, norm_max),
        labels,
        config,
        norm_min=norm_min,
        norm_max=norm_max,
        feature_names=feature_names
    )


@dataclass(frozen=True)
class Verdict(object):
    label: str
    score: float

    @property
    def is_spam(self):
        return self.label == SPAM


def _raw_values(model, vector):
    names = getattr(vector, 'names', None)
    if names is not None and tuple(names) != model.feature_names:
        raise FeatureMismatch(model.feature_names, names)
    return np.asarray(tuple(vector), dtype=np.float64)


def classify(model, vector):
    """
    Label a raw feature vector: spam when the network output reaches the
    model threshold.
    """
    score = forward(model, normalize(_raw_values(model, vector), model))
    return Verdict(
        label=SPAM if score >= model.threshold else HAM,
        score=score
    )


def classify_matrix(model, matrix):
    scores = forward(model, normalize(np.atleast_2d(matrix), model))
    return [
        Verdict(label=SPAM if score >= model.threshold else HAM,
                score=float(score))
        for score in np.atleast_1d(scores)
    ]
