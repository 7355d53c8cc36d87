import json
import warnings
from collections import OrderedDict
from dataclasses import dataclass

from .base import HAM, LABELS, SPAM

METRIC_NAMES = (
    'sensitivity',
    'specificity',
    'efficiency',
    'precision',
    'f1',
    'accuracy',
)

# Column heads as printed in performance tables.
METRIC_TITLES = OrderedDict([
    ('sensitivity', 'Sensitivity'),
    ('specificity', 'Specificity'),
    ('efficiency', 'Efficiency'),
    ('precision', 'Precision'),
    ('f1', 'F1Score'),
    ('accuracy', 'Accuracy'),
])


class UndefinedMetricWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ConfusionMatrix(object):
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError('Confusion counts must not be negative.')

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other):
        return ConfusionMatrix(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            tn=self.tn + other.tn,
            fn=self.fn + other.fn
        )

    def as_dict(self):
        return OrderedDict([
            ('tp', self.tp), ('fp', self.fp), ('tn', self.tn), ('fn', self.fn)
        ])


def confusion(pairs):
    """
    Tally ``(predicted, actual)`` label pairs with spam as the positive
    class.
    """
    counts = {'tp': 0, 'fp': 0, 'tn': 0, 'fn': 0}
    seen = 0
    for predicted, actual in pairs:
        if predicted not in LABELS or actual not in LABELS:
            raise ValueError(
                'Unknown label in pair {!r}.'.format((predicted, actual))
            )
        seen += 1
        if predicted == SPAM:
            counts['tp' if actual == SPAM else 'fp'] += 1
        else:
            counts['tn' if actual == HAM else 'fn'] += 1
    if not seen:
        raise ValueError('Cannot build a confusion matrix from no pairs.')
    return ConfusionMatrix(**counts)


@dataclass(frozen=True)
class MetricsReport(object):
    sensitivity: float
    specificity: float
    efficiency: float
    precision: float
    f1: float
    accuracy: float
    undefined: tuple = ()

    def as_dict(self, digits=None):
        values = OrderedDict(
            (name, getattr(self, name)) for name in METRIC_NAMES
        )
        if digits is not None:
            values = OrderedDict(
                (name, round(value, digits)) for name, value in values.items()
            )
        return values

    def to_json(self, digits=4):
        data = self.as_dict(digits)
        data['undefined'] = list(self.undefined)
        return json.dumps(data, indent=2)

    def format(self):
        return '\n'.join(
            '{:<12} {:.4f}'.format(METRIC_TITLES[name], value)
            for name, value in self.as_dict().items()
        )


def _divide(numerator, denominator, name, undefined):
    if denominator == 0:
        undefined.append(name)
        return 0.0
    return numerator / denominator


def report(cm):
    """
    Compute the six table metrics from a confusion matrix. Ratios with a
    zero denominator are reported as 0.0, listed in ``undefined`` and
    announced with an UndefinedMetricWarning.
    """
    if cm.total <= 0:
        raise ValueError('Cannot report on an empty confusion matrix.')
    undefined = []
    sensitivity = _divide(cm.tp, cm.tp + cm.fn, 'sensitivity', undefined)
    specificity = _divide(cm.tn, cm.tn + cm.fp, 'specificity', undefined)
    precision = _divide(cm.tp, cm.tp + cm.fp, 'precision', undefined)
    f1 = _divide(
        2 * precision * sensitivity,
        precision + sensitivity,
        'f1',
        undefined
    )
    if undefined:
        warnings.warn(
            'Metrics {} are undefined for {!r} and were set to 0.0.'.format(
                ', '.join(undefined), cm
            ),
            UndefinedMetricWarning
        )
    return MetricsReport(
        sensitivity=sensitivity,
        specificity=specificity,
        efficiency=(sensitivity + specificity) / 2,
        precision=precision,
        f1=f1,
        accuracy=(cm.tp + cm.tn) / cm.total,
        undefined=tuple(undefined)
    )
