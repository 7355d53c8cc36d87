import json
import logging
import random
from collections import OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np

from .base import Family, HAM, ImproperlyConfigured, SPAM, TrainingError
from .features import FEATURE_FAMILIES, FEATURE_NAMES, FeatureExtractor
from .metrics import (
    confusion,
    METRIC_NAMES,
    METRIC_TITLES,
    MetricsReport,
    report
)
from .network import classify_matrix, train, TrainingConfig

logger = logging.getLogger(__name__)

FAMILY_COMBOS = (
    (Family.URL,),
    (Family.CONTENT,),
    (Family.LINK,),
    (Family.URL, Family.CONTENT),
    (Family.URL, Family.LINK),
    (Family.CONTENT, Family.LINK),
    (Family.URL, Family.CONTENT, Family.LINK),
)

REFERENCE_CORPUS_SIZE = 370
REFERENCE_TRAIN_COUNT = 300

# Seed offset between family combos when every combo draws its own split.
COMBO_SEED_STRIDE = 1000


def combo_name(combo):
    return '+'.join(Family(family).display_name for family in combo)


def default_train_count(corpus_size):
    """
    Training rows for a corpus of the given size: 300 of 370, scaled
    proportionally and kept within ``[1, corpus_size - 1]``.
    """
    if corpus_size < 2:
        raise ImproperlyConfigured(
            'A corpus needs at least two rows to be split.'
        )
    count = int(round(
        corpus_size * REFERENCE_TRAIN_COUNT / REFERENCE_CORPUS_SIZE
    ))
    return min(max(count, 1), corpus_size - 1)


@dataclass(frozen=True)
class ExperimentPlan(object):
    runs: int = 20
    train_count: int = None
    seed: int = 0
    training: TrainingConfig = field(default_factory=TrainingConfig)
    independent_splits: bool = False
    family_combos: tuple = FAMILY_COMBOS
    max_attempts: int = 10

    def __post_init__(self):
        if self.runs < 1:
            raise ImproperlyConfigured('runs must be at least 1.')
        if self.max_attempts < 1:
            raise ImproperlyConfigured('max_attempts must be at least 1.')
        if not self.family_combos:
            raise ImproperlyConfigured('At least one family combo is needed.')

    def resolve_train_count(self, corpus_size):
        if self.train_count is None:
            return default_train_count(corpus_size)
        if not 0 < self.train_count < corpus_size:
            raise ImproperlyConfigured(
                'train_count must be between 1 and {}, got {}.'.format(
                    corpus_size - 1, self.train_count
                )
            )
        return self.train_count

    def split_seed(self, combo_index, run_index):
        if self.independent_splits:
            return self.seed + COMBO_SEED_STRIDE * combo_index + run_index
        return self.seed + run_index


def split_indices(size, train_count, seed):
    if not 0 < train_count < size:
        raise ValueError(
            'train_count must be between 1 and {}, got {}.'.format(
                size - 1, train_count
            )
        )
    order = list(range(size))
    random.Random(seed).shuffle(order)
    return order[:train_count], order[train_count:]


def split(records, train_count, seed):
    """
    Shuffle records with a seeded permutation and cut it at `train_count`.

    :return: ``(train, test)`` lists
    """
    records = list(records)
    train_idx, test_idx = split_indices(len(records), train_count, seed)
    return (
        [records[i] for i in train_idx],
        [records[i] for i in test_idx]
    )


@dataclass
class CorpusMatrix(object):
    """Raw 32-feature rows of a corpus with their labels."""
    values: np.ndarray
    labels: list
    names: tuple = FEATURE_NAMES
    families: tuple = FEATURE_FAMILIES

    def __len__(self):
        return len(self.labels)

    def columns(self, combo):
        wanted = set(combo)
        return [
            index for index, family in enumerate(self.families)
            if family in wanted
        ]

    @classmethod
    def from_records(cls, records, extractor=None):
        extractor = extractor or FeatureExtractor()
        rows = []
        labels = []
        for record in records:
            rows.append(extractor.extract_record(record).values)
            labels.append(record.label)
        return cls(
            values=np.array(rows, dtype=np.float64).reshape(
                len(rows), len(FEATURE_NAMES)
            ),
            labels=labels
        )


@dataclass
class RunResult(object):
    combo: tuple
    run_index: int
    seed: int
    attempts: int
    confusion: object
    report: MetricsReport

    @property
    def combo_name(self):
        return combo_name(self.combo)


def _draw_split(labels, train_count, seed, max_attempts):
    for attempt in range(1, max_attempts + 1):
        train_idx, test_idx = split_indices(len(labels), train_count, seed)
        train_labels = {labels[i] for i in train_idx}
        if SPAM in train_labels and HAM in train_labels:
            return seed, attempt, train_idx, test_idx
        logger.info(
            'Split with seed %d has a single-class training set, '
            'redrawing with seed %d',
            seed,
            seed + 1
        )
        seed += 1
    raise TrainingError(
        'No two-class training set after {} attempts.'.format(max_attempts)
    )


def run_single(corpus_matrix, plan, combo, run_index):
    """
    Replay one run of one family combo: split, train on the training rows
    and evaluate on the rest.
    """
    combo_index = (
        plan.family_combos.index(combo) if combo in plan.family_combos else 0
    )
    train_count = plan.resolve_train_count(len(corpus_matrix))
    seed, attempts, train_idx, test_idx = _draw_split(
        corpus_matrix.labels,
        train_count,
        plan.split_seed(combo_index, run_index),
        plan.max_attempts
    )
    columns = corpus_matrix.columns(combo)
    values = corpus_matrix.values[:, columns]
    labels = corpus_matrix.labels
    model, _ = train(
        values[train_idx],
        [labels[i] for i in train_idx],
        replace(plan.training, seed=seed),
        feature_names=[corpus_matrix.names[i] for i in columns]
    )
    verdicts = classify_matrix(model, values[test_idx])
    cm = confusion(
        (verdict.label, labels[i]) for verdict, i in zip(verdicts, test_idx)
    )
    result = RunResult(
        combo=tuple(combo),
        run_index=run_index,
        seed=seed,
        attempts=attempts,
        confusion=cm,
        report=report(cm)
    )
    logger.debug(
        '%s run %d (seed %d): %s',
        result.combo_name,
        run_index,
        seed,
        dict(result.report.as_dict(4))
    )
    return result


@dataclass(frozen=True)
class TableRow(object):
    combo: str
    mean: MetricsReport
    std: OrderedDict


class ExperimentTable(object):
    """
    Per-combo means and population standard deviations of the six metrics,
    in family-combo order.
    """
    def __init__(self, rows, runs):
        self.rows = list(rows)
        self.runs = runs

    @classmethod
    def from_runs(cls, run_results, combos, runs):
        rows = []
        for combo in combos:
            reports = [
                result.report for result in run_results
                if result.combo == tuple(combo)
            ]
            values = {
                name: np.array([getattr(r, name) for r in reports])
                for name in METRIC_NAMES
            }
            mean = MetricsReport(**{
                name: float(np.mean(column))
                for name, column in values.items()
            })
            std = OrderedDict(
                (name, float(np.std(values[name]))) for name in METRIC_NAMES
            )
            rows.append(TableRow(combo=combo_name(combo), mean=mean, std=std))
        return cls(rows, runs)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, combo):
        if not isinstance(combo, str):
            combo = combo_name(combo)
        for row in self.rows:
            if row.combo == combo:
                return row
        raise KeyError(combo)

    def to_text(self):
        width = max(len('Features'), max(len(row.combo) for row in self.rows))
        titles = list(METRIC_TITLES.values())
        lines = [
            'Performance by feature family (mean of {} runs, std in '
            'parentheses)'.format(self.runs),
            '  '.join(
                ['{:<{}}'.format('Features', width)] +
                ['{:>17}'.format(title) for title in titles]
            ),
        ]
        for row in self.rows:
            cells = [
                '{:.4f} ({:.4f})'.format(getattr(row.mean, name),
                                         row.std[name])
                for name in METRIC_NAMES
            ]
            lines.append('  '.join(
                ['{:<{}}'.format(row.combo, width)] +
                ['{:>17}'.format(cell) for cell in cells]
            ))
        return '\n'.join(lines) + '\n'

    def to_dict(self):
        return OrderedDict([
            ('runs', self.runs),
            ('rows', [
                OrderedDict([
                    ('combo', row.combo),
                    ('mean', row.mean.as_dict()),
                    ('std', row.std),
                ])
                for row in self.rows
            ]),
        ])

    @classmethod
    def from_dict(cls, data):
        rows = [
            TableRow(
                combo=row['combo'],
                mean=MetricsReport(**{
                    name: row['mean'][name] for name in METRIC_NAMES
                }),
                std=OrderedDict(
                    (name, row['std'][name]) for name in METRIC_NAMES
                )
            )
            for row in data['rows']
        ]
        return cls(rows, data['runs'])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + '\n'

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as f:
            return cls.from_dict(json.load(f))

    def __eq__(self, other):
        if not isinstance(other, ExperimentTable):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return '<{cls} rows={rows} runs={runs}>'.format(
            cls=self.__class__.__name__,
            rows=len(self.rows),
            runs=self.runs
        )


@dataclass
class ExperimentResult(object):
    plan: ExperimentPlan
    corpus_size: int
    train_count: int
    runs: list
    table: ExperimentTable


def evaluate_plan(corpus, plan=None, extractor=None):
    """
    Run every family combo of the plan `plan.runs` times and keep both the
    per-run results and the averaged table.

    :param corpus: PageRecord sequence or a prepared CorpusMatrix
    """
    plan = plan or ExperimentPlan()
    if isinstance(corpus, CorpusMatrix):
        corpus_matrix = corpus
    else:
        corpus_matrix = CorpusMatrix.from_records(corpus, extractor)
    if SPAM not in corpus_matrix.labels or HAM not in corpus_matrix.labels:
        raise TrainingError('The corpus must contain spam and ham pages.')
    train_count = plan.resolve_train_count(len(corpus_matrix))
    logger.info(
        'Running %d combos x %d runs on %d pages (%d for training)',
        len(plan.family_combos),
        plan.runs,
        len(corpus_matrix),
        train_count
    )
    results = [
        run_single(corpus_matrix, plan, combo, run_index)
        for combo in plan.family_combos
        for run_index in range(plan.runs)
    ]
    return ExperimentResult(
        plan=plan,
        corpus_size=len(corpus_matrix),
        train_count=train_count,
        runs=results,
        table=ExperimentTable.from_runs(
            results, plan.family_combos, plan.runs
        )
    )


def run_experiment(corpus, plan=None, extractor=None):
    return evaluate_plan(corpus, plan, extractor).table
