import logging
from datetime import datetime

import sqlalchemy as sa
from sqlalchemy.ext.hybrid import hybrid_property
from sqlalchemy.orm import declarative_base, declared_attr, sessionmaker
from sqlalchemy_utils import create_database, database_exists, JSONType

from .base import ImproperlyConfigured
from .experiment import combo_name

logger = logging.getLogger(__name__)


def experiment_base(Base, schema):
    class ExperimentBase(Base):
        __abstract__ = True
        __table_args__ = {'schema': schema}
        id = sa.Column(sa.Integer, primary_key=True)
        issued_at = sa.Column(sa.DateTime, default=datetime.utcnow)
        corpus_size = sa.Column(sa.Integer, nullable=False)
        runs = sa.Column(sa.Integer, nullable=False)
        base_seed = sa.Column(sa.Integer, nullable=False)
        train_count = sa.Column(sa.Integer, nullable=False)
        training = sa.Column(JSONType, default={})
        table = sa.Column(JSONType, default={})

        def __repr__(self):
            return '<{cls} id={id!r} issued_at={issued_at!r}>'.format(
                cls=self.__class__.__name__,
                id=self.id,
                issued_at=self.issued_at
            )

    return ExperimentBase


def run_base(Base, schema, experiment_cls):

    class RunBase(Base):
        __abstract__ = True
        __table_args__ = {'schema': schema}
        id = sa.Column(sa.Integer, primary_key=True)
        combo = sa.Column(sa.Text, nullable=False, index=True)
        run_index = sa.Column(sa.Integer, nullable=False)
        seed = sa.Column(sa.Integer, nullable=False)
        attempts = sa.Column(sa.Integer, nullable=False, default=1)
        tp = sa.Column(sa.Integer, nullable=False, default=0)
        fp = sa.Column(sa.Integer, nullable=False, default=0)
        tn = sa.Column(sa.Integer, nullable=False, default=0)
        fn = sa.Column(sa.Integer, nullable=False, default=0)
        metrics = sa.Column(JSONType, default={})

        @declared_attr
        def experiment_id(cls):
            return sa.Column(
                sa.Integer,
                sa.ForeignKey(experiment_cls.id),
                nullable=False
            )

        @declared_attr
        def experiment(cls):
            return sa.orm.relationship(experiment_cls, backref='run_entries')

        @hybrid_property
        def accuracy(self):
            total = self.tp + self.fp + self.tn + self.fn
            return (self.tp + self.tn) / total

        @accuracy.expression
        def accuracy(cls):
            return (
                sa.cast(cls.tp + cls.tn, sa.Float) /
                sa.cast(cls.tp + cls.fp + cls.tn + cls.fn, sa.Float)
            )

        def __repr__(self):
            return (
                '<{cls} combo={combo!r} run_index={run_index!r} '
                'id={id!r}>'
            ).format(
                cls=self.__class__.__name__,
                combo=self.combo,
                run_index=self.run_index,
                id=self.id
            )
    return RunBase


class RunLog(object):
    """
    Keeps experiment results in two tables, ``experiment`` and ``run``,
    declared on the given declarative base.

    ::

        run_log = RunLog()
        run_log.init(Base)
        run_log.record(session, result)
        session.commit()
    """
    def __init__(self, schema_name=None):
        self.schema_name = schema_name
        self.base = None
        self.experiment_cls = None
        self.run_cls = None

    def experiment_model_factory(self, base):
        class ExperimentEntry(experiment_base(base, self.schema_name)):
            __tablename__ = 'experiment'

        return ExperimentEntry

    def run_model_factory(self, base, experiment_cls):
        class RunEntry(run_base(base, self.schema_name, experiment_cls)):
            __tablename__ = 'run'

        return RunEntry

    def init(self, base):
        self.base = base
        self.experiment_cls = self.experiment_model_factory(base)
        self.run_cls = self.run_model_factory(base, self.experiment_cls)

    def _check_initialized(self):
        if self.base is None:
            raise ImproperlyConfigured(
                'This run log does not have declarative base set up yet. '
                'Call init method to set up this run log.'
            )

    def record(self, session, result):
        """
        Add an ExperimentEntry with one RunEntry per (combo, run) to the
        session. Nothing is committed.

        :param session: SQLAlchemy session
        :param result: ExperimentResult
        """
        self._check_initialized()
        entry = self.experiment_cls(
            corpus_size=result.corpus_size,
            runs=result.plan.runs,
            base_seed=result.plan.seed,
            train_count=result.train_count,
            training=result.plan.training.to_dict(),
            table=result.table.to_dict()
        )
        for run in result.runs:
            self.run_cls(
                experiment=entry,
                combo=run.combo_name,
                run_index=run.run_index,
                seed=run.seed,
                attempts=run.attempts,
                metrics=run.report.as_dict(),
                **run.confusion.as_dict()
            )
        session.add(entry)
        logger.info(
            'Recorded experiment with %d runs', len(result.runs)
        )
        return entry

    def best_runs(self, session, combo, limit=5):
        self._check_initialized()
        if not isinstance(combo, str):
            combo = combo_name(combo)
        return (
            session.query(self.run_cls)
            .filter(self.run_cls.combo == combo)
            .order_by(self.run_cls.accuracy.desc(), self.run_cls.id)
            .limit(limit)
            .all()
        )


def open_run_log(url, schema_name=None):
    """
    Connect to the run-log database at `url`, creating the database and its
    tables when missing.

    :return: ``(session, run_log)``
    """
    engine = sa.create_engine(url)
    if not database_exists(engine.url):
        logger.info('Creating run-log database %s', engine.url)
        create_database(engine.url)
    base = declarative_base()
    run_log = RunLog(schema_name=schema_name)
    run_log.init(base)
    base.metadata.create_all(engine)
    session = sessionmaker(bind=engine)()
    return session, run_log
