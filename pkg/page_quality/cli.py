import argparse
import logging
import sys

import numpy as np

from .base import (
    FeatureMismatch,
    ImproperlyConfigured,
    PageQualityError,
    SPAM
)
from .corpus import (
    feature_matrix,
    generate_synthetic_corpus,
    load_corpus,
    read_feature_matrix,
    save_corpus,
    split_matrix,
    write_feature_matrix
)
from .experiment import evaluate_plan, ExperimentPlan
from .features import (
    FEATURE_FAMILY_OF,
    FeatureExtractor,
    parse_families
)
from .fetcher import (
    DEFAULT_MAX_BYTES,
    DEFAULT_MAX_REDIRECTS,
    DEFAULT_TIMEOUT_MS,
    DEFAULT_USER_AGENT,
    fetch
)
from .lexicons import load_lexicons
from .metrics import confusion, report
from .network import (
    classify,
    classify_matrix,
    MlpModel,
    normalize,
    sse,
    train,
    TrainingConfig
)
from .urls import SuffixTable

logger = logging.getLogger(__name__)

EXIT_HAM = 0
EXIT_SPAM = 10


def configure_logging(args):
    level = logging.INFO
    if args.quiet:
        level = logging.WARNING
    if args.verbose:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s'
    )


def make_extractor(args):
    lexicons = load_lexicons(args.lexicon_dir) if args.lexicon_dir else None
    suffixes = SuffixTable.from_file(args.suffix_file) \
        if args.suffix_file else None
    return FeatureExtractor(lexicons, suffixes)


def load_model(path):
    try:
        return MlpModel.load(path)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise ImproperlyConfigured(
            "Could not load model '{}': {}".format(path, e)
        )


def cmd_extract(args):
    extractor = make_extractor(args)
    corpus = load_corpus(args.corpus, extractor.suffixes)
    frame = feature_matrix(
        corpus, extractor, parse_families(args.families)
    )
    write_feature_matrix(frame, args.out)
    print('Wrote {} rows x {} feature columns to {}'.format(
        len(frame), len(frame.columns) - 1, args.out
    ))
    return 0


def cmd_train(args):
    frame = read_feature_matrix(args.matrix)
    names, values, labels = split_matrix(frame)
    config = TrainingConfig(
        epochs=args.epochs,
        seed=args.seed,
        hidden_dim=args.hidden,
        alpha=args.alpha
    )
    model, trace = train(values, labels, config, feature_names=names)
    final = sse(
        model,
        normalize(values, model),
        [config.target(label) for label in labels]
    )
    model.save(args.model_out)
    print('Initial SSE {:.6f}'.format(trace[0]))
    print('Final SSE {:.6f}'.format(final))
    print('Wrote model to {}'.format(args.model_out))
    return 0


def cmd_evaluate(args):
    model = load_model(args.model)
    names, values, labels = split_matrix(read_feature_matrix(args.matrix))
    if tuple(names) != model.feature_names:
        raise FeatureMismatch(model.feature_names, names)
    verdicts = classify_matrix(model, values)
    result = report(confusion(
        (verdict.label, label) for verdict, label in zip(verdicts, labels)
    ))
    print(result.to_json() if args.json else result.format())
    return 0


def cmd_experiment(args):
    extractor = make_extractor(args)
    corpus = load_corpus(args.corpus, extractor.suffixes)
    plan = ExperimentPlan(
        runs=args.runs,
        train_count=args.train_count,
        seed=args.seed,
        training=TrainingConfig(
            epochs=args.epochs,
            hidden_dim=args.hidden,
            alpha=args.alpha
        ),
        independent_splits=args.independent_splits
    )
    result = evaluate_plan(corpus, plan, extractor)
    text = result.table.to_text()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    if args.json:
        result.table.save(args.json)
    if args.db:
        from .store import open_run_log

        session, run_log = open_run_log(args.db)
        try:
            run_log.record(session, result)
            session.commit()
        finally:
            session.close()
    return 0


def _model_families(model):
    families = []
    for name in model.feature_names:
        family = FEATURE_FAMILY_OF.get(name)
        if family is None:
            raise FeatureMismatch(model.feature_names, [])
        if family not in families:
            families.append(family)
    return families


def cmd_score(args):
    model = load_model(args.model)
    if args.url:
        page = fetch(
            args.url,
            timeout_ms=args.timeout_ms,
            max_redirects=args.max_redirects,
            max_bytes=args.max_bytes,
            user_agent=args.user_agent
        )
        url, html = page.url, page.content
    else:
        try:
            with open(args.html, 'rb') as f:
                html = f.read()
        except OSError as e:
            raise ImproperlyConfigured(
                "Could not read '{}': {}".format(args.html, e)
            )
        url = args.page_url
    families = _model_families(model)
    vector = make_extractor(args).extract(url, html, families)
    verdict = classify(model, vector)
    print('{} {:.6f}'.format(verdict.label, verdict.score))
    for family in families:
        sub = vector.family(family)
        print('{}: {}'.format(family.value, ' '.join(
            '{}={}'.format(name, np.format_float_positional(value, trim='-'))
            for name, value in sub.as_dict().items()
        )))
    return EXIT_SPAM if verdict.label == SPAM else EXIT_HAM


def cmd_synth(args):
    records = generate_synthetic_corpus(
        args.n, args.spam_fraction, args.seed
    )
    save_corpus(records, args.out)
    print('Wrote {} pages ({} spam) to {}'.format(
        len(records),
        sum(1 for record in records if record.is_spam),
        args.out
    ))
    return 0


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0)
    common.add_argument(
        '--lexicon-dir',
        help='directory with lexicon files replacing the embedded ones'
    )
    common.add_argument(
        '--suffix-file', help='public suffix list replacing the embedded one'
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--quiet', action='store_true')
    verbosity.add_argument('--verbose', action='store_true')
    return common


def _add_training_flags(parser):
    parser.add_argument('--epochs', type=int, default=200)
    parser.add_argument('--hidden', type=int, default=10)
    parser.add_argument('--alpha', type=float, default=2.0)


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='page-quality',
        description='Low-cost page quality features and spam classification.'
    )
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    extract = commands.add_parser(
        'extract', parents=[common], help='write a feature matrix'
    )
    extract.add_argument('corpus')
    extract.add_argument('--families', default='url,content,link')
    extract.add_argument('-o', '--out', required=True)
    extract.set_defaults(func=cmd_extract)

    train_ = commands.add_parser(
        'train', parents=[common], help='train a model on a feature matrix'
    )
    train_.add_argument('matrix')
    train_.add_argument('-o', '--model-out', required=True)
    _add_training_flags(train_)
    train_.set_defaults(func=cmd_train)

    evaluate = commands.add_parser(
        'evaluate', parents=[common], help='report metrics of a model'
    )
    evaluate.add_argument('model')
    evaluate.add_argument('matrix')
    evaluate.add_argument('--json', action='store_true')
    evaluate.set_defaults(func=cmd_evaluate)

    experiment = commands.add_parser(
        'experiment', parents=[common],
        help='run every feature family combination repeatedly'
    )
    experiment.add_argument('corpus')
    experiment.add_argument('--runs', type=int, default=20)
    experiment.add_argument('--train-count', type=int)
    experiment.add_argument('--independent-splits', action='store_true')
    experiment.add_argument('--out', help='write the text table here')
    experiment.add_argument('--json', help='write the JSON table here')
    experiment.add_argument('--db', help='record runs in this database URL')
    _add_training_flags(experiment)
    experiment.set_defaults(func=cmd_experiment)

    score = commands.add_parser(
        'score', parents=[common], help='classify a single page'
    )
    score.add_argument('model')
    source = score.add_mutually_exclusive_group(required=True)
    source.add_argument('--url')
    source.add_argument('--html')
    score.add_argument('--page-url', default='http://localhost/')
    score.add_argument('--timeout-ms', type=int, default=DEFAULT_TIMEOUT_MS)
    score.add_argument(
        '--max-redirects', type=int, default=DEFAULT_MAX_REDIRECTS
    )
    score.add_argument('--max-bytes', type=int, default=DEFAULT_MAX_BYTES)
    score.add_argument('--user-agent', default=DEFAULT_USER_AGENT)
    score.set_defaults(func=cmd_score)

    synth = commands.add_parser(
        'synth', parents=[common], help='write a synthetic labeled corpus'
    )
    synth.add_argument('out')
    synth.add_argument('-n', type=int, default=370)
    synth.add_argument('--spam-fraction', type=float, default=0.3)
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args)
    try:
        return args.func(args)
    except PageQualityError as e:
        logger.debug('Command failed', exc_info=True)
        sys.stderr.write('error: {}\n'.format(e))
        return e.exit_code
    except ValueError as e:
        sys.stderr.write('error: {}\n'.format(e))
        return 2


def run():
    sys.exit(main())
