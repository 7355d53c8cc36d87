import json
import logging
import random
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .base import CorpusError, HAM, LABELS, SPAM
from .features import FEATURE_NAMES, FeatureExtractor
from .urls import parse_url, UrlParseError

logger = logging.getLogger(__name__)

LABEL_COLUMN = 'label'


@dataclass(frozen=True)
class PageRecord(object):
    url: str
    html: str
    label: str = None

    def __post_init__(self):
        if self.label is not None and self.label not in LABELS:
            raise ValueError('Unknown label {!r}.'.format(self.label))

    @property
    def is_spam(self):
        return self.label == SPAM

    def to_json(self):
        return json.dumps(
            {'url': self.url, 'html': self.html, 'label': self.label},
            ensure_ascii=False
        )


@dataclass
class Corpus(object):
    """
    Records read from a corpus file, plus the ``(line_number, reason)``
    pairs of the lines that were rejected.
    """
    records: list
    errors: list = field(default_factory=list)
    path: str = None

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, index):
        return self.records[index]

    @property
    def spam_count(self):
        return sum(1 for record in self.records if record.is_spam)


def _parse_line(line):
    data = json.loads(line)
    if not isinstance(data, dict):
        raise ValueError('record is not an object')
    for key in ('url', 'html', 'label'):
        if not isinstance(data.get(key), str):
            raise ValueError('field {!r} must be a string'.format(key))
    return PageRecord(url=data['url'], html=data['html'], label=data['label'])


def load_corpus(path, suffixes=None):
    """
    Read a line-delimited JSON corpus of ``{"url", "html", "label"}``
    records.

    Malformed lines are skipped and reported on the returned Corpus.

    :param path: corpus file path
    :param suffixes:
        SuffixTable used to reject records whose URL does not parse
    :raises CorpusError: if the file is unreadable or holds no valid record
    """
    records = []
    errors = []
    try:
        with open(path, 'rb') as f:
            for number, raw in enumerate(f, 1):
                if not raw.strip():
                    continue
                try:
                    record = _parse_line(raw.decode('utf-8'))
                    parse_url(record.url, suffixes)
                except (ValueError, UrlParseError) as e:
                    logger.warning('%s:%d: skipping record (%s)', path,
                                   number, e)
                    errors.append((number, str(e)))
                    continue
                records.append(record)
    except OSError as e:
        raise CorpusError("Could not read corpus '{}': {}".format(path, e))
    if not records:
        raise CorpusError(
            "Corpus '{}' contains no valid records.".format(path)
        )
    logger.info(
        'Loaded %d records (%d spam) from %s, %d lines rejected',
        len(records),
        sum(1 for r in records if r.is_spam),
        path,
        len(errors)
    )
    return Corpus(records=records, errors=errors, path=path)


def save_corpus(records, path):
    with open(path, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(record.to_json())
            f.write('\n')


def feature_matrix(records, extractor=None, families=None):
    """
    Extract one feature row per record.

    :return: ``pandas.DataFrame`` with the selected feature columns and a
        trailing ``label`` column
    """
    extractor = extractor or FeatureExtractor()
    rows = []
    names = None
    for record in records:
        vector = extractor.extract_record(record, families)
        names = vector.names
        rows.append(list(vector.values))
    if names is None:
        names = FEATURE_NAMES
    frame = pd.DataFrame(rows, columns=list(names), dtype=np.float64)
    frame[LABEL_COLUMN] = [record.label for record in records]
    return frame


def write_feature_matrix(frame, path):
    frame.to_csv(path, index=False, lineterminator='\n')


def read_feature_matrix(path):
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except (OSError, ValueError) as e:
        raise CorpusError(
            "Could not read feature matrix '{}': {}".format(path, e)
        )
    if LABEL_COLUMN not in frame.columns:
        raise CorpusError(
            "Feature matrix '{}' has no label column.".format(path)
        )
    bad = set(frame[LABEL_COLUMN]) - set(LABELS)
    if bad:
        raise CorpusError(
            "Feature matrix '{}' has unknown labels {}.".format(
                path, ', '.join(sorted(map(str, bad)))
            )
        )
    return frame


def split_matrix(frame):
    """Split a feature matrix into ``(names, values, labels)``."""
    names = [column for column in frame.columns if column != LABEL_COLUMN]
    return (
        names,
        frame[names].to_numpy(dtype=np.float64),
        list(frame[LABEL_COLUMN])
    )


SPAM_KEYWORDS = (
    'cheap', 'pills', 'viagra', 'casino', 'loans', 'bonus', 'free', 'poker',
    'replica', 'watches', 'pharmacy', 'discount', 'credit', 'mortgage',
    'weightloss', 'diet', 'forex', 'crypto', 'payday', 'jackpot',
)

SPAM_TAGLINES = (
    'act now', 'buy now', 'limited offer', 'last chance',
    'register immediately', 'order now', 'click here',
)

HAM_TOPICS = (
    'garden', 'history', 'cooking', 'physics', 'travel', 'music',
    'library', 'museum', 'hiking', 'science', 'poetry', 'cycling',
)

HAM_SENTENCES = (
    'This is a short guide to the things we have learned over the years.',
    'It was not always easy, but we did our best to keep it simple.',
    'If you are new here, you may want to start with the first chapter.',
    'Most of the work was done by volunteers who gave up their weekends.',
    'We would like to thank all of those who helped us along the way.',
    'There is a lot more to say about this, and we will come back to it.',
    'The museum is open on weekdays from nine in the morning until five.',
    'Our team has been writing about these topics for more than ten years.',
    'You can find the full list of sources at the end of the page.',
    'When the weather is good, the trail is one of the best in the region.',
    'He said that the old bridge had been there since before the war.',
    'She was the first person in her family to study at the university.',
    'Each of the recipes below can be made in less than an hour.',
    'They have been working on the new edition for almost two years.',
    'It is worth noting that the results were not the same in every case.',
    'The library has a quiet room where you can read and work all day.',
    'We hope that you will enjoy reading this as much as we enjoyed it.',
    'Some of the photos were taken by our readers during their visits.',
    'In the next section we explain how the data was collected and used.',
    'Please let us know if you find any mistakes so that we can fix them.',
    'The concert will take place in the park if it does not rain.',
    'Our next meeting is on the first Monday of the month at the hall.',
    'This page was last updated after the spring season came to an end.',
    'A few of the older articles are still being moved to the new site.',
    'Many of the plants in the garden were grown from seeds by the club.',
    'At the end of the day, what matters most is that you had fun.',
    'Those who want to help can join us at the market on Saturday.',
    'The course is free for students and there is no need to register.',
    'If you have any questions about the event, you can write to us.',
    'We are grateful to the city for letting us use the old school.',
)

HAM_DOMAINS = (
    'example', 'fieldnotes', 'townlibrary', 'oakparkclub', 'riverside',
    'greenacre', 'lakeview', 'hillcrest', 'northgate', 'maplehouse',
)


def _spam_page(rng, index):
    words = rng.sample(SPAM_KEYWORDS, 4)
    phrase = ' '.join(words)
    label = ''.join(words[:3]) + rng.choice(['zzz', 'xxx', '4u', '247'])
    tld = rng.choice(['info', 'biz', 'xyz', 'top', 'net'])
    host = '{}.{}.{}.{}{}.{}'.format(
        rng.choice(['buy', 'best', 'get', 'top']),
        rng.choice(['deals', 'offers', 'promo']),
        rng.choice(['secure', 'online', 'shop']),
        label,
        rng.randint(10, 9999),
        tld
    )
    url = 'http://{}/{}-{}.html'.format(
        host, '-'.join(words), '-'.join(rng.sample(SPAM_KEYWORDS, 5))
    )
    stuffing = ' '.join([phrase] * rng.randint(30, 45))
    taglines = ' '.join(rng.choice(SPAM_TAGLINES) for _ in range(6))
    anchors = ' '.join(
        "<a href='http://{kw}{n}.{tld}/'>{phrase} {kw} {kw2}</a>".format(
            kw=rng.choice(SPAM_KEYWORDS),
            kw2=rng.choice(SPAM_KEYWORDS),
            n=rng.randint(1, 999),
            tld=tld,
            phrase=phrase
        )
        for _ in range(rng.randint(12, 20))
    )
    self_links = ' '.join(
        "<a href='/{}-{}.html'>{} {}</a>".format(
            words[0], i, phrase, rng.choice(SPAM_KEYWORDS)
        )
        for i in range(4)
    )
    html = (
        "<html><head><title>{title}</title></head><body>"
        "<h1>{tagline}</h1><p>{stuffing}</p><p>{taglines}</p>"
        "<div>{anchors} {self_links}</div>"
        "<script src='http://pagead2.googlesyndication.com/show_ads.js'>"
        "</script><script src='//ads.doubleclick.net/ad{index}.js'></script>"
        "<script>eval(unescape('%64%6f%63%75%6d%65%6e%74'))</script>"
        "</body></html>"
    ).format(
        title=' '.join([phrase] * 3),
        tagline=rng.choice(SPAM_TAGLINES),
        stuffing=stuffing,
        taglines=taglines,
        anchors=anchors,
        self_links=self_links,
        index=index
    )
    return PageRecord(url=url, html=html, label=SPAM)


def _ham_page(rng, index):
    topic = rng.choice(HAM_TOPICS)
    domain = '{}{}'.format(rng.choice(HAM_DOMAINS), topic)
    tld = rng.choice(['org', 'edu', 'gov', 'com'])
    url = 'https://www.{}.{}/{}/{}'.format(
        domain, tld, topic, rng.randint(1, 99)
    )
    sentences = rng.sample(HAM_SENTENCES, rng.randint(12, 18))
    half = len(sentences) // 2
    images = ''.join(
        "<img src='/img/{topic}{i}.jpg' alt='A photo of the {topic} "
        "collection'>".format(topic=topic, i=i)
        for i in range(rng.randint(3, 6))
    )
    links = ' '.join(
        "<a href='/{topic}/{i}'>{name}</a>".format(
            topic=topic, i=i, name=rng.choice(['Notes', 'Archive', 'About'])
        )
        for i in range(rng.randint(3, 6))
    )
    video = ''
    if rng.random() < 0.5:
        video = (
            "<iframe src='https://www.youtube.com/embed/{}{}'></iframe>"
        ).format(topic, index)
    html = (
        "<html><head><title>{Topic} notes</title>"
        "<meta name='description' content='Notes and stories about {topic} "
        "from our community'></head><body><h1>{Topic}</h1>"
        "<h2>Introduction</h2><p>{first}</p><h2>More</h2><p>{second}</p>"
        "{images}{video}<div>{links}</div></body></html>"
    ).format(
        Topic=topic.capitalize(),
        topic=topic,
        first=' '.join(sentences[:half]),
        second=' '.join(sentences[half:]),
        images=images,
        video=video,
        links=links
    )
    return PageRecord(url=url, html=html, label=HAM)


def generate_synthetic_corpus(n, spam_fraction=0.3, seed=0):
    """
    Generate labeled pages with pronounced spam and ham traits.

    Spam pages have long keyword-stuffed URLs on deep subdomains, bodies of
    one repeated phrase, call-to-action taglines, ad scripts, an obfuscated
    script and link-farm anchors. Ham pages are https pages with varied
    prose, headings, described images and short internal links.

    :param n: number of pages, at least 10
    :param spam_fraction: share of spam pages, strictly between 0 and 1
    :param seed: random seed; equal seeds give equal corpora
    """
    if n < 10:
        raise ValueError('A synthetic corpus needs at least 10 pages.')
    if not 0 < spam_fraction < 1:
        raise ValueError('spam_fraction must be between 0 and 1.')
    rng = random.Random(seed)
    spam_count = int(round(n * spam_fraction))
    labels = [SPAM] * spam_count + [HAM] * (n - spam_count)
    rng.shuffle(labels)
    return [
        _spam_page(rng, index) if label == SPAM else _ham_page(rng, index)
        for index, label in enumerate(labels)
    ]
