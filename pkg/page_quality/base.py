import os
from enum import Enum

HERE = os.path.dirname(os.path.abspath(__file__))

SPAM = 'spam'
HAM = 'ham'
LABELS = (SPAM, HAM)


class Family(str, Enum):
    URL = 'url'
    CONTENT = 'content'
    LINK = 'link'

    @property
    def display_name(self):
        return self.value.capitalize()


class PageQualityError(Exception):
    exit_code = 1


class ImproperlyConfigured(PageQualityError):
    exit_code = 2


class UrlParseError(PageQualityError, ValueError):
    exit_code = 2

    def __init__(self, raw, reason):
        self.raw = raw
        self.reason = reason
        super(UrlParseError, self).__init__(
            'Could not parse URL {!r}: {}.'.format(raw, reason)
        )


class CorpusError(PageQualityError):
    exit_code = 2


class TrainingError(PageQualityError):
    exit_code = 3


class DimensionMismatch(PageQualityError, ValueError):
    exit_code = 4

    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super(DimensionMismatch, self).__init__(
            'Expected a vector of length {}, got {}.'.format(expected, actual)
        )


class FeatureMismatch(DimensionMismatch):
    """
    Raised when the feature names of a vector or matrix differ from the ones a
    model was trained on. `missing` holds names only the model knows,
    `unexpected` names only the input has.
    """
    def __init__(self, expected_names, actual_names):
        expected_names = list(expected_names)
        actual_names = list(actual_names)
        self.missing = sorted(set(expected_names) - set(actual_names))
        self.unexpected = sorted(set(actual_names) - set(expected_names))
        PageQualityError.__init__(
            self,
            'Feature names do not match the model. Missing: {}. '
            'Unexpected: {}.'.format(
                ', '.join(self.missing) or '-',
                ', '.join(self.unexpected) or '-'
            )
        )
        self.expected = len(expected_names)
        self.actual = len(actual_names)

    @property
    def symmetric_difference(self):
        return sorted(self.missing + self.unexpected)


def data_path(filename):
    return os.path.join(HERE, 'data', filename)


def read_list_file(path):
    """
    Read a one-entry-per-line list file. Blank lines and everything after a
    ``#`` are ignored.

    :param path: path of the file to read
    :return: list of ``(line_number, entry)`` tuples in file order
    """
    entries = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, 1):
            entry = line.split('#', 1)[0].strip()
            if entry:
                entries.append((number, entry))
    return entries


def check_lowercase(path, entries):
    for number, entry in entries:
        if entry != entry.lower():
            raise ImproperlyConfigured(
                "Entry {!r} on line {} of '{}' is not lowercase.".format(
                    entry, number, path
                )
            )


class FetchError(PageQualityError):
    exit_code = 5

    def __init__(self, url, reason):
        self.url = url
        self.reason = reason
        super(FetchError, self).__init__(
            'Could not fetch {}: {}'.format(url, reason)
        )


class FetchTimeout(FetchError):
    pass


class TooManyRedirects(FetchError):
    pass


class BadStatus(FetchError):
    def __init__(self, url, status):
        self.status = status
        super(BadStatus, self).__init__(
            url, 'server answered with status {}'.format(status)
        )


class BodyTooLarge(FetchError):
    def __init__(self, url, limit):
        self.limit = limit
        super(BodyTooLarge, self).__init__(
            url, 'body exceeds {} bytes'.format(limit)
        )
