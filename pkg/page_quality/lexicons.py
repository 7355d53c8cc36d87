import logging
import os
from dataclasses import dataclass

from .base import (
    check_lowercase,
    data_path,
    ImproperlyConfigured,
    read_list_file
)

logger = logging.getLogger(__name__)

LEXICON_FILES = {
    'stop_words': 'stop_words.txt',
    'cta_phrases': 'cta_phrases.txt',
    'ad_hosts': 'ad_hosts.txt',
    'video_hosts': 'video_hosts.txt',
    'top500': 'top500.txt',
    'authoritative_tlds': 'authoritative_tlds.txt',
}

REQUIRED_CTA_PHRASES = (
    'act now',
    'buy now',
    'register immediately',
    'limited offer',
    'last chance',
)


@dataclass(frozen=True)
class LexiconSet(object):
    stop_words: frozenset
    cta_phrases: tuple
    ad_hosts: frozenset
    video_hosts: frozenset
    top500: frozenset
    authoritative_tlds: frozenset

    def __post_init__(self):
        missing = [
            phrase for phrase in REQUIRED_CTA_PHRASES
            if phrase not in self.cta_phrases
        ]
        if missing:
            raise ImproperlyConfigured(
                'Call-to-action phrases are missing {}.'.format(
                    ', '.join(repr(phrase) for phrase in missing)
                )
            )
        for name in LEXICON_FILES:
            for entry in getattr(self, name):
                if entry != entry.lower():
                    raise ImproperlyConfigured(
                        'Lexicon {} entry {!r} is not lowercase.'.format(
                            name, entry
                        )
                    )


def _resolve(directory, filename):
    if directory is not None:
        candidate = os.path.join(directory, filename)
        if os.path.exists(candidate):
            return candidate
        logger.info(
            '%s not found in %s, using the embedded default',
            filename,
            directory
        )
    return data_path(filename)


def _read(path):
    try:
        entries = read_list_file(path)
    except OSError as e:
        raise ImproperlyConfigured(
            "Could not read lexicon file '{}': {}".format(path, e)
        )
    check_lowercase(path, entries)
    logger.debug('Loaded %d entries from %s', len(entries), path)
    return [entry for _, entry in entries]


def load_lexicons(directory=None):
    """
    Load the six lexicon files. Files present in `directory` override the
    embedded defaults one by one.

    :param directory: optional directory holding replacement lexicon files
    """
    if directory is not None and not os.path.isdir(directory):
        raise ImproperlyConfigured(
            "Lexicon directory '{}' does not exist.".format(directory)
        )
    values = {}
    for name, filename in LEXICON_FILES.items():
        entries = _read(_resolve(directory, filename))
        if name == 'cta_phrases':
            # Phrases are matched token by token; normalize inner spacing.
            values[name] = tuple(' '.join(e.split()) for e in entries)
        else:
            values[name] = frozenset(entries)
    return LexiconSet(**values)


_default_lexicons = None


def default_lexicons():
    global _default_lexicons
    if _default_lexicons is None:
        _default_lexicons = load_lexicons()
    return _default_lexicons
