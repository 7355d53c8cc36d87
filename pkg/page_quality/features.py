import logging
import math
import re
import zlib
from collections import OrderedDict
from dataclasses import dataclass
from urllib.parse import urljoin

from .base import Family
from .lexicons import default_lexicons
from .pages import parse_html, tokenize, TokenStream
from .urls import (
    default_suffixes,
    parse_url,
    registered_domain_of,
    UrlParseError
)

logger = logging.getLogger(__name__)

URL_FEATURES = (
    'has_ssl',
    'url_length',
    'is_subdomain',
    'authoritative_tld',
    'triple_repeat',
    'deep_subdomain',
    'digit_special_count',
    'ip_host',
    'in_top500',
    'domain_length',
)

CONTENT_FEATURES = (
    'html_length',
    'text_word_count',
    'text_char_length',
    'text_html_ratio',
    'avg_word_length',
    'has_h2',
    'has_h1',
    'has_video',
    'ad_count',
    'title_length',
    'compression_ratio',
    'obfuscated_script',
    'description_length',
    'image_count',
    'alt_ratio',
    'cta_count',
    'stop_word_pct',
)

LINK_FEATURES = (
    'internal_count',
    'self_ref_count',
    'external_count',
    'anchor_text_pct',
    'avg_anchor_words',
)

FAMILY_FEATURES = OrderedDict([
    (Family.URL, URL_FEATURES),
    (Family.CONTENT, CONTENT_FEATURES),
    (Family.LINK, LINK_FEATURES),
])

FEATURE_NAMES = URL_FEATURES + CONTENT_FEATURES + LINK_FEATURES
FEATURE_FAMILIES = tuple(
    family
    for family, names in FAMILY_FEATURES.items()
    for _ in names
)
FEATURE_FAMILY_OF = dict(zip(FEATURE_NAMES, FEATURE_FAMILIES))

_TRIPLE_LETTER_RE = re.compile(r'([a-z])\1\1')
_SUSPICIOUS_CALL_RE = re.compile(
    r'(?<![\w$])(?:String\s*\.\s*fromCharCode|decodeURIComponent|'
    r'encodeURIComponent|decodeURI|encodeURI|unescape|escape|eval)\s*\(|'
    r'[()]'
)


def parse_families(value):
    """
    Turn ``'url,content'`` or an iterable of names/Family members into a
    tuple of Family members in canonical order.
    """
    if isinstance(value, str):
        value = [part for part in value.split(',') if part.strip()]
    requested = set()
    for item in value:
        name = item.value if isinstance(item, Family) else str(item)
        try:
            requested.add(Family(name.strip().lower()))
        except ValueError:
            raise ValueError('Unknown feature family {!r}.'.format(item))
    if not requested:
        raise ValueError('At least one feature family is required.')
    return tuple(family for family in Family if family in requested)


def feature_names_for(families):
    return tuple(
        name
        for family in parse_families(families)
        for name in FAMILY_FEATURES[family]
    )


@dataclass(frozen=True)
class FeatureVector(object):
    values: tuple
    names: tuple = FEATURE_NAMES
    families: tuple = FEATURE_FAMILIES

    def __post_init__(self):
        if not (len(self.values) == len(self.names) == len(self.families)):
            raise ValueError(
                'Feature vector has {} values for {} names.'.format(
                    len(self.values), len(self.names)
                )
            )
        for name, value in zip(self.names, self.values):
            if not math.isfinite(value):
                raise ValueError(
                    'Feature {} is not finite: {!r}'.format(name, value)
                )

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, name):
        return self.values[self.names.index(name)]

    def as_dict(self):
        return OrderedDict(zip(self.names, self.values))

    def family(self, family):
        return self.select([family])

    def select(self, families):
        """
        Sub-vector holding only the given families, in canonical order.
        """
        wanted = set(parse_families(families))
        kept = [
            index for index, family in enumerate(self.families)
            if family in wanted
        ]
        return FeatureVector(
            values=tuple(self.values[i] for i in kept),
            names=tuple(self.names[i] for i in kept),
            families=tuple(self.families[i] for i in kept)
        )


def _flag(value):
    return 1.0 if value else 0.0


def _ratio(numerator, denominator):
    if not denominator:
        return 0.0
    return numerator / denominator


def _percent(part, total):
    if not total:
        return 0.0
    return 100.0 * part / total


def _is_authoritative(public_suffix, authoritative):
    if not public_suffix:
        return False
    if public_suffix in authoritative:
        return True
    return public_suffix.split('.', 1)[0] in authoritative


def extract_url_features(url, raw_url, lexicons=None):
    """
    Compute the ten URL features.

    :param url: UrlParts of the page
    :param raw_url: the URL exactly as given, measured for url_length
    :param lexicons: LexiconSet, defaults to the embedded lexicons
    """
    lexicons = lexicons or default_lexicons()
    subdomains = list(url.subdomain_labels)
    if subdomains and subdomains[0] == 'www':
        subdomains = subdomains[1:]
    return OrderedDict([
        ('has_ssl', _flag(url.scheme == 'https')),
        ('url_length', float(len(raw_url))),
        ('is_subdomain', _flag(subdomains)),
        ('authoritative_tld', _flag(
            _is_authoritative(url.public_suffix, lexicons.authoritative_tlds)
        )),
        ('triple_repeat', _flag(
            not url.is_ip_host and
            _TRIPLE_LETTER_RE.search(url.registrable_label)
        )),
        ('deep_subdomain', _flag(
            len(url.host_labels) >= 4 and not url.is_ip_host
        )),
        ('digit_special_count', float(sum(
            1 for char in url.host
            if char != '.' and (char.isdigit() or not char.isalnum())
        ))),
        ('ip_host', _flag(url.is_ip_host)),
        ('in_top500', _flag(url.registered_domain in lexicons.top500)),
        ('domain_length', float(len(url.registered_domain))),
    ])


def compression_ratio(text):
    """
    Byte length of text divided by the length of its raw DEFLATE stream at
    the default compression level. Empty text scores 1.0.
    """
    data = text.encode('utf-8') if isinstance(text, str) else bytes(text)
    if not data:
        return 1.0
    compressor = zlib.compressobj(
        zlib.Z_DEFAULT_COMPRESSION,
        zlib.DEFLATED,
        -zlib.MAX_WBITS
    )
    compressed = compressor.compress(data) + compressor.flush()
    return len(data) / len(compressed)


def detect_obfuscated_script(scripts):
    """
    Return whether any script calls one of eval, escape, unescape,
    decodeURI(Component), encodeURI(Component) or String.fromCharCode inside
    the argument list of another such call.

    ::

        detect_obfuscated_script(["eval(unescape('%61'))"])  # True
    """
    for script in scripts:
        depth = []
        open_suspicious = 0
        for match in _SUSPICIOUS_CALL_RE.finditer(script):
            token = match.group(0)
            if token == ')':
                if depth and depth.pop():
                    open_suspicious -= 1
            elif token == '(':
                depth.append(False)
            else:
                if open_suspicious:
                    return True
                depth.append(True)
                open_suspicious += 1
    return False


def count_cta(text, phrases):
    """
    Count non-overlapping, case-insensitive occurrences of each phrase over
    the word tokens of text.
    """
    tokens = (text if isinstance(text, TokenStream) else tokenize(text))
    tokens = tokens.lowered
    total = 0
    for phrase in phrases:
        needle = tokenize(phrase).lowered
        size = len(needle)
        if not size:
            continue
        index = 0
        while index + size <= len(tokens):
            if tokens[index:index + size] == needle:
                total += 1
                index += size
            else:
                index += 1
    return total


def stop_word_percentage(tokens, stop_words):
    lowered = tokens.lowered
    return _percent(
        sum(1 for token in lowered if token in stop_words),
        len(lowered)
    )


def extract_content_features(doc, lexicons=None, suffixes=None):
    """
    Compute the seventeen content features of a parsed page.

    :param doc: PageDocument
    :param lexicons: LexiconSet, defaults to the embedded lexicons
    :param suffixes:
        SuffixTable used to find the registered domains of embedded and
        script sources
    """
    lexicons = lexicons or default_lexicons()
    suffixes = suffixes or default_suffixes()
    tokens = tokenize(doc.visible_text)
    text_bytes = len(doc.visible_text.encode('utf-8'))

    embed_domains = [
        registered_domain_of(src, suffixes) for src in doc.embed_sources
    ]
    script_domains = [
        registered_domain_of(src, suffixes) for src in doc.script_sources
    ]
    has_video = doc.video_elements > 0 or any(
        domain in lexicons.video_hosts for domain in embed_domains
    )
    ad_count = sum(
        1 for domain in embed_domains + script_domains
        if domain in lexicons.ad_hosts
    )

    return OrderedDict([
        ('html_length', float(doc.html_bytes)),
        ('text_word_count', float(len(tokens))),
        ('text_char_length', float(len(doc.visible_text))),
        ('text_html_ratio', _percent(text_bytes, doc.html_bytes)),
        ('avg_word_length', _ratio(
            sum(len(token) for token in tokens), len(tokens)
        )),
        ('has_h2', _flag(doc.h2_count)),
        ('has_h1', _flag(doc.h1_count)),
        ('has_video', _flag(has_video)),
        ('ad_count', float(ad_count)),
        ('title_length', float(len(doc.title))),
        ('compression_ratio', compression_ratio(doc.visible_text)),
        ('obfuscated_script', _flag(
            detect_obfuscated_script(doc.inline_scripts)
        )),
        ('description_length', float(len(doc.meta_description))),
        ('image_count', float(doc.image_count)),
        ('alt_ratio', _ratio(
            sum(1 for image in doc.images if image.has_alt),
            doc.image_count
        )),
        ('cta_count', float(count_cta(tokens, lexicons.cta_phrases))),
        ('stop_word_pct', stop_word_percentage(tokens, lexicons.stop_words)),
    ])


def _resolve_anchor(page_url, href, suffixes):
    try:
        resolved = urljoin(page_url.geturl(), href.strip())
        return parse_url(resolved, suffixes)
    except (UrlParseError, ValueError):
        return None


def extract_link_features(doc, page_url, suffixes=None):
    """
    Compute the five link features. Anchors are resolved against the page
    URL; hrefs that do not resolve to an http(s)-style URL with a host are
    left out of every count.
    """
    suffixes = suffixes or default_suffixes()
    page_key = page_url.without_fragment()
    internal = self_ref = external = 0
    anchor_tokens = []
    for anchor in doc.anchors:
        target = _resolve_anchor(page_url, anchor.href, suffixes)
        if target is None:
            logger.debug('Skipping unresolvable href %r', anchor.href)
            continue
        if target.registered_domain == page_url.registered_domain:
            internal += 1
            if target.without_fragment() == page_key:
                self_ref += 1
        else:
            external += 1
        anchor_tokens.append(len(tokenize(anchor.text)))

    text_tokens = len(tokenize(doc.visible_text))
    worded = [count for count in anchor_tokens if count]
    return OrderedDict([
        ('internal_count', float(internal)),
        ('self_ref_count', float(self_ref)),
        ('external_count', float(external)),
        ('anchor_text_pct', _percent(sum(anchor_tokens), text_tokens)),
        ('avg_anchor_words', _ratio(sum(worded), len(worded))),
    ])


def assemble(url_features, content_features, link_features):
    values = []
    for features, names in (
        (url_features, URL_FEATURES),
        (content_features, CONTENT_FEATURES),
        (link_features, LINK_FEATURES),
    ):
        if tuple(features) != names:
            raise ValueError(
                'Expected features {}, got {}.'.format(
                    ', '.join(names), ', '.join(features)
                )
            )
        values.extend(features[name] for name in names)
    return FeatureVector(values=tuple(values))


class FeatureExtractor(object):
    """
    Extracts feature vectors with a fixed LexiconSet and SuffixTable.

    ::

        extractor = FeatureExtractor()
        vector = extractor.extract('http://cheaploanzzz.com/', html)
        vector['triple_repeat']  # 1.0
    """
    def __init__(self, lexicons=None, suffixes=None):
        self.lexicons = lexicons or default_lexicons()
        self.suffixes = suffixes or default_suffixes()

    def extract(self, url, html, families=None):
        page_url = parse_url(url, self.suffixes)
        doc = parse_html(html)
        vector = assemble(
            extract_url_features(page_url, url, self.lexicons),
            extract_content_features(doc, self.lexicons, self.suffixes),
            extract_link_features(doc, page_url, self.suffixes)
        )
        if families is not None:
            vector = vector.select(families)
        return vector

    def extract_record(self, record, families=None):
        return self.extract(record.url, record.html, families)

    def __repr__(self):
        return '<{cls} suffixes={suffixes}>'.format(
            cls=self.__class__.__name__,
            suffixes=len(self.suffixes)
        )


def extract_features(url, html, lexicons=None, suffixes=None, families=None):
    return FeatureExtractor(lexicons, suffixes).extract(url, html, families)
