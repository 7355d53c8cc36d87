import ipaddress
import logging
import re
from dataclasses import dataclass, field

from .base import (
    check_lowercase,
    data_path,
    ImproperlyConfigured,
    read_list_file,
    UrlParseError
)

logger = logging.getLogger(__name__)

_SCHEME_RE = re.compile(r'^([A-Za-z][A-Za-z0-9+.-]*)://')
_PORT_RE = re.compile(r'^\d*$')

DEFAULT_SUFFIX_FILE = data_path('public_suffixes.dat')


class SuffixTable(object):
    """
    Set of public suffixes used to split a host into subdomain labels and a
    registered domain.

    ::

        suffixes = SuffixTable(['com', 'uk', 'co.uk'])
        suffixes.match(['www', 'example', 'co', 'uk'])  # 'co.uk'
    """
    def __init__(self, entries):
        entries = frozenset(entries)
        if not entries:
            raise ImproperlyConfigured('Suffix table must not be empty.')
        for entry in entries:
            if entry != entry.lower() or entry.strip('.') != entry:
                raise ImproperlyConfigured(
                    'Invalid public suffix {!r}.'.format(entry)
                )
        self.entries = entries

    @classmethod
    def from_file(cls, path=None):
        path = path or DEFAULT_SUFFIX_FILE
        try:
            entries = read_list_file(path)
        except OSError as e:
            raise ImproperlyConfigured(
                "Could not read suffix file '{}': {}".format(path, e)
            )
        check_lowercase(path, entries)
        logger.debug('Loaded %d public suffixes from %s', len(entries), path)
        return cls(entry for _, entry in entries)

    def match(self, labels):
        """
        Return the longest suffix in this table that ends the given host
        labels. Hosts ending in an unlisted label fall back to that last
        label, mirroring the implicit ``*`` rule of the public suffix list.
        """
        for index in range(len(labels)):
            candidate = '.'.join(labels[index:])
            if candidate in self.entries:
                return candidate
        return labels[-1]

    def __contains__(self, suffix):
        return suffix in self.entries

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return '<{cls} entries={count}>'.format(
            cls=self.__class__.__name__,
            count=len(self.entries)
        )


_default_suffixes = None


def default_suffixes():
    global _default_suffixes
    if _default_suffixes is None:
        _default_suffixes = SuffixTable.from_file()
    return _default_suffixes


@dataclass(frozen=True)
class UrlParts(object):
    scheme: str
    host: str
    host_labels: tuple
    public_suffix: str
    registered_domain: str
    subdomain_labels: tuple
    path: str
    is_ip_host: bool
    userinfo: str = field(default='')
    port: str = field(default='')

    @property
    def registrable_label(self):
        return self.registered_domain.split('.', 1)[0]

    @property
    def netloc(self):
        netloc = self.host
        if self.userinfo:
            netloc = '{}@{}'.format(self.userinfo, netloc)
        if self.port:
            netloc = '{}:{}'.format(netloc, self.port)
        return netloc

    def geturl(self):
        return '{}://{}{}'.format(self.scheme, self.netloc, self.path)

    def without_fragment(self):
        """
        URL with the fragment removed and an empty path spelled as ``/``, the
        form used to decide whether two URLs address the same page.
        """
        path = self.path.split('#', 1)[0]
        if not path.startswith('/'):
            path = '/' + path
        return '{}://{}{}'.format(self.scheme, self.netloc, path)


def is_ip_literal(host):
    """
    Return whether host is a dotted-quad IPv4 address or a bracketed IPv6
    literal.
    """
    if host.startswith('[') and host.endswith(']'):
        try:
            ipaddress.IPv6Address(host[1:-1])
        except ValueError:
            return False
        return True
    parts = host.split('.')
    if len(parts) != 4:
        return False
    for part in parts:
        if not part.isdigit() or not part.isascii() or len(part) > 3:
            return False
        if int(part) > 255:
            return False
    return True


def _split_netloc(raw, rest):
    end = len(rest)
    for delimiter in '/?#':
        position = rest.find(delimiter)
        if position != -1 and position < end:
            end = position
    netloc, path = rest[:end], rest[end:]

    userinfo = ''
    if '@' in netloc:
        userinfo, netloc = netloc.rsplit('@', 1)

    port = ''
    if netloc.startswith('['):
        close = netloc.find(']')
        if close == -1:
            raise UrlParseError(raw, 'unterminated IPv6 literal')
        host, remainder = netloc[:close + 1], netloc[close + 1:]
        if remainder:
            if not remainder.startswith(':'):
                raise UrlParseError(raw, 'junk after IPv6 literal')
            port = remainder[1:]
    elif ':' in netloc:
        host, port = netloc.rsplit(':', 1)
    else:
        host = netloc
    if not _PORT_RE.match(port):
        raise UrlParseError(raw, 'invalid port {!r}'.format(port))
    return userinfo, host, port, path


def parse_url(raw, suffixes=None):
    """
    Decompose an absolute URL into scheme, host labels, public suffix,
    registered domain and path.

    The host and scheme are lowercased; the path (including query string and
    fragment) is kept verbatim.

    :param raw: absolute URL with a scheme and a host
    :param suffixes:
        SuffixTable used for the public suffix lookup. Defaults to the
        embedded snapshot.
    :raises UrlParseError: when raw has no scheme or an empty host
    """
    suffixes = suffixes or default_suffixes()
    text = raw.strip()
    match = _SCHEME_RE.match(text)
    if match is None:
        raise UrlParseError(raw, 'missing scheme')
    scheme = match.group(1).lower()
    userinfo, host, port, path = _split_netloc(raw, text[match.end():])
    host = host.lower()
    if not host:
        raise UrlParseError(raw, 'empty host')

    if is_ip_literal(host):
        labels = tuple(host.split('.'))
        return UrlParts(
            scheme=scheme,
            host=host,
            host_labels=labels,
            public_suffix='',
            registered_domain=host,
            subdomain_labels=(),
            path=path,
            is_ip_host=True,
            userinfo=userinfo,
            port=port
        )

    labels = tuple(host.split('.'))
    if any(not label for label in labels):
        raise UrlParseError(raw, 'empty host label')
    public_suffix = suffixes.match(labels)
    suffix_size = public_suffix.count('.') + 1
    registered_size = min(suffix_size + 1, len(labels))
    return UrlParts(
        scheme=scheme,
        host=host,
        host_labels=labels,
        public_suffix=public_suffix,
        registered_domain='.'.join(labels[-registered_size:]),
        subdomain_labels=labels[:-registered_size],
        path=path,
        is_ip_host=False,
        userinfo=userinfo,
        port=port
    )


def registered_domain_of(url, suffixes=None):
    """
    Registered domain of an absolute or protocol-relative URL, or None when
    the URL cannot be parsed.
    """
    url = url.strip()
    if url.startswith('//'):
        url = 'http:' + url
    try:
        return parse_url(url, suffixes).registered_domain
    except UrlParseError:
        return None
