import logging
import re
from dataclasses import dataclass

from bs4 import BeautifulSoup, NavigableString, Tag

logger = logging.getLogger(__name__)

_WS_RE = re.compile(r'\s+')
_TOKEN_RE = re.compile(r'[^\W_]+')

# Subtrees a browser never renders as page text. Title and alt text are
# exposed separately and kept out of visible_text.
INVISIBLE_TAGS = frozenset([
    'script', 'style', 'noscript', 'template', 'title'
])

BLOCK_TAGS = frozenset([
    'address', 'article', 'aside', 'blockquote', 'body', 'br', 'button',
    'caption', 'dd', 'details', 'dialog', 'div', 'dl', 'dt', 'fieldset',
    'figcaption', 'figure', 'footer', 'form', 'h1', 'h2', 'h3', 'h4', 'h5',
    'h6', 'head', 'header', 'hr', 'html', 'iframe', 'input', 'label',
    'legend', 'li', 'main', 'nav', 'ol', 'option', 'p', 'pre', 'section',
    'select', 'summary', 'table', 'tbody', 'td', 'textarea', 'tfoot', 'th',
    'thead', 'tr', 'ul'
])

EMBED_SRC_TAGS = ('iframe', 'embed', 'video', 'source')

# Named references the parser may decode. Any other name stays verbatim.
DECODED_ENTITIES = frozenset(['amp', 'lt', 'gt', 'quot', 'apos', 'nbsp'])

_ENTITY_RE = re.compile(
    r'(<(script|style)\b.*?</\2\s*>)|&([A-Za-z][A-Za-z0-9]*;?)',
    re.IGNORECASE | re.DOTALL
)


def _keep_unknown_entity(match):
    if match.group(1):
        return match.group(1)
    name = match.group(3)
    if name.rstrip(';') in DECODED_ENTITIES:
        return match.group(0)
    return '&amp;' + name


def protect_entities(text):
    """Escape named character references outside ``DECODED_ENTITIES``."""
    return _ENTITY_RE.sub(_keep_unknown_entity, text)



def collapse_whitespace(text):
    return _WS_RE.sub(' ', text).strip()


@dataclass(frozen=True)
class Anchor(object):
    href: str
    text: str


@dataclass(frozen=True)
class Image(object):
    src: str
    has_alt: bool


@dataclass(frozen=True)
class PageDocument(object):
    html_bytes: int
    title: str = ''
    meta_description: str = ''
    h1_count: int = 0
    h2_count: int = 0
    anchors: tuple = ()
    images: tuple = ()
    inline_scripts: tuple = ()
    script_sources: tuple = ()
    embed_sources: tuple = ()
    video_elements: int = 0
    visible_text: str = ''

    @property
    def image_count(self):
        return len(self.images)


@dataclass(frozen=True)
class TokenStream(object):
    tokens: tuple

    @property
    def lowered(self):
        return tuple(token.lower() for token in self.tokens)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def tokenize(text):
    """
    Split text into word tokens, maximal runs of letters and digits.

    ::

        tokenize('Act Now!!!').lowered  # ('act', 'now')
    """
    return TokenStream(tuple(_TOKEN_RE.findall(text)))


def _visible_text(node):
    # Iterative walk; tag soup can nest deeper than the recursion limit.
    parts = []
    block_end = object()
    stack = list(reversed(node.contents))
    while stack:
        child = stack.pop()
        if child is block_end:
            parts.append(' ')
        elif isinstance(child, Tag):
            name = (child.name or '').lower()
            if name in INVISIBLE_TAGS:
                continue
            if name in BLOCK_TAGS:
                parts.append(' ')
                stack.append(block_end)
            stack.extend(reversed(child.contents))
        elif type(child) is NavigableString:
            parts.append(str(child))
    return collapse_whitespace(''.join(parts))


def _attribute(tag, name):
    value = tag.get(name)
    if value is None:
        return None
    if isinstance(value, list):
        value = ' '.join(value)
    return value


def _script_body(script):
    return ''.join(
        str(child) for child in script.contents
        if isinstance(child, NavigableString)
    )


def _meta_description(soup):
    for meta in soup.find_all('meta'):
        name = _attribute(meta, 'name')
        if name is not None and name.strip().lower() == 'description':
            return collapse_whitespace(_attribute(meta, 'content') or '')
    return ''


def _embed_sources(soup):
    sources = []
    for tag in soup.find_all(EMBED_SRC_TAGS + ('object',)):
        attribute = 'data' if tag.name == 'object' else 'src'
        value = _attribute(tag, attribute)
        if value and value.strip():
            sources.append(value.strip())
    return tuple(sources)


def _build_document(html_bytes, soup):
    title = soup.find('title')
    scripts = soup.find_all('script')
    return PageDocument(
        html_bytes=html_bytes,
        title=_visible_text(title) if title is not None else '',
        meta_description=_meta_description(soup),
        h1_count=len(soup.find_all('h1')),
        h2_count=len(soup.find_all('h2')),
        anchors=tuple(
            Anchor(href=_attribute(a, 'href'), text=_visible_text(a))
            for a in soup.find_all('a', href=True)
        ),
        images=tuple(
            Image(
                src=_attribute(img, 'src') or '',
                has_alt=bool((_attribute(img, 'alt') or '').strip())
            )
            for img in soup.find_all('img')
        ),
        inline_scripts=tuple(
            body for body in (_script_body(s) for s in scripts)
            if body.strip()
        ),
        script_sources=tuple(
            src.strip() for src in (_attribute(s, 'src') for s in scripts)
            if src and src.strip()
        ),
        embed_sources=_embed_sources(soup),
        video_elements=len(soup.find_all('video')),
        visible_text=_visible_text(soup)
    )


def parse_html(raw):
    """
    Parse raw HTML into a PageDocument.

    Tag soup is tolerated. Invalid UTF-8 sequences are replaced rather than
    rejected, and markup the parser gives up on yields an empty document that
    still records the input size.

    :param raw: page bytes (``str`` is accepted and measured as UTF-8)
    """
    if isinstance(raw, str):
        raw = raw.encode('utf-8', 'surrogatepass')
    html_bytes = len(raw)
    text = raw.decode('utf-8', 'replace')
    try:
        soup = BeautifulSoup(protect_entities(text), 'html.parser')
        return _build_document(html_bytes, soup)
    except Exception as e:
        logger.debug('Giving up on unparseable markup: %r', e)
        return PageDocument(html_bytes=html_bytes)
