import codecs
import logging
import threading
import time
from dataclasses import dataclass

import requests

from .base import (
    BadStatus,
    BodyTooLarge,
    FetchError,
    FetchTimeout,
    TooManyRedirects
)
from .corpus import PageRecord

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT_MS = 10000
DEFAULT_MAX_REDIRECTS = 5
DEFAULT_MAX_BYTES = 5 * 1024 * 1024
DEFAULT_USER_AGENT = 'page-quality/0.1 (+low-cost page quality scoring)'

CHUNK_SIZE = 8 * 1024


@dataclass(frozen=True)
class FetchResult(object):
    url: str
    html: str
    status: int
    elapsed: float
    content: bytes = b''
    truncated: bool = False

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise ValueError('Invalid HTTP status {!r}.'.format(self.status))
        if self.elapsed < 0:
            raise ValueError('elapsed must not be negative.')

    def to_record(self):
        return PageRecord(url=self.url, html=self.html)


def _encoding(response):
    content_type = response.headers.get('Content-Type', '')
    if 'charset' in content_type.lower() and response.encoding:
        try:
            return codecs.lookup(response.encoding).name
        except LookupError:
            logger.debug('Unknown charset %r', response.encoding)
    return 'utf-8'


def _read_body(response, url, deadline, cancelled, max_bytes, truncate):
    chunks = []
    size = 0
    truncated = False
    for chunk in response.iter_content(CHUNK_SIZE):
        if cancelled.is_set() or time.monotonic() > deadline:
            raise FetchTimeout(url, 'deadline passed while reading the body')
        if size + len(chunk) > max_bytes:
            if not truncate:
                raise BodyTooLarge(url, max_bytes)
            chunks.append(chunk[:max_bytes - size])
            truncated = True
            logger.info('Truncated body of %s at %d bytes', url, max_bytes)
            break
        chunks.append(chunk)
        size += len(chunk)
    return b''.join(chunks), truncated


def _get(url, timeout_ms, deadline, cancelled, max_redirects, max_bytes,
         user_agent, truncate):
    session = requests.Session()
    session.max_redirects = max_redirects
    try:
        response = session.get(
            url,
            headers={'User-Agent': user_agent},
            timeout=timeout_ms / 1000.0,
            allow_redirects=True,
            stream=True
        )
        try:
            for hop in response.history:
                logger.debug(
                    'Redirect %s -> %s',
                    hop.url,
                    hop.headers.get('Location')
                )
            if not 200 <= response.status_code < 300:
                raise BadStatus(response.url, response.status_code)
            content, truncated = _read_body(
                response, url, deadline, cancelled, max_bytes, truncate
            )
        finally:
            response.close()
    except requests.exceptions.TooManyRedirects:
        raise TooManyRedirects(
            url, 'more than {} redirects'.format(max_redirects)
        )
    except requests.exceptions.Timeout:
        raise FetchTimeout(url, 'no answer within {} ms'.format(timeout_ms))
    except requests.exceptions.RequestException as e:
        raise FetchError(url, str(e))
    finally:
        session.close()
    return response, content, truncated


def fetch(
    url,
    timeout_ms=DEFAULT_TIMEOUT_MS,
    max_redirects=DEFAULT_MAX_REDIRECTS,
    max_bytes=DEFAULT_MAX_BYTES,
    user_agent=DEFAULT_USER_AGENT,
    truncate=True
):
    """
    GET a page, following redirects, and return its decoded HTML.

    The request runs on a daemon worker thread. The caller waits at most
    `timeout_ms` in total, however slowly the server answers or redirects;
    a worker that is still busy at the deadline is told to stop and
    abandoned.

    :param url: absolute http or https URL
    :param timeout_ms: total time allowed for the request and the body
    :param max_redirects: redirects followed before giving up
    :param max_bytes: body size limit
    :param user_agent: value of the User-Agent header
    :param truncate:
        cut bodies at `max_bytes` when True, raise BodyTooLarge otherwise
    """
    if not url.lower().startswith(('http://', 'https://')):
        raise FetchError(url, 'only absolute http(s) URLs can be fetched')
    started = time.monotonic()
    deadline = started + timeout_ms / 1000.0
    cancelled = threading.Event()
    outcome = {}

    def work():
        try:
            outcome['value'] = _get(
                url, timeout_ms, deadline, cancelled, max_redirects,
                max_bytes, user_agent, truncate
            )
        except Exception as e:
            outcome['error'] = e

    worker = threading.Thread(target=work, name='fetch', daemon=True)
    worker.start()
    worker.join(max(deadline - time.monotonic(), 0.0))
    if worker.is_alive():
        cancelled.set()
        logger.info('Abandoned %s after %d ms', url, timeout_ms)
        raise FetchTimeout(
            url, 'no complete answer within {} ms'.format(timeout_ms)
        )
    if 'error' in outcome:
        raise outcome['error']
    response, content, truncated = outcome['value']

    elapsed = (time.monotonic() - started) * 1000.0
    logger.info(
        'Fetched %s (%d, %d bytes) in %.0f ms',
        response.url,
        response.status_code,
        len(content),
        elapsed
    )
    return FetchResult(
        url=response.url,
        html=content.decode(_encoding(response), errors='replace'),
        status=response.status_code,
        elapsed=elapsed,
        content=content,
        truncated=truncated
    )
