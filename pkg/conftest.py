# -*- coding: utf-8 -*-
import os
import threading
import time

import pytest
import sqlalchemy as sa
from flask import Flask, redirect, request, Response
from sqlalchemy.orm import declarative_base, sessionmaker
from werkzeug.serving import make_server

from page_quality.corpus import generate_synthetic_corpus, load_corpus
from page_quality.features import FeatureExtractor
from page_quality.lexicons import default_lexicons
from page_quality.network import TrainingConfig
from page_quality.store import RunLog
from page_quality.urls import default_suffixes

HERE = os.path.dirname(os.path.abspath(__file__))

FIXTURE_HTML = (
    "<html><head><title>Loopback page</title></head><body>"
    "<h1>Loopback</h1><p>This page is served to the tests.</p>"
    "<a href='/other'>Other page</a></body></html>"
)


@pytest.fixture
def fixture_html():
    return FIXTURE_HTML


@pytest.fixture
def data_dir():
    return os.path.join(HERE, 'tests', 'data')


@pytest.fixture
def corpus_path(data_dir):
    return os.path.join(data_dir, 'corpus.jsonl')


@pytest.fixture
def fixture_corpus(corpus_path):
    return load_corpus(corpus_path)


@pytest.fixture
def suffixes():
    return default_suffixes()


@pytest.fixture
def lexicons():
    return default_lexicons()


@pytest.fixture
def extractor(lexicons, suffixes):
    return FeatureExtractor(lexicons, suffixes)


@pytest.fixture
def synthetic_corpus():
    return generate_synthetic_corpus(60, 0.3, seed=7)


@pytest.fixture
def quick_training():
    return TrainingConfig(epochs=60, hidden_dim=6)


@pytest.fixture
def db_url():
    return os.environ.get('PAGE_QUALITY_TEST_DB', 'sqlite://')


@pytest.fixture
def base():
    return declarative_base()


@pytest.fixture
def engine(db_url):
    engine = sa.create_engine(db_url)
    engine.echo = bool(os.environ.get('PAGE_QUALITY_TEST_ECHO'))
    yield engine
    engine.dispose()


@pytest.fixture
def run_log(base):
    run_log = RunLog()
    run_log.init(base)
    return run_log


@pytest.fixture
def table_creator(base, run_log, engine):
    base.metadata.create_all(engine)
    yield
    base.metadata.drop_all(engine)


@pytest.fixture
def session(engine):
    Session = sessionmaker(bind=engine)
    session = Session()
    yield session
    session.close()


def create_app():
    app = Flask(__name__)

    @app.route('/page')
    def page():
        return Response(FIXTURE_HTML, mimetype='text/html')

    @app.route('/latin1')
    def latin1():
        return Response(
            '<p>caf\xe9</p>'.encode('latin-1'),
            content_type='text/html; charset=iso-8859-1'
        )

    @app.route('/redirect')
    def redirected():
        return redirect('/page')

    @app.route('/loop/<int:hop>')
    def loop(hop):
        return redirect('/loop/{}'.format(hop + 1))

    @app.route('/slow')
    def slow():
        time.sleep(1.5)
        return Response(FIXTURE_HTML, mimetype='text/html')

    @app.route('/trickle')
    def trickle():
        def body():
            for _ in range(100):
                time.sleep(0.05)
                yield b'x'
        return Response(body(), mimetype='text/html')

    @app.route('/slow-hop/<int:hop>')
    def slow_hop(hop):
        time.sleep(0.25)
        if hop >= 6:
            return redirect('/page')
        return redirect('/slow-hop/{}'.format(hop + 1))

    @app.route('/agent')

    def agent():
        return Response(
            '<p>{}</p>'.format(request.headers.get('User-Agent', '')),
            mimetype='text/html'
        )

    @app.route('/missing')
    def missing():
        return Response('gone', status=404)

    @app.route('/big')
    def big():
        return Response('<p>' + 'x' * 5000 + '</p>', mimetype='text/html')

    return app


@pytest.fixture
def http_server():
    server = make_server('127.0.0.1', 0, create_app(), threaded=True)
    thread = threading.Thread(target=server.serve_forever)
    thread.daemon = True
    thread.start()
    yield 'http://127.0.0.1:{}'.format(server.server_port)
    server.shutdown()
    thread.join()
