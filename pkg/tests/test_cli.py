# -*- coding: utf-8 -*-
import json

import pandas as pd
import pytest

from page_quality import HAM, load_corpus, SPAM
from page_quality.cli import build_parser, EXIT_HAM, EXIT_SPAM, main
from page_quality.features import FEATURE_NAMES, URL_FEATURES
from page_quality.store import open_run_log


@pytest.fixture
def synth_path(tmpdir):
    path = str(tmpdir.join('synthetic.jsonl'))
    assert main(['synth', path, '-n', '60', '--seed', '7', '--quiet']) == 0
    return path


@pytest.fixture
def matrix_path(tmpdir, synth_path):
    path = str(tmpdir.join('matrix.csv'))
    assert main(['extract', synth_path, '-o', path, '--quiet']) == 0
    return path


@pytest.fixture
def model_path(tmpdir, matrix_path):
    path = str(tmpdir.join('model.json'))
    assert main([
        'train', matrix_path, '-o', path, '--epochs', '100', '--quiet'
    ]) == 0
    return path


class TestParser(object):
    def test_requires_command(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args([])
        assert excinfo.value.code == 2

    def test_score_needs_one_source(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(
                ['score', 'model.json', '--url', 'http://a/', '--html', 'x']
            )


class TestSynth(object):
    def test_writes_corpus(self, capsys, synth_path):
        corpus = load_corpus(synth_path)
        assert len(corpus) == 60
        assert corpus.spam_count == 18
        assert 'Wrote 60 pages (18 spam)' in capsys.readouterr().out


class TestExtract(object):
    def test_all_families(self, matrix_path):
        frame = pd.read_csv(matrix_path)
        assert list(frame.columns) == list(FEATURE_NAMES) + ['label']
        assert len(frame) == 60

    def test_single_family(self, tmpdir, corpus_path):
        path = str(tmpdir.join('url.csv'))
        code = main([
            'extract', corpus_path, '--families', 'url', '-o', path, '--quiet'
        ])
        assert code == 0
        frame = pd.read_csv(path)
        assert list(frame.columns) == list(URL_FEATURES) + ['label']
        assert len(frame) == 40

    def test_unknown_family(self, tmpdir, corpus_path, capsys):
        code = main([
            'extract', corpus_path, '--families', 'url,style',
            '-o', str(tmpdir.join('x.csv')), '--quiet'
        ])
        assert code == 2
        assert capsys.readouterr().err.startswith('error: ')

    def test_missing_corpus(self, tmpdir, capsys):
        path = str(tmpdir.join('missing.jsonl'))
        code = main([
            'extract', path, '-o', str(tmpdir.join('x.csv')), '--quiet'
        ])
        assert code == 2
        assert path in capsys.readouterr().err


class TestTrain(object):
    def test_is_deterministic(self, tmpdir, matrix_path, capsys):
        paths = [str(tmpdir.join('a.json')), str(tmpdir.join('b.json'))]
        for path in paths:
            assert main([
                'train', matrix_path, '-o', path, '--epochs', '30',
                '--seed', '3', '--quiet'
            ]) == 0
        assert tmpdir.join('a.json').read() == tmpdir.join('b.json').read()
        out = capsys.readouterr().out
        assert 'Initial SSE' in out
        assert 'Final SSE' in out

    def test_single_class(self, tmpdir, matrix_path, capsys):
        frame = pd.read_csv(matrix_path)
        ham_only = str(tmpdir.join('ham.csv'))
        frame[frame['label'] == HAM].to_csv(ham_only, index=False)
        code = main([
            'train', ham_only, '-o', str(tmpdir.join('m.json')), '--quiet'
        ])
        assert code == 3
        assert 'spam and ham' in capsys.readouterr().err


class TestEvaluate(object):
    def test_json(self, model_path, matrix_path, capsys):
        capsys.readouterr()
        assert main(['evaluate', model_path, matrix_path, '--json']) == 0
        data = json.loads(capsys.readouterr().out)
        assert set(data) >= {
            'sensitivity', 'specificity', 'efficiency', 'precision', 'f1',
            'accuracy'
        }
        assert data['accuracy'] >= 0.95

    def test_text(self, model_path, matrix_path, capsys):
        capsys.readouterr()
        assert main(['evaluate', model_path, matrix_path, '--quiet']) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split()[0] for line in lines] == [
            'Sensitivity', 'Specificity', 'Efficiency', 'Precision',
            'F1Score', 'Accuracy',
        ]

    def test_feature_mismatch(self, tmpdir, model_path, synth_path, capsys):
        url_matrix = str(tmpdir.join('url.csv'))
        main([
            'extract', synth_path, '--families', 'url', '-o', url_matrix,
            '--quiet'
        ])
        capsys.readouterr()
        assert main(['evaluate', model_path, url_matrix, '--quiet']) == 4

    def test_unreadable_model(self, tmpdir, matrix_path):
        path = tmpdir.join('broken.json')
        path.write('{"version": 1')
        assert main(['evaluate', str(path), matrix_path, '--quiet']) == 2


class TestExperiment(object):
    def test_outputs(self, tmpdir, corpus_path, capsys):
        out = str(tmpdir.join('table.txt'))
        table_json = str(tmpdir.join('table.json'))
        db = 'sqlite:///{}'.format(tmpdir.join('runs.db'))
        code = main([
            'experiment', corpus_path, '--runs', '2', '--epochs', '40',
            '--hidden', '6', '--out', out, '--json', table_json,
            '--db', db, '--quiet'
        ])
        assert code == 0
        text = capsys.readouterr().out
        lines = text.splitlines()
        assert len(lines) == 2 + 7
        assert 'mean of 2 runs' in lines[0]
        assert lines[-1].startswith('URL+Content+Link ')
        assert tmpdir.join('table.txt').read() == text

        data = json.loads(tmpdir.join('table.json').read())
        assert data['runs'] == 2
        assert len(data['rows']) == 7

        session, run_log = open_run_log(db)
        try:
            assert session.query(run_log.run_cls).count() == 14
        finally:
            session.close()

    def test_single_class_corpus(self, tmpdir, capsys):
        path = tmpdir.join('ham.jsonl')
        path.write('\n'.join(
            json.dumps({
                'url': 'https://site{}.com/'.format(i),
                'html': '<p>plain page {}</p>'.format(i),
                'label': HAM
            })
            for i in range(10)
        ) + '\n')
        code = main(['experiment', str(path), '--runs', '1', '--quiet'])
        assert code == 3


class TestScore(object):
    def pick(self, synth_path, label):
        return next(record for record in load_corpus(synth_path)
                    if record.label == label)

    def score_record(self, tmpdir, model_path, record):
        path = tmpdir.join('page.html')
        path.write_text(record.html, encoding='utf-8')
        return main([
            'score', model_path, '--html', str(path),
            '--page-url', record.url, '--quiet'
        ])

    def test_spam_page(self, tmpdir, model_path, synth_path, capsys):
        record = self.pick(synth_path, SPAM)
        capsys.readouterr()
        assert self.score_record(tmpdir, model_path, record) == EXIT_SPAM
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith('spam ')
        assert [line.split(':')[0] for line in lines[1:]] == [
            'url', 'content', 'link'
        ]

    def test_ham_page(self, tmpdir, model_path, synth_path, capsys):
        record = self.pick(synth_path, HAM)
        capsys.readouterr()
        assert self.score_record(tmpdir, model_path, record) == EXIT_HAM
        assert capsys.readouterr().out.startswith('ham ')

    def test_fetched_page_matches_local_file(
        self, tmpdir, http_server, model_path, fixture_html, capsys
    ):
        url = http_server + '/page'
        path = tmpdir.join('page.html')
        path.write_text(fixture_html, encoding='utf-8')
        capsys.readouterr()
        local = main([
            'score', model_path, '--html', str(path), '--page-url', url,
            '--quiet'
        ])
        local_out = capsys.readouterr().out
        fetched = main(['score', model_path, '--url', url, '--quiet'])
        assert fetched == local
        assert capsys.readouterr().out == local_out

    def test_fetched_page_is_measured_in_served_bytes(
        self, tmpdir, http_server, model_path, capsys
    ):
        url = http_server + '/latin1'
        path = tmpdir.join('latin1.html')
        path.write_binary('<p>caf\xe9</p>'.encode('latin-1'))
        capsys.readouterr()
        main([
            'score', model_path, '--html', str(path), '--page-url', url,
            '--quiet'
        ])
        local_out = capsys.readouterr().out
        main(['score', model_path, '--url', url, '--quiet'])
        fetched_out = capsys.readouterr().out
        assert fetched_out == local_out
        assert 'html_length=11 ' in fetched_out

    def test_fetch_error(self, model_path, capsys):
        code = main([
            'score', model_path, '--url', 'http://127.0.0.1:1/',
            '--timeout-ms', '2000', '--quiet'
        ])
        assert code == 5
        assert 'Could not fetch' in capsys.readouterr().err

    def test_missing_html_file(self, tmpdir, model_path):
        path = str(tmpdir.join('missing.html'))
        assert main(['score', model_path, '--html', path, '--quiet']) == 2
