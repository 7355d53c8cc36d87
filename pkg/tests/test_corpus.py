# -*- coding: utf-8 -*-
import json

import pytest

from page_quality import (
    CorpusError,
    generate_synthetic_corpus,
    HAM,
    load_corpus,
    PageRecord,
    read_feature_matrix,
    save_corpus,
    SPAM,
    write_feature_matrix
)
from page_quality.corpus import feature_matrix, LABEL_COLUMN, split_matrix
from page_quality.features import FEATURE_NAMES, URL_FEATURES


def write_lines(tmpdir, lines, name='corpus.jsonl'):
    path = tmpdir.join(name)
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return str(path)


def record_line(url='http://a.com/', html='<p>x</p>', label=SPAM):
    return json.dumps({'url': url, 'html': html, 'label': label})


class TestPageRecord(object):
    def test_unknown_label(self):
        with pytest.raises(ValueError):
            PageRecord(url='http://a.com/', html='', label='eggs')

    def test_unlabeled(self):
        record = PageRecord(url='http://a.com/', html='')
        assert record.label is None
        assert not record.is_spam

    def test_to_json(self):
        record = PageRecord(url='http://a.com/', html='caf\xe9', label=HAM)
        assert json.loads(record.to_json()) == {
            'url': 'http://a.com/', 'html': 'caf\xe9', 'label': 'ham'
        }


class TestLoadCorpus(object):
    def test_fixture_corpus(self, fixture_corpus):
        assert len(fixture_corpus) == 40
        assert fixture_corpus.spam_count == 12
        assert fixture_corpus.errors == []

    def test_valid_file(self, tmpdir):
        path = write_lines(tmpdir, [
            record_line(),
            record_line(url='https://b.org/', label=HAM),
            record_line(url='http://c.net/x'),
        ])
        corpus = load_corpus(path)
        assert len(corpus) == 3
        assert corpus[1].url == 'https://b.org/'
        assert [record.label for record in corpus] == [SPAM, HAM, SPAM]
        assert corpus.path == path

    def test_bad_line_is_reported(self, tmpdir):
        path = write_lines(tmpdir, [
            record_line(),
            '{"url": "http://b.com/", "html": ',
            record_line(label=HAM),
        ])
        corpus = load_corpus(path)
        assert len(corpus) == 2
        assert [number for number, _ in corpus.errors] == [2]

    def test_invalid_utf8_line_is_reported(self, tmpdir):
        path = tmpdir.join('corpus.jsonl')
        path.write_binary(
            record_line().encode('utf-8') + b'\n' +
            b'{"url": "http://b.com/", "html": "\xff", "label": "spam"}\n' +
            record_line(label=HAM).encode('utf-8') + b'\n'
        )
        corpus = load_corpus(str(path))
        assert [record.label for record in corpus] == [SPAM, HAM]
        assert [number for number, _ in corpus.errors] == [2]

    def test_crlf_line_endings(self, tmpdir):
        path = tmpdir.join('corpus.jsonl')
        path.write_binary(
            (record_line() + '\r\n' + record_line(label=HAM) + '\r\n')
            .encode('utf-8')
        )
        corpus = load_corpus(str(path))
        assert len(corpus) == 2
        assert corpus.errors == []

    @pytest.mark.parametrize(
        'line',
        [
            '[1, 2]',
            json.dumps({'url': 'http://a.com/', 'html': '<p>'}),
            json.dumps({'url': 'http://a.com/', 'html': 1, 'label': SPAM}),
            record_line(label='maybe'),
            record_line(url='not a url'),
        ]
    )
    def test_invalid_records(self, tmpdir, line):
        path = write_lines(tmpdir, [record_line(), line])
        corpus = load_corpus(path)
        assert len(corpus) == 1
        assert corpus.errors[0][0] == 2

    def test_blank_lines_are_ignored(self, tmpdir):
        path = write_lines(tmpdir, ['', record_line(), '   '])
        corpus = load_corpus(path)
        assert len(corpus) == 1
        assert corpus.errors == []

    def test_missing_file(self, tmpdir):
        path = str(tmpdir.join('missing.jsonl'))
        with pytest.raises(CorpusError) as excinfo:
            load_corpus(path)
        assert path in str(excinfo.value)

    def test_no_valid_records(self, tmpdir):
        with pytest.raises(CorpusError):
            load_corpus(write_lines(tmpdir, ['nope', '{}']))

    def test_save_and_load(self, tmpdir, synthetic_corpus):
        path = str(tmpdir.join('synthetic.jsonl'))
        save_corpus(synthetic_corpus, path)
        assert list(load_corpus(path)) == synthetic_corpus


class TestSyntheticCorpus(object):
    def test_class_balance(self):
        records = generate_synthetic_corpus(100, 0.3, seed=1)
        assert len(records) == 100
        assert sum(1 for record in records if record.is_spam) == 30

    def test_deterministic(self):
        assert generate_synthetic_corpus(30, seed=4) == (
            generate_synthetic_corpus(30, seed=4)
        )
        assert generate_synthetic_corpus(30, seed=4) != (
            generate_synthetic_corpus(30, seed=5)
        )

    @pytest.mark.parametrize(
        ('n', 'fraction'), [(9, 0.3), (100, 0.0), (100, 1.0)]
    )
    def test_invalid_arguments(self, n, fraction):
        with pytest.raises(ValueError):
            generate_synthetic_corpus(n, fraction)

    def test_spam_traits(self, extractor):
        records = generate_synthetic_corpus(40, 0.3, seed=7)
        for record in records:
            vector = extractor.extract_record(record)
            if record.is_spam:
                assert vector['compression_ratio'] > 4.0
                assert vector['deep_subdomain'] == 1.0
                assert vector['obfuscated_script'] == 1.0
                assert vector['cta_count'] >= 6.0
                assert vector['ad_count'] == 2.0
                assert vector['external_count'] >= 12.0
            else:
                assert vector['stop_word_pct'] > 20.0
                assert vector['has_ssl'] == 1.0
                assert vector['has_h2'] == 1.0
                assert vector['alt_ratio'] == 1.0
                assert vector['external_count'] == 0.0


class TestFeatureMatrix(object):
    def test_columns(self, fixture_corpus, extractor):
        frame = feature_matrix(fixture_corpus, extractor)
        assert list(frame.columns) == list(FEATURE_NAMES) + [LABEL_COLUMN]
        assert len(frame) == 40
        url_frame = feature_matrix(fixture_corpus, extractor, ['url'])
        assert list(url_frame.columns) == list(URL_FEATURES) + [LABEL_COLUMN]

    def test_csv_round_trip_is_exact(self, tmpdir, fixture_corpus, extractor):
        frame = feature_matrix(fixture_corpus, extractor)
        path = str(tmpdir.join('matrix.csv'))
        write_feature_matrix(frame, path)
        loaded = read_feature_matrix(path)
        names, values, labels = split_matrix(loaded)
        expected_names, expected_values, expected_labels = split_matrix(frame)
        assert names == expected_names
        assert labels == expected_labels
        assert (values == expected_values).all()

    def test_header(self, tmpdir, fixture_corpus, extractor):
        path = tmpdir.join('matrix.csv')
        write_feature_matrix(
            feature_matrix(fixture_corpus, extractor, ['link']), str(path)
        )
        header = path.read().splitlines()[0]
        assert header == (
            'internal_count,self_ref_count,external_count,anchor_text_pct,'
            'avg_anchor_words,label'
        )

    def test_missing_label_column(self, tmpdir):
        path = tmpdir.join('matrix.csv')
        path.write('has_ssl,url_length\n1.0,20.0\n')
        with pytest.raises(CorpusError):
            read_feature_matrix(str(path))

    def test_unknown_label(self, tmpdir):
        path = tmpdir.join('matrix.csv')
        path.write('has_ssl,label\n1.0,spam\n0.0,eggs\n')
        with pytest.raises(CorpusError) as excinfo:
            read_feature_matrix(str(path))
        assert 'eggs' in str(excinfo.value)

    def test_missing_file(self, tmpdir):
        with pytest.raises(CorpusError):
            read_feature_matrix(str(tmpdir.join('missing.csv')))
