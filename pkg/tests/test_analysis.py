"""Classification statistics and size-diff reports."""

import pytest

import jpegcrypt as jc


@pytest.fixture(scope="module")
def report(corpus, test_key):
    data = corpus["portrait_q80"].read_bytes()
    encrypted = jc.encrypt_file(data, test_key)
    return jc.compute_report(data, encrypted)


def test_report_sizes(report, corpus):
    assert report.original_size == corpus["portrait_q80"].stat().st_size
    assert report.encrypted_size == report.original_size
    assert report.size_diff == 0


def test_report_conservation(report, corpus, workbench):
    _, lmap = workbench.labeled(corpus["portrait_q80"])
    assert report.entropy_bytes == len(lmap.span)
    for target in jc.TARGETS:
        ts = report.targets[target]
        total = (
            ts.encrypted_bytes
            + ts.excluded_bytes
            + ts.untargeted_bytes
            + report.all_huffman_bytes
            + report.stuffed_bytes
            + report.marker_pad_bytes
        )
        assert total == report.entropy_bytes
    assert report.targets["both"].untargeted_bytes == 0


def test_percentage_definition(report):
    for target in jc.TARGETS:
        ts = report.targets[target]
        expected = 100.0 * ts.encrypted_bytes / (ts.encrypted_bytes + ts.excluded_bytes)
        assert ts.percentage == pytest.approx(expected)
        assert 0.0 <= ts.percentage <= 100.0


def test_single_target_counts_partition_both(report):
    # bytes carrying both DC and AC additional bits are tallied once under
    # "both" but once per class under the single-target reports
    dc, ac, both = (report.targets[t] for t in ("dc", "ac", "both"))
    assert dc.encrypted_bytes + ac.encrypted_bytes >= both.encrypted_bytes
    assert dc.excluded_bytes + ac.excluded_bytes >= both.excluded_bytes
    assert max(dc.encrypted_bytes, ac.encrypted_bytes) <= both.encrypted_bytes
    assert dc.encrypted_bits + ac.encrypted_bits == both.encrypted_bits


def test_report_determinism(corpus, test_key):
    data = corpus["grain_q50"].read_bytes()
    encrypted = jc.encrypt_file(data, test_key)
    assert jc.compute_report(data, encrypted) == jc.compute_report(data, encrypted)


def test_report_json_schema(report):
    doc = report.to_dict()
    assert set(doc) == {
        "original_size", "encrypted_size", "size_diff", "entropy_bytes",
        "all_huffman_bytes", "stuffed_bytes", "marker_pad_bytes", "targets",
    }
    assert set(doc["targets"]) == {"dc", "ac", "both"}
    for stats in doc["targets"].values():
        assert set(stats) == {
            "encrypted_bytes", "excluded_bytes", "untargeted_bytes",
            "encrypted_bits", "percentage",
        }
    import json

    assert json.loads(report.to_json()) == json.loads(report.to_json())


def test_trend_on_real_images(corpus, test_key):
    reports = []
    for q in (50, 80, 95):
        data = corpus["portrait_q%d" % q].read_bytes()
        reports.append(jc.compute_report(data, jc.encrypt_file(data, test_key)))
    assert jc.trend_check(reports) is True


def _fake_report(pct):
    enc = int(round(pct * 10))
    exc = 1000 - enc
    ts = {t: jc.TargetStats(t, enc, exc, 0, enc * 4) for t in jc.TARGETS}
    return jc.ScanReport(1000, 1000, 900, 10, 5, 0, ts)


def test_trend_orderings():
    assert jc.trend_check([_fake_report(p) for p in (98.6, 97.2, 93.8)]) is True
    assert jc.trend_check([_fake_report(p) for p in (95.0, 95.0, 95.0)]) is True
    assert jc.trend_check([_fake_report(p) for p in (93.8, 97.2, 98.6)]) is False
    assert jc.trend_check([_fake_report(p) for p in (98.0, 99.0, 97.0)]) is False


def test_percentage_zero_when_nothing_counts():
    ts = jc.TargetStats("both", 0, 0, 0, 0)
    assert ts.percentage == 0.0


def test_render_table(report):
    text = jc.render_table(report, name="portrait_q80")
    assert "portrait_q80" in text
    assert "(+0)" in text
    for target in jc.TARGETS:
        assert target in text
