import json
import subprocess
import sys

import numpy as np
import pytest

from sepidx.cli import main
from sepidx.core import LabeledFeatureSet
from sepidx.formats import write_sidx
from sepidx.reporting import parse_correlation_summary, parse_ranking_report

from conftest import TABLE1, TABLE1_SI0, TABLE3, TABLE3_SI0, make_fs


def fixture_manifest(tmp_path, table, si0, name="m.json", accuracies=False):
    cands = []
    for n, si, acc in table:
        c = {"name": n, "precomputed_si": si}
        if accuracies:
            c["accuracy"] = acc
        cands.append(c)
    p = tmp_path / name
    p.write_text(json.dumps({
        "schema": "sepidx-manifest/1",
        "baseline": {"si0": si0},
        "candidates": cands,
    }))
    return p


def test_si_plain(tmp_path, capsys, fs_two_pairs):
    p = tmp_path / "two_pairs.sidx"
    write_sidx(fs_two_pairs, p)
    assert main(["si", "--input", str(p)]) == 0
    assert capsys.readouterr().out.strip() == "1.000000"


def test_si_json(tmp_path, capsys, fs_five):
    p = tmp_path / "five.sidx"
    write_sidx(fs_five, p)
    assert main(["si", "--input", str(p), "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["si_value"] == 0.8
    assert obj["match_count"] == 4


def test_si_csv_input(tmp_path, capsys):
    p = tmp_path / "t.csv"
    p.write_text("x0,x1,label\n0,0,0\n1,0,1\n")
    assert main(["si", "--input", str(p), "--csv", "--label-column", "label"]) == 0
    assert capsys.readouterr().out.strip() == "0.000000"


def test_si_missing_file(tmp_path, capsys):
    rc = main(["si", "--input", str(tmp_path / "nope.sidx")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "nope.sidx" in err


def test_rank_table1(tmp_path, capsys):
    m = fixture_manifest(tmp_path, TABLE1, TABLE1_SI0)
    out = tmp_path / "report.json"
    assert main(["rank", "--manifest", str(m), "--out", str(out)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("Xception") and lines[0].endswith("ACCEPTED")
    assert lines[-1].startswith("EfficientB3") and lines[-1].endswith("REJECTED")
    report = parse_ranking_report(out.read_bytes())
    assert len(report.accepted) == 6 and len(report.rejected) == 1


def test_rank_table3(tmp_path, capsys):
    m = fixture_manifest(tmp_path, TABLE3, TABLE3_SI0)
    out = tmp_path / "report.json"
    assert main(["rank", "--manifest", str(m), "--out", str(out)]) == 0
    rejected = [l for l in capsys.readouterr().out.splitlines() if "REJECTED" in l]
    assert [l.split("\t")[0] for l in rejected] == ["Resnet50V2", "NasnetLarge"]


def test_rank_canonical_byte_identical(tmp_path):
    m = fixture_manifest(tmp_path, TABLE1, TABLE1_SI0)
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["rank", "--manifest", str(m), "--out", str(out1), "--canonical"]) == 0
    assert main(["rank", "--manifest", str(m), "--out", str(out2), "--canonical"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_rank_bad_manifest_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["rank", "--manifest", str(p), "--out", str(tmp_path / "o.json")]) == 2


def embedding_manifest(tmp_path):
    rng = np.random.default_rng(6)
    centers = np.array([[0, 0], [40, 0], [0, 40], [40, 40]], np.float64)
    asg = rng.integers(0, 4, 120)
    pts = (centers[asg] + rng.standard_normal((120, 2))).astype(np.float32)
    labels = asg.astype(np.uint32)
    good = LabeledFeatureSet(points=pts, labels=labels)
    perm = rng.permutation(120)
    bad = LabeledFeatureSet(points=pts[perm], labels=labels)
    write_sidx(good, tmp_path / "good.sidx")
    write_sidx(bad, tmp_path / "bad.sidx")
    m = tmp_path / "emb.json"
    m.write_text(json.dumps({
        "schema": "sepidx-manifest/1",
        "baseline": {"si0": 0.25},
        "candidates": [{"name": "good", "path": "good.sidx"},
                       {"name": "bad", "path": "bad.sidx"}],
    }))
    return m


def test_stability_cli_deterministic(tmp_path):
    m = embedding_manifest(tmp_path)
    outs = []
    for name, threads in (("s1.json", "1"), ("s2.json", "1"), ("s8.json", "8")):
        out = tmp_path / name
        rc = main(["stability", "--manifest", str(m), "--fractions", "1.0,0.75,0.5",
                   "--trials", "2", "--seed", "7", "--out", str(out),
                   "--canonical", "--threads", threads])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_stability_fixture_mode_exit_2(tmp_path, capsys):
    m = fixture_manifest(tmp_path, TABLE1, TABLE1_SI0)
    rc = main(["stability", "--manifest", str(m), "--out", str(tmp_path / "o.json")])
    assert rc == 2


def test_correlate_table1(tmp_path, capsys):
    m = fixture_manifest(tmp_path, TABLE1, TABLE1_SI0)
    report = tmp_path / "report.json"
    main(["rank", "--manifest", str(m), "--out", str(report)])
    acc = tmp_path / "acc.json"
    acc.write_text(json.dumps({n: a for n, _, a in TABLE1}))
    out = tmp_path / "corr.json"
    assert main(["correlate", "--report", str(report), "--accuracies", str(acc),
                 "--out", str(out)]) == 0
    summary = parse_correlation_summary(out.read_bytes())
    assert abs(summary.spearman_value - 1.0) < 1e-12


def test_correlate_table3_violating_pair(tmp_path):
    m = fixture_manifest(tmp_path, TABLE3, TABLE3_SI0)
    report = tmp_path / "report.json"
    main(["rank", "--manifest", str(m), "--out", str(report)])
    acc = tmp_path / "acc.json"
    acc.write_text(json.dumps({n: a for n, _, a in TABLE3}))
    out = tmp_path / "corr.json"
    assert main(["correlate", "--report", str(report), "--accuracies", str(acc),
                 "--out", str(out)]) == 0
    summary = parse_correlation_summary(out.read_bytes())
    assert len(summary.violations) == 1
    assert set(summary.violations[0]) == {"Xception", "InceptionV3"}


def test_correlate_insufficient_overlap_exit_2(tmp_path):
    m = fixture_manifest(tmp_path, TABLE1, TABLE1_SI0)
    report = tmp_path / "report.json"
    main(["rank", "--manifest", str(m), "--out", str(report)])
    acc = tmp_path / "acc.json"
    acc.write_text(json.dumps({"Xception": 0.9}))
    rc = main(["correlate", "--report", str(report), "--accuracies", str(acc),
               "--out", str(tmp_path / "corr.json")])
    assert rc == 2


def test_console_entrypoint_subprocess(tmp_path, fs_two_pairs):
    p = tmp_path / "two_pairs.sidx"
    write_sidx(fs_two_pairs, p)
    proc = subprocess.run([sys.executable, "-m", "sepidx", "si", "--input", str(p)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1.000000"
