import os
import struct
import subprocess

import numpy as np
import pytest

import anchoralign as aa


def spread(n, dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, dim)).astype(np.float32)
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def sentences(n, seed):
    rng = np.random.default_rng(seed)
    return ["x" * int(rng.integers(20, 80)) for _ in range(n)]


def test_aemb_written_by_hand_loads(tmp_path):
    rows = np.array([[1.0, 2.0, 3.0], [-0.5, 0.0, 4.25]], dtype="<f4")
    path = tmp_path / "m.aemb"
    path.write_bytes(b"AEMB" + struct.pack("<III", 1, 2, 3) + rows.tobytes())
    loaded = aa.load_matrix(str(path))
    assert loaded.shape == (2, 3)
    assert np.array_equal(loaded, rows)
    assert aa.encode_matrix(rows) == path.read_bytes()


def test_matrix_round_trips(tmp_path):
    m = spread(7, 5, 1)
    for fmt in ("binary", "tsv"):
        path = tmp_path / f"m.{fmt}"
        aa.write_matrix(str(path), m, fmt)
        back = aa.load_matrix(str(path), fmt)
        if fmt == "binary":
            assert np.array_equal(back, m)
        else:
            assert np.allclose(back, m, atol=1e-6)
    assert np.array_equal(aa.decode_matrix(aa.encode_matrix(m)), m)


def test_bad_header_reports_error_code():
    with pytest.raises(aa.AlignError) as info:
        aa.decode_matrix(b"XEMB" + struct.pack("<III", 1, 0, 3))
    assert info.value.code == "MalformedHeader"


def test_normalize_and_similarity():
    m = np.array([[3.0, 4.0], [0.0, 2.0]], dtype=np.float32)
    n = aa.l2_normalize(m)
    assert np.allclose(np.linalg.norm(n, axis=1), 1.0)
    s = aa.similarity(m, m)
    assert s.shape == (2, 2)
    assert s[0, 1] == pytest.approx(0.8)


def test_self_alignment_is_identity():
    n = 30
    emb = spread(n, 64, 2)
    sents = sentences(n, 3)
    res = aa.align(sents, sents, emb, emb, {"detect-intervals": True})
    assert [(b[0], b[1]) for b in res["beads"]] == [([i], [i]) for i in range(n)]
    assert 0.0 <= res["avg_score"] < 0.15
    anchors = aa.extract_anchors(emb, emb)
    assert [(a[0], a[1]) for a in anchors] == [(i, i) for i in range(n)]


def test_cost_values():
    emb = spread(1, 8, 4)
    cost = aa.bead_cost(["abc"], ["abc"], emb, emb, (0, 1), (0, 1))
    assert cost == pytest.approx(0.1608, abs=1e-9)
    assert aa.d_length(120, 240, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_strict_prf_worked_example():
    gold = [([0], [0]), ([1, 2], [1])]
    pred = [([0], [0]), ([1], [1]), ([2], [])]
    prf = aa.strict_prf(pred, gold)
    assert prf["precision"] == pytest.approx(1 / 3)
    assert prf["recall"] == pytest.approx(0.5)
    assert prf["f1"] == pytest.approx(0.4)
    assert aa.parse_beads("0\t0\n1,2\t1\n") == gold


def test_options_are_validated():
    with pytest.raises(aa.AlignError) as info:
        aa.print_config({"no-such-key": 1})
    assert info.value.code == "Config"
    assert "k=4\n" in aa.print_config({"k": 4})


@pytest.mark.skipif("ANCHORALIGN_CLI" not in os.environ, reason="command-line tool not provided")
def test_cli_reads_python_written_files(tmp_path):
    n = 12
    emb = spread(n, 16, 5)
    sents = sentences(n, 6)
    (tmp_path / "s.txt").write_text("\n".join(sents) + "\n")
    aa.write_matrix(str(tmp_path / "s.aemb"), emb)
    out = subprocess.run(
        [os.environ["ANCHORALIGN_CLI"], "align",
         "--src-text", str(tmp_path / "s.txt"), "--tgt-text", str(tmp_path / "s.txt"),
         "--src-emb", str(tmp_path / "s.aemb"), "--tgt-emb", str(tmp_path / "s.aemb")],
        check=True, capture_output=True, text=True).stdout
    assert aa.parse_beads(out) == [([i], [i]) for i in range(n)]
