"""Command-line pipeline: synth, encode, decode, analyze, compare."""

import csv

import numpy as np
import pytest

from sscodec import read_stream, read_wav, snr, write_wav
from sscodec.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def mix_wav(tmp_path):
    path = tmp_path / "mix.wav"
    assert run("synth", path, "--kind", "mix", "--seed", "3",
               "--duration", "0.15", "--sample-rate", "4000",
               "--components", "3") == 0
    return path


class TestSynth:
    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.wav", tmp_path / "b.wav"
        for path in (a, b):
            assert run("synth", path, "--kind", "mix", "--seed", "7",
                       "--duration", "0.1", "--sample-rate", "4000") == 0
        assert a.read_bytes() == b.read_bytes()

    def test_sparse_kind_recovers_under_spmp(self, tmp_path):
        wav = tmp_path / "sparse.wav"
        stream_path = tmp_path / "sparse.ssc"
        assert run("synth", wav, "--kind", "sparse", "--seed", "5",
                   "--duration", "0.128", "--sample-rate", "1000",
                   "--case", "dct", "--redundancy", "2", "--block-size", "128",
                   "--components", "5") == 0
        assert run("encode", wav, stream_path, "--case", "dct", "--redundancy", "2",
                   "--block-size", "128", "--snr", "90", "--jobs", "1") == 0
        stream = read_stream(stream_path)
        # float32 WAV quantization adds a noise floor; the five atoms must
        # still dominate (a couple of cleanup picks are tolerated)
        assert all(len(record) >= 5 for record in stream.records)

    def test_grid_kind(self, tmp_path):
        wav = tmp_path / "grid.wav"
        assert run("synth", wav, "--kind", "grid", "--seed", "1",
                   "--duration", "0.128", "--sample-rate", "1000",
                   "--block-size", "64") == 0
        signal, rate = read_wav(wav)
        assert rate == 1000
        assert signal.size == 128


class TestEncodeDecode:
    def test_pipeline_meets_snr(self, tmp_path, mix_wav):
        stream_path = tmp_path / "mix.ssc"
        out_wav = tmp_path / "out.wav"
        assert run("encode", mix_wav, stream_path, "--case", "mixed",
                   "--redundancy", "2", "--block-size", "128", "--snr", "25",
                   "--jobs", "1") == 0
        assert (tmp_path / "mix.ssc.metrics.csv").exists()
        assert run("decode", stream_path, out_wav) == 0
        original, _ = read_wav(mix_wav)
        decoded, _ = read_wav(out_wav)
        assert snr(original, decoded) >= 25.0

    def test_deterministic_stream_bytes(self, tmp_path, mix_wav):
        streams = []
        for name in ("one.ssc", "two.ssc"):
            path = tmp_path / name
            assert run("encode", mix_wav, path, "--case", "dct", "--redundancy", "2",
                       "--block-size", "128", "--snr", "20", "--jobs", "2") == 0
            streams.append(path.read_bytes())
        assert streams[0] == streams[1]

    def test_basis_with_explicit_redundancy_rejected(self, tmp_path, mix_wav):
        code = run("encode", mix_wav, tmp_path / "x.ssc", "--method", "basis",
                   "--redundancy", "4", "--block-size", "128")
        assert code == 2

    def test_basis_without_redundancy_runs_at_one(self, tmp_path, mix_wav):
        stream_path = tmp_path / "basis.ssc"
        assert run("encode", mix_wav, stream_path, "--method", "basis",
                   "--case", "dct", "--block-size", "128", "--snr", "20") == 0
        assert read_stream(stream_path).header.num_atoms == 128

    def test_silent_wav_encodes_empty_records(self, tmp_path):
        wav = tmp_path / "silent.wav"
        write_wav(wav, np.zeros(400), 4000)
        stream_path = tmp_path / "silent.ssc"
        assert run("encode", wav, stream_path, "--case", "dct", "--redundancy", "2",
                   "--block-size", "128", "--jobs", "1") == 0
        stream = read_stream(stream_path)
        assert all(len(record) == 0 for record in stream.records)

    def test_unreadable_input_exit_2(self, tmp_path):
        assert run("encode", tmp_path / "missing.wav", tmp_path / "x.ssc") == 2

    def test_malformed_stream_exit_2(self, tmp_path):
        bad = tmp_path / "bad.ssc"
        bad.write_bytes(b"NOPE" + b"\x00" * 60)
        assert run("decode", bad, tmp_path / "y.wav") == 2

    def test_debug_json(self, tmp_path, mix_wav):
        import json

        stream_path = tmp_path / "mix.ssc"
        dump = tmp_path / "mix.json"
        assert run("encode", mix_wav, stream_path, "--case", "dct", "--redundancy", "2",
                   "--block-size", "128", "--snr", "15", "--jobs", "1",
                   "--debug-json", dump) == 0
        payload = json.loads(dump.read_text())
        assert payload["case"] == "dct"


class TestAnalyze:
    def test_writes_all_reports(self, tmp_path, mix_wav):
        stream_path = tmp_path / "mix.ssc"
        assert run("encode", mix_wav, stream_path, "--case", "mixed",
                   "--redundancy", "2", "--block-size", "128", "--snr", "22",
                   "--jobs", "1") == 0
        out_dir = tmp_path / "reports"
        assert run("analyze", stream_path, mix_wav, "--out-dir", out_dir,
                   "--window", "128") == 0
        for suffix in ("metrics", "blocks", "sparse_power", "sparse_power_dense",
                       "spectrogram"):
            assert (out_dir / f"mix_{suffix}.csv").exists()
        with open(out_dir / "mix_metrics.csv") as handle:
            rows = {r["metric"]: r["value"] for r in csv.DictReader(handle)}
        assert float(rows["snr_db"]) >= 22.0

    def test_wrong_original_rejected(self, tmp_path, mix_wav):
        stream_path = tmp_path / "mix.ssc"
        assert run("encode", mix_wav, stream_path, "--case", "dct",
                   "--redundancy", "2", "--block-size", "128", "--snr", "15",
                   "--jobs", "1") == 0
        other = tmp_path / "other.wav"
        write_wav(other, np.ones(10), 4000)
        assert run("analyze", stream_path, other) == 2


class TestCompare:
    def test_sweep_orders_methods(self, tmp_path, mix_wav):
        out = tmp_path / "sweep.csv"
        assert run("compare", mix_wav, out, "--block-sizes", "128",
                   "--methods", "basis,mp,spmp", "--case", "mixed",
                   "--redundancy", "2", "--snr", "22", "--basis-case", "dct",
                   "--jobs", "1") == 0
        with open(out) as handle:
            rows = list(csv.DictReader(handle))
        sr = {row["method"]: float(row["sr"]) for row in rows}
        assert sr["spmp"] >= sr["mp"] >= sr["basis"]
        spmp_row = next(r for r in rows if r["method"] == "spmp")
        assert spmp_row["gain_percent"] != ""

    def test_usage_error_on_unknown_method(self, tmp_path, mix_wav):
        assert run("compare", mix_wav, tmp_path / "s.csv", "--methods", "magic") == 2
