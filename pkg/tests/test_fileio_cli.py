import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dachmm.cli import main
from dachmm.codec import Codeword, DacParams, encode
from dachmm.errors import InvalidParameter
from dachmm.fileio import (
    read_codeword,
    read_sequence,
    write_codeword,
    write_sequence,
)


class TestFileRoundTrips:
    def test_codeword_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        for i in range(50):
            path = tmp_path / f"c{i}.dac"
            bits = rng.integers(0, 2, int(rng.integers(1, 300))).astype(np.uint8)
            cw = Codeword(bits, int(rng.integers(1, 5000)))
            write_codeword(path, cw)
            back = read_codeword(path)
            assert back.n_symbols == cw.n_symbols
            assert np.array_equal(back.bits, cw.bits)

    @pytest.mark.parametrize("binary", [False, True])
    def test_sequence_round_trip(self, tmp_path, binary):
        seq = (np.random.default_rng(0).random(777) < 0.5).astype(np.uint8)
        path = tmp_path / "s"
        write_sequence(path, seq, binary=binary)
        assert np.array_equal(read_sequence(path), seq)

    def test_codeword_header_layout(self, tmp_path):
        path = tmp_path / "c.dac"
        write_codeword(path, Codeword(np.array([1, 0, 1], np.uint8), 9))
        data = path.read_bytes()
        assert data[:4] == b"DAC1"
        assert data[4:12] == (9).to_bytes(4, "big") + (3).to_bytes(4, "big")
        assert data[12:] == bytes([0b10100000])

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "c.dac"
        path.write_bytes(b"NOPE" + bytes(8))
        with pytest.raises(InvalidParameter):
            read_codeword(path)

    def test_text_sequence_with_newlines(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("0101\n1100\n")
        assert read_sequence(path).tolist() == [0, 1, 0, 1, 1, 1, 0, 0]

    def test_garbage_text_rejected(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("01012")
        with pytest.raises(InvalidParameter):
            read_sequence(path)


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "model1.json"
    path.write_text(json.dumps({"a00": 0.01, "a11": 0.03, "b00": 0.99, "b11": 0.98}))
    return str(path)


class TestCli:
    def test_gen_is_deterministic_and_xor_consistent(self, tmp_path, model_file):
        args = ["gen", *(str(tmp_path / f) for f in "xzy"),
                "--model-file", model_file, "--n", "500", "--seed", "7"]
        assert main(args) == 0
        x1, z1, y1 = (read_sequence(tmp_path / f) for f in "xzy")
        assert main(args) == 0
        x2, _, _ = (read_sequence(tmp_path / f) for f in "xzy")
        assert np.array_equal(x1, x2)
        assert np.array_equal(x1 ^ z1, y1)

    def test_encode_decode_round_trip(self, tmp_path, model_file, capsys):
        x = (np.random.default_rng(1).random(400) < 0.5).astype(np.uint8)
        write_sequence(tmp_path / "x", x)
        assert main(["encode", str(tmp_path / "x"), str(tmp_path / "cw"),
                     "--gamma", "1.0", "--p", "0.5", "--T", "0"]) == 0
        assert "rate" in capsys.readouterr().out
        write_sequence(tmp_path / "y", np.zeros(400, np.uint8))
        assert main(["decode", str(tmp_path / "cw"), str(tmp_path / "y"),
                     str(tmp_path / "xhat"), "--model-file", model_file,
                     "--gamma", "1.0", "--p", "0.5", "--T", "0", "--M", "1"]) == 0
        assert np.array_equal(read_sequence(tmp_path / "xhat"), x)

    def test_joint_decode_recovers_source(self, tmp_path, model_file):
        assert main(["gen", *(str(tmp_path / f) for f in "xzy"),
                     "--model-file", model_file, "--n", "1024", "--seed", "3"]) == 0
        x = read_sequence(tmp_path / "x")
        cw = encode(x, DacParams(p=0.5, gamma=0.4, T=15))
        from dachmm.fileio import write_codeword

        write_codeword(tmp_path / "cw", cw)
        assert main(["decode", str(tmp_path / "cw"), str(tmp_path / "y"),
                     str(tmp_path / "xhat"), "--model-file", model_file,
                     "--gamma", "0.4", "--p", "0.5"]) == 0
        assert np.array_equal(read_sequence(tmp_path / "xhat"), x)

    def test_entropy_subcommand(self, capsys, model_file):
        assert main(["entropy", "--model-file", model_file,
                     "--n", "200000", "--seed", "1"]) == 0
        assert abs(float(capsys.readouterr().out) - 0.24) < 0.03

    def test_model_scalar_flags(self, capsys):
        assert main(["entropy", "--a00", "0.01", "--a11", "0.03",
                     "--b00", "0.99", "--b11", "0.98", "--n", "50000"]) == 0

    def test_missing_input_file_fails(self, tmp_path, capsys):
        assert main(["encode", str(tmp_path / "nope"), str(tmp_path / "cw"),
                     "--gamma", "1.0"]) == 1
        assert capsys.readouterr().err != ""

    def test_side_info_length_mismatch_fails(self, tmp_path, model_file):
        x = np.ones(64, np.uint8)
        write_sequence(tmp_path / "x", x)
        main(["encode", str(tmp_path / "x"), str(tmp_path / "cw"), "--gamma", "1.0", "--T", "0"])
        write_sequence(tmp_path / "y", np.zeros(63, np.uint8))
        assert main(["decode", str(tmp_path / "cw"), str(tmp_path / "y"),
                     str(tmp_path / "xhat"), "--model-file", model_file,
                     "--gamma", "1.0", "--T", "0"]) == 1

    def test_unknown_model_id_fails(self, tmp_path):
        assert main(["experiment", "--models", "9", "--trials", "1"]) == 1

    def test_smoke_experiment(self, tmp_path, capsys):
        out = tmp_path / "trials.csv"
        summary = tmp_path / "summary.csv"
        assert main(["experiment", "--models", "1", "--trials", "2", "--N", "256",
                     "--T", "15", "--M", "256", "--seed", "5",
                     "--entropy-n", "100000",
                     "--out", str(out), "--summary-out", str(summary)]) == 0
        printed = capsys.readouterr().out
        assert "non-reference scale" in printed
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "model,seed,gamma_final,rate_bits_per_symbol,attempts"
        assert len(lines) == 3
