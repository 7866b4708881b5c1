import numpy as np
import pytest

from torusnls import RoughDataSpec, SequenceSample, make_grid, plane_wave, rough_data
from torusnls import stateio


def test_binary_round_trip(tmp_path):
    g = make_grid(2, 16)
    f = rough_data(RoughDataSpec(grid=g, s=1.0, seed=1))
    path = tmp_path / "state.tnls"
    stateio.save_field(path, f)
    back = stateio.load_field(path)
    assert back.grid == g
    assert np.array_equal(back.coeffs, f.coeffs)


def test_json_round_trip(tmp_path):
    g = make_grid(1, 32)
    f = rough_data(RoughDataSpec(grid=g, s=0.5, seed=2))
    path = tmp_path / "state.json"
    stateio.save_field(path, f)
    back = stateio.load_field(path)
    assert back.grid == g
    assert np.abs(back.coeffs - f.coeffs).max() < 1e-16


def test_binary_layout_golden(tmp_path):
    # Pins the on-disk layout: header fields then little-endian re/im pairs.
    g = make_grid(1, 2)
    f = plane_wave(g, 0, 1.0 + 2.0j)
    path = tmp_path / "tiny.tnls"
    stateio.save_field(path, f)
    raw = path.read_bytes()
    expected = (
        b"TNLS"
        + (1).to_bytes(4, "little")
        + (1).to_bytes(4, "little")
        + (2).to_bytes(4, "little")
        + b"mode-amplitude\x00\x00"
        + np.array([1.0, 2.0, 0.0, 0.0], dtype="<f8").tobytes()
    )
    assert raw == expected


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.tnls"
    path.write_bytes(b"NOPE" + bytes(60))
    with pytest.raises(ValueError, match="magic"):
        stateio.load_field(path)


def test_truncated_payload_rejected(tmp_path):
    g = make_grid(1, 4)
    f = plane_wave(g, 1, 1.0)
    path = tmp_path / "state.tnls"
    stateio.save_field(path, f)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match="payload"):
        stateio.load_field(path)


def test_sequence_round_trip(tmp_path):
    g = make_grid(1, 8)
    seq = SequenceSample(
        tau=0.25,
        fields=[rough_data(RoughDataSpec(grid=g, s=0.5, seed=k)) for k in range(3)],
    )
    path = tmp_path / "seq.json"
    stateio.save_sequence_json(path, seq)
    back = stateio.load_sequence_json(path)
    assert back.tau == 0.25
    assert back.length == 3
    for a, b in zip(back.fields, seq.fields):
        assert np.abs(a.coeffs - b.coeffs).max() < 1e-16


def test_wrong_format_tag(tmp_path):
    path = tmp_path / "seq.json"
    path.write_text('{"format": "other"}')
    with pytest.raises(ValueError, match="sequence"):
        stateio.load_sequence_json(path)
