import io

import numpy as np
import pytest

from sigkern import ParseError, SequenceDataset
from sigkern import io as sio
from sigkern.synth import BenchResult, BenchRow


def test_sequences_round_trip_exactly(rng):
    ds = SequenceDataset([rng.normal(size=(n, 2)) * 1e3 for n in (3, 1, 5)])
    buf = io.StringIO()
    sio.write_sequences_csv(buf, ds, ids=["a", "b", "c"])
    buf.seek(0)
    ids, back = sio.read_sequences_csv(buf)
    assert ids == ["a", "b", "c"]
    for s, t in zip(ds, back):
        np.testing.assert_array_equal(s, t)


@pytest.mark.parametrize("text,line", [
    ("seq,t,x1\n", 1),
    ("seq_id,t,x2\n", 1),
    ("seq_id,t,x1\na,2,0.0\n", 2),
    ("seq_id,t,x1\na,1,0.0\na,1,1.0\n", 3),
    ("seq_id,t,x1\na,1,0.0\nb,1,0.0\na,2,1.0\n", 4),
    ("seq_id,t,x1\na,1,zz\n", 2),
    ("seq_id,t,x1\na,1,nan\n", 2),
    ("seq_id,t,x1,x2\na,1,0.0\n", 2),
    ("seq_id,t,x1\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        sio.read_sequences_csv(io.StringIO(text))
    assert e.value.line == line
    assert str(e.value).startswith(f"line {line}:")


def test_gram_csv_layout_and_round_trip(rng):
    G = rng.normal(size=(2, 3))
    text = sio.to_string(sio.write_gram_csv, G)
    lines = text.splitlines()
    assert lines[0] == "i,j,value" and lines[1].startswith("0,0,") and lines[3].startswith("0,2,")
    np.testing.assert_array_equal(sio.read_gram_csv(io.StringIO(text)), G)


def test_features_csv_round_trip(rng):
    F = rng.normal(size=(3, 4))
    text = sio.to_string(sio.write_features_csv, F, ["x", "y", "z"])
    assert text.splitlines()[0] == "seq_id,f1,f2,f3,f4"
    ids, back = sio.read_features_csv(io.StringIO(text))
    assert ids == ["x", "y", "z"]
    np.testing.assert_array_equal(back, F)


def test_bench_and_slopes_csv():
    res = BenchResult([BenchRow("rfsf-dp", 2, 16, 0.25, 0.5, 400)])
    assert sio.to_string(sio.write_bench_csv, res) == (
        "method,trunc,rff_dim,mse_mean,mse_std,n_eval\nrfsf-dp,2,16,0.25,0.5,400\n")
    assert sio.to_string(sio.write_slopes_csv, {("rfsf-trp", 3): -1.5}) == "method,trunc,slope\nrfsf-trp,3,-1.5\n"
