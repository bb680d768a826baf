import pytest

from zakframe import WindowSpec, parse_window
from zakframe.errors import GrammarError, SpecValidationError


@pytest.mark.parametrize("text,expected", [
    ("indicator", WindowSpec.indicator()),
    ("gaussian", WindowSpec.gaussian()),
    ("gaussian:2", WindowSpec.gaussian(2.0)),
    ("Gaussian: a=0.5", WindowSpec.gaussian(0.5)),
    ("hermite:3", WindowSpec.hermite(3)),
    ("bspline:n=2", WindowSpec.bspline(2)),
    ("tp:f=1,0.5", WindowSpec.totally_positive([1.0, 0.5])),
    ("tp:g=0.5,v=1,f=2,c=3", WindowSpec.totally_positive([2.0], gamma=0.5, nu=1.0, c=3.0)),
    ("tp:c=2,f=1,-0.5,0.25", WindowSpec.totally_positive([1.0, -0.5, 0.25], c=2.0)),
])
def test_parse(text, expected):
    assert parse_window(text) == expected


def test_label_round_trips():
    for spec in (WindowSpec.gaussian(2.0), WindowSpec.bspline(3), WindowSpec.totally_positive([1.0, 0.5])):
        assert parse_window(spec.label) == spec


@pytest.mark.parametrize("text", [
    "", "   ", "foo", "hermite", "hermite:1.5", "hermite:1,2", "gaussian:-1", "gaussian:b=1",
    "gaussian:nan", "indicator:1", "tp:g=1", "tp:1", "tp:f=1", "tp:f=1,f=2", "tp:z=1,f=1,2",
    "bspline:", "bspline:n=", "sampled", "sampled:step=0.1",
])
def test_rejects(text):
    with pytest.raises(GrammarError):
        parse_window(text)


def test_grammar_error_is_a_validation_error():
    assert issubclass(GrammarError, SpecValidationError)


def test_sampled_one_column(tmp_path):
    p = tmp_path / "hat.txt"
    p.write_text("# hat\n0\n1\n0\n", encoding="utf-8")
    spec = parse_window(f"sampled:file={p},step=0.5,start=-0.5")
    assert spec.samples == (0.0, 1.0, 0.0)
    assert spec.step == 0.5 and spec.start == -0.5
    assert spec.is_continuous


def test_sampled_two_columns(tmp_path):
    p = tmp_path / "hat.csv"
    p.write_text("-1,0\n0,1\n1,0\n", encoding="utf-8")
    spec = parse_window(f"sampled:file={p},A=1,order=4,fA=1,forder=2")
    assert spec.step == 1.0 and spec.start == -1.0
    assert [e.side for e in spec.envelopes] == ["time", "frequency"]
    assert spec.envelopes[1].order == 2.0


def test_sampled_complex_values(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("0\n1+2i\n0\n", encoding="utf-8")
    spec = parse_window(f"sampled:file={p},step=1")
    assert spec.samples[1] == 1 + 2j
    assert not spec.is_real


@pytest.mark.parametrize("content,params", [
    ("0\n1\n0\n", ""),                          # one column needs step
    ("0,0\n1,1\n3,0\n", ""),                    # non-uniform t
    ("0,0\n1,1\n2,0\n", ",step=0.5"),           # step disagrees with t
    ("0\n1\n0\n", ",step=1,A=1"),               # A without order
    ("", ",step=1"),                            # empty file
    ("0,1,2\n", ",step=1"),                     # three columns
    ("0\nx\n0\n", ",step=1"),                   # not a number
])
def test_sampled_rejects(tmp_path, content, params):
    p = tmp_path / "bad.txt"
    p.write_text(content, encoding="utf-8")
    with pytest.raises(GrammarError):
        parse_window(f"sampled:file={p}{params}")


def test_sampled_missing_file(tmp_path):
    with pytest.raises(GrammarError):
        parse_window(f"sampled:file={tmp_path / 'nope.txt'},step=1")
