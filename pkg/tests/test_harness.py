import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import IQ3, Q4EX3, Z2, Z3
from oracles import brute_homs, brute_isomorphic, has_lip, in_adl, in_dl, is_group, is_latin, is_lf, naive_latin_squares
from qgkit import QMap, make_quasigroup
from qgkit.constructions import build_example3, cyclic, example3_system
from qgkit.errors import FormatError, NotLatin, OrderTooLarge
from qgkit.formats import (
    dumps_bruck,
    dumps_qg,
    dumps_qmap,
    loads_bruck,
    loads_qg,
    loads_qmap,
    read_qg,
    read_qmap,
    write_bruck,
    write_qg,
)
from qgkit.harness import batteries
from qgkit.harness.cli import run_cli
from qgkit.harness.enumerate import (
    census,
    enumerate_endomorphisms,
    enumerate_latin_squares,
    latin_squares,
    random_isotope_table,
    random_row_permutation_table,
    worker_count,
)


# -- enumeration -------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_naive_oracle(n):
    expected = sorted(tuple(map(tuple, t)) for t in naive_latin_squares(n))
    assert sorted(latin_squares(n)) == expected
    assert sorted(latin_squares(n, order="column")) == expected


def test_row_order_is_lexicographic():
    sq = latin_squares(4)
    assert sq == sorted(sq)


def test_enumeration_caps():
    with pytest.raises(OrderTooLarge):
        enumerate_latin_squares(6)
    with pytest.raises(OrderTooLarge):
        enumerate_latin_squares(7, allow_order_6=True)
    with pytest.raises(ValueError):
        enumerate_latin_squares(0)


def test_workers_do_not_change_counts():
    assert enumerate_latin_squares(4, workers=2) == 576
    assert enumerate_latin_squares(4, workers=1) == 576


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("QGKIT_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("QGKIT_THREADS", "3")
    assert worker_count() == 3
    for bad in ["0", "-2", "many"]:
        monkeypatch.setenv("QGKIT_THREADS", bad)
        with pytest.raises(ValueError):
            worker_count()


@pytest.mark.parametrize("table", [Z2, Z3, IQ3, Q4EX3])
def test_endomorphisms_match_brute_force(table):
    found = [f.values for f in enumerate_endomorphisms(make_quasigroup(table))]
    assert found == brute_homs(table, table)


def test_endomorphism_cap():
    Q = make_quasigroup([[(x + y) % 6 for y in range(6)] for x in range(6)])
    with pytest.raises(OrderTooLarge):
        enumerate_endomorphisms(Q)


@settings(max_examples=200)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_validator_rejects_exactly_the_non_latin(n, seed):
    t = random_row_permutation_table(n, random.Random(seed))
    if is_latin(t):
        assert make_quasigroup(t).order == n
    else:
        with pytest.raises(NotLatin) as info:
            make_quasigroup(t)
        assert info.value.kind == "column"


# -- census ------------------------------------------------------------------


def oracle_census(n):
    sq = naive_latin_squares(n)
    return {
        "total": len(sq),
        "group": sum(is_group(t) for t in sq),
        "Dl": sum(in_dl(t) for t in sq),
        "aDl": sum(in_adl(t) for t in sq),
        "LF": sum(is_lf(t) for t in sq),
        "LIP": sum(has_lip(t) for t in sq),
    }


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_against_oracles(n):
    row = census(n)
    want = oracle_census(n)
    assert row.total == want.pop("total")
    for p, v in want.items():
        assert row.counts[p] == v


def test_census_frozen_values():
    assert census(2).format() == "total=2 loop=2 group=2 idempotent=0 Dl=2 aDl=2 LF=2 LIP=2"
    assert census(3).format() == "total=12 loop=3 group=3 idempotent=1 Dl=12 aDl=6 LF=12 LIP=12"
    row = census(4, ("Dl", "aDl", "LF", "LIP"), workers=2)
    assert row.format(("Dl", "aDl", "LF", "LIP")) == "total=576 Dl=168 aDl=144 LF=120 LIP=240"


def iso_classes(n):
    reps = []
    for t in naive_latin_squares(n):
        if not any(brute_isomorphic(t, r) for r in reps):
            reps.append(t)
    return reps


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_up_to_iso(n):
    reps = iso_classes(n)
    row = census(n, ("group", "idempotent"), up_to_iso=True)
    assert row.total == len(reps)
    assert row.counts["group"] == sum(is_group(t) for t in reps)
    assert [len(iso_classes(k)) for k in (1, 2, 3)] == [1, 1, 5]


def test_census_up_to_iso_cap():
    with pytest.raises(OrderTooLarge):
        census(5, up_to_iso=True)


def test_census_rejects_unknown_predicate():
    with pytest.raises(ValueError):
        census(2, ("Moufang",))


# -- formats -----------------------------------------------------------------


def test_qg_format_roundtrip(tmp_path):
    Q = make_quasigroup(Q4EX3)
    text = dumps_qg(Q)
    assert text == "4\n0 1 2 3\n3 2 1 0\n2 3 0 1\n1 0 3 2\n"
    assert loads_qg("# comment\n\n" + text).mul == Q.mul
    write_qg(tmp_path / "q.qg", Q)
    assert read_qg(tmp_path / "q.qg") == Q


def test_qmap_format():
    f = QMap(4, 2, (0, 1, 0, 1))
    assert dumps_qmap(f) == "4 2\n0 1 0 1\n"
    assert loads_qmap(dumps_qmap(f)) == f


def test_bruck_format():
    B = example3_system(cyclic(2), cyclic(2), QMap.identity(2))
    text = dumps_bruck(B)
    assert text.startswith("bruck 2 2\n0 1\n1 0\nblock 0 0\n")
    assert text.endswith("\n") and not text.endswith("\n\n")
    assert loads_bruck(text) == B


@pytest.mark.parametrize("text", [
    "", "2\n0 1\n", "2\n0 1\n1 x\n", "2\n0 1\n1 2\n", "0\n", "2\n0 1 1\n1 0\n",
])
def test_qg_format_errors(text):
    with pytest.raises(FormatError):
        loads_qg(text)


def test_qg_non_latin_is_reported_as_such():
    with pytest.raises(NotLatin):
        loads_qg("2\n0 0\n1 1\n")


@pytest.mark.parametrize("text", ["2 2\n", "2 2\n0 5\n", "2 2\n0\n", "a b\n0 1\n"])
def test_qmap_format_errors(text):
    with pytest.raises(FormatError):
        loads_qmap(text)


@pytest.mark.parametrize("text", [
    "", "bruck 1\n0\n", "brick 1 1\n0\nblock 0 0\n0\n", "bruck 1 1\n0\nblock 0 1\n0\n",
    "bruck 1 1\n0\nblock 0 0\n",
])
def test_bruck_format_errors(text):
    with pytest.raises(FormatError):
        loads_bruck(text)


# -- batteries ---------------------------------------------------------------


def test_batteries_on_small_inputs():
    qs = [make_quasigroup(t) for t in (Z2, Z3, IQ3, Q4EX3)]
    for run in (batteries.prop1_battery, batteries.theorem2_battery, batteries.theorem3_battery):
        res = run(qs)
        assert res.ok and res.checked == 4, res.violations
    res = batteries.theorem4_battery([(cyclic(2), cyclic(2), QMap.identity(2))])
    assert res.ok and res.checked == 1
    assert res.summary() == "theorem4: checked=1 violations=0"


# -- CLI ---------------------------------------------------------------------


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, t in [("q4", Q4EX3), ("iq3", IQ3), ("z3", Z3)]:
        paths[name] = tmp_path / f"{name}.qg"
        write_qg(paths[name], make_quasigroup(t))
    paths["bad"] = tmp_path / "bad.qg"
    paths["bad"].write_text("2\n0 0\n1 1\n")
    paths["dir"] = tmp_path
    return paths


def test_cli_validate(files):
    assert cli("validate", files["q4"]) == (0, "ok order=4\n", "")
    code, _, err = cli("validate", files["bad"])
    assert code == 2 and err == "NotLatin: NotLatin(row, 0)\n"
    code, _, err = cli("validate", files["dir"] / "missing.qg")
    assert code == 2 and "FileNotFoundError" in err


def test_cli_props_and_deviation(files):
    code, out, _ = cli("props", files["q4"])
    assert out == "loop=0 group=0 idempotent=0 Dl=1 aDl=1 LF=1 LIP=1\n"
    code, out, _ = cli("deviation", files["q4"])
    assert code == 0
    assert out == "4 4\n0 2 0 2\nendomorphism=1 image_group=1 image=0 2\n"
    _, out, _ = cli("deviation", files["iq3"])
    assert out.endswith("endomorphism=1 image_group=0 image=0 1 2\n")


def test_cli_decompose_compose_roundtrip(files):
    d = files["dir"]
    code, out, _ = cli("decompose", files["q4"], "--deviation", "-o", d / "s.bruck", "--labeling-out", d / "lab.qmap")
    assert code == 0
    assert out == "gamma=0 1\ng=0 0\nclasses=2 fiber_size=2\nlabeling=0,0 0,1 1,0 1,1\n"
    code, _, _ = cli("compose", d / "s.bruck", "-o", d / "back.qg", "--relabel", d / "lab.qmap", "--proj-out", d / "p.qmap")
    assert code == 0
    assert (d / "back.qg").read_text() == files["q4"].read_text()
    assert read_qmap(d / "p.qmap").values == (0, 1, 0, 1)


def test_cli_decompose_with_epi_and_endo(files):
    d = files["dir"]
    (d / "pi.qmap").write_text("4 2\n1 0 1 0\n")
    code, out, _ = cli("decompose", files["q4"], "--epi-file", d / "pi.qmap")
    assert code == 0 and "classes=2 fiber_size=2" in out
    (d / "eta.qmap").write_text("4 4\n1 1 1 1\n")
    code, _, err = cli("decompose", files["q4"], "--endo-file", d / "eta.qmap")
    assert code == 2 and err.startswith("NotHomomorphism")


def test_cli_construct(files):
    code, out, _ = cli("construct", "example3", "--E", "cyclic:2", "--T", "cyclic:2")
    assert code == 0 and out == dumps_qg(make_quasigroup(Q4EX3))
    code, out, _ = cli("construct", "example2", "--E", "cyclic:2", "--T", "cyclic:2")
    assert code == 0 and out.startswith("bruck 2 2\n")
    code, out, _ = cli("construct", "example1", "--E", f"file:{files['iq3']}", "--T1", "cyclic:2", "--T2", "cyclic:2")
    assert code == 0 and loads_bruck(out).E.mul == make_quasigroup(IQ3).mul
    code, _, err = cli("construct", "example3", "--E", "cyclic:2")
    assert code == 2 and "--T" in err
    code, _, _ = cli("construct", "example3", "--E", "cyclic:2", "--T", "cyclic:2", "--eps", "all")
    assert code == 2


def test_cli_check(files, tmp_path):
    code, out, _ = cli("check", "prop1", files["q4"], files["iq3"])
    assert code == 0 and out.startswith("prop1: checked=2")
    code, out, _ = cli("check", "theorem2", "--order", "3")
    assert code == 0 and "checked=12" in out
    assert cli("check", "theorem3", "--order", "9")[0] == 2
    code, out, _ = cli("check", "theorem4", "--E", "cyclic:2", "--T", "cyclic:4")
    assert code == 0 and out == "theorem4: checked=2 violations=0\n"

    write_bruck(tmp_path / "good.bruck", example3_system(cyclic(2), cyclic(2), QMap.identity(2)))
    code, out, _ = cli("check", "theorem2", "--bruck", tmp_path / "good.bruck")
    assert (code, out) == (0, "cond_ii=1 cond_iii=1 epsilon=0 1\n")
    code, out, _ = cli("check", "theorem3", "--bruck", tmp_path / "good.bruck")
    assert (code, out) == (0, "E_is_group=1 cond_ii=1 cond_iii=1 epsilon=0 1\n")
    (tmp_path / "bad.bruck").write_text("bruck 2 3\n0 1\n1 0\nblock 0 0\n0 1 2\n1 2 0\n2 0 1\n"
                                        "block 0 1\n0 1 2\n1 2 0\n2 0 1\n"
                                        "block 1 0\n0 2 1\n2 1 0\n1 0 2\n"
                                        "block 1 1\n0 1 2\n1 2 0\n2 0 1\n")
    code, out, _ = cli("check", "theorem2", "--bruck", tmp_path / "bad.bruck")
    assert code == 1 and out.startswith("cond_ii=0")


def test_cli_census_and_isotopy():
    assert cli("census", "--order", "3") == (0, "total=12 loop=3 group=3 idempotent=1 Dl=12 aDl=6 LF=12 LIP=12\n", "")
    assert cli("census", "--order", "2", "--predicates", "Dl,LIP") == (0, "total=2 Dl=2 LIP=2\n", "")
    assert cli("census", "--order", "2", "--predicates", "Moufang")[0] == 2
    assert cli("census", "--order", "6")[0] == 2
    code, out, _ = cli("isotopy-check", "--E", "cyclic:2", "--T", "cyclic:2")
    assert code == 0
    assert out == "eps=0 0 isotopic=1 phi=0 1 2 3\neps=0 1 isotopic=1 phi=0 3 2 1\n"


def test_cli_usage_errors():
    assert cli()[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("decompose", "x.qg")[0] == 2


def test_example3_files_roundtrip(tmp_path):
    Q = build_example3(cyclic(3), cyclic(2), QMap.constant(3, 2, 0))
    write_qg(tmp_path / "e.qg", Q)
    assert read_qg(tmp_path / "e.qg").mul == Q.mul
    assert random_isotope_table(1, random.Random(0)) == [[0]]
