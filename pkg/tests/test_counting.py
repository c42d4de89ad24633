import logging
import math

import pytest

from randlambda.counting import (
    CACHE_HEADER, CapExceeded, CountTable, catalan, closed_terms_up_to, count_cl,
    count_closed_lambda, count_lambda, enumerate_cl, enumerate_closed_lambda, enumerate_lambda,
    schroder_M, schroder_Mnk,
)
from randlambda.terms import parse_lambda

from oracles import cl_terms, closed_terms, to_term, unary_binary_shapes


# first values computed with the shape-labelling oracle, then frozen
L = [0, 1, 3, 14, 82, 579, 4741, 43977, 454283, 5159441, 63782411, 851368766]


def test_oracle_values():
    assert [len(closed_terms(n)) for n in range(8)] == L[:8]


def test_recurrence_values():
    assert [count_closed_lambda(n) for n in range(len(L))] == L


def test_enumeration_equals_oracle_sets():
    for n in range(7):
        assert set(enumerate_closed_lambda(n)) == {to_term(t) for t in closed_terms(n)}


def test_enumeration_examples():
    assert list(enumerate_closed_lambda(1)) == [parse_lambda(r"\x. x")]
    assert set(enumerate_closed_lambda(2)) == {
        parse_lambda(r"\x. \y. x"), parse_lambda(r"\x. \y. y"), parse_lambda(r"\x. (x x)")}
    assert list(enumerate_closed_lambda(0)) == []


def test_open_enumeration_counts():
    for n in range(6):
        for k in range(4):
            terms = list(enumerate_lambda(n, k))
            assert len(terms) == len(set(terms)) == count_lambda(n, k)
            assert all(t.size == n and t.free >> k == 0 for t in terms)


def test_table_properties():
    t = CountTable().fill(40)
    for n in range(20):
        row = [t.T(n, k) for k in range(20)]
        assert all(v >= 0 for v in row)
        assert row == sorted(row)
    assert t.T(0, 5) == 5


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.txt"
    CountTable().fill(30).save(path)
    lines = path.read_text().splitlines()
    assert lines[0] == CACHE_HEADER
    keys = [tuple(map(int, ln.split("\t")[:2])) for ln in lines[1:]]
    assert keys == sorted(keys)
    loaded = CountTable.load(path)
    assert loaded.closed(30) == count_closed_lambda(30)


def test_corrupt_cache_recomputes(tmp_path, caplog):
    path = tmp_path / "cache.txt"
    path.write_text(CACHE_HEADER + "\n0\t0\t0\n3\t0\t999\n")
    with caplog.at_level(logging.WARNING):
        table = CountTable.load(path)
    assert table.closed(3) == 14
    assert "disagrees" in caplog.text
    path.write_text("garbage\n")
    assert CountTable.load(path).closed(4) == 82
    assert CountTable.load(tmp_path / "missing").closed(2) == 3


def test_catalan_and_schroder():
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]
    assert [schroder_M(n) for n in range(5)] == [1, 2, 6, 22, 90]
    assert [len(unary_binary_shapes(n)) for n in range(7)] == [schroder_M(n) for n in range(7)]
    for n in range(31):
        assert sum(schroder_Mnk(n, k) for k in range(1, n + 2)) == schroder_M(n)
    assert schroder_Mnk(3, 0 + 1) == 1  # a chain of unary nodes


def test_mnk_matches_shape_oracle():
    def leaves(s):
        return 1 if s == "x" else sum(leaves(c) for c in s[1:])

    for n in range(7):
        for k in range(1, n + 2):
            assert sum(1 for s in unary_binary_shapes(n) if leaves(s) == k) == schroder_Mnk(n, k)


def test_cl_counts_and_enumeration():
    assert count_cl(0) == 3
    assert [len(list(enumerate_cl(n))) for n in range(4)] == [3, 9, 54, 405]
    for n in range(4):
        assert len(set(enumerate_cl(n))) == count_cl(n) == len(cl_terms(n))
    for n in range(200):
        assert count_cl(n) == catalan(n) * 3 ** (n + 1)
    assert catalan(10) == math.comb(20, 10) // 11


def test_caps():
    with pytest.raises(CapExceeded):
        enumerate_closed_lambda(13)
    with pytest.raises(CapExceeded):
        enumerate_cl(10)
    with pytest.raises(ValueError):
        count_closed_lambda(-1)


def test_small_pattern_set():
    assert closed_terms_up_to(1) == {parse_lambda(r"\x. x")}
    assert len(closed_terms_up_to(3)) == 1 + 3 + 14
