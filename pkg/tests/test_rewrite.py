import pytest
from hypothesis import given, settings, strategies as st

from randlambda.counting import enumerate_cl, enumerate_closed_lambda, enumerate_lambda
from randlambda.rewrite import (
    Budget, SNStatus, beta_reducts, cl_normal_order_step, cl_reducts, decide_sn, decide_sn_cl,
    eta_longest, normal_order_step, shift, substitute,
)
from randlambda.terms import (
    Abs, App, OMEGA_CL, OMEGA_LAMBDA, Var, contains_subterm, contains_subterm_cl, parse_cl,
    parse_lambda,
)

from oracles import NotSN, beta, from_term, longest, normal_forms, reducts, to_term

ID = parse_lambda(r"\y. y")


def test_substitute_examples():
    assert substitute(Var(0), ID) is ID
    # \z. (\x. z) w  contracts to \z. z: the inner body Var 1 drops to Var 0
    assert substitute(Var(1), ID) is Var(0)
    assert substitute(App(Var(0), Var(0)), ID) is App(ID, ID)


def test_substitute_avoids_capture():
    # (\x. \y. x) y  ->  \z. y   (with y free at index 0)
    t = parse_lambda(r"(\x. \y. x) y", env=["y"])
    (step,) = beta_reducts(t)
    assert step.after is Abs(Var(1))


@given(st.integers(0, 4), st.integers(0, 3), st.data())
@settings(max_examples=80, deadline=None)
def test_substitute_matches_oracle(n, k, data):
    bodies = list(enumerate_lambda(n, k + 1))
    args = list(enumerate_lambda(min(n, 2), k))
    if not bodies or not args:
        return
    b = data.draw(st.sampled_from(bodies))
    a = data.draw(st.sampled_from(args))
    assert from_term(substitute(b, a)) == beta(from_term(b), from_term(a))


def test_shift_round_trip():
    t = parse_lambda(r"\x. f x g", env=["f", "g"])
    assert shift(shift(t, 3, 0), -3, 0) is t


def test_beta_reducts_examples():
    assert beta_reducts(parse_lambda(r"\x. x")) == []
    (s,) = beta_reducts(parse_lambda(r"(\x. x) (\y. y)"))
    assert s.after is ID and s.path == ""
    (s,) = beta_reducts(OMEGA_LAMBDA)
    assert s.after is OMEGA_LAMBDA


def test_beta_reducts_match_oracle_up_to_size_6():
    for n in range(7):
        for t in enumerate_closed_lambda(n):
            mine = sorted(map(repr, (from_term(s.after) for s in beta_reducts(t))))
            assert mine == sorted(map(repr, reducts(from_term(t))))


def test_reduction_paths_locate_the_redex():
    t = parse_lambda(r"\a. (\x. x) ((\y. y) a)")
    paths = {s.path for s in beta_reducts(t)}
    assert paths == {"D", "DR"}
    assert normal_order_step(t).path == "D"


def test_decide_sn_examples():
    v = decide_sn(parse_lambda(r"\x. x"))
    assert v.status is SNStatus.PROVED_SN and v.eta == 0
    v = decide_sn(parse_lambda(r"(\x. x) (\y. y)"))
    assert v.proved_sn and v.eta == 1
    v = decide_sn(OMEGA_LAMBDA)
    assert v.status is SNStatus.PROVED_NOT_SN
    assert v.witness.kind == "cycle" and v.witness.chain[0] is OMEGA_LAMBDA


def test_eta_examples():
    assert eta_longest(parse_lambda(r"\x. \y. y")) == 0
    assert eta_longest(parse_lambda(r"(\x. (x x)) (\y. y)")) == 2
    assert eta_longest(parse_lambda(r"(\x. \z. z) (\w. w)")) == 1
    assert eta_longest(OMEGA_LAMBDA) is None


def test_budget_exhaustion_is_unknown():
    # (\x. x x x)(\x. x x x) grows forever
    t = parse_lambda(r"(\x. x x x) (\x. x x x)")
    v = decide_sn(t, Budget(max_steps=50, max_size=40))
    assert v.status in (SNStatus.UNKNOWN, SNStatus.PROVED_NOT_SN)
    big = parse_lambda(r"(\f. \x. f (f (f x))) (\f. \x. f (f (f x)))")
    v = decide_sn(big, Budget(max_steps=3, max_size=10_000))
    assert v.status is SNStatus.UNKNOWN and v.witness.kind == "max_steps"
    assert decide_sn(big).proved_sn


def _check_witness(v):
    # every link is a reduction step or a passage to a direct subterm,
    # at least one link reduces, and the last goal contains the first
    chain = v.witness.chain
    reduced = False
    for a, b in zip(chain, chain[1:]):
        if any(s.after is b for s in beta_reducts(a)):
            reduced = True
            continue
        assert contains_subterm_like(a, b)
    assert reduced or len(chain) == 2
    last, first = chain[-1], chain[0]
    assert last is first or _has_subtree(last, first)


def contains_subterm_like(a, b):
    return _has_subtree(a, b) or _redex_piece(a, b)


def _has_subtree(a, b):
    stack = [a]
    while stack:
        u = stack.pop()
        if u is b:
            return True
        if isinstance(u, App):
            stack += [u.left, u.right]
        elif isinstance(u, Abs):
            stack.append(u.body)
    return False


def _redex_piece(a, b):
    # a head-redex goal may pass to its argument or to its contracted spine
    return any(_has_subtree(s.after, b) for s in beta_reducts(a)) or _has_subtree(a, b)


def test_not_sn_verdicts_are_sound_up_to_size_6():
    found = 0
    for n in range(7):
        for t in enumerate_closed_lambda(n):
            v = decide_sn(t)
            if v.status is SNStatus.PROVED_NOT_SN:
                found += 1
                with pytest.raises(NotSN):
                    longest(from_term(t), limit=5_000, depth=100)
    assert found > 0


def test_shared_memo_gives_identical_results():
    memo = {}
    for t in enumerate_closed_lambda(6):
        a = decide_sn(t)
        b = decide_sn(t, memo=memo)
        assert (a.status, a.eta) == (b.status, b.eta)


def test_confluence_smoke():
    for n in range(7):
        for t in enumerate_closed_lambda(n):
            if decide_sn(t).proved_sn:
                assert len(normal_forms(from_term(t))) == 1


def test_width_one_closed_under_reduction_small():
    for n in range(7):
        for t in enumerate_closed_lambda(n):
            if t.width <= 1:
                assert all(s.after.width <= 1 for s in beta_reducts(t))


def test_cl_reducts_examples():
    assert cl_reducts(parse_cl("K S I")) == [parse_cl("S")]
    assert cl_reducts(parse_cl("I K")) == [parse_cl("K")]
    assert parse_cl("K I (K I)") in cl_reducts(parse_cl("S K K I"))
    assert cl_normal_order_step(parse_cl("S")) is None


def test_decide_sn_cl_examples():
    v = decide_sn_cl(parse_cl("S"))
    assert v.proved_sn and v.eta == 0
    # S K K I -> K I (K I) -> I
    v = decide_sn_cl(parse_cl("S K K I"))
    assert v.proved_sn and v.eta == 2
    v = decide_sn_cl(OMEGA_CL)
    assert v.status is SNStatus.PROVED_NOT_SN


def test_cl_not_sn_witness_contains_start():
    v = decide_sn_cl(parse_cl("S I I (S I I) K"))
    assert v.status is SNStatus.PROVED_NOT_SN
    chain = v.witness.chain
    assert contains_subterm_cl(chain[-1], chain[0]) or chain[-1] is chain[0]
    for a, b in zip(chain, chain[1:]):
        assert b in cl_reducts(a)


def test_cl_verdicts_small_sizes_agree_with_graph_search():
    for n in range(5):
        for t in enumerate_cl(n):
            v = decide_sn_cl(t)
            assert v.status is not SNStatus.UNKNOWN
            if v.proved_sn:
                assert not contains_subterm_cl(t, OMEGA_CL)


def test_lambda_witness_chains():
    for n in range(6):
        for t in enumerate_closed_lambda(n):
            v = decide_sn(t)
            if v.status is SNStatus.PROVED_NOT_SN:
                _check_witness(v)


def test_oracle_conversion_round_trip():
    for t in enumerate_closed_lambda(5):
        assert to_term(from_term(t)) is t
    assert contains_subterm(OMEGA_LAMBDA, parse_lambda(r"\x. x x"))
