import json
import math
import random

import pytest

from sofic import (
    GroupRingElement,
    NotInvertibleError,
    count_solutions,
    det_abs_exact,
    entropy_trace,
    fix_count,
    fk_determinant_quotient,
    involution,
    left_translate,
    log_big_int,
    parse_laurent,
    regular_rep_matrix,
    smith_normal_form,
    torus_quotient,
)
from sofic.algebraic import _det_bareiss, _det_modular
from sofic.groups import ResourceGuardError

from helpers import (
    count_torus_solutions_brute,
    det3_cofactor,
    det_fraction,
    rank_fraction,
)


# ---------------------------------------------------------------------------
# regular representation matrices


def test_scalar_gives_identity_multiple():
    f = parse_laurent("3", 1)
    m = regular_rep_matrix(f, torus_quotient([4]))
    assert m.tolist() == [[3 if i == j else 0 for j in range(4)] for i in range(4)]
    f2 = parse_laurent("3", 2)
    m2 = regular_rep_matrix(f2, torus_quotient([2, 2]))
    assert m2.tolist() == [[3 if i == j else 0 for j in range(4)] for i in range(4)]


def test_circulant_structure_example():
    f = parse_laurent("x - 2", 1)
    m = regular_rep_matrix(f, torus_quotient([3]))
    assert m.tolist() == [[-2, 0, 1], [1, -2, 0], [0, 1, -2]]


def test_degenerate_quotient_folds_fibers():
    f = parse_laurent("x - 2", 1)
    m = regular_rep_matrix(f, torus_quotient([1]))
    assert m.tolist() == [[-1]]


def test_circulant_invariant_and_row_sums():
    rng = random.Random(5)
    for moduli in ([6], [2, 3]):
        q = torus_quotient(moduli)
        rank = len(moduli)
        for _ in range(10):
            terms = {}
            for _ in range(rng.randint(1, 5)):
                if rank == 1:
                    key = rng.randint(-4, 4)
                else:
                    key = (rng.randint(-2, 2), rng.randint(-2, 2))
                terms[key] = rng.randint(-5, 5)
            f = GroupRingElement(rank, terms)
            m = regular_rep_matrix(f, q)
            total = sum(f.terms.values())
            assert m.row_sums() == [total] * q.size
            # entries[a][b] depends only on a * b^-1
            fhat = {}
            for s, c in f.terms.items():
                fhat[q.index(s)] = fhat.get(q.index(s), 0) + c
            for a in range(q.size):
                for b in range(q.size):
                    coset = q.mul(a, q.inv(b))
                    assert m.entries[a][b] == fhat.get(coset, 0)


def test_matrix_size_guard():
    f = parse_laurent("x - 2", 1)
    with pytest.raises(ResourceGuardError):
        regular_rep_matrix(f, torus_quotient([2000]), limit=10**6)


# ---------------------------------------------------------------------------
# exact determinants


def test_det_examples():
    assert det_abs_exact([[1, 2], [3, 4]]) == 2
    assert det_abs_exact([[5, 0, 0], [0, 5, 0], [0, 0, 5]]) == 125
    circulant = [[-2, 0, 1], [1, -2, 0], [0, 1, -2]]
    assert det_abs_exact(circulant) == abs(det3_cofactor(circulant)) == 7


def test_det_paths_agree_with_fraction_oracle():
    rng = random.Random(17)
    for _ in range(250):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        expected = abs(det_fraction(rows))
        assert abs(_det_bareiss([r[:] for r in rows])) == expected
        assert abs(_det_modular([r[:] for r in rows])) == expected
        assert det_abs_exact(rows) == expected


def test_det_modular_multi_panel():
    # crosses several 64-wide panels, compares against Bareiss
    rng = random.Random(23)
    n = 150
    rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    assert abs(_det_modular([r[:] for r in rows])) == abs(
        _det_bareiss([r[:] for r in rows])
    )


def test_det_singular_and_happy_big_entries():
    assert det_abs_exact([[1, 2], [2, 4]]) == 0
    big = 10**30
    assert det_abs_exact([[big, 0], [0, big]]) == big * big


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]
    # reduced by hand: gcd 2, |det| 8
    assert smith_normal_form([[2, 4], [6, 8]]) == [2, 4]


def test_snf_chain_product_and_nullity():
    rng = random.Random(29)
    for _ in range(150):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        factors = smith_normal_form(rows)
        assert len(factors) == n
        nonzero = [x for x in factors if x != 0]
        zeros = [x for x in factors if x == 0]
        assert factors == nonzero + zeros
        for a, b in zip(nonzero, nonzero[1:]):
            assert b % a == 0
        det = abs(det_fraction(rows))
        if det != 0:
            assert not zeros
            assert math.prod(nonzero) == det
        else:
            assert len(zeros) == n - rank_fraction(rows)


# ---------------------------------------------------------------------------
# solution counting


def test_count_solutions_examples():
    assert count_solutions([[4, 0], [0, 4]]).value == 16
    infinite = count_solutions([[0, 0], [0, 0]])
    assert not infinite.is_finite
    assert infinite.nullity == 2
    circulant = [[-2, 0, 1], [1, -2, 0], [0, 1, -2]]
    sc = count_solutions(circulant)
    assert sc.value == 7
    assert count_torus_solutions_brute(circulant) == 7


def test_count_solutions_against_enumeration():
    rng = random.Random(31)
    verified = 0
    for _ in range(300):
        n = rng.randint(1, 4)
        f = GroupRingElement(
            1, {e: rng.randint(-2, 2) for e in (-1, 0, 1)}
        )
        if f.is_zero:
            continue
        m = regular_rep_matrix(f, torus_quotient([n]))
        rows = m.tolist()
        sc = count_solutions(rows)
        det = abs(det_fraction(rows))
        if det == 0:
            assert not sc.is_finite
            assert sc.nullity == n - rank_fraction(rows)
            continue
        if det**n > 200_000:
            continue
        assert sc.value == count_torus_solutions_brute(rows)
        verified += 1
    assert verified >= 60


def test_fix_count_examples():
    assert fix_count(parse_laurent("2", 1), torus_quotient([5])).value == 32
    for n in range(1, 65):
        sc = fix_count(parse_laurent("x - 2", 1), torus_quotient([n]))
        assert sc.value == 2**n - 1
    sc = fix_count(parse_laurent("x - 1", 1), torus_quotient([6]))
    assert not sc.is_finite
    assert sc.nullity == 1


def test_fix_count_symmetries():
    rng = random.Random(37)
    cases = []
    for _ in range(25):
        rank = rng.choice([1, 2])
        if rank == 1:
            f = GroupRingElement(1, {e: rng.randint(-2, 2) for e in (-1, 0, 1)})
            shift = rng.randint(-2, 2)
            q = torus_quotient([rng.randint(1, 5)])
        else:
            f = GroupRingElement(
                2,
                {
                    (a, b): rng.randint(-2, 2)
                    for a in (-1, 0, 1)
                    for b in (-1, 0, 1)
                    if rng.random() < 0.5
                },
            )
            shift = (rng.randint(-1, 1), rng.randint(-1, 1))
            q = torus_quotient([rng.randint(1, 3), rng.randint(1, 3)])
        if f.is_zero:
            continue
        cases.append((f, shift, q))
    assert len(cases) >= 15
    for f, shift, q in cases:
        base = fix_count(f, q)
        star = fix_count(involution(f), q)
        shifted = fix_count(left_translate(f, shift), q)
        assert (base.value, base.nullity) == (star.value, star.nullity)
        assert (base.value, base.nullity) == (shifted.value, shifted.nullity)


def test_det_equals_snf_product_equals_count():
    # exact big-integer identity along the whole pipeline
    rng = random.Random(41)
    for _ in range(80):
        n = rng.randint(1, 5)
        f = GroupRingElement(1, {e: rng.randint(-2, 2) for e in (-1, 0, 1)})
        if f.is_zero:
            continue
        m = regular_rep_matrix(f, torus_quotient([n]))
        det = det_abs_exact(m)
        if det == 0:
            continue
        factors = smith_normal_form(m)
        assert math.prod(factors) == det
        assert count_solutions(m).value == det


# ---------------------------------------------------------------------------
# determinants with normalized trace, logs


def test_fk_determinant_examples():
    for n in (1, 3, 10):
        assert fk_determinant_quotient(parse_laurent("4", 1), torus_quotient([n])) == pytest.approx(4.0, abs=1e-12)
    for n in (2, 5, 20):
        expected = (2**n - 1) ** (1.0 / n)
        got = fk_determinant_quotient(parse_laurent("x - 2", 1), torus_quotient([n]))
        assert got == pytest.approx(expected, rel=1e-12)
    assert fk_determinant_quotient(parse_laurent("1", 1), torus_quotient([7])) == pytest.approx(1.0, abs=1e-15)


def test_fk_determinant_singular_raises():
    with pytest.raises(NotInvertibleError):
        fk_determinant_quotient(parse_laurent("x - 1", 1), torus_quotient([4]))


def test_log_big_int():
    assert log_big_int(1) == 0.0
    for k in (1, 10, 52, 53, 200, 5000):
        assert log_big_int(2**k) == pytest.approx(k * math.log(2), rel=1e-15)
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 60
    rng = random.Random(43)
    for _ in range(50):
        n = rng.getrandbits(rng.randint(2, 4000)) | 1
        exact = float(mp.log(mp.mpf(n)))
        assert log_big_int(n) == pytest.approx(exact, rel=1e-14)
    with pytest.raises(ValueError):
        log_big_int(0)


# ---------------------------------------------------------------------------
# entropy traces


def test_trace_bernoulli_constant():
    f = parse_laurent("3", 1)
    quotients = [torus_quotient([n]) for n in (2, 4, 8)]
    trace = entropy_trace(f, quotients)
    assert [r.h_n for r in trace.records] == pytest.approx(
        [math.log(3)] * 3, abs=1e-12
    )


def test_trace_expanding_closed_form():
    f = parse_laurent("x - 2", 1)
    quotients = [torus_quotient([n]) for n in range(1, 31)]
    trace = entropy_trace(f, quotients, reference=math.log(2))
    assert len(trace.records) == 30
    for n, record in zip(range(1, 31), trace.records):
        assert record.h_n == pytest.approx(math.log(2**n - 1) / n, rel=1e-13)
    values = [r.h_n for r in trace.records]
    assert values == sorted(values)
    assert trace.residual == pytest.approx(abs(math.log(2**30 - 1) / 30 - math.log(2)), rel=1e-9)


def test_trace_skips_singular_quotients():
    f = parse_laurent("x - 1", 1)
    trace = entropy_trace(f, [torus_quotient([4])])
    assert trace.records == []
    assert len(trace.skipped) == 1
    assert trace.skipped[0].nullity == 1
    assert trace.skipped[0].label == "Z/4"


def test_trace_kernel_caveat():
    # support element 4 dies in Z/4 but not in Z/8
    f = parse_laurent("x^4 - 3", 1)
    trace = entropy_trace(f, [torus_quotient([4]), torus_quotient([8])])
    assert any("kernel" in note and "Z/4" in note for note in trace.caveats)
    assert not any("Z/8" in note for note in trace.caveats)


def test_trace_requires_ordered_quotients():
    f = parse_laurent("x - 2", 1)
    with pytest.raises(ValueError, match="nondecreasing"):
        entropy_trace(f, [torus_quotient([4]), torus_quotient([2])])
    with pytest.raises(ValueError, match="quotient"):
        entropy_trace(f, [])


def test_bernoulli_constant_on_explicit_nonabelian_quotient():
    # k times the identity gives h = log k on any quotient, abelian or not
    from sofic import ExplicitQuotient, GroupRingElement

    from helpers import s3_table

    table, _ = s3_table()
    q = ExplicitQuotient(table, {"s": 1, "r": 3}, label="S3")
    for k in (2, 3, 5):
        f = GroupRingElement(0, {(): k})
        sc = fix_count(f, q)
        assert sc.value == k**6
        h = log_big_int(sc.value) / q.size
        assert abs(h - math.log(k)) <= 1e-12


def test_trace_rank3_and_rank4_paths():
    from sofic import mahler_quadrature

    f3 = parse_laurent("9 - x - x^-1 - y - y^-1 - z - z^-1", 3)
    reference = mahler_quadrature(f3, 32).value
    quotients = [torus_quotient([n, n, n]) for n in (2, 4)]
    trace = entropy_trace(f3, quotients, reference=reference)
    assert [r.d for r in trace.records] == [8, 64]
    assert abs(trace.records[-1].h_n - reference) < 1e-2

    f4 = parse_laurent("17 - x - x^-1 - y - y^-1 - z - z^-1 - w - w^-1", 4)
    reference4 = mahler_quadrature(f4, 12).value
    q = torus_quotient([4, 4, 4, 4])
    sc = fix_count(f4, q)
    h = log_big_int(sc.value) / q.size
    assert abs(h - reference4) < 1e-3


def test_trace_serialization_stable():
    f = parse_laurent("x - 2", 1)
    quotients = [torus_quotient([n]) for n in (1, 2, 3)]
    trace = entropy_trace(f, quotients)
    csv_text = trace.to_csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "label,d,log_fix_count,h_n"
    assert lines[1] == "Z/1,1,0.0,0.0"
    assert len(lines) == 4
    obj = json.loads(trace.to_json())
    assert obj["f_description"] == "-2 + x"
    assert [r["d"] for r in obj["records"]] == [1, 2, 3]
    assert obj["skipped"] == []
    # byte-identical on recompute
    again = entropy_trace(f, quotients)
    assert again.to_csv() == csv_text
    assert again.to_json() == trace.to_json()
