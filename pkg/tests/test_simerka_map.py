import random

import pytest

from simerka.arith import FactoredRational
from simerka.composition import compose, power, power_product
from simerka.forms import QForm, is_principal, normalize, normalize_representation, principal_form, reduced_forms
from simerka.simerka_map import (
    CHEAP,
    Effort,
    InertPrime,
    NotSmooth,
    build_factor_base,
    default_base_bound,
    prime_form,
    simerka_value,
    smooth_search,
)

from oracles import fundamental_discriminants, kronecker_brute

FR = FactoredRational


def test_prime_form_examples():
    assert prime_form(-10079, 7).form == (7, 1, 360)
    assert prime_form(-121271, 2).form == (2, 1, 15159)
    assert prime_form(-1061486612, 3).form == (3, 2, 88457218)
    assert prime_form(-1061486612, 11).form == (11, 10, 24124698)
    assert prime_form(-1061486612, 13).form == (13, 10, 20413206)
    pf = prime_form(-20, 5)
    assert pf.ramified and pf.form == (5, 0, 1)
    with pytest.raises(InertPrime):
        prime_form(-20, 11)


def test_factor_base_examples():
    base = build_factor_base(-10079, 7)
    expected = [p for p in (2, 3, 5, 7) if kronecker_brute(-10079, p) != -1]
    assert base.labels == expected
    assert {2, 5} <= set(build_factor_base(-20, 10).labels)
    labels = build_factor_base(-121271, 31).labels
    assert {2, 3, 5, 7, 11, 19, 23, 29, 31} <= set(labels)
    for pf in build_factor_base(-121271, 200).primes:
        assert pf.form.disc == -121271 and pf.form.a == pf.p
        assert pf.ramified == (121271 % pf.p == 0)


def test_factor_base_exact_membership():
    for d in (-23, -84, -10079, -121271, -2184499):
        base = build_factor_base(d, 300)
        want = [p for p in range(2, 301) if all(p % q for q in range(2, p)) and kronecker_brute(d, p) != -1]
        assert base.labels == want


def test_conductor_primes_left_out():
    # -180 = -20 * 3^2: the form (3, 0, 15) is not primitive
    assert 3 not in build_factor_base(-180, 20).labels
    with pytest.raises(ValueError):
        prime_form(-180, 3)


def test_default_bound():
    assert default_base_bound(-10079) == 57
    assert default_base_bound(-20) == 2
    d = -1061486612
    assert default_base_bound(d) == 2592


def test_simerka_value_examples():
    q = QForm(180, -17, 193)
    base = build_factor_base(q.disc, 10)
    assert simerka_value(q, base) == FR({2: -2, 3: 2, 5: 1})
    base = build_factor_base(-121271, 31)
    assert simerka_value(QForm(7581, -5, 4), base) == FR({3: 1, 7: -1, 19: -2})
    assert simerka_value(QForm(1210, -97, 27), base) == FR({2: -1, 5: 1, 11: -2})
    assert simerka_value(principal_form(-121271), base).is_one()


def test_simerka_value_not_smooth():
    base = build_factor_base(-121271, 5)
    with pytest.raises(NotSmooth) as e:
        simerka_value(QForm(7581, -5, 4), base)
    assert e.value.cofactor == 7 * 19 * 19


def test_prime_forms_map_to_their_prime():
    base = build_factor_base(-121271, 100)
    for pf in base.primes:
        assert simerka_value(pf.form, base) == FR({pf.p: 1})


def test_value_class_matches_form():
    # (a, B, C) ~ prod I_p^v_p, checked by composition
    rng = random.Random(8)
    for d in (-10079, -121271, -2184499, -1061486612):
        base = build_factor_base(d, 200)
        for _ in range(40):
            x = [rng.randint(-30, 30) if rng.random() < 0.3 else 0 for _ in base.primes]
            q = power_product(base.forms, x, d)
            for val, _ in smooth_search(q, base):
                v = base.vector(val)
                assert power_product(base.forms, v, d) == q


def test_smooth_search_table_rows():
    base = build_factor_base(-121271, 31)
    q2 = base.primes[0].form
    hits = {v for v, _ in smooth_search(power(q2, 5), base)}
    # 957 = 3*11*29 and 1015 = 5*7*29 appear, up to the sign of each prime
    shapes = {tuple(sorted(p for p, _ in v.items())) for v in hits}
    assert (3, 11, 29) in shapes and (5, 7, 29) in shapes
    hits = {v for v, _ in smooth_search(power(q2, 7), base)}
    assert FR({2: -8}) in hits
    hits = {v for v, _ in smooth_search(principal_form(-121271), base)}
    assert FR() in hits


def test_smooth_search_provenance_and_effort():
    base = build_factor_base(-10079, 57)
    q = QForm(5, 1, 504)
    rich = smooth_search(q, base, Effort(scan_bound=10))
    poor = smooth_search(q, base, CHEAP)
    assert {v for v, _ in poor} <= {v for v, _ in rich}
    assert all(isinstance(p, str) and "=" in p for _, p in rich)


def test_ramified_exponents_are_bits():
    for d in (-20, -84, -2184499, -4 * 1155):
        base = build_factor_base(d, 100)
        for f in reduced_forms(d)[:60]:
            for val, _ in smooth_search(f, base):
                for pf in base.primes:
                    if pf.ramified:
                        assert val[pf.p] in (0, 1)


def _even_ramified(val, base):
    return FR((p, e % 2 if base.primes[base.index[p]].ramified else e) for p, e in val.items())


def test_inversion_property():
    rng = random.Random(21)
    ds = fundamental_discriminants(20000)
    done = 0
    while done < 1000:
        d = rng.choice(ds)
        base = build_factor_base(d)
        cl = reduced_forms(d)
        q = rng.choice(cl)
        x, y = rng.randint(-6, 6), rng.randint(-6, 6)
        try:
            f = normalize_representation(q, x, y)
        except ValueError:
            continue
        try:
            r = simerka_value(f, base)
        except NotSmooth:
            continue
        a, b, c = q
        g = normalize_representation(QForm(a, -b, c), x, -y)
        assert g.a == f.a
        assert simerka_value(g, base) == _even_ramified(r.inverse(), base)
        done += 1


def test_homomorphism_property():
    # r1 on Q1 and r2 on Q2 give r1*r2 on Q1*Q2 up to a value of the
    # principal class: the quotient's prime-form product must be principal
    rng = random.Random(22)
    ds = fundamental_discriminants(20000)
    done = 0
    while done < 1000:
        d = rng.choice(ds)
        base = build_factor_base(d)
        cl = reduced_forms(d)
        q1, q2 = rng.choice(cl), rng.choice(cl)
        h1, h2 = smooth_search(q1, base), smooth_search(q2, base)
        h3 = smooth_search(compose(q1, q2), base)
        if not (h1 and h2 and h3):
            continue
        r1, r2, r3 = rng.choice(h1)[0], rng.choice(h2)[0], rng.choice(h3)[0]
        quotient = r1 * r2 / r3
        assert is_principal(power_product(base.forms, base.vector(quotient), d))
        done += 1


def test_reduced_smooth_value_is_normalized_input():
    base = build_factor_base(-10079, 57)
    q = QForm(5, 11, 510)  # not normalized; B is translated first
    assert simerka_value(q, base) == simerka_value(normalize(q), base)
