"""Tests for ambient groups, spec parsing, and the analyzer pipeline."""

import random

import pytest

from verbalclosure.ambient import (
    AmbientGroup,
    DInf,
    GroupSpec,
    NotAnInvolution,
    NotInfiniteOrder,
    NotInQ,
    NotInverted,
    SpecParseError,
    Zed,
    ZedMod,
    analyze,
    build_retraction,
    g_solution,
    image_of_a_squared,
    parse_factor,
    parse_word,
    square_data,
    validate_spec,
    verify_retraction,
    verify_solution_in_G,
    word_to_text,
)
from verbalclosure.dihedral import DihedralElement
from verbalclosure.lattice import mat_vec
from verbalclosure.words import y_var


def spec4():
    return validate_spec(GroupSpec([DInf(), DInf()], "b1*b2", "a1^3*a2^5"))


# -- parsing ----------------------------------------------------------------


def test_parse_word():
    assert parse_word("a1^3*a2^5") == (("a1", 3), ("a2", 5))
    assert parse_word('"b1*b2"') == (("b1", 1), ("b2", 1))
    assert parse_word("1") == ()
    assert parse_word("t1^-2") == (("t1", -2),)
    with pytest.raises(SpecParseError):
        parse_word("a1^")
    with pytest.raises(SpecParseError):
        parse_word("a1**b2")
    assert word_to_text((("a1", 3), ("b1", 1))) == "a1^3*b1"
    assert word_to_text(()) == "1"


def test_parse_factor():
    assert parse_factor("DInf") == DInf()
    assert parse_factor("Zed") == Zed()
    assert parse_factor("ZedMod(6)") == ZedMod(6)
    with pytest.raises(SpecParseError):
        parse_factor("Free")


def test_spec_from_text_variants():
    text = """
    # a comment
    groupspec v1
    factors = [DInf, DInf]
    b = b1*b2
    a = a1^3*a2^5
    """
    spec = GroupSpec.from_text(text)
    assert spec.factors == (DInf(), DInf())
    assert spec.a_word == (("a1", 3), ("a2", 5))
    one_line = ('groupspec v1\nfactors = [DInf, ZedMod(3)]; b = "b1"; '
                'a = "a1"\n')
    spec2 = GroupSpec.from_text(one_line)
    assert spec2.factors == (DInf(), ZedMod(3))
    # round trip through to_text
    spec3 = GroupSpec.from_text(spec.to_text())
    assert spec3.factors == spec.factors
    assert spec3.a_word == spec.a_word and spec3.b_word == spec.b_word


def test_spec_from_text_errors():
    with pytest.raises(SpecParseError):
        GroupSpec.from_text("factors = [DInf]\nb = b1\na = a1\n")
    with pytest.raises(SpecParseError):
        GroupSpec.from_text("groupspec v2\nfactors = [DInf]\nb = b1\na = a1\n")
    with pytest.raises(SpecParseError):
        GroupSpec.from_text("groupspec v1\nfactors = [DInf]\nb = b1\n")
    with pytest.raises(SpecParseError):
        GroupSpec.from_text("groupspec v1\nfactors = [DInf]\nnonsense\n"
                            "b = b1\na = a1\n")


# -- group arithmetic -------------------------------------------------------


def test_ambient_group_axioms():
    group = AmbientGroup([DInf(), Zed(), ZedMod(6)])
    rng = random.Random(10)
    for _ in range(100):
        x = group.random_element(rng, 10)
        y = group.random_element(rng, 10)
        z = group.random_element(rng, 10)
        assert group.mul(group.mul(x, y), z) == group.mul(x, group.mul(y, z))
        assert group.mul(x, group.inv(x)) == group.identity
        assert group.mul(x, group.identity) == x
        assert group.pow(x, 3) == group.mul(group.mul(x, x), x)
        assert group.pow(x, -2) == group.inv(group.mul(x, x))


def test_generator_elements():
    group = AmbientGroup([DInf(), Zed(), ZedMod(6)])
    assert group.generator_element("a1") == (DihedralElement(1, 0), 0, 0)
    assert group.generator_element("b1") == (DihedralElement(0, 1), 0, 0)
    assert group.generator_element("t2") == (DihedralElement(0, 0), 1, 0)
    assert group.generator_element("c3") == (DihedralElement(0, 0), 0, 1)
    with pytest.raises(SpecParseError):
        group.generator_element("a2")


def test_validate_spec_errors():
    with pytest.raises(NotAnInvolution):
        validate_spec(GroupSpec([DInf()], "a1", "a1"))
    with pytest.raises(NotInfiniteOrder):
        validate_spec(GroupSpec([DInf()], "b1", "b1"))
    with pytest.raises(NotInverted):
        validate_spec(GroupSpec([DInf(), Zed()], "b1", "t2"))
    # valid: the Zed coordinate of a is zero
    validate_spec(GroupSpec([DInf(), Zed()], "b1", "a1"))


# -- square subgroup --------------------------------------------------------


def test_square_data_coordinates():
    spec = spec4()
    data = square_data(spec)
    assert data.c_names == ["a1", "b1", "a2", "b2"]
    assert data.presentation.free_rank == 2
    assert data.presentation.torsion_order == 1
    assert image_of_a_squared(spec, data) == (3, 5)


def test_square_data_odd_and_even_torsion():
    spec = validate_spec(GroupSpec([DInf(), ZedMod(3), ZedMod(4)],
                                   "b1", "a1"))
    data = square_data(spec)
    # odd modulus: no quotient generator, full factor is the square subgroup
    assert data.c_names == ["a1", "b1", "c3"]
    assert data.presentation.torsion_order == 3 * 2
    assert data.presentation.invariant_factors == [6]  # Z/3 + Z/2 = Z/6
    # 2 generates Z/3, so the odd residue 1 has a square-subgroup coordinate
    g = spec.group
    elt = g.identity[:1] + (1, 0)
    assert data.q_coordinates(elt) == (0, 2, 0)
    with pytest.raises(NotInQ):
        # generator of the even cyclic factor: odd residue, not a square
        data.q_coordinates(g.generator_element("c3"))
    with pytest.raises(NotInQ):
        data.q_coordinates(g.generator_element("a1"))


def test_every_square_lies_in_q():
    rng = random.Random(14)
    spec = validate_spec(GroupSpec([DInf(), Zed(), ZedMod(4), ZedMod(5)],
                                   "b1", "a1"))
    data = square_data(spec)
    for _ in range(200):
        g = spec.group.random_element(rng, 30)
        data.q_coordinates(spec.group.mul(g, g))  # must not raise


def test_action_matrices_match_conjugation():
    spec = spec4()
    data = square_data(spec)
    group = spec.group
    for d, A in zip(data.d_elements, data.module.actions):
        for l, root in enumerate(data.q_roots):
            s = group.mul(root, root)
            conj = group.mul(group.mul(d, s), group.inv(d))
            col = data.q_coordinates(conj)
            unit = tuple(1 if i == l else 0 for i in range(len(data.q_roots)))
            assert mat_vec(A, unit) == col


def test_coset_bits():
    spec = spec4()
    data = square_data(spec)
    group = spec.group
    assert data.coset_bits(spec.h_b) == (0, 1, 0, 1)
    assert data.coset_bits(spec.h_a) == (1, 0, 1, 0)
    assert data.coset_bits(group.identity) == (0, 0, 0, 0)
    # bits are a homomorphism to C
    rng = random.Random(3)
    for _ in range(50):
        g = group.random_element(rng, 10)
        h = group.random_element(rng, 10)
        gh = tuple(a ^ b for a, b in zip(data.coset_bits(g),
                                         data.coset_bits(h)))
        assert data.coset_bits(group.mul(g, h)) == gh


# -- analyzer ---------------------------------------------------------------


def test_analyze_witness_case():
    verdict = analyze(spec4())
    assert verdict.kind == "not-verbally-closed"
    eq = verdict.equation
    assert eq.rhs_exponent == 2 ** 17
    assert sorted(k for k in eq.k_values if k) == [3, 5]
    assert verdict.certificate.is_valid()
    assert verify_solution_in_G(eq, verdict.solution, verdict.spec)


def test_analyze_retract_cases():
    for b, a in [("b1", "a1"), ("b1*b2", "a1*a2^5"), ("b1*b2", "a1^4*a2")]:
        spec = validate_spec(GroupSpec([DInf(), DInf()], b, a))
        verdict = analyze(spec)
        assert verdict.is_retract, (b, a)
        rho = verdict.retraction
        assert rho.apply(spec.h_a) == spec.h_a
        assert rho.apply(spec.h_b) == spec.h_b
        assert verify_retraction(rho, spec, samples=300, bound=25, seed=2)


def test_g_solution_matches_paper_assignment():
    spec = spec4()
    data = square_data(spec)
    verdict = analyze(spec)
    sol = verdict.solution
    group = spec.group
    assert sol["x1"] == group.generator_element("a1")
    assert sol["x2"] == group.generator_element("b1")
    assert sol["x3"] == group.generator_element("a2")
    assert sol["x4"] == group.generator_element("b2")
    nontrivial = {k: v for k, v in sol.items()
                  if k.startswith("y") and v != group.identity}
    assert set(nontrivial.values()) == {group.generator_element("a1"),
                                        group.generator_element("a2")}


def test_verify_solution_rejects_wrong_assignments():
    spec = spec4()
    verdict = analyze(spec)
    eq = verdict.equation
    group = spec.group
    all_identity = {name: group.identity for name in eq.variables()}
    assert not verify_solution_in_G(eq, all_identity, spec)
    perturbed = dict(verdict.solution)
    # swap the two square roots
    ys = [k for k, v in perturbed.items()
          if k.startswith("y") and v != group.identity]
    perturbed[ys[0]], perturbed[ys[1]] = perturbed[ys[1]], perturbed[ys[0]]
    assert not verify_solution_in_G(eq, perturbed, spec)


def test_retraction_projection_case():
    spec = validate_spec(GroupSpec([DInf(), DInf()], "b1", "a1"))
    verdict = analyze(spec)
    rho = verdict.retraction
    group = spec.group
    # the retraction is the projection onto the first factor
    rng = random.Random(9)
    for _ in range(100):
        g = group.random_element(rng, 20)
        expect = (g[0], DihedralElement(0, 0))
        assert rho.apply(g) == expect


def test_retraction_kills_zed_factor():
    spec = validate_spec(GroupSpec([DInf(), Zed()], "b1", "a1"))
    verdict = analyze(spec)
    t1 = spec.group.generator_element("t2")
    assert verdict.retraction.apply(t1) == spec.group.identity
    assert verify_retraction(verdict.retraction, spec, samples=300, bound=25,
                             seed=4)


def test_retraction_with_torsion_factors():
    for factor in (ZedMod(3), ZedMod(4)):
        spec = validate_spec(GroupSpec([DInf(), factor], "b1", "a1"))
        verdict = analyze(spec)
        assert verdict.is_retract
        assert verify_retraction(verdict.retraction, spec, samples=300,
                                 bound=25, seed=5)


def test_verify_retraction_rejects_broken_map():
    spec = validate_spec(GroupSpec([DInf(), DInf()], "b1", "a1"))
    verdict = analyze(spec)
    rho = verdict.retraction
    broken = type(rho)(spec=spec, data=rho.data,
                       sign_character=rho.sign_character,
                       functional=tuple(2 * x for x in rho.functional),
                       complement_basis=rho.complement_basis,
                       torsion_invariants=rho.torsion_invariants)
    assert not verify_retraction(broken, spec, samples=50, bound=10, seed=0)

    class Collapse:
        def apply(self, g):
            return spec.group.identity

    assert not verify_retraction(Collapse(), spec, samples=10, bound=5,
                                 seed=0)


def test_verdict_invariance_under_factor_reorder_and_inverse():
    cases = [
        ("b1*b2", "a1^3*a2^5"),
        ("b1*b2", "a1*a2^5"),
        ("b1*b2", "a1^2*a2^3"),
    ]
    for b, a in cases:
        base = analyze(validate_spec(GroupSpec([DInf(), DInf()], b, a))).kind
        # swap the two factors (rename generators 1 <-> 2)
        swapped_b = b.replace("b1", "bX").replace("b2", "b1").replace("bX", "b2")
        swapped_a = a.replace("a1", "aX").replace("a2", "a1").replace("aX", "a2")
        k2 = analyze(validate_spec(
            GroupSpec([DInf(), DInf()], swapped_b, swapped_a))).kind
        assert k2 == base
        # replace a by its inverse
        inv_a = "*".join(f"{name}^{-e}" for name, e in parse_word(a))
        k3 = analyze(validate_spec(GroupSpec([DInf(), DInf()], b, inv_a))).kind
        assert k3 == base


def test_simple_iff_retraction_builds():
    rng = random.Random(19)
    for _ in range(20):
        p = rng.randint(-5, 5)
        q = rng.randint(-5, 5)
        if p == 0 and q == 0:
            continue
        a = f"a1^{p}*a2^{q}" if q else f"a1^{p}"
        if p == 0:
            a = f"a2^{q}"
        spec = validate_spec(GroupSpec([DInf(), DInf()], "b1*b2", a))
        data = square_data(spec)
        rep = data.module.is_simple(image_of_a_squared(spec, data))
        if rep.simple:
            rho = build_retraction(spec, data, image_of_a_squared(spec, data),
                                   rep.witness_character)
            assert rho.apply(spec.h_a) == spec.h_a
        else:
            verdict = analyze(spec)
            assert verdict.kind == "not-verbally-closed"


def test_analyze_filler_and_n_squares():
    spec = spec4()
    verdict = analyze(spec, filler=2, n_squares=2)
    eq = verdict.equation
    assert eq.filler == 2 and eq.n_squares == 2
    assert verdict.certificate.is_valid()
    assert verify_solution_in_G(eq, verdict.solution, spec)
    # unused second square slots are identity
    group = spec.group
    for ci in range(len(eq.k_values)):
        assert verdict.solution[y_var(ci, 2)] == group.identity
