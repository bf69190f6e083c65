from __future__ import annotations

import json

import pytest

from kit import library, library_modules
from notears.checker import axiom_closure
from notears.driver import STDLIB_DIR, load_module, manifest
from notears.syntax import App, Const, Lam, Pair, Refl, Var
from oracles import expected

# -- manifest


def test_manifest_order():
    assert manifest() == [
        "Prelude", "PathOps", "Equiv", "EquivInverse", "HLevels", "Singleton", "SigmaAssoc",
        "SigmaReindex", "SigmaFiberwise", "ThreeForTwo", "Connectedness", "Suspension", "SuspConn", "Examples",
    ]


def test_manifest_inventory_matches_files():
    data = json.loads((STDLIB_DIR / "manifest.json").read_text())
    by_name = {m.name: m for m in library_modules().modules}
    for entry in data["files"]:
        assert by_name[entry["module"]].declared == entry["declarations"]


def test_axiom_census_is_exact():
    data = json.loads((STDLIB_DIR / "manifest.json").read_text())
    env = library()
    assert sorted(env.axioms) == data["axioms"]
    assert axiom_closure("suspConn", env) == set(data["axioms"])


def test_building_blocks_stand_alone():
    for name in ("Singleton", "SigmaAssoc", "SigmaReindex", "SigmaFiberwise", "ThreeForTwo"):
        env = load_module(name)
        assert "Susp" not in env and not env.axioms


# -- paths


@pytest.mark.trivial
def test_ap_of_identity_on_refl(lib):
    ctx = lib.ctx([("A", "U"), ("a", "A")])
    assert lib.nf("ap A A (idfun A) a a (refl a)", ctx) == Refl(Var(0))


@pytest.mark.trivial
def test_transport_along_refl(lib):
    ctx = lib.ctx([("A", "U"), ("C", "A -> U"), ("a", "A"), ("c", "C a")])
    assert lib.nf("transport A C a a (refl a) c", ctx) == Var(0)


@pytest.mark.derived("trans-refl-refl")
def test_trans_of_refls(lib):
    ctx = lib.ctx([("A", "U"), ("a", "A")])
    assert lib.nf("trans A a a a (refl a) (refl a)", ctx) == expected("trans-refl-refl")


def test_homotopy_unfolds(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("f", "A -> B"), ("g", "A -> B")])
    assert lib.conv("homotopy A B f g", "(x : A) -> Id B (f x) (g x)", "U", ctx)


# -- equivalences


@pytest.mark.trivial
def test_identity_is_an_equivalence(lib):
    ctx = lib.ctx([("A", "U")])
    lib.check("idIsEquiv A", "isEquiv A A (idfun A)", ctx)


@pytest.mark.trivial
def test_equivalence_from_inverse_of_identity(lib):
    ctx = lib.ctx([("A", "U")])
    lib.check(
        "equivFromInverse A A (idfun A) (idfun A) (\\a. refl a) (\\b. refl b)", "isEquiv A A (idfun A)", ctx
    )


@pytest.mark.claim("path-space-projection-is-an-equivalence")
def test_path_space_projection(lib):
    ctx = lib.ctx([("A", "U")])
    lib.check("singlProjEquiv A", "isEquiv ((x : A) * (y : A) * Id A x y) A (\\p. p.1)", ctx)


def test_bi_invertible_shape(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("f", "A -> B")])
    assert lib.conv(
        "isEquiv A B f",
        "((g : B -> A) * ((b : B) -> Id B (f (g b)) b)) * ((h : B -> A) * ((a : A) -> Id A (h (f a)) a))",
        "U",
        ctx,
    )


@pytest.mark.trivial
def test_inverse_of_identity(lib):
    ctx = lib.ctx([("B", "U"), ("b", "B")])
    assert lib.nf("invMap B B (idEquiv B) b", ctx) == Var(0)


@pytest.mark.trivial
def test_inverse_is_an_equivalence(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("e", "Equiv A B")])
    lib.check("invIsEquiv A B e", "isEquiv B A (invMap A B e)", ctx)


@pytest.mark.claim("inverse-of-the-constants-equivalence")
def test_inverse_of_connectedness_instance(lib):
    ctx = lib.ctx(
        [("n", "Nat"), ("A", "U"), ("cA", "isConn n A"), ("B", "U"), ("hB", "isHLevel (suc n) B"),
         ("bN", "B"), ("bS", "B")]
    )
    lib.check(
        "invMap (Id B bN bS) (A -> Id B bN bS) (constEquivAt n A cA B hB bN bS)",
        "(A -> Id B bN bS) -> Id B bN bS",
        ctx,
    )


def test_adjoint_coherence_signature(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("e", "Equiv A B"), ("a", "A")])
    lib.check(
        "adjCoh A B e.1 (invMap A B e) (invLeft A B e) (invRight A B e) a",
        "Id (Id B (e.1 (invMap A B e (e.1 a))) (e.1 a))"
        " (ap A B e.1 (invMap A B e (e.1 a)) a (invLeft A B e a))"
        " (epsAdj A B e.1 (invMap A B e) (invLeft A B e) (invRight A B e) (e.1 a))",
        ctx,
    )


# -- h-levels


@pytest.mark.trivial
def test_level_zero_is_contractibility(lib):
    assert lib.nf("isHLevel 0 Unit") == lib.nf("isContr Unit")


@pytest.mark.trivial
def test_hlevel_step_is_definitional(lib):
    ctx = lib.ctx([("n", "Nat"), ("B", "U"), ("w", "isHLevel (suc n) B"), ("x", "B"), ("y", "B")])
    assert lib.nf("hlevelId n B w x y", ctx) == lib.nf("w x y", ctx)
    assert lib.conv("isHLevel (suc n) B", "(x y : B) -> isHLevel n (Id B x y)", "U", ctx)


@pytest.mark.derived("unit-contr-witness")
def test_unit_is_contractible(lib):
    witness = expected("unit-contr-witness")
    assert lib.env.declaration("unitIsContr").kind.body == witness
    lib.check("(star, \\u. refl star)", "isContr Unit")


# -- singletons


@pytest.mark.trivial
def test_singleton_center(lib):
    ctx = lib.ctx([("X", "U"), ("x", "X")])
    assert lib.nf("(singlContr X x).1", ctx) == Pair(Var(0), Refl(Var(0)))


@pytest.mark.claim("last-leg-is-the-singleton-projection")
def test_projection_equivalence_at_codomain(lib):
    ctx = lib.ctx([("B", "U")])
    lib.check("singlProjEquiv B", "isEquiv (pathSpace B) B (endpointProj B)", ctx)


@pytest.mark.derived("singl-section")
def test_section_of_projection(lib):
    ctx = lib.ctx([("X", "U"), ("x", "X")])
    assert lib.nf("singlSection X x", ctx) == expected("singl-section")


# -- associativity of sums


@pytest.mark.trivial
def test_reassociation_round_trip(lib):
    ctx = lib.ctx([("A", "U"), ("B", "A -> U"), ("C", "((a : A) * B a) -> U"), ("a", "A"), ("b", "B a"), ("c", "C (a, b)")])
    round_trip = "sigmaAssocInv A B C (sigmaAssocMap A B C (a, (b, c)))"
    assert lib.nf(round_trip, ctx) == lib.nf("(a, (b, c))", ctx)


@pytest.mark.trivial
def test_reassociation_is_an_equivalence(lib):
    ctx = lib.ctx([("A", "U"), ("B", "A -> U"), ("C", "((a : A) * B a) -> U")])
    lib.check("sigmaAssocIsEquiv A B C", "isEquiv ((a : A) * (b : B a) * C (a, b)) ((p : (a : A) * B a) * C p) (sigmaAssocMap A B C)", ctx)


@pytest.mark.derived("sigma-assoc-instance")
def test_reassociation_with_dependent_family(lib):
    family = "Nat (\\_. Nat) (\\p. Id Nat p.1 p.1)"
    lib.check(f"sigmaAssoc {family}", "Equiv ((a : Nat) * (b : Nat) * Id Nat a a) ((p : Nat * Nat) * Id Nat p.1 p.1)")
    ctx = lib.ctx([("n", "Nat"), ("m", "Nat")])
    assert lib.nf(f"sigmaAssocMap {family} (n, (m, refl n))", ctx) == expected("sigma-assoc-instance")


# -- reindexing


@pytest.mark.trivial
def test_reindex_along_identity(lib):
    ctx = lib.ctx([("A", "U"), ("Y", "A -> U"), ("p", "(a : A) * Y a")])
    assert lib.conv("reindexMap A A (idEquiv A) Y p", "p", "(a : A) * Y a", ctx)


@pytest.mark.claim("reindexing-sums-along-an-equivalence")
def test_reindex_signature(lib):
    lib.check(
        "sigmaReindexIsEquiv",
        "(A B : U) -> (e : Equiv A B) -> (Y : B -> U) -> isEquiv ((a : A) * Y (e.1 a)) ((b : B) * Y b) (\\p. (e.1 p.1, p.2))",
    )


@pytest.mark.derived("reindex-nat")
def test_reindex_small_instance(lib):
    t = "reindexMap Nat Nat (idEquiv Nat) (\\n. Id Nat n n) (0, refl 0)"
    assert lib.nf(t) == expected("reindex-nat")


def test_reindex_inverse_along_identity(lib):
    ctx = lib.ctx([("A", "U"), ("Y", "A -> U"), ("a", "A"), ("y", "Y a")])
    assert lib.nf("reindexInv A A (idEquiv A) Y (a, y)", ctx) == Pair(Var(1), Var(0))


# -- fiberwise maps


@pytest.mark.claim("total-map-keeps-first-component")
def test_total_map_first_component(lib):
    ctx = lib.ctx([("A", "U"), ("P", "A -> U"), ("Q", "A -> U"), ("f", "(a : A) -> P a -> Q a"), ("p", "(a : A) * P a")])
    assert lib.nf("(totalMap A P Q f p).1", ctx) == lib.nf("p.1", ctx)


@pytest.mark.trivial
def test_total_map_of_identities(lib):
    ctx = lib.ctx([("A", "U"), ("P", "A -> U"), ("p", "(a : A) * P a")])
    assert lib.conv("totalMap A P P (\\a. idfun (P a)) p", "p", "(a : A) * P a", ctx)


@pytest.mark.trivial
def test_total_equivalence_small_instance(lib):
    lib.check(
        "totalEquiv Nat (\\_. Nat) (\\_. Nat) (\\a. idfun Nat) (\\a. idIsEquiv Nat)",
        "isEquiv (Nat * Nat) (Nat * Nat) (totalMap Nat (\\_. Nat) (\\_. Nat) (\\a. idfun Nat))",
    )


# -- 3-for-2


@pytest.mark.trivial
def test_three_for_two_on_identities(lib):
    ctx = lib.ctx([("A", "U")])
    args = "A A A (idfun A) (idfun A) (idfun A) (\\a. refl a)"
    lib.check(f"threeForTwoComp {args} (idIsEquiv A) (idIsEquiv A)", "isEquiv A A (idfun A)", ctx)
    lib.check(f"threeForTwoLeft {args} (idIsEquiv A) (idIsEquiv A)", "isEquiv A A (idfun A)", ctx)
    lib.check(f"threeForTwoRight {args} (idIsEquiv A) (idIsEquiv A)", "isEquiv A A (idfun A)", ctx)


@pytest.mark.claim("three-for-two-closes-the-triangle")
def test_three_for_two_on_the_constants_triangle(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("w", "isEquiv (Susp A -> B) B (evalN A B)")])
    lib.check(
        "threeForTwoRight B (Susp A -> B) B (consts (Susp A) B) (evalN A B) (idfun B) (\\b. refl b) w (idIsEquiv B)",
        "isEquiv B (Susp A -> B) (\\b a. b)",
        ctx,
    )


@pytest.mark.derived("compose-variant1")
def test_composition_via_first_variant(lib):
    t = "threeForTwoComp Nat Nat Nat (idfun Nat) (idfun Nat) (\\n. n) (\\n. refl n) (idIsEquiv Nat) (idIsEquiv Nat)"
    lib.check(t, "isEquiv Nat Nat (\\n. n)")
    assert lib.nf(f"({t}).1.1") == expected("compose-variant1")


def test_three_for_two_bundle(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("C", "U"), ("f", "A -> B"), ("g", "B -> C"), ("h", "A -> C"),
                   ("H", "(a : A) -> Id C (h a) (g (f a))")])
    _, ty = lib.infer("threeForTwo A B C f g h H", ctx)
    from notears.nbe import VSigma

    assert isinstance(ty, VSigma)


# -- connectedness


@pytest.mark.trivial
def test_connectedness_is_a_pi_over_the_universe(lib):
    ctx = lib.ctx([("n", "Nat"), ("A", "U")])
    nf = lib.nf("isConn n A", ctx)
    assert nf.__class__.__name__ == "Pi" and nf.domain == lib.term("U")


@pytest.mark.trivial
def test_constants_map_beta(lib):
    ctx = lib.ctx([("B", "U"), ("A", "U"), ("b0", "B"), ("a0", "A")])
    assert lib.nf("(\\b. \\a. b) b0 a0", ctx) == Var(1)


@pytest.mark.derived("unit-conn-section")
def test_unit_is_connected(lib):
    for n in range(4):
        lib.check(f"unitConn {n}", f"isConn {n} Unit")
    ctx = lib.ctx([("n", "Nat"), ("B", "U"), ("hB", "isHLevel n B")])
    assert lib.nf("(unitConn n B hB).1.1", ctx) == expected("unit-conn-section")


# -- suspension


@pytest.mark.claim("canonical-map-components")
def test_first_component_of_suspension_map(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("g", "Susp A -> B")])
    assert lib.nf("(suspUp A B g).1", ctx) == App(Var(0), App(Const("north"), Var(2)))


@pytest.mark.trivial
def test_suspension_map_of_constant(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U"), ("b", "B")])
    assert lib.nf("(suspUp A B (\\s. b)).1", ctx) == Var(0)


@pytest.mark.derived("axioms-suspUp-trace")
def test_suspension_map_trace():
    assert sorted(axiom_closure("suspUp", library())) == expected("axioms-suspUp-trace")


# -- the theorem


@pytest.mark.claim("suspension-raises-connectedness")
def test_theorem_signature(lib):
    lib.check("suspConn", "(n : Nat) -> (A : U) -> isConn n A -> isConn (suc n) (Susp A)")


@pytest.mark.claim("constants-triangle-is-definitional")
def test_constants_triangle(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U")])
    lib.check("\\b. refl b", "(b : B) -> Id B b (evalN A B (consts (Susp A) B b))", ctx)


@pytest.mark.claim("constants-triangle-is-definitional")
def test_constants_triangle_normal_form(lib):
    ctx = lib.ctx([("A", "U"), ("B", "U")])
    assert lib.nf("\\b. evalN A B (consts (Susp A) B b)", ctx) == Lam("b", Var(0))


@pytest.mark.claim("decomposition-diagram-is-definitional")
def test_decomposition_diagram(lib):
    ctx = lib.ctx([("n", "Nat"), ("A", "U"), ("cA", "isConn n A"), ("B", "U"), ("hB", "isHLevel (suc n) B")])
    lib.check("\\g. refl (g (north A))", "(g : Susp A -> B) -> Id B (evalN A B g) (diagramLeg n A cA B hB g)", ctx)


def test_evaluation_is_an_equivalence(lib):
    ctx = lib.ctx([("n", "Nat"), ("A", "U"), ("cA", "isConn n A"), ("B", "U"), ("hB", "isHLevel (suc n) B")])
    lib.check("evalNIsEquiv n A cA B hB", "isEquiv (Susp A -> B) B (evalN A B)", ctx)


def test_theorem_applies_to_unit(lib):
    lib.check("suspConn 0 Unit (unitConn 0)", "isConn 1 (Susp Unit)")


# -- examples


@pytest.mark.trivial
def test_unit_pair_contractible(lib):
    lib.check("unitPairContr", "isContr (Unit * Unit)")


@pytest.mark.trivial
def test_unit_singleton_contractible(lib):
    lib.check("unitSinglContr", "isContr ((y : Unit) * Id Unit star y)")


@pytest.mark.derived("unit-singl-center")
def test_unit_singleton_center(lib):
    assert lib.nf("unitSinglCenter") == expected("unit-singl-center")
