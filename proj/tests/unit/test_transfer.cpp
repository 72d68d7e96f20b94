#include "cstar/transfer.hpp"

#include "corpus.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace cstar;

namespace {

const Tolerance tol{};

// delta(lambda, x) = (0, lambda E_11) on C + M2: a complete instance whose
// delta(1) = (0, E_11) is not central.
corpus::Instance corner_embed_instance() {
    Algebra a({1, 2});
    AlgebraMap d = AlgebraMap::from_function(a, [&](const Element& x) {
        Element out = a.zero();
        out.block(1)(0, 0) = x.block(0)(0, 0);
        return out;
    });
    return {"corner_embed", a, d, std::nullopt};
}

}   // namespace

TEST_CASE("check_nondegenerate on the corpus") {
    for (const auto& inst : corpus::nondegenerate_corpus()) {
        CAPTURE(inst.name);
        VerificationReport nd = check_nondegenerate(inst.delta, *inst.delta_star, tol);
        CHECK(nd.verdict);
        CHECK(nd.notes.at("condition_i") == "true");
        CHECK(nd.notes.at("condition_ii") == "true");
    }
}

TEST_CASE("check_nondegenerate: three-block instance closed form") {
    auto inst = corpus::three_block_instance();
    // delta(delta_star(1)) = delta((1,1,0)) = (1,1,1) = delta(1)
    VerificationReport nd = check_nondegenerate(inst.delta, *inst.delta_star, tol);
    CHECK(nd.verdict);
    CHECK(nd.residuals.at("iii_unit_match") <= 1e-14);
}

TEST_CASE("kernel/image decomposition") {
    auto id = corpus::identity_instance();
    auto [k0, i0] = kernel_image_decomposition(id.delta, *id.delta_star, tol);
    CHECK(k0.block_support.empty());
    CHECK(i0.block_support == std::vector<int>{0, 1});

    auto corner = corpus::corner_instance();
    auto [k1, i1] = kernel_image_decomposition(corner.delta, *corner.delta_star, tol);
    CHECK(k1.block_support == std::vector<int>{1});
    CHECK(i1.block_support == std::vector<int>{0});

    auto three = corpus::three_block_instance();
    auto [k2, i2] = kernel_image_decomposition(three.delta, *three.delta_star, tol);
    CHECK(k2.block_support == std::vector<int>{2});
    CHECK(i2.block_support == std::vector<int>{0, 1});
}

TEST_CASE("check_hereditary") {
    auto id = corpus::identity_instance();
    CHECK(check_hereditary(id.delta, tol).verdict);

    auto corner = corpus::corner_instance();
    CHECK(check_hereditary(corner.delta, tol).verdict);

    auto doubling = corpus::doubling_instance(8, RhoKind::constant_half);
    VerificationReport h = check_hereditary(doubling.delta, tol);
    CHECK_FALSE(h.verdict);
    CHECK(h.notes.at("image_rank") == "4");
    CHECK(h.notes.at("sandwich_rank") == "8");
}

TEST_CASE("find_complete_transfer: successes") {
    auto id = corpus::identity_instance();
    auto r_id = find_complete_transfer(id.delta, tol);
    REQUIRE(r_id.ok());
    CHECK(operator_norm(r_id.certificate->P - id.algebra.identity()) <= 1e-12);
    CHECK((r_id.certificate->delta_star.matrix - Mat::Identity(id.algebra.dim(), id.algebra.dim()))
              .norm() <= 1e-12);

    auto corner = corpus::corner_instance();
    auto r_c = find_complete_transfer(corner.delta, tol);
    REQUIRE(r_c.ok());
    CHECK(r_c.certificate->P.block(0)(0, 0) == Complex(1.0));
    CHECK(r_c.certificate->P.block(1)(0, 0) == Complex(0.0));
    CHECK((r_c.certificate->delta_star.matrix - corner.delta_star->matrix).norm() <= 1e-12);

    auto shift = corpus::m2_shift_instance();
    auto r_s = find_complete_transfer(shift.delta, tol);
    REQUIRE(r_s.ok());
    CHECK(r_s.certificate->P.block(0).norm() <= 1e-12);
    CHECK((r_s.certificate->P.block(1) - Mat::Identity(2, 2)).norm() <= 1e-12);
    CHECK((r_s.certificate->delta_star.matrix - shift.delta_star->matrix).norm() <= 1e-12);

    auto cyc = corpus::cyclic4_instance();
    auto r_y = find_complete_transfer(cyc.delta, tol);
    REQUIRE(r_y.ok());
    CHECK((r_y.certificate->delta_star.matrix - cyc.delta_star->matrix).norm() <= 1e-12);
}

TEST_CASE("find_complete_transfer: hereditary failures") {
    auto three = corpus::three_block_instance();
    auto r3 = find_complete_transfer(three.delta, tol);
    CHECK_FALSE(r3.ok());
    CHECK(r3.failure == CompletionFailure::hereditary);

    auto doubling = corpus::doubling_instance(8, RhoKind::constant_half);
    auto rd = find_complete_transfer(doubling.delta, tol);
    CHECK_FALSE(rd.ok());
    CHECK(rd.failure == CompletionFailure::hereditary);
}

TEST_CASE("find_complete_transfer: zero endomorphism is trivially complete") {
    Algebra a({1, 2});
    auto r = find_complete_transfer(AlgebraMap::zero_map(a), tol);
    REQUIRE(r.ok());
    CHECK(r.certificate->trivial);
    CHECK(operator_norm(r.certificate->P) == 0.0);
}

TEST_CASE("construction is invariant under block re-enumeration") {
    auto shift = corpus::m2_shift_instance();
    auto base = find_complete_transfer(shift.delta, tol);
    REQUIRE(base.ok());

    // same instance with the two M2 blocks enumerated in the opposite order
    Algebra a({2, 2});
    Mat perm = Mat::Zero(8, 8);
    for (int k = 0; k < 4; ++k) {
        perm(k, k + 4) = 1.0;
        perm(k + 4, k) = 1.0;
    }
    AlgebraMap permuted(a, perm * shift.delta.matrix * perm);
    auto re = find_complete_transfer(permuted, tol);
    REQUIRE(re.ok());
    CHECK((perm * base.certificate->delta_star.matrix * perm - re.certificate->delta_star.matrix)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("constructed delta_star matches the brute-force least-squares oracle") {
    for (const auto& inst : corpus::complete_corpus()) {
        CAPTURE(inst.name);
        auto r = find_complete_transfer(inst.delta, tol);
        REQUIRE(r.ok());
        Mat expected = oracle::solve_complete_transfer(inst.delta);
        CHECK((r.certificate->delta_star.matrix - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("dsd identity holds for every certificate") {
    for (const auto& inst : corpus::complete_corpus()) {
        CAPTURE(inst.name);
        auto r = find_complete_transfer(inst.delta, tol);
        REQUIRE(r.ok());
        CHECK(r.certificate->residuals.at("dsd_idempotent_identity") <= tol.eq_tol);
        CHECK(r.certificate->residuals.at("P_equals_unit_image") <= tol.eq_tol);
    }
}

TEST_CASE("check_complete") {
    auto id = corpus::identity_instance();
    CHECK(check_complete(id.delta, *id.delta_star, tol).verdict);

    auto corner = corpus::corner_instance();
    CHECK(check_complete(corner.delta, *corner.delta_star, tol).verdict);

    auto doubling = corpus::doubling_instance(8, RhoKind::constant_half);
    VerificationReport c = check_complete(doubling.delta, *doubling.delta_star, tol);
    CHECK_FALSE(c.verdict);
    CHECK(c.notes.at("nondegenerate") == "true");
    CHECK(c.residuals.at("b3_completeness") >= 0.4);
}

TEST_CASE("construction succeeds iff non-degenerate and hereditary") {
    for (const auto& inst : corpus::nondegenerate_corpus()) {
        CAPTURE(inst.name);
        bool hereditary = check_hereditary(inst.delta, tol).verdict;
        bool nondeg = check_nondegenerate(inst.delta, *inst.delta_star, tol).verdict;
        CHECK(find_complete_transfer(inst.delta, tol).ok() == (nondeg && hereditary));
    }
}

TEST_CASE("compare_transfer_operators") {
    auto id = corpus::identity_instance();
    VerificationReport same = compare_transfer_operators(id.delta, *id.delta_star, *id.delta_star, tol);
    CHECK(same.verdict);
    CHECK(same.notes.at("globally_equal") == "true");

    auto d1 = corpus::doubling_instance(16, RhoKind::constant_half);
    auto d2 = corpus::doubling_instance(16, RhoKind::raised_cosine);
    VerificationReport cmp = compare_transfer_operators(d1.delta, *d1.delta_star, *d2.delta_star, tol);
    CHECK(cmp.verdict);   // equal unit image and equal restriction to delta(A)
    CHECK(cmp.notes.at("globally_equal") == "false");
    CHECK((d1.delta_star->matrix - d2.delta_star->matrix).cwiseAbs().maxCoeff() >= 0.1);

    // the affine family for the three-block delta: members agree on delta(A)
    auto t1 = corpus::three_block_instance(0.5);
    auto t2 = corpus::three_block_instance(0.25);
    VerificationReport fam = compare_transfer_operators(t1.delta, *t1.delta_star, *t2.delta_star, tol);
    CHECK(fam.verdict);
    CHECK(fam.notes.at("globally_equal") == "false");
}

TEST_CASE("check_partial_automorphism") {
    auto id = corpus::identity_instance();
    auto r_id = find_complete_transfer(id.delta, tol);
    REQUIRE(r_id.ok());
    VerificationReport pa = check_partial_automorphism(id.delta, *r_id.certificate, tol);
    CHECK(pa.verdict);
    CHECK(pa.notes.at("applicable") == "true");

    auto shift = corpus::m2_shift_instance();
    auto r_s = find_complete_transfer(shift.delta, tol);
    REQUIRE(r_s.ok());
    VerificationReport ps = check_partial_automorphism(shift.delta, *r_s.certificate, tol);
    CHECK(ps.verdict);
    CHECK(ps.residuals.at("delta_star_multiplicative") <= 1e-12);

    auto embed = corner_embed_instance();
    auto r_e = find_complete_transfer(embed.delta, tol);
    REQUIRE(r_e.ok());
    VerificationReport pe = check_partial_automorphism(embed.delta, *r_e.certificate, tol);
    CHECK_FALSE(pe.verdict);
    CHECK(pe.notes.at("applicable") == "false");
}

TEST_CASE("preconditions are enforced") {
    auto corner = corpus::corner_instance();
    AlgebraMap swap = AlgebraMap::block_assignment(corner.algebra, {1, -1});
    CHECK_THROWS_AS(check_nondegenerate(corner.delta, swap, tol), precondition_error);
    CHECK_THROWS_AS(check_complete(corner.delta, swap, tol), precondition_error);
    CHECK_THROWS_AS(compare_transfer_operators(corner.delta, swap, swap, tol), precondition_error);
}
