#include "cstar/transfer.hpp"

#include "cstar/subspace.hpp"

#include <sstream>

namespace cstar {

namespace {

// Coordinate injection dim x p for the span of the given blocks.
Mat block_injection(const Algebra& A, const std::vector<int>& blocks) {
    int p = 0;
    for (int b : blocks) p += A.block_dim(b) * A.block_dim(b);
    Mat s = Mat::Zero(A.dim(), p);
    int col = 0;
    for (int b : blocks) {
        int d = A.block_dim(b);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s(A.basis_index(b, i, j), col++) = 1.0;
    }
    return s;
}

std::vector<int> complement_blocks(const Algebra& A, const std::vector<int>& blocks) {
    std::vector<int> out;
    for (int b = 0; b < A.num_blocks(); ++b)
        if (std::find(blocks.begin(), blocks.end(), b) == blocks.end()) out.push_back(b);
    return out;
}

Element projection_onto_blocks(const Algebra& A, const std::vector<int>& blocks) {
    Element p = A.zero();
    for (int b : blocks) p.block(b) = Mat::Identity(A.block_dim(b), A.block_dim(b));
    return p;
}

// Blocks annihilated by delta.  Throws if the numeric null space of delta is
// larger than the span of those blocks (kernel not an ideal-aligned subspace).
std::vector<int> kernel_block_support(const AlgebraMap& delta, const Tolerance& tol,
                                      bool* aligned) {
    const Algebra& A = delta.algebra;
    std::vector<int> support;
    int killed = 0;
    for (int b = 0; b < A.num_blocks(); ++b) {
        int d = A.block_dim(b);
        bool dead = true;
        for (int i = 0; i < d && dead; ++i)
            for (int j = 0; j < d && dead; ++j)
                if (operator_norm(delta.apply_basis(A.basis_index(b, i, j))) > tol.eq_tol)
                    dead = false;
        if (dead) {
            support.push_back(b);
            killed += d * d;
        }
    }
    int nullity = A.dim() - numeric_rank(delta.matrix, tol.rank_tol);
    *aligned = (nullity == killed);
    return support;
}

double sandwich_residual_b3(const AlgebraMap& delta, const AlgebraMap& delta_star) {
    const Algebra& A = delta.algebra;
    Element d1 = delta.image_of_identity();
    double r = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element e = A.basis_element(k);
        r = std::max(r, operator_norm(delta.apply(delta_star.apply(e)) - d1 * e * d1));
    }
    return r;
}

void require_transfer_pair(const AlgebraMap& delta, const AlgebraMap& delta_star,
                           const Tolerance& tol, const char* caller) {
    VerificationReport pair = verify_transfer_pair(delta, delta_star, tol);
    if (!pair.verdict)
        throw precondition_error(std::string(caller) +
                                 ": (delta, delta_star) is not a verified transfer pair");
}

}   // namespace

std::string to_string(CompletionFailure f) {
    switch (f) {
        case CompletionFailure::none: return "none";
        case CompletionFailure::kernel_not_block_aligned: return "kernel not block aligned";
        case CompletionFailure::projection_mismatch: return "projection mismatch";
        case CompletionFailure::non_injective: return "non-injectivity";
        case CompletionFailure::hereditary: return "hereditary failure";
        case CompletionFailure::solve_residual: return "solve residual overflow";
    }
    return "unknown";
}

VerificationReport check_nondegenerate(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                       const Tolerance& tol, int samples, std::uint64_t seed) {
    require_transfer_pair(delta, delta_star, tol, "check_nondegenerate");
    const Algebra& A = delta.algebra;
    AlgebraMap expectation = delta.compose(delta_star);   // E = delta ∘ delta_star

    VerificationReport rep;

    // (i) E is a conditional expectation onto delta(A)
    double idem = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element ek = expectation.apply_basis(k);
        idem = std::max(idem, operator_norm(expectation.apply(ek) - ek));
    }
    rep.residuals["i_idempotent"] = idem;
    rep.residuals["i_range_in_image"] =
        containment_residual(delta.matrix, expectation.matrix, tol.rank_tol);

    double bimod = 0.0;
    for (int i = 0; i < A.dim(); ++i) {
        Element di = delta.apply_basis(i);
        for (int j = 0; j < A.dim(); ++j) {
            Element dj = delta.apply_basis(j);
            for (int x = 0; x < A.dim(); ++x) {
                Element ex = A.basis_element(x);
                bimod = std::max(bimod,
                                 operator_norm(expectation.apply(di * ex * dj) -
                                               di * expectation.apply(ex) * dj));
            }
        }
    }
    rep.residuals["i_bimodule"] = bimod;

    VerificationReport pos = verify_positive_map(expectation, tol, samples, seed);
    rep.residuals["i_positivity_violation"] = pos.residuals.at("positivity_violation");

    // (ii) delta ∘ delta_star ∘ delta = delta
    double comp = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element dk = delta.apply_basis(k);
        comp = std::max(comp, operator_norm(expectation.apply(dk) - dk));
    }
    rep.residuals["ii_composition"] = comp;

    // (iii) delta(delta_star(1)) = delta(1)
    double iii = operator_norm(delta.apply(delta_star.image_of_identity()) -
                               delta.image_of_identity());
    rep.residuals["iii_unit_match"] = iii;

    bool verdict_i = idem <= tol.eq_tol && rep.residuals["i_range_in_image"] <= tol.eq_tol &&
                     bimod <= tol.eq_tol && pos.verdict;
    bool verdict_ii = comp <= tol.eq_tol;
    bool verdict_iii = iii <= tol.eq_tol;
    rep.notes["condition_i"]   = verdict_i ? "true" : "false";
    rep.notes["condition_ii"]  = verdict_ii ? "true" : "false";
    rep.notes["condition_iii"] = verdict_iii ? "true" : "false";
    if (verdict_i != verdict_iii || verdict_ii != verdict_iii)
        throw numerical_error("non-degeneracy conditions (i)/(ii)/(iii) disagree");

    rep.verdict = verdict_iii;
    return rep;
}

std::pair<IdealDescription, IdealDescription> kernel_image_decomposition(
    const AlgebraMap& delta, const AlgebraMap& delta_star, const Tolerance& tol) {
    VerificationReport nd = check_nondegenerate(delta, delta_star, tol);
    if (!nd.verdict)
        throw precondition_error("kernel_image_decomposition: transfer operator is degenerate");

    const Algebra& A = delta.algebra;
    bool aligned = false;
    std::vector<int> kernel_blocks = kernel_block_support(delta, tol, &aligned);
    if (!aligned)
        throw structural_error(
            "null space of delta is not a sum of blocks; delta is not a valid endomorphism");

    Element s1 = delta_star.image_of_identity();
    std::vector<int> image_blocks = central_projection_support(A, s1, tol);

    // Im delta_star == delta_star(1) * Algebra as subspaces
    Mat image_span = block_injection(A, image_blocks);
    if (!same_column_space(delta_star.matrix, image_span, tol.rank_tol))
        throw numerical_error(
            "Im delta_star does not match delta_star(1)*Algebra (non-degeneracy violation)");

    // the two ideals intersect trivially and span the algebra
    std::vector<int> all = kernel_blocks;
    all.insert(all.end(), image_blocks.begin(), image_blocks.end());
    std::sort(all.begin(), all.end());
    bool partition = static_cast<int>(all.size()) == A.num_blocks() &&
                     std::adjacent_find(all.begin(), all.end()) == all.end();
    if (!partition)
        throw numerical_error(
            "Ker delta and Im delta_star do not decompose the algebra (non-degeneracy violation)");

    IdealDescription ker{kernel_blocks, projection_onto_blocks(A, kernel_blocks)};
    IdealDescription im{image_blocks, projection_onto_blocks(A, image_blocks)};
    return {ker, im};
}

VerificationReport check_hereditary(const AlgebraMap& delta, const Tolerance& tol) {
    VerificationReport endo = verify_star_endomorphism(delta, tol);
    if (!endo.verdict)
        throw precondition_error("check_hereditary: delta is not a *-endomorphism");

    const Algebra& A = delta.algebra;
    Element d1 = delta.image_of_identity();
    Mat sandwich(A.dim(), A.dim());
    for (int k = 0; k < A.dim(); ++k)
        sandwich.col(k) = (d1 * A.basis_element(k) * d1).coords();

    VerificationReport rep;
    rep.residuals["image_in_sandwich"] =
        containment_residual(sandwich, delta.matrix, tol.rank_tol);
    rep.residuals["sandwich_in_image"] =
        containment_residual(delta.matrix, sandwich, tol.rank_tol);
    rep.notes["image_rank"] = std::to_string(numeric_rank(delta.matrix, tol.rank_tol));
    rep.notes["sandwich_rank"] = std::to_string(numeric_rank(sandwich, tol.rank_tol));
    rep.verdict = same_column_space(delta.matrix, sandwich, tol.rank_tol);
    return rep;
}

CompleteTransferResult find_complete_transfer(const AlgebraMap& delta, const Tolerance& tol) {
    VerificationReport endo = verify_star_endomorphism(delta, tol);
    if (!endo.verdict)
        throw precondition_error("find_complete_transfer: delta is not a *-endomorphism");

    const Algebra& A = delta.algebra;
    CompleteTransferResult result;

    // degenerate input delta == 0: P = 0, delta_star = 0, vacuously complete
    if (delta.matrix.norm() <= tol.eq_tol) {
        CompletenessCertificate cert{A.zero(), AlgebraMap::zero_map(A), {}, true};
        cert.residuals["b3_completeness"] = 0.0;
        cert.residuals["P_equals_unit_image"] = 0.0;
        result.certificate = std::move(cert);
        return result;
    }

    bool aligned = false;
    std::vector<int> kernel_blocks = kernel_block_support(delta, tol, &aligned);
    if (!aligned) {
        result.failure = CompletionFailure::kernel_not_block_aligned;
        result.diagnostic = "null space of delta is not a sum of blocks";
        return result;
    }

    std::vector<int> p_blocks = complement_blocks(A, kernel_blocks);
    Element P = projection_onto_blocks(A, p_blocks);
    Element d1 = delta.image_of_identity();

    double proj_gap = operator_norm(delta.apply(P) - d1);
    if (proj_gap > tol.eq_tol) {
        result.failure = CompletionFailure::projection_mismatch;
        result.diagnostic = "delta(P) != delta(1), gap " + std::to_string(proj_gap);
        return result;
    }

    Mat inject = block_injection(A, p_blocks);
    Mat restricted = delta.matrix * inject;   // delta on P*Algebra
    if (numeric_rank(restricted, tol.rank_tol) != static_cast<int>(inject.cols())) {
        result.failure = CompletionFailure::non_injective;
        result.diagnostic = "delta is not injective on P*Algebra";
        return result;
    }

    if (!check_hereditary(delta, tol).verdict) {
        result.failure = CompletionFailure::hereditary;
        result.diagnostic = "delta(A) is a proper subspace of delta(1)*A*delta(1)";
        return result;
    }

    // assemble delta_star column-by-column: delta_star(E) is the unique
    // x in P*Algebra with delta(x) = delta(1) E delta(1)
    Eigen::ColPivHouseholderQR<Mat> solver(restricted);
    Mat ds = Mat::Zero(A.dim(), A.dim());
    for (int k = 0; k < A.dim(); ++k) {
        Vec rhs = (d1 * A.basis_element(k) * d1).coords();
        Vec xi = solver.solve(rhs);
        double res = (restricted * xi - rhs).norm();
        if (res > tol.eq_tol * std::max(1.0, rhs.norm())) {
            result.failure = CompletionFailure::solve_residual;
            result.diagnostic = "inconsistent solve for basis column " + std::to_string(k);
            return result;
        }
        ds.col(k) = inject * xi;
    }
    AlgebraMap delta_star(A, std::move(ds));

    CompletenessCertificate cert{P, delta_star, {}, false};
    double b2 = 0.0;
    for (int i = 0; i < A.dim(); ++i) {
        Element di = delta.apply_basis(i);
        Element ei = A.basis_element(i);
        for (int j = 0; j < A.dim(); ++j) {
            Element ej = A.basis_element(j);
            b2 = std::max(b2, operator_norm(delta_star.apply(di * ej) -
                                            ei * delta_star.apply(ej)));
        }
    }
    cert.residuals["b2_transfer_identity"] = b2;
    cert.residuals["b3_completeness"] = sandwich_residual_b3(delta, delta_star);

    double dsd = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element sk = delta_star.apply_basis(k);
        dsd = std::max(dsd, operator_norm(
                                delta_star.apply(delta.apply(sk)) - sk));
    }
    cert.residuals["dsd_idempotent_identity"] = dsd;
    cert.residuals["P_equals_unit_image"] =
        operator_norm(P - delta_star.image_of_identity());

    for (const auto& [name, r] : cert.residuals) {
        if (r > tol.eq_tol) {
            result.failure = CompletionFailure::solve_residual;
            result.diagnostic = "constructed delta_star violates " + name +
                                " with residual " + std::to_string(r);
            return result;
        }
    }
    result.certificate = std::move(cert);
    return result;
}

VerificationReport check_complete(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                  const Tolerance& tol) {
    require_transfer_pair(delta, delta_star, tol, "check_complete");

    VerificationReport rep;
    rep.residuals["b3_completeness"] = sandwich_residual_b3(delta, delta_star);
    rep.verdict = rep.residuals["b3_completeness"] <= tol.eq_tol;

    VerificationReport nd = check_nondegenerate(delta, delta_star, tol);
    rep.notes["nondegenerate"] = nd.verdict ? "true" : "false";
    if (rep.verdict && !nd.verdict)
        throw numerical_error("complete transfer operator failed the non-degeneracy check");
    return rep;
}

VerificationReport compare_transfer_operators(const AlgebraMap& delta, const AlgebraMap& ds1,
                                              const AlgebraMap& ds2, const Tolerance& tol) {
    if (!check_nondegenerate(delta, ds1, tol).verdict ||
        !check_nondegenerate(delta, ds2, tol).verdict)
        throw precondition_error("compare_transfer_operators: both pairs must be non-degenerate");

    const Algebra& A = delta.algebra;
    VerificationReport rep;
    rep.residuals["unit_image_difference"] =
        operator_norm(ds1.image_of_identity() - ds2.image_of_identity());

    double restr = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element dk = delta.apply_basis(k);
        restr = std::max(restr, operator_norm(ds1.apply(dk) - ds2.apply(dk)));
    }
    rep.residuals["restriction_to_image_difference"] = restr;

    bool same_range = same_column_space(ds1.matrix, ds2.matrix, tol.rank_tol);
    rep.notes["same_range_ideal"] = same_range ? "true" : "false";

    double global = (ds1.matrix - ds2.matrix).cwiseAbs().maxCoeff();
    rep.notes["globally_equal"] = global <= tol.eq_tol ? "true" : "false";
    rep.notes["global_max_entry_difference"] = std::to_string(global);

    rep.verdict = same_range && rep.max_residual() <= tol.eq_tol;
    return rep;
}

VerificationReport check_partial_automorphism(const AlgebraMap& delta,
                                              const CompletenessCertificate& cert,
                                              const Tolerance& tol) {
    const Algebra& A = delta.algebra;
    const AlgebraMap& delta_star = cert.delta_star;
    Element d1 = delta.image_of_identity();

    VerificationReport rep;
    double central = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element e = A.basis_element(k);
        central = std::max(central, operator_norm(d1 * e - e * d1));
    }
    if (central > tol.eq_tol) {
        rep.notes["applicable"] = "false";
        rep.notes["reason"] = "delta(1) is not central";
        rep.verdict = false;
        return rep;
    }
    rep.notes["applicable"] = "true";

    std::vector<int> dom_blocks = central_projection_support(A, cert.P, tol);
    std::vector<int> ran_blocks = central_projection_support(A, d1, tol);

    auto basis_of = [&](const std::vector<int>& blocks) {
        std::vector<int> ks;
        for (int b : blocks) {
            int d = A.block_dim(b);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) ks.push_back(A.basis_index(b, i, j));
        }
        return ks;
    };

    Element pI = cert.P;
    Element pJ = d1;

    double inv_domain = 0.0, inv_range = 0.0, into_range = 0.0, into_domain = 0.0;
    for (int k : basis_of(dom_blocks)) {
        Element e = A.basis_element(k);
        Element img = delta.apply(e);
        inv_domain = std::max(inv_domain, operator_norm(delta_star.apply(img) - e));
        into_range = std::max(into_range, operator_norm(img - pJ * img * pJ));
    }
    for (int k : basis_of(ran_blocks)) {
        Element e = A.basis_element(k);
        Element img = delta_star.apply(e);
        inv_range = std::max(inv_range, operator_norm(delta.apply(img) - e));
        into_domain = std::max(into_domain, operator_norm(img - pI * img * pI));
    }
    rep.residuals["inverse_on_domain_ideal"] = inv_domain;
    rep.residuals["inverse_on_range_ideal"] = inv_range;
    rep.residuals["delta_maps_into_range_ideal"] = into_range;
    rep.residuals["delta_star_maps_into_domain_ideal"] = into_domain;

    // part 2: delta_star is multiplicative on the whole algebra
    double mult = 0.0;
    for (int i = 0; i < A.dim(); ++i) {
        Element ei = A.basis_element(i);
        Element si = delta_star.apply(ei);
        for (int j = 0; j < A.dim(); ++j) {
            Element ej = A.basis_element(j);
            mult = std::max(mult, operator_norm(delta_star.apply(ei * ej) -
                                                si * delta_star.apply(ej)));
        }
    }
    rep.residuals["delta_star_multiplicative"] = mult;

    double star = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element e = A.basis_element(k);
        star = std::max(star, operator_norm(delta_star.apply(e.adjoint()) -
                                            delta_star.apply(e).adjoint()));
    }
    rep.residuals["delta_star_star_preserving"] = star;

    rep.set_verdict_from_residuals(tol.eq_tol);
    return rep;
}

}   // namespace cstar
