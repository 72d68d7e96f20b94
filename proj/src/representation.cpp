#include "cstar/representation.hpp"

#include "cstar/subspace.hpp"

namespace cstar {

PositiveFunctional PositiveFunctional::normalized_trace(const Algebra& algebra) {
    PositiveFunctional f;
    double scale = 1.0 / algebra.total_matrix_dim();
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int d = algebra.block_dim(b);
        f.densities.push_back(scale * Mat::Identity(d, d));
    }
    f.faithful = true;
    return f;
}

PositiveFunctional PositiveFunctional::from_densities(const Algebra& algebra,
                                                      std::vector<Mat> densities,
                                                      const Tolerance& tol) {
    if (static_cast<int>(densities.size()) != algebra.num_blocks())
        throw structural_error("one density matrix per block required");
    double min_eig = std::numeric_limits<double>::infinity();
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        const Mat& d = densities[b];
        if (d.rows() != algebra.block_dim(b) || d.cols() != algebra.block_dim(b))
            throw structural_error("density matrix has wrong dimension for its block");
        if ((d - d.adjoint()).norm() > tol.eq_tol)
            throw structural_error("density matrix is not self-adjoint");
        Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
        double mn = es.eigenvalues().minCoeff();
        if (mn < -tol.eq_tol) throw structural_error("density matrix is not PSD");
        min_eig = std::min(min_eig, mn);
    }
    PositiveFunctional f;
    f.densities = std::move(densities);
    f.faithful = min_eig > tol.eq_tol;
    return f;
}

Complex PositiveFunctional::operator()(const Element& a) const {
    Complex s = 0.0;
    for (size_t b = 0; b < densities.size(); ++b)
        s += (densities[b] * a.block(b)).trace();
    return s;
}

Mat gram_matrix(const Algebra& algebra, const AlgebraMap& delta, const AlgebraMap& delta_star,
                const PositiveFunctional& f, int n) {
    const int dim = algebra.dim();
    Mat g(dim, dim);
    if (n >= 0) {
        Mat power = delta_star.power(n).matrix;
        for (int i = 0; i < dim; ++i) {
            Element ei_adj = algebra.basis_element(i).adjoint();
            for (int j = 0; j < dim; ++j) {
                Vec c = power * (ei_adj * algebra.basis_element(j)).coords();
                g(i, j) = f(Element::from_coords(algebra, c));
            }
        }
    } else {
        Element mid = iterated_image_of_identity(delta, -n);
        for (int i = 0; i < dim; ++i) {
            Element left = algebra.basis_element(i).adjoint() * mid;
            for (int j = 0; j < dim; ++j)
                g(i, j) = f(left * algebra.basis_element(j));
        }
    }
    return 0.5 * (g + g.adjoint());   // kill round-off asymmetry
}

namespace {

LevelSpace make_level_space(int n, Mat gram, const Tolerance& tol) {
    const int dim = static_cast<int>(gram.rows());
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const auto& ev = es.eigenvalues();
    double lambda_max = std::max(0.0, ev.maxCoeff());
    if (ev.minCoeff() < -tol.eq_tol)
        throw numerical_error("Gram matrix at level " + std::to_string(n) +
                              " has eigenvalue " + std::to_string(ev.minCoeff()));
    std::vector<int> kept;
    for (int k = 0; k < dim; ++k)
        if (ev(k) > tol.rank_tol * lambda_max && ev(k) > 0.0) kept.push_back(k);

    LevelSpace ls;
    ls.n = n;
    ls.quotient_dim = static_cast<int>(kept.size());
    ls.kept_basis = Mat(dim, ls.quotient_dim);
    ls.projector = Mat(ls.quotient_dim, dim);
    for (int c = 0; c < ls.quotient_dim; ++c) {
        double lam = ev(kept[c]);
        ls.kept_basis.col(c) = es.eigenvectors().col(kept[c]) / std::sqrt(lam);
        ls.projector.row(c) = std::sqrt(lam) * es.eigenvectors().col(kept[c]).adjoint();
    }
    ls.gram = std::move(gram);
    return ls;
}

// Matrix of the coordinate-level map T between two quotient levels.
Mat quotient_matrix(const Mat& T, const LevelSpace& from, const LevelSpace& to) {
    return to.projector * (T * from.kept_basis);
}

}   // namespace

const LevelSpace& TruncatedRepresentation::level(int n) const {
    if (n < -window || n > window) throw structural_error("level index outside the window");
    return levels[static_cast<size_t>(n + window)];
}

std::vector<int> TruncatedRepresentation::interior_levels() const {
    std::vector<int> out;
    for (int n = -window + 1; n <= window - 1; ++n) out.push_back(n);
    return out;
}

Mat TruncatedRepresentation::pi(const Element& a, int n) const {
    Element g = a;
    if (n < 0) g = delta.power(-n).apply(a);
    Mat mult = AlgebraMap::left_multiplication(algebra, g).matrix;
    const LevelSpace& ls = level(n);
    return quotient_matrix(mult, ls, ls);
}

TruncatedRepresentation build_truncated_representation(const Algebra& algebra,
                                                       const AlgebraMap& delta,
                                                       const AlgebraMap& delta_star,
                                                       const PositiveFunctional& f, int window,
                                                       const Tolerance& tol) {
    if (window < 1) throw structural_error("window must be >= 1");
    VerificationReport pair = verify_transfer_pair(delta, delta_star, tol);
    if (!pair.verdict)
        throw precondition_error("representation requires a verified transfer pair");
    VerificationReport complete = check_complete(delta, delta_star, tol);
    if (!complete.verdict)
        throw precondition_error("representation requires a complete transfer operator "
                                 "(completeness residual " +
                                 std::to_string(complete.residuals.at("b3_completeness")) + ")");

    TruncatedRepresentation rep{algebra, delta, delta_star, f, window, tol, {}, {}, {}};
    for (int n = -window; n <= window; ++n)
        rep.levels.push_back(
            make_level_space(n, gram_matrix(algebra, delta, delta_star, f, n), tol));

    for (int n = -window + 1; n <= window; ++n) {
        Mat T = n > 0 ? delta.matrix
                      : AlgebraMap::left_multiplication(
                            algebra, iterated_image_of_identity(delta, -n + 1))
                            .matrix;
        rep.U_blocks[n] = quotient_matrix(T, rep.level(n - 1), rep.level(n));
    }
    for (int n = window - 1; n >= -window; --n) {
        Mat T = n >= 0 ? delta_star.matrix
                       : AlgebraMap::left_multiplication(
                             algebra, iterated_image_of_identity(delta, -n))
                             .matrix;
        rep.Ustar_blocks[n] = quotient_matrix(T, rep.level(n + 1), rep.level(n));
    }
    return rep;
}

VerificationReport verify_lemma_adjointness(const TruncatedRepresentation& rep,
                                            const Tolerance& tol) {
    const Algebra& A = rep.algebra;
    VerificationReport out;

    double adj = 0.0;
    for (int n = -rep.window + 1; n <= rep.window; ++n)
        adj = std::max(adj, (rep.U_blocks.at(n) - rep.Ustar_blocks.at(n - 1).adjoint()).norm());
    out.residuals["mutually_adjoint_matrices"] = adj;

    double pos_side = 0.0, neg_side = 0.0;
    const Mat& D = rep.delta.matrix;
    const Mat& DS = rep.delta_star.matrix;
    for (int n = -rep.window; n < rep.window; ++n) {
        const Mat& gn = rep.level(n).gram;
        const Mat& gn1 = rep.level(n + 1).gram;
        if (n >= 0) {
            pos_side = std::max(pos_side, (gn1 * D - DS.adjoint() * gn).norm());
        } else {
            Mat L = AlgebraMap::left_multiplication(A, iterated_image_of_identity(rep.delta, -n))
                        .matrix;
            neg_side = std::max(neg_side, (gn1 * L - L.adjoint() * gn).norm());
        }
    }
    out.residuals["gram_identity_nonnegative_levels"] = pos_side;
    out.residuals["gram_identity_negative_levels"] = neg_side;

    out.set_verdict_from_residuals(tol.eq_tol);
    return out;
}

VerificationReport verify_coefficient_relations(const TruncatedRepresentation& rep,
                                                const Tolerance& tol) {
    const Algebra& A = rep.algebra;
    VerificationReport out;
    const auto interior = rep.interior_levels();

    Element unit = A.identity();
    Element d1 = rep.delta.image_of_identity();
    Element s1 = rep.delta_star.image_of_identity();

    double cov_down = 0.0, cov_up = 0.0, intertwine = 0.0;
    double uu_proj = 0.0, uustar_proj = 0.0, central = 0.0, projected_product = 0.0;
    for (int n : interior) {
        const Mat& u_in = rep.U_blocks.at(n);              // H_{n-1} -> H_n
        const Mat& u_out = rep.U_blocks.at(n + 1);         // H_n -> H_{n+1}
        const Mat& us_down = rep.Ustar_blocks.at(n - 1);   // H_n -> H_{n-1}
        const Mat& us_in = rep.Ustar_blocks.at(n);         // H_{n+1} -> H_n

        Mat ustar_u = us_in * u_out;
        Mat u_ustar = u_in * us_down;
        uu_proj = std::max(uu_proj, (ustar_u - rep.pi(s1, n)).norm());
        uustar_proj = std::max(uustar_proj, (u_ustar - rep.pi(d1, n)).norm());

        for (int k = 0; k < A.dim(); ++k) {
            Element e = A.basis_element(k);
            Mat pi_n = rep.pi(e, n);
            cov_down = std::max(
                cov_down, (u_in * rep.pi(e, n - 1) * us_down - rep.pi(rep.delta.apply(e), n)).norm());
            cov_up = std::max(
                cov_up,
                (us_in * rep.pi(e, n + 1) * u_out - rep.pi(rep.delta_star.apply(e), n)).norm());
            intertwine = std::max(
                intertwine, (u_in * rep.pi(e, n - 1) - rep.pi(rep.delta.apply(e), n) * u_in).norm());
            central = std::max(central, (ustar_u * pi_n - pi_n * ustar_u).norm());
        }

        for (int i = 0; i < A.dim(); ++i) {
            Mat pi_a = rep.pi(A.basis_element(i), n);
            for (int j = 0; j < A.dim(); ++j) {
                Mat w = us_in * rep.pi(A.basis_element(j), n + 1) * u_out;
                projected_product =
                    std::max(projected_product, (ustar_u * pi_a * w - pi_a * w).norm());
            }
        }
    }
    out.residuals["covariance_U_pi_Ustar"] = cov_down;
    out.residuals["covariance_Ustar_pi_U"] = cov_up;
    out.residuals["intertwining"] = intertwine;
    out.residuals["UstarU_equals_pi_of_transfer_unit"] = uu_proj;
    out.residuals["UUstar_equals_pi_of_endo_unit"] = uustar_proj;
    out.residuals["UstarU_central"] = central;
    out.residuals["projected_product_identity"] = projected_product;

    // span membership of the compressed basis images over all interior levels
    int stacked_rows = 0;
    for (int n : interior) {
        int q = rep.level(n).quotient_dim;
        stacked_rows += q * q;
    }
    Mat span(stacked_rows, A.dim());
    Mat down_candidates(stacked_rows, A.dim());
    Mat up_candidates(stacked_rows, A.dim());
    for (int k = 0; k < A.dim(); ++k) {
        Element e = A.basis_element(k);
        int row = 0;
        for (int n : interior) {
            const Mat& u_in = rep.U_blocks.at(n);
            const Mat& u_out = rep.U_blocks.at(n + 1);
            const Mat& us_down = rep.Ustar_blocks.at(n - 1);
            const Mat& us_in = rep.Ustar_blocks.at(n);
            Mat pi_e = rep.pi(e, n);
            Mat down = u_in * rep.pi(e, n - 1) * us_down;
            Mat up = us_in * rep.pi(e, n + 1) * u_out;
            int q = rep.level(n).quotient_dim;
            span.block(row, k, q * q, 1) = pi_e.reshaped();
            down_candidates.block(row, k, q * q, 1) = down.reshaped();
            up_candidates.block(row, k, q * q, 1) = up.reshaped();
            row += q * q;
        }
    }
    out.residuals["compressed_down_in_pi_span"] =
        containment_residual(span, down_candidates, tol.rank_tol);
    out.residuals["compressed_up_in_pi_span"] =
        containment_residual(span, up_candidates, tol.rank_tol);

    // faithfulness of pi at level 0
    int q0 = rep.level(0).quotient_dim;
    Mat embedding(q0 * q0, A.dim());
    for (int k = 0; k < A.dim(); ++k)
        embedding.col(k) = rep.pi(A.basis_element(k), 0).reshaped();
    double min_sv = 0.0;
    if (embedding.size() > 0) {
        Eigen::JacobiSVD<Mat> svd(embedding);
        min_sv = svd.singularValues().minCoeff();
    }
    out.notes["pi_level0_min_singular_value"] = std::to_string(min_sv);
    out.residuals["pi_faithfulness_defect"] =
        (!rep.functional.faithful || min_sv > tol.rank_tol) ? 0.0 : 1.0;

    out.set_verdict_from_residuals(tol.eq_tol);
    return out;
}

VerificationReport check_isometry_corollary(const TruncatedRepresentation& rep,
                                            const Tolerance& tol) {
    const Algebra& A = rep.algebra;
    VerificationReport out;

    double unit_gap = operator_norm(rep.delta_star.image_of_identity() - A.identity());
    bool expect_isometry = unit_gap <= tol.eq_tol;
    out.notes["transfer_unit_gap"] = std::to_string(unit_gap);

    double worst = 0.0;
    for (int n : rep.interior_levels()) {
        Mat ustar_u = rep.Ustar_blocks.at(n) * rep.U_blocks.at(n + 1);
        int q = rep.level(n).quotient_dim;
        worst = std::max(worst, (ustar_u - Mat::Identity(q, q)).norm());
    }
    out.notes["max_UstarU_identity_gap"] = std::to_string(worst);

    bool injective = numeric_rank(rep.delta.matrix, tol.rank_tol) == A.dim();
    bool hereditary = check_hereditary(rep.delta, tol).verdict;
    out.notes["delta_injective"] = injective ? "true" : "false";
    out.notes["hereditary_range"] = hereditary ? "true" : "false";
    out.notes["isometry"] = expect_isometry ? "true" : "false";

    if (expect_isometry) {
        out.residuals["UstarU_minus_identity"] = worst;
        // the equivalent characterization must agree
        out.residuals["characterization_disagreement"] = (injective && hereditary) ? 0.0 : 1.0;
    } else {
        out.residuals["characterization_disagreement"] = (injective && hereditary) ? 1.0 : 0.0;
    }
    out.set_verdict_from_residuals(tol.eq_tol);
    return out;
}

}   // namespace cstar
