#pragma once

#include "cstar/transfer.hpp"

namespace cstar {

/// A positive linear functional f(a) = sum_b trace(density_b a_b),
/// faithful when every density is positive definite.
struct PositiveFunctional {
    std::vector<Mat> densities;
    bool faithful = false;

    static PositiveFunctional normalized_trace(const Algebra& algebra);
    static PositiveFunctional from_densities(const Algebra& algebra, std::vector<Mat> densities,
                                             const Tolerance& tol);

    Complex operator()(const Element& a) const;
};

/// One level H_n of the truncated construction: the Gram matrix of the
/// canonical basis under <.,.>_n and an orthonormal basis of the quotient
/// (Gram eigenvectors above the rank threshold, scaled to unit norm).
struct LevelSpace {
    int n = 0;
    Mat gram;         ///< dim x dim, PSD
    Mat kept_basis;   ///< dim x q, representatives of the orthonormal basis
    Mat projector;    ///< q x dim, coordinates of a class in the orthonormal basis
    int quotient_dim = 0;
};

/// The triple (H, pi, U) restricted to levels n in [-N, N].  All operator
/// matrices are expressed in the orthonormal quotient bases and computed
/// purely from Gram data.  Relation checks are only meaningful on the
/// interior levels [-N+1, N-1], where truncation does not perturb anything.
struct TruncatedRepresentation {
    Algebra algebra;
    AlgebraMap delta;
    AlgebraMap delta_star;
    PositiveFunctional functional;
    int window = 0;
    Tolerance tol;

    std::vector<LevelSpace> levels;        ///< index 0 corresponds to n = -window
    std::map<int, Mat> U_blocks;           ///< n -> matrix H_{n-1} -> H_n, n in (-N, N]
    std::map<int, Mat> Ustar_blocks;       ///< n -> matrix H_{n+1} -> H_n, n in [-N, N)

    const LevelSpace& level(int n) const;
    std::vector<int> interior_levels() const;

    /// Matrix of pi(a) on level n.
    Mat pi(const Element& a, int n) const;
};

/// Gram matrix G_n with G_ij = <E_j, E_i>_n, so that <x, y>_n = c(y)^H G_n c(x):
/// f(delta_star^n(u^* v)) for n >= 0 and f(u^* delta^{|n|}(1) v) for n <= 0.
Mat gram_matrix(const Algebra& algebra, const AlgebraMap& delta, const AlgebraMap& delta_star,
                const PositiveFunctional& f, int n);

/// Builds all level spaces and the U / U* / pi matrices for a verified
/// complete transfer pair.  Throws precondition_error if the pair is not a
/// complete transfer pair and numerical_error if a Gram matrix has an
/// eigenvalue below -eq_tol.
TruncatedRepresentation build_truncated_representation(const Algebra& algebra,
                                                       const AlgebraMap& delta,
                                                       const AlgebraMap& delta_star,
                                                       const PositiveFunctional& f, int window,
                                                       const Tolerance& tol);

/// The two Gram-level adjointness identities, equivalently that the U and U*
/// matrices are mutual adjoints level-by-level.
VerificationReport verify_lemma_adjointness(const TruncatedRepresentation& rep,
                                            const Tolerance& tol);

/// All coefficient-algebra relations on interior levels: the covariance
/// identities for U pi(a) U* and U* pi(a) U, the intertwining identity,
/// U*U = pi(delta_star(1)), UU* = pi(delta(1)), centrality of U*U, the
/// projected-product identity, span membership of the compressed basis
/// images, and faithfulness of pi at level 0.
VerificationReport verify_coefficient_relations(const TruncatedRepresentation& rep,
                                                const Tolerance& tol);

/// delta is generated by an isometry iff delta_star(1) = 1; in that case
/// U*U must be the identity on interior levels.  Also reports the equivalent
/// characterization (delta injective with hereditary range) and the largest
/// interior deviation of U*U from the identity.
VerificationReport check_isometry_corollary(const TruncatedRepresentation& rep,
                                            const Tolerance& tol);

}   // namespace cstar
