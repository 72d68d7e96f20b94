#pragma once

#include "cstar/algebra.hpp"

#include <cstdint>
#include <functional>

namespace cstar {

/// A linear map on the algebra's underlying vector space, stored as a
/// dim x dim matrix acting on canonical-basis coordinates.  Plays the role
/// of an endomorphism delta or a transfer operator delta_* once verified.
struct AlgebraMap {
    Algebra algebra;
    Mat matrix;

    AlgebraMap(Algebra alg, Mat m);

    static AlgebraMap identity_map(const Algebra& algebra);
    static AlgebraMap zero_map(const Algebra& algebra);
    /// Builds the matrix column-by-column from an element-level function.
    static AlgebraMap from_function(const Algebra& algebra,
                                    const std::function<Element(const Element&)>& fn);
    /// x -> g x as a coordinate matrix.
    static AlgebraMap left_multiplication(const Algebra& algebra, const Element& g);
    /// x -> x g as a coordinate matrix.
    static AlgebraMap right_multiplication(const Algebra& algebra, const Element& g);
    /// Per-output-block source assignment (negative entry = zero block).
    /// delta(a)_b = a_{assignment[b]}; source and target block dims must match.
    static AlgebraMap block_assignment(const Algebra& algebra, const std::vector<int>& assignment);

    Element apply(const Element& x) const;
    Element apply_basis(int k) const;
    Element image_of_identity() const;

    /// this after other: (this ∘ other)(x) = this(other(x)).
    AlgebraMap compose(const AlgebraMap& other) const;
    AlgebraMap power(int n) const;
};

/// delta^n(1) for n >= 0.
Element iterated_image_of_identity(const AlgebraMap& delta, int n);

/// Checks multiplicativity and *-preservation on all canonical basis pairs
/// (exact by bilinearity) and that m(1) is a projection.  Unitality is
/// recorded in the notes but not required for the verdict.
VerificationReport verify_star_endomorphism(const AlgebraMap& m, const Tolerance& tol);

/// Randomized positivity check on rank-one elements vv*.  A false verdict is
/// conclusive; a true verdict is sampled evidence.  The minimum eigenvalue
/// encountered is recorded in the notes.
VerificationReport verify_positive_map(const AlgebraMap& m, const Tolerance& tol,
                                       int samples, std::uint64_t seed);

inline constexpr int kDefaultPositivitySamples = 64;
inline constexpr std::uint64_t kDefaultSeed = 0x5eed0001u;

/// Verifies that delta_star is a transfer operator for delta: the transfer
/// identity and its symmetrized form on all basis pairs, the delta(1)
/// absorption identities, centrality of delta_star(1), and sampled positivity.
/// Precondition: verify_star_endomorphism(delta) passes.
VerificationReport verify_transfer_pair(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                        const Tolerance& tol,
                                        int samples = kDefaultPositivitySamples,
                                        std::uint64_t seed = kDefaultSeed);

}   // namespace cstar
