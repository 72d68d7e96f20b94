#pragma once

#include "cstar/maps.hpp"

#include <optional>

namespace cstar {

/// A closed two-sided ideal of a block algebra: a subset of blocks, carried
/// both as the index set and as the corresponding central projection.
struct IdealDescription {
    std::vector<int> block_support;
    Element projection;
};

/// Witness that delta admits a complete transfer operator: the central
/// projection P = delta_star(1) and the (unique) delta_star, together with
/// the residuals of the identities certifying them.
struct CompletenessCertificate {
    Element P;
    AlgebraMap delta_star;
    std::map<std::string, double> residuals;
    bool trivial = false;   ///< delta == 0, everything holds vacuously
};

enum class CompletionFailure {
    none,
    kernel_not_block_aligned,
    projection_mismatch,    ///< delta(P) != delta(1)
    non_injective,          ///< delta not injective on P*Algebra
    hereditary,             ///< delta(A) != delta(1) A delta(1)
    solve_residual,         ///< column solve for delta_star inconsistent
};

std::string to_string(CompletionFailure f);

struct CompleteTransferResult {
    std::optional<CompletenessCertificate> certificate;
    CompletionFailure failure = CompletionFailure::none;
    std::string diagnostic;

    bool ok() const { return certificate.has_value(); }
};

/// Evaluates the three equivalent non-degeneracy conditions independently:
/// (i) delta∘delta_star is a conditional expectation onto delta(A),
/// (ii) delta∘delta_star∘delta = delta, (iii) delta(delta_star(1)) = delta(1).
/// The verdict is condition (iii); disagreement among the three beyond
/// tolerance raises a numerical_error.
/// Precondition: verify_transfer_pair passed.
VerificationReport check_nondegenerate(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                       const Tolerance& tol,
                                       int samples = kDefaultPositivitySamples,
                                       std::uint64_t seed = kDefaultSeed);

/// A = Ker delta ⊕ Im delta_star as block-supported ideals.
/// Precondition: check_nondegenerate passed.
std::pair<IdealDescription, IdealDescription> kernel_image_decomposition(
    const AlgebraMap& delta, const AlgebraMap& delta_star, const Tolerance& tol);

/// delta(A) hereditary, i.e. span{delta(E)} == span{delta(1) E delta(1)}.
VerificationReport check_hereditary(const AlgebraMap& delta, const Tolerance& tol);

/// Constructs the complete transfer operator for delta when it exists:
/// P = identity off the kernel blocks, delta_star assembled column-by-column
/// by inverting delta on P*Algebra against delta(1) E delta(1).  On failure,
/// names the first violated existence condition.
CompleteTransferResult find_complete_transfer(const AlgebraMap& delta, const Tolerance& tol);

/// delta∘delta_star(E) = delta(1) E delta(1) on basis; also records the
/// implied non-degeneracy verdict.
/// Precondition: verify_transfer_pair passed.
VerificationReport check_complete(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                  const Tolerance& tol);

/// Two non-degenerate transfer operators for the same delta share the unit
/// image, the range ideal, and the restriction to delta(A); global equality
/// is reported but not required.
VerificationReport compare_transfer_operators(const AlgebraMap& delta, const AlgebraMap& ds1,
                                              const AlgebraMap& ds2, const Tolerance& tol);

/// When delta(1) is central, delta and delta_star restrict to mutually
/// inverse *-isomorphisms between the ideals delta_star(1)A and delta(1)A,
/// and delta_star is itself an endomorphism.  Returns a not-applicable
/// verdict when delta(1) is not central.
VerificationReport check_partial_automorphism(const AlgebraMap& delta,
                                              const CompletenessCertificate& cert,
                                              const Tolerance& tol);

}   // namespace cstar
