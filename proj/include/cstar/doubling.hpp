#pragma once

#include "cstar/maps.hpp"

namespace cstar {

enum class RhoKind { constant_half, raised_cosine, user };

/// Finite model of the circle-doubling endomorphism on C^N (diagonal algebra
/// over the grid x_j = j/N): delta is composition with j -> 2j mod N and
/// delta_star is the rho-weighted sum over doubling-map preimages.
/// A non-degenerate transfer pair that is never complete (for N >= 4 the
/// range of delta is a proper subalgebra while delta(1) = 1).
struct DoublingInstance {
    int grid_size = 0;
    std::vector<double> rho;
    Algebra algebra;
    AlgebraMap delta;
    AlgebraMap delta_star;
};

/// Builds the instance and certifies the rho constraint
/// rho_{j+N/2} = 1 - rho_j exactly (within 1e-12 for user vectors) as well
/// as the transfer identity at construction.
DoublingInstance make_doubling_instance(int grid_size, RhoKind kind,
                                        const std::vector<double>* user_rho = nullptr);

}   // namespace cstar
