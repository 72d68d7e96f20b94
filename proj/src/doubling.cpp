#include "cstar/doubling.hpp"

#include <cmath>
#include <numbers>

namespace cstar {

namespace {

constexpr double kRhoConstraintTol = 1e-12;

std::vector<double> build_rho(int n, RhoKind kind, const std::vector<double>* user) {
    std::vector<double> rho(n);
    switch (kind) {
        case RhoKind::constant_half:
            std::fill(rho.begin(), rho.end(), 0.5);
            break;
        case RhoKind::raised_cosine:
            // second half set by the constraint so it holds exactly
            for (int j = 0; j < n / 2; ++j)
                rho[j] = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * j / n));
            for (int j = 0; j < n / 2; ++j) rho[j + n / 2] = 1.0 - rho[j];
            break;
        case RhoKind::user:
            if (!user || static_cast<int>(user->size()) != n)
                throw structural_error("user rho vector must have length N");
            rho = *user;
            break;
    }
    for (int j = 0; j < n; ++j) {
        if (rho[j] < -kRhoConstraintTol || rho[j] > 1.0 + kRhoConstraintTol)
            throw structural_error("rho[" + std::to_string(j) + "] outside [0,1]");
    }
    for (int j = 0; j < n / 2; ++j) {
        if (std::abs(rho[j] + rho[j + n / 2] - 1.0) > kRhoConstraintTol)
            throw structural_error("rho constraint rho[j] + rho[j+N/2] = 1 violated at j = " +
                                   std::to_string(j));
    }
    return rho;
}

}   // namespace

DoublingInstance make_doubling_instance(int grid_size, RhoKind kind,
                                        const std::vector<double>* user_rho) {
    if (grid_size < 4 || grid_size % 2 != 0)
        throw structural_error("doubling grid size must be even and >= 4");
    const int n = grid_size;
    std::vector<double> rho = build_rho(n, kind, user_rho);

    Algebra algebra(std::vector<int>(n, 1));

    // delta(a)_j = a_{2j mod N}
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, (2 * j) % n) = 1.0;

    // delta_star(a)_i = sum over preimages j of i: rho_j a_j
    Mat ds = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) ds((2 * j) % n, j) += rho[j];

    DoublingInstance inst{n, std::move(rho), algebra, AlgebraMap(algebra, std::move(d)),
                          AlgebraMap(algebra, std::move(ds))};

    // certify the transfer identity at construction (exact in this model)
    Tolerance strict{1e-12, 1e-12};
    VerificationReport pair = verify_transfer_pair(inst.delta, inst.delta_star, strict);
    if (!pair.verdict)
        throw numerical_error("doubling instance failed the transfer-pair certification");
    return inst;
}

}   // namespace cstar
