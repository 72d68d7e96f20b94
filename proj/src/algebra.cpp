#include "cstar/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cstar {

double VerificationReport::max_residual() const {
    double m = 0.0;
    for (const auto& [name, r] : residuals) m = std::max(m, r);
    return m;
}

void VerificationReport::set_verdict_from_residuals(double eq_tol) {
    verdict = max_residual() <= eq_tol;
}

Algebra::Algebra(std::vector<int> block_dims) : block_dims_(std::move(block_dims)) {
    if (block_dims_.empty())
        throw structural_error("algebra needs at least one block");
    offsets_.reserve(block_dims_.size());
    for (int d : block_dims_) {
        if (d < 1) throw structural_error("block dimension must be >= 1");
        offsets_.push_back(dim_);
        dim_ += d * d;
    }
}

int Algebra::total_matrix_dim() const {
    return std::accumulate(block_dims_.begin(), block_dims_.end(), 0);
}

int Algebra::basis_index(int b, int i, int j) const {
    return offsets_[b] + i * block_dims_[b] + j;
}

std::tuple<int, int, int> Algebra::basis_coords(int k) const {
    for (int b = num_blocks() - 1; b >= 0; --b) {
        if (k >= offsets_[b]) {
            int r = k - offsets_[b];
            return {b, r / block_dims_[b], r % block_dims_[b]};
        }
    }
    throw structural_error("basis index out of range");
}

Element Algebra::zero() const {
    std::vector<Mat> blocks;
    blocks.reserve(block_dims_.size());
    for (int d : block_dims_) blocks.push_back(Mat::Zero(d, d));
    return Element(std::move(blocks));
}

Element Algebra::identity() const {
    std::vector<Mat> blocks;
    blocks.reserve(block_dims_.size());
    for (int d : block_dims_) blocks.push_back(Mat::Identity(d, d));
    return Element(std::move(blocks));
}

Element Algebra::basis_element(int k) const {
    auto [b, i, j] = basis_coords(k);
    Element e = zero();
    e.block(b)(i, j) = 1.0;
    return e;
}

bool Element::same_shape(const Element& other) const {
    if (num_blocks() != other.num_blocks()) return false;
    for (int b = 0; b < num_blocks(); ++b)
        if (blocks_[b].rows() != other.blocks_[b].rows()) return false;
    return true;
}

Element Element::adjoint() const {
    std::vector<Mat> out;
    out.reserve(blocks_.size());
    for (const auto& m : blocks_) out.push_back(m.adjoint());
    return Element(std::move(out));
}

Vec Element::coords() const {
    int dim = 0;
    for (const auto& m : blocks_) dim += static_cast<int>(m.rows() * m.cols());
    Vec c(dim);
    int k = 0;
    for (const auto& m : blocks_)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) c(k++) = m(i, j);
    return c;
}

Element Element::from_coords(const Algebra& algebra, const Vec& coords) {
    if (coords.size() != algebra.dim())
        throw structural_error("coordinate vector has wrong dimension");
    Element e = algebra.zero();
    int k = 0;
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int d = algebra.block_dim(b);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) e.block(b)(i, j) = coords(k++);
    }
    return e;
}

Element& Element::operator+=(const Element& rhs) {
    if (!same_shape(rhs)) throw structural_error("element shape mismatch in +");
    for (int b = 0; b < num_blocks(); ++b) blocks_[b] += rhs.blocks_[b];
    return *this;
}

Element& Element::operator-=(const Element& rhs) {
    if (!same_shape(rhs)) throw structural_error("element shape mismatch in -");
    for (int b = 0; b < num_blocks(); ++b) blocks_[b] -= rhs.blocks_[b];
    return *this;
}

Element& Element::operator*=(Complex s) {
    for (auto& m : blocks_) m *= s;
    return *this;
}

Element operator+(Element lhs, const Element& rhs) { return lhs += rhs; }
Element operator-(Element lhs, const Element& rhs) { return lhs -= rhs; }
Element operator*(Complex s, Element rhs) { return rhs *= s; }

Element operator*(const Element& x, const Element& y) { return mul(x, y); }

Element mul(const Element& x, const Element& y) {
    if (!x.same_shape(y)) throw structural_error("element shape mismatch in product");
    std::vector<Mat> out;
    out.reserve(x.num_blocks());
    for (int b = 0; b < x.num_blocks(); ++b) out.push_back(x.block(b) * y.block(b));
    return Element(std::move(out));
}

Element adjoint(const Element& x) { return x.adjoint(); }

double operator_norm(const Element& x) {
    double n = 0.0;
    for (const auto& m : x.blocks()) {
        if (m.rows() == 1) {
            n = std::max(n, std::abs(m(0, 0)));
        } else {
            Eigen::JacobiSVD<Mat> svd(m);
            n = std::max(n, svd.singularValues()(0));
        }
    }
    return n;
}

double min_eigenvalue(const Element& x) {
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& m : x.blocks()) {
        Mat h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
        mn = std::min(mn, es.eigenvalues().minCoeff());
    }
    return mn;
}

bool is_positive(const Element& x, const Tolerance& tol) {
    if (operator_norm(x - x.adjoint()) > tol.eq_tol) return false;
    return min_eigenvalue(x) >= -tol.eq_tol;
}

VerificationReport is_central_projection(const Algebra& algebra, const Element& p,
                                         const Tolerance& tol) {
    VerificationReport rep;
    rep.residuals["idempotent"]   = operator_norm(p * p - p);
    rep.residuals["self_adjoint"] = operator_norm(p.adjoint() - p);

    double comm = 0.0;
    std::pair<int, int> worst{-1, -1};
    for (int k = 0; k < algebra.dim(); ++k) {
        Element e = algebra.basis_element(k);
        double r = operator_norm(p * e - e * p);
        if (r > comm) { comm = r; worst = {k, k}; }
    }
    rep.residuals["central"] = comm;
    if (worst.first >= 0) rep.witnesses.push_back(worst);

    // canonical form: each block is 0 or the identity
    double canon = 0.0;
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        const Mat& pb = p.block(b);
        double to_zero = pb.norm();
        double to_id   = (pb - Mat::Identity(pb.rows(), pb.cols())).norm();
        canon = std::max(canon, std::min(to_zero, to_id));
    }
    rep.residuals["canonical_form"] = canon;

    bool algebraic = rep.residuals["idempotent"] <= tol.eq_tol &&
                     rep.residuals["self_adjoint"] <= tol.eq_tol && comm <= tol.eq_tol;
    bool canonical = canon <= tol.eq_tol;
    rep.verdict = algebraic;
    if (algebraic != canonical)
        throw numerical_error("central-projection tests disagree (algebraic vs canonical form)");
    return rep;
}

std::vector<int> central_projection_support(const Algebra& algebra, const Element& p,
                                            const Tolerance& tol) {
    std::vector<int> support;
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        const Mat& pb = p.block(b);
        double to_id = (pb - Mat::Identity(pb.rows(), pb.cols())).norm();
        if (to_id <= tol.eq_tol) {
            support.push_back(b);
        } else if (pb.norm() > tol.eq_tol) {
            throw structural_error("element is not a 0/1-per-block central projection");
        }
    }
    return support;
}

}   // namespace cstar
