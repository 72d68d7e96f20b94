#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cstar {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Malformed input: shape mismatch, inconsistent dimensions, bad spec data.
struct structural_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A required precondition (an earlier verification) did not hold.
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: Gram matrix not PSD, equivalent criteria disagree, ...
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerance {
    double eq_tol   = 1e-9;   ///< residual threshold for equality checks
    double rank_tol = 1e-9;   ///< rank threshold, relative to the largest singular value
};

/// Outcome of a single verification: overall verdict plus the named residuals
/// that produced it.  verdict == true iff every residual is within tolerance.
struct VerificationReport {
    bool verdict = false;
    std::map<std::string, double> residuals;
    std::vector<std::pair<int, int>> witnesses;   ///< basis pairs achieving the max residual
    std::map<std::string, std::string> notes;

    double max_residual() const;
    void set_verdict_from_residuals(double eq_tol);
};

class Element;

/// A finite-dimensional C*-algebra: a direct sum of full complex matrix
/// blocks M_{d_1} ⊕ ... ⊕ M_{d_k}.  The canonical linear basis is the family
/// of matrix units, enumerated block by block and row-major within a block.
class Algebra {
public:
    explicit Algebra(std::vector<int> block_dims);

    int num_blocks() const { return static_cast<int>(block_dims_.size()); }
    int block_dim(int b) const { return block_dims_[b]; }
    const std::vector<int>& block_dims() const { return block_dims_; }
    /// Complex vector-space dimension, sum of d_b^2.
    int dim() const { return dim_; }
    /// Sum of the block sizes d_b (the trace of the identity).
    int total_matrix_dim() const;

    /// Flat index of the matrix unit E^{(b)}_{ij}.
    int basis_index(int b, int i, int j) const;
    /// Inverse of basis_index.
    std::tuple<int, int, int> basis_coords(int k) const;

    Element zero() const;
    Element identity() const;
    Element basis_element(int k) const;

    bool operator==(const Algebra& other) const { return block_dims_ == other.block_dims_; }
    bool operator!=(const Algebra& other) const { return !(*this == other); }

private:
    std::vector<int> block_dims_;
    std::vector<int> offsets_;
    int dim_ = 0;
};

/// An element of a block algebra: one complex matrix per block.
/// Value type; all operations are pure.
class Element {
public:
    Element() = default;
    explicit Element(std::vector<Mat> blocks) : blocks_(std::move(blocks)) {}

    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const Mat& block(int b) const { return blocks_[b]; }
    Mat& block(int b) { return blocks_[b]; }
    const std::vector<Mat>& blocks() const { return blocks_; }

    bool same_shape(const Element& other) const;

    Element adjoint() const;

    /// Coordinates in the canonical matrix-unit basis.
    Vec coords() const;
    static Element from_coords(const Algebra& algebra, const Vec& coords);

    Element& operator+=(const Element& rhs);
    Element& operator-=(const Element& rhs);
    Element& operator*=(Complex s);

private:
    std::vector<Mat> blocks_;
};

Element operator+(Element lhs, const Element& rhs);
Element operator-(Element lhs, const Element& rhs);
Element operator*(Complex s, Element rhs);
Element operator*(const Element& x, const Element& y);   ///< block-wise product

Element mul(const Element& x, const Element& y);
Element adjoint(const Element& x);

/// C*-norm: the largest singular value over all blocks.
double operator_norm(const Element& x);

/// Self-adjoint within eq_tol and all block eigenvalues >= -eq_tol.
bool is_positive(const Element& x, const Tolerance& tol);

/// Minimum eigenvalue of the self-adjoint part over all blocks.
double min_eigenvalue(const Element& x);

/// Central projection test.  Runs both the algebraic test (p = p* = p^2,
/// commutes with the basis) and the canonical-form test (p is 0 or identity
/// per block); disagreement between the two is a numerical-consistency error.
VerificationReport is_central_projection(const Algebra& algebra, const Element& p,
                                         const Tolerance& tol);

/// Block support of a central projection: indices b where p_b is the identity.
std::vector<int> central_projection_support(const Algebra& algebra, const Element& p,
                                            const Tolerance& tol);

}   // namespace cstar
