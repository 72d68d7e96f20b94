#include "cstar/subspace.hpp"

namespace cstar {

namespace {

Eigen::JacobiSVD<Mat> full_svd(const Mat& m) {
    return Eigen::JacobiSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}   // namespace

int numeric_rank(const Mat& m, double rank_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    double cut = rank_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

Mat column_space_basis(const Mat& m, double rank_tol) {
    if (m.size() == 0) return Mat(m.rows(), 0);
    auto svd = full_svd(m);
    int r = numeric_rank(m, rank_tol);
    return svd.matrixU().leftCols(r);
}

Mat null_space_basis(const Mat& m, double rank_tol) {
    if (m.size() == 0) return Mat(m.cols(), 0);
    auto svd = full_svd(m);
    int r = numeric_rank(m, rank_tol);
    return svd.matrixV().rightCols(m.cols() - r);
}

double containment_residual(const Mat& a, const Mat& b, double rank_tol) {
    Mat q = column_space_basis(a, rank_tol);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        Vec c = b.col(j);
        double n = c.norm();
        if (n == 0.0) continue;
        double res = (c - q * (q.adjoint() * c)).norm() / n;
        worst = std::max(worst, res);
    }
    return worst;
}

bool same_column_space(const Mat& a, const Mat& b, double rank_tol) {
    int ra = numeric_rank(a, rank_tol);
    int rb = numeric_rank(b, rank_tol);
    if (ra != rb) return false;
    Mat stacked(a.rows(), a.cols() + b.cols());
    stacked << a, b;
    return numeric_rank(stacked, rank_tol) == ra;
}

}   // namespace cstar
