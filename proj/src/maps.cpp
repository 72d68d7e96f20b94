#include "cstar/maps.hpp"

#include <random>

namespace cstar {

AlgebraMap::AlgebraMap(Algebra alg, Mat m) : algebra(std::move(alg)), matrix(std::move(m)) {
    if (matrix.rows() != algebra.dim() || matrix.cols() != algebra.dim())
        throw structural_error("map matrix must be dim x dim for its algebra");
}

AlgebraMap AlgebraMap::identity_map(const Algebra& algebra) {
    return AlgebraMap(algebra, Mat::Identity(algebra.dim(), algebra.dim()));
}

AlgebraMap AlgebraMap::zero_map(const Algebra& algebra) {
    return AlgebraMap(algebra, Mat::Zero(algebra.dim(), algebra.dim()));
}

AlgebraMap AlgebraMap::from_function(const Algebra& algebra,
                                     const std::function<Element(const Element&)>& fn) {
    Mat m(algebra.dim(), algebra.dim());
    for (int k = 0; k < algebra.dim(); ++k)
        m.col(k) = fn(algebra.basis_element(k)).coords();
    return AlgebraMap(algebra, std::move(m));
}

AlgebraMap AlgebraMap::left_multiplication(const Algebra& algebra, const Element& g) {
    return from_function(algebra, [&](const Element& x) { return g * x; });
}

AlgebraMap AlgebraMap::right_multiplication(const Algebra& algebra, const Element& g) {
    return from_function(algebra, [&](const Element& x) { return x * g; });
}

AlgebraMap AlgebraMap::block_assignment(const Algebra& algebra,
                                        const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != algebra.num_blocks())
        throw structural_error("block assignment length must equal the number of blocks");
    for (int b = 0; b < algebra.num_blocks(); ++b) {
        int src = assignment[b];
        if (src >= algebra.num_blocks())
            throw structural_error("block assignment source out of range");
        if (src >= 0 && algebra.block_dim(src) != algebra.block_dim(b))
            throw structural_error("block assignment requires equal source/target dimensions");
    }
    return from_function(algebra, [&](const Element& x) {
        Element out = algebra.zero();
        for (int b = 0; b < algebra.num_blocks(); ++b)
            if (assignment[b] >= 0) out.block(b) = x.block(assignment[b]);
        return out;
    });
}

Element AlgebraMap::apply(const Element& x) const {
    if (!x.same_shape(algebra.zero())) throw structural_error("element not in the map's algebra");
    return Element::from_coords(algebra, matrix * x.coords());
}

Element AlgebraMap::apply_basis(int k) const {
    return Element::from_coords(algebra, matrix.col(k));
}

Element AlgebraMap::image_of_identity() const { return apply(algebra.identity()); }

AlgebraMap AlgebraMap::compose(const AlgebraMap& other) const {
    if (algebra != other.algebra) throw structural_error("composition across different algebras");
    return AlgebraMap(algebra, matrix * other.matrix);
}

AlgebraMap AlgebraMap::power(int n) const {
    if (n < 0) throw structural_error("negative map power");
    Mat p = Mat::Identity(algebra.dim(), algebra.dim());
    for (int k = 0; k < n; ++k) p = matrix * p;
    return AlgebraMap(algebra, std::move(p));
}

Element iterated_image_of_identity(const AlgebraMap& delta, int n) {
    Element g = delta.algebra.identity();
    for (int k = 0; k < n; ++k) g = delta.apply(g);
    return g;
}

VerificationReport verify_star_endomorphism(const AlgebraMap& m, const Tolerance& tol) {
    const Algebra& A = m.algebra;
    VerificationReport rep;

    std::vector<Element> images;
    images.reserve(A.dim());
    for (int k = 0; k < A.dim(); ++k) images.push_back(m.apply_basis(k));

    double mult = 0.0;
    std::pair<int, int> worst{0, 0};
    for (int i = 0; i < A.dim(); ++i) {
        Element ei = A.basis_element(i);
        for (int j = 0; j < A.dim(); ++j) {
            double r = operator_norm(m.apply(ei * A.basis_element(j)) - images[i] * images[j]);
            if (r > mult) { mult = r; worst = {i, j}; }
        }
    }
    rep.residuals["multiplicative"] = mult;
    rep.witnesses.push_back(worst);

    double star = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element ek = A.basis_element(k);
        star = std::max(star, operator_norm(m.apply(ek.adjoint()) - images[k].adjoint()));
    }
    rep.residuals["star_preserving"] = star;

    Element p = m.image_of_identity();
    rep.residuals["unit_image_idempotent"]    = operator_norm(p * p - p);
    rep.residuals["unit_image_self_adjoint"]  = operator_norm(p.adjoint() - p);

    double unital_gap = operator_norm(p - A.identity());
    rep.notes["unital"] = unital_gap <= tol.eq_tol ? "true" : "false";
    rep.notes["unitality_gap"] = std::to_string(unital_gap);

    rep.set_verdict_from_residuals(tol.eq_tol);
    return rep;
}

VerificationReport verify_positive_map(const AlgebraMap& m, const Tolerance& tol,
                                       int samples, std::uint64_t seed) {
    if (samples < 1) throw structural_error("positivity check needs at least one sample");
    const Algebra& A = m.algebra;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double min_eig = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Element x = A.zero();
        for (int b = 0; b < A.num_blocks(); ++b) {
            int d = A.block_dim(b);
            Vec v(d);
            for (int i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
            x.block(b) = v * v.adjoint();
        }
        min_eig = std::min(min_eig, min_eigenvalue(m.apply(x)));
        if (min_eig < -tol.eq_tol) break;   // a false is conclusive
    }

    VerificationReport rep;
    rep.residuals["positivity_violation"] = std::max(0.0, -min_eig);
    rep.notes["min_eigenvalue"] = std::to_string(min_eig);
    rep.notes["samples"] = std::to_string(samples);
    rep.verdict = min_eig >= -tol.eq_tol;
    return rep;
}

VerificationReport verify_transfer_pair(const AlgebraMap& delta, const AlgebraMap& delta_star,
                                        const Tolerance& tol, int samples, std::uint64_t seed) {
    if (delta.algebra != delta_star.algebra)
        throw structural_error("transfer pair must act on the same algebra");
    VerificationReport endo = verify_star_endomorphism(delta, tol);
    if (!endo.verdict) {
        std::string which;
        for (const auto& [name, r] : endo.residuals)
            if (r > tol.eq_tol) which = name;
        throw precondition_error("delta is not a *-endomorphism (failed check: " + which + ")");
    }

    const Algebra& A = delta.algebra;
    VerificationReport rep;

    std::vector<Element> dimg, simg;
    for (int k = 0; k < A.dim(); ++k) {
        dimg.push_back(delta.apply_basis(k));
        simg.push_back(delta_star.apply_basis(k));
    }

    double transfer = 0.0, symm = 0.0;
    std::pair<int, int> worst{0, 0};
    for (int i = 0; i < A.dim(); ++i) {
        Element ei = A.basis_element(i);
        for (int j = 0; j < A.dim(); ++j) {
            Element ej = A.basis_element(j);
            double r = operator_norm(delta_star.apply(dimg[i] * ej) - ei * simg[j]);
            if (r > transfer) { transfer = r; worst = {i, j}; }
            symm = std::max(symm, operator_norm(delta_star.apply(ej * dimg[i]) - simg[j] * ei));
        }
    }
    rep.residuals["transfer_identity"] = transfer;
    rep.residuals["transfer_identity_symmetrized"] = symm;
    rep.witnesses.push_back(worst);

    Element d1 = delta.image_of_identity();
    double absorb = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element ek = A.basis_element(k);
        absorb = std::max(absorb, operator_norm(delta_star.apply(d1 * ek) - simg[k]));
        absorb = std::max(absorb, operator_norm(delta_star.apply(ek * d1) - simg[k]));
    }
    rep.residuals["unit_absorption"] = absorb;

    Element s1 = delta_star.image_of_identity();
    double central = 0.0;
    for (int k = 0; k < A.dim(); ++k) {
        Element ek = A.basis_element(k);
        central = std::max(central, operator_norm(s1 * ek - ek * s1));
    }
    rep.residuals["unit_image_central"] = central;

    VerificationReport pos = verify_positive_map(delta_star, tol, samples, seed);
    rep.residuals["positivity_violation"] = pos.residuals.at("positivity_violation");
    rep.notes["min_eigenvalue"] = pos.notes.at("min_eigenvalue");

    rep.set_verdict_from_residuals(tol.eq_tol);
    return rep;
}

}   // namespace cstar
