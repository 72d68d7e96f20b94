#include "cstar/instance.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace cstar {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw structural_error("complex entries must be [re, im] pairs");
    double re = j[0].get<double>();
    double im = j[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
        throw structural_error("complex entries must be finite");
    return {re, im};
}

ordered_json complex_to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

std::vector<int> parse_assignment(const json& j, int num_blocks) {
    if (!j.is_array() || static_cast<int>(j.size()) != num_blocks)
        throw structural_error("block_map assignment must list one source per block");
    std::vector<int> out;
    for (const auto& e : j) {
        if (e.is_null()) {
            out.push_back(-1);
        } else if (e.is_number_integer()) {
            int src = e.get<int>();
            if (src < 0) throw structural_error("block_map source indices must be >= 0 or null");
            out.push_back(src);
        } else {
            throw structural_error("block_map assignment entries must be integers or null");
        }
    }
    return out;
}

RhoKind parse_rho_kind(const std::string& s) {
    if (s == "constant_half") return RhoKind::constant_half;
    if (s == "raised_cosine") return RhoKind::raised_cosine;
    throw structural_error("unknown rho kind: " + s);
}

AlgebraMap parse_map(const json& j, const Algebra& algebra) {
    std::string kind = j.value("kind", "");
    if (kind == "matrix") {
        Mat m = matrix_from_json(j.at("data"));
        if (m.rows() != algebra.dim() || m.cols() != algebra.dim())
            throw structural_error("map matrix must be dim x dim");
        return AlgebraMap(algebra, std::move(m));
    }
    if (kind == "block_map")
        return AlgebraMap::block_assignment(algebra,
                                            parse_assignment(j.at("assignment"), algebra.num_blocks()));
    throw structural_error("unknown map kind: " + kind);
}

ordered_json element_to_json(const Element& e) {
    ordered_json out = ordered_json::array();
    Vec c = e.coords();
    for (Eigen::Index i = 0; i < c.size(); ++i) out.push_back(complex_to_json(c(i)));
    return out;
}

ordered_json completion_to_json(const CompleteTransferResult& result) {
    ordered_json out;
    out["found"] = result.ok();
    if (result.ok()) {
        const auto& cert = *result.certificate;
        out["trivial"] = cert.trivial;
        out["P"] = element_to_json(cert.P);
        out["delta_star"] = matrix_to_json(cert.delta_star.matrix);
        ordered_json res;
        for (const auto& [name, r] : cert.residuals) res[name] = r;
        out["residuals"] = std::move(res);
    } else {
        out["failure"] = to_string(result.failure);
        out["diagnostic"] = result.diagnostic;
    }
    return out;
}

}   // namespace

Mat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw structural_error("matrix must be a non-empty array of rows");
    int rows = static_cast<int>(j.size());
    int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw structural_error("ragged matrix rows");
        for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

ordered_json matrix_to_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json report_to_json(const VerificationReport& rep) {
    ordered_json out;
    out["verdict"] = rep.verdict;
    ordered_json res;
    for (const auto& [name, r] : rep.residuals) res[name] = r;
    out["residuals"] = std::move(res);
    if (!rep.notes.empty()) {
        ordered_json notes;
        for (const auto& [name, v] : rep.notes) notes[name] = v;
        out["notes"] = std::move(notes);
    }
    if (!rep.witnesses.empty()) {
        ordered_json w = ordered_json::array();
        for (const auto& [i, j] : rep.witnesses) w.push_back(ordered_json::array({i, j}));
        out["witnesses"] = std::move(w);
    }
    return out;
}

std::string hash_bytes_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

InstanceSpec parse_instance_spec(const json& j) {
    const json& endo = j.at("endomorphism");
    std::string kind = endo.value("kind", "");

    if (kind == "doubling") {
        int n = endo.at("N").get<int>();
        DoublingInstance inst = [&] {
            const json& rho = endo.at("rho");
            if (rho.is_string()) return make_doubling_instance(n, parse_rho_kind(rho.get<std::string>()));
            if (rho.is_array()) {
                std::vector<double> user = rho.get<std::vector<double>>();
                return make_doubling_instance(n, RhoKind::user, &user);
            }
            throw structural_error("rho must be a kind name or a vector");
        }();
        InstanceSpec spec{inst.algebra, inst.delta, inst.delta_star,
                          PositiveFunctional::normalized_trace(inst.algebra), Tolerance{}, 4,
                          kDefaultSeed};
        if (j.contains("transfer")) spec.delta_star = parse_map(j.at("transfer"), spec.algebra);
        if (j.contains("tolerance")) {
            spec.tol.eq_tol = j["tolerance"].value("eq_tol", spec.tol.eq_tol);
            spec.tol.rank_tol = j["tolerance"].value("rank_tol", spec.tol.rank_tol);
        }
        spec.window = j.value("window", 4);
        spec.seed = j.value("seed", kDefaultSeed);
        return spec;
    }

    std::vector<int> blocks = j.at("blocks").get<std::vector<int>>();
    Algebra algebra(blocks);
    AlgebraMap delta = parse_map(endo, algebra);

    InstanceSpec spec{algebra, delta, std::nullopt, PositiveFunctional::normalized_trace(algebra),
                      Tolerance{}, 4, kDefaultSeed};
    if (j.contains("transfer")) spec.delta_star = parse_map(j.at("transfer"), algebra);
    if (j.contains("tolerance")) {
        spec.tol.eq_tol = j["tolerance"].value("eq_tol", spec.tol.eq_tol);
        spec.tol.rank_tol = j["tolerance"].value("rank_tol", spec.tol.rank_tol);
    }
    if (j.contains("functional")) {
        const json& f = j["functional"];
        std::string fkind = f.value("kind", "trace");
        if (fkind == "trace") {
            spec.functional = PositiveFunctional::normalized_trace(algebra);
        } else if (fkind == "density") {
            std::vector<Mat> densities;
            for (const auto& dm : f.at("matrices")) densities.push_back(matrix_from_json(dm));
            spec.functional = PositiveFunctional::from_densities(algebra, std::move(densities), spec.tol);
        } else {
            throw structural_error("unknown functional kind: " + fkind);
        }
    }
    spec.window = j.value("window", 4);
    spec.seed = j.value("seed", kDefaultSeed);
    return spec;
}

InstanceSpec load_instance_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw structural_error("cannot read spec file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw structural_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        return parse_instance_spec(j);
    } catch (const json::exception& e) {
        throw structural_error(std::string("malformed spec: ") + e.what());
    }
}

ordered_json run_analyze(const InstanceSpec& spec, const std::string& input_hash) {
    ordered_json out;
    out["version"] = kToolVersion;
    out["mode"] = "analyze";
    out["input_hash"] = input_hash;
    out["seed"] = spec.seed;
    out["tolerance"] = {{"eq_tol", spec.tol.eq_tol}, {"rank_tol", spec.tol.rank_tol}};
    out["algebra"] = {{"blocks", spec.algebra.block_dims()}, {"dim", spec.algebra.dim()}};

    ordered_json checks;
    VerificationReport endo = verify_star_endomorphism(spec.delta, spec.tol);
    checks["star_endomorphism"] = report_to_json(endo);

    bool pair_ok = false;
    if (endo.verdict && spec.delta_star) {
        VerificationReport pair = verify_transfer_pair(spec.delta, *spec.delta_star, spec.tol,
                                                       kDefaultPositivitySamples, spec.seed);
        checks["transfer_pair"] = report_to_json(pair);
        pair_ok = pair.verdict;
        if (pair_ok) {
            VerificationReport nd = check_nondegenerate(spec.delta, *spec.delta_star, spec.tol,
                                                        kDefaultPositivitySamples, spec.seed);
            checks["nondegenerate"] = report_to_json(nd);
            checks["complete"] = report_to_json(check_complete(spec.delta, *spec.delta_star, spec.tol));
            if (nd.verdict) {
                auto [ker, im] = kernel_image_decomposition(spec.delta, *spec.delta_star, spec.tol);
                out["decomposition"] = {{"kernel_blocks", ker.block_support},
                                        {"image_blocks", im.block_support}};
            }
        }
    }

    if (endo.verdict) {
        checks["hereditary"] = report_to_json(check_hereditary(spec.delta, spec.tol));
        CompleteTransferResult found = find_complete_transfer(spec.delta, spec.tol);
        out["complete_transfer"] = completion_to_json(found);
        if (found.ok())
            checks["partial_automorphism"] =
                report_to_json(check_partial_automorphism(spec.delta, *found.certificate, spec.tol));
    }

    out["checks"] = std::move(checks);
    (void)pair_ok;
    return out;
}

ordered_json run_witness(const InstanceSpec& spec, const std::string& input_hash) {
    AlgebraMap delta_star = AlgebraMap::zero_map(spec.algebra);
    bool have = false;
    if (spec.delta_star) {
        VerificationReport pair = verify_transfer_pair(spec.delta, *spec.delta_star, spec.tol,
                                                       kDefaultPositivitySamples, spec.seed);
        if (pair.verdict && check_complete(spec.delta, *spec.delta_star, spec.tol).verdict) {
            delta_star = *spec.delta_star;
            have = true;
        }
    }
    if (!have) {
        CompleteTransferResult found = find_complete_transfer(spec.delta, spec.tol);
        if (!found.ok())
            throw no_complete_transfer("no complete transfer operator exists: " +
                                       to_string(found.failure) + " (" + found.diagnostic + ")");
        delta_star = found.certificate->delta_star;
    }

    TruncatedRepresentation rep = build_truncated_representation(
        spec.algebra, spec.delta, delta_star, spec.functional, spec.window, spec.tol);

    ordered_json out;
    out["version"] = kToolVersion;
    out["mode"] = "witness";
    out["input_hash"] = input_hash;
    out["seed"] = spec.seed;
    out["window"] = spec.window;
    out["tolerance"] = {{"eq_tol", spec.tol.eq_tol}, {"rank_tol", spec.tol.rank_tol}};

    ordered_json dims = ordered_json::array();
    for (int n = -spec.window; n <= spec.window; ++n)
        dims.push_back(ordered_json::array({n, rep.level(n).quotient_dim}));
    out["level_dims"] = std::move(dims);

    ordered_json checks;
    checks["lemma_adjointness"] = report_to_json(verify_lemma_adjointness(rep, spec.tol));
    checks["coefficient_relations"] = report_to_json(verify_coefficient_relations(rep, spec.tol));
    checks["isometry_corollary"] = report_to_json(check_isometry_corollary(rep, spec.tol));
    out["checks"] = std::move(checks);
    return out;
}

}   // namespace cstar
