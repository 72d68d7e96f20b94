#pragma once

#include "cstar/doubling.hpp"
#include "cstar/representation.hpp"
#include "cstar/transfer.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace cstar {

inline constexpr const char* kToolVersion = "1.0.0";

/// A parsed problem instance: algebra, endomorphism candidate, optional
/// transfer candidate, functional, tolerances, witness window, RNG seed.
struct InstanceSpec {
    Algebra algebra;
    AlgebraMap delta;
    std::optional<AlgebraMap> delta_star;
    PositiveFunctional functional;
    Tolerance tol;
    int window = 4;
    std::uint64_t seed = kDefaultSeed;
};

/// Parses a JSON instance spec.  Complex entries are [re, im] pairs.
/// Throws structural_error on malformed input.
InstanceSpec parse_instance_spec(const nlohmann::json& j);
InstanceSpec load_instance_spec(const std::string& path);

nlohmann::ordered_json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

nlohmann::ordered_json report_to_json(const VerificationReport& rep);

/// FNV-1a over the raw bytes, as 16 hex digits.
std::string hash_bytes_hex(const std::string& bytes);

/// Full transfer-operator analysis pipeline; returns the report body.
nlohmann::ordered_json run_analyze(const InstanceSpec& spec, const std::string& input_hash);

/// Representation-witness pipeline.  Throws no_complete_transfer when the
/// instance admits no complete transfer operator and none was supplied.
struct no_complete_transfer : std::runtime_error {
    using std::runtime_error::runtime_error;
};
nlohmann::ordered_json run_witness(const InstanceSpec& spec, const std::string& input_hash);

}   // namespace cstar
