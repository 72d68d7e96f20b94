#include "cstar/instance.hpp"

#include "corpus.hpp"

#include <doctest.h>

using namespace cstar;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json corner_spec_json() {
    return json{{"blocks", {1, 1}},
                {"endomorphism", {{"kind", "block_map"}, {"assignment", {0, nullptr}}}},
                {"transfer", {{"kind", "block_map"}, {"assignment", {0, nullptr}}}}};
}

}   // namespace

TEST_CASE("matrix JSON round trip") {
    Mat m(2, 3);
    m << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(-2, 0.5), Complex(0, 0),
        Complex(1e-3, 7);
    Mat back = matrix_from_json(matrix_to_json(m));
    CHECK((m - back).norm() == 0.0);
}

TEST_CASE("parse: corner spec") {
    InstanceSpec spec = parse_instance_spec(corner_spec_json());
    CHECK(spec.algebra.num_blocks() == 2);
    CHECK(spec.delta_star.has_value());
    Element img = spec.delta.apply(spec.algebra.identity());
    CHECK(std::abs(img.block(0)(0, 0) - Complex(1.0)) == 0.0);
    CHECK(std::abs(img.block(1)(0, 0)) == 0.0);
    CHECK(spec.window == 4);
    CHECK(spec.seed == kDefaultSeed);
}

TEST_CASE("parse: doubling spec with named and explicit rho") {
    json named{{"endomorphism", {{"kind", "doubling"}, {"N", 8}, {"rho", "raised_cosine"}}},
               {"window", 3},
               {"seed", 99}};
    InstanceSpec spec = parse_instance_spec(named);
    CHECK(spec.algebra.num_blocks() == 8);
    CHECK(spec.window == 3);
    CHECK(spec.seed == 99);

    json vec{{"endomorphism",
              {{"kind", "doubling"}, {"N", 4}, {"rho", {0.25, 0.5, 0.75, 0.5}}}}};
    CHECK(parse_instance_spec(vec).delta_star.has_value());
}

TEST_CASE("parse: matrix-kind map and custom tolerance") {
    json j{{"blocks", {1}},
           {"endomorphism",
            {{"kind", "matrix"}, {"data", {{{1.0, 0.0}}}}}},
           {"tolerance", {{"eq_tol", 1e-7}, {"rank_tol", 1e-6}}}};
    InstanceSpec spec = parse_instance_spec(j);
    CHECK(spec.tol.eq_tol == 1e-7);
    CHECK(spec.tol.rank_tol == 1e-6);
    CHECK_FALSE(spec.delta_star.has_value());
}

TEST_CASE("parse: malformed specs throw structural_error") {
    CHECK_THROWS_AS(parse_instance_spec(json{{"blocks", {1}}}), json::exception);
    CHECK_THROWS_AS(
        parse_instance_spec(json{{"blocks", {1, 1}},
                                 {"endomorphism", {{"kind", "block_map"}, {"assignment", {0}}}}}),
        structural_error);
    CHECK_THROWS_AS(
        parse_instance_spec(json{{"blocks", {1}},
                                 {"endomorphism", {{"kind", "mystery"}}}}),
        structural_error);
    CHECK_THROWS_AS(
        parse_instance_spec(json{{"blocks", {2}},
                                 {"endomorphism",
                                  {{"kind", "matrix"}, {"data", {{{1.0, 0.0}}}}}}}),
        structural_error);
    CHECK_THROWS_AS(load_instance_spec("/nonexistent/path.json"), structural_error);
}

TEST_CASE("hash_bytes_hex is deterministic and input-sensitive") {
    CHECK(hash_bytes_hex("") == "cbf29ce484222325");
    CHECK(hash_bytes_hex("abc") == hash_bytes_hex("abc"));
    CHECK(hash_bytes_hex("abc") != hash_bytes_hex("abd"));
    CHECK(hash_bytes_hex("abc").size() == 16);
}

TEST_CASE("run_analyze: corner instance report") {
    InstanceSpec spec = parse_instance_spec(corner_spec_json());
    ordered_json rep = run_analyze(spec, "feedc0de00000000");
    CHECK(rep["mode"] == "analyze");
    CHECK(rep["input_hash"] == "feedc0de00000000");
    CHECK(rep["checks"]["star_endomorphism"]["verdict"] == true);
    CHECK(rep["checks"]["transfer_pair"]["verdict"] == true);
    CHECK(rep["checks"]["nondegenerate"]["verdict"] == true);
    CHECK(rep["checks"]["complete"]["verdict"] == true);
    CHECK(rep["complete_transfer"]["found"] == true);
    // P = (1, 0) as stacked coordinates.
    CHECK(rep["complete_transfer"]["P"][0][0] == 1.0);
    CHECK(rep["complete_transfer"]["P"][1][0] == 0.0);
    CHECK(rep["decomposition"]["kernel_blocks"] == json::array({1}));
    CHECK(rep["decomposition"]["image_blocks"] == json::array({0}));
}

TEST_CASE("run_analyze: doubling instance reports hereditary failure") {
    json j{{"endomorphism", {{"kind", "doubling"}, {"N", 8}, {"rho", "constant_half"}}}};
    ordered_json rep = run_analyze(parse_instance_spec(j), "0");
    CHECK(rep["checks"]["nondegenerate"]["verdict"] == true);
    CHECK(rep["checks"]["complete"]["verdict"] == false);
    CHECK(rep["checks"]["hereditary"]["verdict"] == false);
    CHECK(rep["complete_transfer"]["found"] == false);
    CHECK(rep["complete_transfer"]["failure"] == "hereditary failure");
}

TEST_CASE("run_witness: corner instance, relations verified") {
    InstanceSpec spec = parse_instance_spec(corner_spec_json());
    spec.window = 3;
    ordered_json rep = run_witness(spec, "0");
    CHECK(rep["mode"] == "witness");
    CHECK(rep["window"] == 3);
    CHECK(rep["checks"]["lemma_adjointness"]["verdict"] == true);
    CHECK(rep["checks"]["coefficient_relations"]["verdict"] == true);
    CHECK(rep["checks"]["isometry_corollary"]["verdict"] == true);
    // level dims: 2 at n = 0, 1 elsewhere
    for (const auto& entry : rep["level_dims"]) {
        int n = entry[0].get<int>();
        CHECK(entry[1].get<int>() == (n == 0 ? 2 : 1));
    }
}

TEST_CASE("run_witness: recovers delta_star when the spec omits it") {
    json j{{"blocks", {2, 2}},
           {"endomorphism", {{"kind", "block_map"}, {"assignment", {1, nullptr}}}},
           {"window", 2}};
    ordered_json rep = run_witness(parse_instance_spec(j), "0");
    CHECK(rep["checks"]["coefficient_relations"]["verdict"] == true);
}

TEST_CASE("run_witness: throws when no complete transfer exists") {
    json j{{"endomorphism", {{"kind", "doubling"}, {"N", 8}, {"rho", "constant_half"}}}};
    InstanceSpec spec = parse_instance_spec(j);
    spec.window = 2;
    CHECK_THROWS_AS(run_witness(spec, "0"), no_complete_transfer);
}

TEST_CASE("certificate delta_star re-verifies as a transfer operator after JSON round trip") {
    auto inst = corpus::m2_shift_instance();
    CompleteTransferResult found = find_complete_transfer(inst.delta, Tolerance{});
    REQUIRE(found.ok());
    Mat round_tripped = matrix_from_json(matrix_to_json(found.certificate->delta_star.matrix));
    AlgebraMap ds(inst.algebra, std::move(round_tripped));
    VerificationReport pair = verify_transfer_pair(inst.delta, ds, Tolerance{});
    CHECK(pair.verdict);
    CHECK(check_complete(inst.delta, ds, Tolerance{}).verdict);
}
