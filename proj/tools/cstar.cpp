// Command-line front end: analyze an instance (transfer-operator checks and
// the complete-transfer construction) or build and verify the truncated
// representation witness.

#include "cstar/instance.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadSpec = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoCompleteTransfer = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cstar::structural_error("cannot read spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const nlohmann::ordered_json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
}

void apply_overrides(cstar::InstanceSpec& spec, double tol_flag, bool tol_set,
                     std::uint64_t seed_flag, bool seed_set) {
    if (const char* env = std::getenv("CSTAR_TOL"); env && !tol_set) {
        spec.tol.eq_tol = std::strtod(env, nullptr);
        spec.tol.rank_tol = spec.tol.eq_tol;
    }
    if (tol_set) {
        spec.tol.eq_tol = tol_flag;
        spec.tol.rank_tol = tol_flag;
    }
    if (seed_set) spec.seed = seed_flag;
}

}   // namespace

int main(int argc, char** argv) {
    CLI::App app{"coefficient-algebra analyzer for finite-dimensional C*-algebra endomorphisms"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    double tol_flag = 0.0;
    std::uint64_t seed_flag = 0;
    int levels_flag = 0;

    auto* analyze = app.add_subcommand("analyze", "run transfer-operator analysis");
    analyze->add_option("spec", spec_path, "instance spec (JSON)")->required();
    auto* a_out = analyze->add_option("--out", out_path, "write report here instead of stdout");
    auto* a_tol = analyze->add_option("--tol", tol_flag, "equality/rank tolerance override");
    auto* a_seed = analyze->add_option("--seed", seed_flag, "positivity-sampling seed");

    auto* witness = app.add_subcommand("witness", "build and verify the representation witness");
    witness->add_option("spec", spec_path, "instance spec (JSON)")->required();
    auto* w_out = witness->add_option("--out", out_path, "write report here instead of stdout");
    auto* w_tol = witness->add_option("--tol", tol_flag, "equality/rank tolerance override");
    auto* w_seed = witness->add_option("--seed", seed_flag, "positivity-sampling seed");
    auto* w_levels = witness->add_option("--levels", levels_flag, "window size N (levels -N..N)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string bytes = slurp(spec_path);
        std::string hash = cstar::hash_bytes_hex(bytes);
        cstar::InstanceSpec spec = cstar::load_instance_spec(spec_path);

        if (app.got_subcommand(analyze)) {
            apply_overrides(spec, tol_flag, !a_tol->empty(), seed_flag, !a_seed->empty());
            emit(cstar::run_analyze(spec, hash), !a_out->empty() ? out_path : "");
        } else {
            apply_overrides(spec, tol_flag, !w_tol->empty(), seed_flag, !w_seed->empty());
            if (!w_levels->empty()) spec.window = levels_flag;
            emit(cstar::run_witness(spec, hash), !w_out->empty() ? out_path : "");
        }
        return kExitOk;
    } catch (const cstar::no_complete_transfer& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoCompleteTransfer;
    } catch (const cstar::structural_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const cstar::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const cstar::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
