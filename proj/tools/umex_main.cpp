// umex: batch front-end for metric/ultrametric generation, nearest-neighbor
// ultrametric extension, bound verification, and the optimal-distortion
// oracle. All state flows through flags and the shared text formats; outputs
// are deterministic byte for byte.
//
// Exit codes: 0 success, 1 validation or input failure (the violated
// axiom/bound and its witness go to stderr), 2 usage error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "umex/umex.hpp"

namespace {

umex::FiniteMetricSpace load_metric(const std::string& path) {
    return umex::validate_metric(umex::read_matrix_file(path));
}

umex::Ultrametric load_ultrametric(const std::string& path) {
    return umex::validate_ultrametric(umex::read_matrix_file(path));
}

umex::SubsetSelection load_subset(const std::string& path, std::size_t parent_size) {
    return umex::SubsetSelection(umex::read_index_file(path), parent_size);
}

int run_gen_path(std::size_t n, const std::string& out) {
    umex::write_matrix_file(out, umex::path_metric(n).dist());
    return 0;
}

int run_gen_random(std::size_t n, std::uint64_t seed, const std::string& out) {
    umex::write_matrix_file(out, umex::random_metric(n, seed).dist());
    return 0;
}

int run_subdominant(const std::string& dist_path, const std::string& out) {
    const auto space = load_metric(dist_path);
    umex::write_matrix_file(out, umex::subdominant_ultrametric(space).dist());
    return 0;
}

int run_extend(const std::string& dist_path, const std::string& subset_path,
               const std::string& rho_path, double factor, bool factor_given,
               const std::string& out, bool with_report) {
    const auto space = load_metric(dist_path);
    const auto subset = load_subset(subset_path, space.size());
    const auto rho = load_ultrametric(rho_path);

    umex::Ultrametric rhobar = [&] {
        if (factor_given) return umex::extend(space, subset, rho, factor);
        auto inferred = umex::extend_with_inferred_factor(space, subset, rho);
        factor = inferred.approx_factor;
        return std::move(inferred.rhobar);
    }();

    umex::write_matrix_file(out, rhobar.dist());
    if (with_report) {
        const auto report = umex::verify_extension(space, subset, rho, rhobar.dist(), factor);
        std::cout << "D_source=" << (factor_given ? "explicit" : "inferred") << "\n"
                  << report.to_text();
    }
    return 0;
}

int run_verify(const std::string& dist_path, const std::string& subset_path,
               const std::string& rho_path, const std::string& rhobar_path, double factor) {
    const auto space = load_metric(dist_path);
    const auto subset = load_subset(subset_path, space.size());
    const auto rho = load_ultrametric(rho_path);
    const auto rhobar = umex::read_matrix_file(rhobar_path);  // raw: failures belong in the report
    const auto report = umex::verify_extension(space, subset, rho, rhobar, factor);
    std::cout << report.to_text();
    return report.all_ok() ? 0 : 1;
}

int run_tightness(unsigned factor, double resolution) {
    const auto instance = umex::worst_case_instance(factor);
    const auto rhobar = umex::extend(instance.space, instance.subset, instance.rho,
                                     static_cast<double>(factor));
    const auto report = umex::verify_extension(instance.space, instance.subset, instance.rho,
                                               rhobar.dist(), static_cast<double>(factor));

    // smallest rescaling that dominates the line distances on S x X pairs
    double lift = 0.0;
    const std::size_t n = instance.space.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!instance.subset.contains(i) && !instance.subset.contains(j)) continue;
            lift = std::max(lift, instance.space(i, j) / rhobar(i, j));
        }
    }
    const double chain = umex::chain_lower_bound(umex::scale(rhobar, lift), factor);

    const auto oracle =
        umex::optimal_extension_distortion(instance.space, instance.subset, instance.rho, resolution);

    char oracle_text[64];
    std::snprintf(oracle_text, sizeof(oracle_text), "%.6f", oracle.stretch_cap);
    std::cout << "construction_distortion=" << umex::format_value(report.cross_distortion)
              << " oracle_distortion=" << oracle_text
              << " chain_bound=" << umex::format_value(chain) << "\n";
    return 0;
}

int run_oracle(const std::string& dist_path, const std::string& subset_path,
               const std::string& rho_path, double resolution) {
    const auto space = load_metric(dist_path);
    const auto subset = load_subset(subset_path, space.size());
    const auto rho = load_ultrametric(rho_path);
    const auto result = umex::optimal_extension_distortion(space, subset, rho, resolution);
    std::cout << "t_opt=" << umex::format_value(result.stretch_cap)
              << " c_opt=" << umex::format_value(result.rho_scale) << "\n";
    umex::write_matrix(std::cout, result.witness.dist());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite metric / ultrametric toolkit: generators, subdominant ultrametric, "
                 "nearest-neighbor extension, bound verification, tightness oracle"};
    app.require_subcommand(1);

    // gen (path --n N | random --n N --seed K) -o FILE
    auto* gen = app.add_subcommand("gen", "generate a metric and write it in the matrix format");
    gen->require_subcommand(1);
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* gen_path = gen->add_subcommand("path", "line metric on n points: dist(i,j) = |i-j|");
    gen_path->add_option("--n", gen_n, "point count (>= 2)")->required();
    gen_path->add_option("-o,--output", gen_out, "output matrix file")->required();
    auto* gen_random = gen->add_subcommand("random", "reproducible random metric with values in [1,2]");
    gen_random->add_option("--n", gen_n, "point count (>= 2)")->required();
    gen_random->add_option("--seed", gen_seed, "RNG seed")->required();
    gen_random->add_option("-o,--output", gen_out, "output matrix file")->required();

    auto* subdominant = app.add_subcommand(
        "subdominant", "pointwise-maximal ultrametric below a metric (minimax path values)");
    std::string sub_dist, sub_out;
    subdominant->add_option("-d,--dist", sub_dist, "metric matrix file")->required();
    subdominant->add_option("-o,--output", sub_out, "output matrix file")->required();

    auto* extend_cmd = app.add_subcommand(
        "extend", "extend a subset ultrametric to the whole space via nearest neighbors");
    std::string ext_dist, ext_subset, ext_rho, ext_out;
    double ext_factor = 1.0;
    bool ext_report = false;
    extend_cmd->add_option("-d,--dist", ext_dist, "metric matrix file")->required();
    extend_cmd->add_option("-s,--subset", ext_subset, "subset index file")->required();
    extend_cmd->add_option("-r,--rho", ext_rho, "subset ultrametric matrix file")->required();
    auto* ext_factor_opt =
        extend_cmd->add_option("--D", ext_factor, "approximation factor of rho on the subset "
                                                  "(inferred when omitted)");
    extend_cmd->add_option("-o,--output", ext_out, "output matrix file for the extension")->required();
    extend_cmd->add_flag("--report", ext_report, "print the verification report block");

    auto* verify_cmd =
        app.add_subcommand("verify", "check an extension against all distortion bounds");
    std::string ver_dist, ver_subset, ver_rho, ver_rhobar;
    double ver_factor = 1.0;
    verify_cmd->add_option("-d,--dist", ver_dist, "metric matrix file")->required();
    verify_cmd->add_option("-s,--subset", ver_subset, "subset index file")->required();
    verify_cmd->add_option("-r,--rho", ver_rho, "subset ultrametric matrix file")->required();
    verify_cmd->add_option("-R,--rhobar", ver_rhobar, "candidate extension matrix file")->required();
    verify_cmd->add_option("--D", ver_factor, "approximation factor")->required();

    auto* tightness_cmd = app.add_subcommand(
        "tightness", "worst-case line instance: construction distortion, oracle optimum, chain bound");
    unsigned tight_factor = 1;
    double tight_resolution = 1e-6;
    tightness_cmd->add_option("--D", tight_factor, "integer approximation factor (>= 1)")->required();
    tightness_cmd->add_option("--resolution", tight_resolution, "oracle search resolution");

    auto* oracle_cmd = app.add_subcommand(
        "oracle", "optimal extension distortion by feasibility search (at most 16 points)");
    std::string ora_dist, ora_subset, ora_rho;
    double ora_resolution = 1e-6;
    oracle_cmd->add_option("-d,--dist", ora_dist, "metric matrix file")->required();
    oracle_cmd->add_option("-s,--subset", ora_subset, "subset index file")->required();
    oracle_cmd->add_option("-r,--rho", ora_rho, "subset ultrametric matrix file")->required();
    oracle_cmd->add_option("--resolution", ora_resolution, "search resolution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_path->parsed()) return run_gen_path(gen_n, gen_out);
        if (gen_random->parsed()) return run_gen_random(gen_n, gen_seed, gen_out);
        if (subdominant->parsed()) return run_subdominant(sub_dist, sub_out);
        if (extend_cmd->parsed()) {
            return run_extend(ext_dist, ext_subset, ext_rho, ext_factor, ext_factor_opt->count() > 0,
                              ext_out, ext_report);
        }
        if (verify_cmd->parsed()) return run_verify(ver_dist, ver_subset, ver_rho, ver_rhobar, ver_factor);
        if (tightness_cmd->parsed()) return run_tightness(tight_factor, tight_resolution);
        if (oracle_cmd->parsed()) return run_oracle(ora_dist, ora_subset, ora_rho, ora_resolution);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
