// Acceptance suite: end-to-end checks of the extension operator's guarantees,
// the worst-case tightness numbers, the subdominant oracle, the degenerate
// cases, and CLI determinism. One pass/fail line per criterion; exit status 0
// only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "umex/umex.hpp"

#ifndef UMEX_CLI_PATH
#error "UMEX_CLI_PATH must point at the built CLI binary"
#endif

namespace {

using namespace umex;

struct Failure {
    std::string reason;
};

void expect(bool ok, const std::string& reason) {
    if (!ok) throw Failure{reason};
}

double parse_field(const std::string& line, const std::string& key) {
    const auto pos = line.find(key + "=");
    expect(pos != std::string::npos, "missing field " + key + " in: " + line);
    return std::stod(line.substr(pos + key.size() + 1));
}

// 1. Tightness reproduction: for D in {1,2,3} the construction's S x X
//    distortion is exactly 2D+1 (tolerance 1e-9) and the oracle optimum is
//    2D+1 within 2e-6 at resolution 1e-6; the CLI reports the same line.
void criterion_tightness(std::string& detail) {
    std::ostringstream times;
    testutil::TempDir dir;
    for (unsigned d = 1; d <= 3; ++d) {
        const auto start = std::chrono::steady_clock::now();
        const double target = 2.0 * d + 1.0;
        const auto inst = worst_case_instance(d);
        const auto rhobar = extend(inst.space, inst.subset, inst.rho, d);
        const auto rep = verify_extension(inst.space, inst.subset, inst.rho, rhobar.dist(), d);
        expect(rep.all_ok(), "construction fails its own bounds at D=" + std::to_string(d));
        expect(std::abs(rep.cross_distortion - target) <= 1e-9,
               "construction distortion " + format_value(rep.cross_distortion) + " != " +
                   format_value(target));
        const auto oracle = optimal_extension_distortion(inst.space, inst.subset, inst.rho, 1e-6);
        expect(std::abs(oracle.stretch_cap - target) <= 2e-6,
               "oracle distortion " + format_value(oracle.stretch_cap) + " not within 2e-6 of " +
                   format_value(target));

        const auto cli = testutil::run_command(
            dir, std::string(UMEX_CLI_PATH) + " tightness --D " + std::to_string(d));
        expect(cli.exit_code == 0, "tightness CLI exited " + std::to_string(cli.exit_code));
        expect(std::abs(parse_field(cli.out, "construction_distortion") - target) <= 1e-9,
               "CLI construction_distortion drifted: " + cli.out);
        expect(std::abs(parse_field(cli.out, "oracle_distortion") - target) <= 2e-6,
               "CLI oracle_distortion drifted: " + cli.out);
        expect(parse_field(cli.out, "chain_bound") >= target - 1e-9,
               "CLI chain_bound below target: " + cli.out);

        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        expect(secs < 5.0, "D=" + std::to_string(d) + " took " + format_value(secs) + "s (budget 5s)");
        times << " D" << d << "=" << format_value(secs) << "s";
    }
    detail = "construction = oracle = 2D+1 for D in {1,2,3};" + times.str();
}

// 2. Extension guarantee suite: 200 random instances, extend output passes
//    the full-triple strong-triangle scan, restricts bit-exactly, and meets
//    the D/(D+1), 2D/(2D+1), and 2D bounds with slack >= -1e-9.
void criterion_property_suite(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < 200; ++k) {
        std::mt19937_64 rng(k * 0x9e3779b9ULL + 1);
        const std::size_t n = 3 + k % 10;  // 3..12
        const auto space = random_metric(n, k);
        const auto subset = testutil::random_subset(rng, n, 1);
        const auto [rho, factor] = dominating_ultrametric_on_subset(space, subset);
        const auto rhobar = extend(space, subset, rho, factor);
        const std::string tag = " (instance " + std::to_string(k) + ")";

        // (a) strong triangle inequality, full triple scan
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == i || l == j) continue;
                    expect(leq_within(rhobar(i, j), std::max(rhobar(i, l), rhobar(l, j))),
                           "strong triangle fails" + tag);
                }
            }
        }
        // (b) bit-exact restriction
        for (std::size_t a = 0; a < subset.size(); ++a) {
            for (std::size_t b = 0; b < subset.size(); ++b) {
                expect(rhobar(subset[a], subset[b]) == rho(a, b), "restriction not bit-exact" + tag);
            }
        }
        // (c) distortion bounds
        const double global_lower = (2.0 * factor) / (2.0 * (factor + 1.0));
        const double cross_lower = (2.0 * factor) / (2.0 * factor + 1.0);
        const double cross_upper = 2.0 * factor;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                expect(leq_within(global_lower * space(i, j), rhobar(i, j)),
                       "global lower bound fails" + tag);
                if (!subset.contains(i) && !subset.contains(j)) continue;
                expect(leq_within(cross_lower * space(i, j), rhobar(i, j)),
                       "cross lower bound fails" + tag);
                expect(leq_within(rhobar(i, j), cross_upper * space(i, j)),
                       "cross upper bound fails" + tag);
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(secs < 10.0, "suite took " + format_value(secs) + "s (budget 10s)");
    detail = "200 instances (n in [3,12]), zero failures, " + format_value(secs) + "s";
}

// 3. Chain lower bound: every dominating ultrametric on the worst-case line
//    has max adjacent value >= 2D+1 - 1e-9; the uniform 2D+1 achieves it.
void criterion_chain_bound(std::string& detail) {
    for (unsigned d = 1; d <= 5; ++d) {
        const double target = 2.0 * d + 1.0;
        const auto inst = worst_case_instance(d);
        const auto base = extend(inst.space, inst.subset, inst.rho, d);
        double lift = 0.0;
        const std::size_t n = inst.space.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!inst.subset.contains(i) && !inst.subset.contains(j)) continue;
                lift = std::max(lift, inst.space(i, j) / base(i, j));
            }
        }
        std::mt19937_64 rng(d * 101);
        for (int sample = 0; sample < 50; ++sample) {
            double bound;
            if (sample == 0) {
                // the uniform 2D+1 ultrametric meets the bound exactly
                const auto uniform = validate_ultrametric(uniform_offdiagonal(n, target));
                bound = chain_lower_bound(uniform, d);
                expect(bound == target, "uniform ultrametric missed equality at D=" + std::to_string(d));
            } else if (sample % 2 == 0) {
                const double value = target * testutil::uniform_in(rng, 1.0, 2.0);
                bound = chain_lower_bound(validate_ultrametric(uniform_offdiagonal(n, value)), d);
            } else {
                const double extra = testutil::uniform_in(rng, 1.0, 2.0);
                bound = chain_lower_bound(scale(base, lift * extra), d);
            }
            expect(bound >= target - 1e-9, "chain bound " + format_value(bound) + " below " +
                                               format_value(target) + " at D=" + std::to_string(d));
        }
    }
    detail = "D in {1..5} x 50 dominating samples, all >= 2D+1 - 1e-9, equality at uniform 2D+1";
}

// 4. Subdominant oracle consistency: single-linkage closure equals the
//    all-simple-paths minimax on 100 tiny instances, and no entry can be
//    bumped while staying a valid ultrametric below d.
void criterion_subdominant(std::string& detail) {
    for (std::uint64_t k = 0; k < 100; ++k) {
        const std::size_t n = 3 + k % 4;  // 3..6
        const auto space = random_metric(n, 4000 + k);
        const auto sub = subdominant_ultrametric(space);
        const std::string tag = " (instance " + std::to_string(k) + ")";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double brute = testutil::brute_force_minimax(space.dist(), i, j);
                expect(std::abs(sub(i, j) - brute) <= 1e-12,
                       "single-linkage disagrees with brute force" + tag);
                for (const double delta : {0.01, 0.1}) {
                    SquareMatrix bumped = sub.dist();
                    bumped(i, j) = bumped(j, i) = sub(i, j) + delta;
                    bool valid_below_d = bumped(i, j) <= space(i, j);
                    if (valid_below_d) {
                        try {
                            validate_ultrametric(bumped);
                        } catch (const ValidationError&) {
                            valid_below_d = false;
                        }
                    }
                    expect(!valid_below_d, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                               ") can grow by " + format_value(delta) + tag);
                }
            }
        }
    }
    detail = "100 instances (n <= 6): brute-force match <= 1e-12, perturbation maximality holds";
}

// 5. Degenerate cases: S = X copies rho verbatim; |S| = 1 follows the
//    two-term max formula and passes every check for any D >= 1.
void criterion_degenerate(std::string& detail) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t n = 3 + seed % 8;
        const auto space = random_metric(n, 7000 + seed);
        const auto full = SubsetSelection::full(n);
        const auto [rho, factor] = dominating_ultrametric_on_subset(space, full);
        const auto rhobar = extend(space, full, rho, factor);
        expect(rhobar.dist() == rho.dist(), "S = X did not return rho verbatim");

        const SubsetSelection single({seed % n}, n);
        const auto zero = validate_ultrametric(SquareMatrix(1, 0.0));
        for (const double d_factor : {1.0, 1.5, 3.0, 10.0}) {
            const auto ext = extend(space, single, zero, d_factor);
            const std::size_t s = single[0];
            for (std::size_t x = 0; x < n; ++x) {
                for (std::size_t y = x + 1; y < n; ++y) {
                    const double want =
                        std::max(2.0 * d_factor * space(x, s), 2.0 * d_factor * space(y, s));
                    expect(ext(x, y) == want, "two-term max formula mismatch");
                }
            }
            expect(verify_extension(space, single, zero, ext.dist(), d_factor).all_ok(),
                   "|S|=1 extension fails verification at D=" + format_value(d_factor));
        }
    }
    detail = "S = X verbatim on 10 instances; |S| = 1 passes all checks for D in {1,1.5,3,10}";
}

// 6. CLI determinism and fixture round-trip.
void criterion_cli(std::string& detail) {
    testutil::TempDir dir;
    const std::string cli = UMEX_CLI_PATH;
    auto must_run = [&](const std::string& cmd) {
        const auto r = testutil::run_command(dir, cmd);
        expect(r.exit_code == 0, "command failed: " + cmd + "\n" + r.err);
        return r;
    };

    // fixtures produced by the CLI itself
    must_run(cli + " gen path --n 4 -o " + dir.file("p4.txt"));
    must_run(cli + " gen path --n 6 -o " + dir.file("p6.txt"));
    must_run(cli + " gen random --n 5 --seed 7 -o " + dir.file("r5.txt"));
    must_run(cli + " gen random --n 8 --seed 11 -o " + dir.file("r8.txt"));
    must_run(cli + " subdominant -d " + dir.file("r8.txt") + " -o " + dir.file("sub8.txt"));
    testutil::write_file(dir.file("s.txt"), "1 3\n");
    testutil::write_file(dir.file("rho.txt"), "2\n0 2\n2 0\n");
    must_run(cli + " extend -d " + dir.file("p4.txt") + " -s " + dir.file("s.txt") + " -r " +
             dir.file("rho.txt") + " --D 1 -o " + dir.file("rhobar.txt"));

    // round trip: parse and re-write every fixture, bytes must match
    for (const char* name : {"p4.txt", "p6.txt", "r5.txt", "r8.txt", "sub8.txt", "rhobar.txt"}) {
        const std::string original = testutil::read_file(dir.file(name));
        const auto parsed = read_matrix_file(dir.file(name));
        std::ostringstream rewritten;
        write_matrix(rewritten, parsed);
        expect(rewritten.str() == original, std::string("round trip changed bytes for ") + name);
    }

    // determinism: repeated invocations byte-identical (stdout and files)
    const std::string repeat_cmds[] = {
        cli + " gen random --n 6 --seed 13 -o OUT",
        cli + " subdominant -d " + dir.file("r8.txt") + " -o OUT",
        cli + " extend -d " + dir.file("p4.txt") + " -s " + dir.file("s.txt") + " -r " +
            dir.file("rho.txt") + " --D 1 -o OUT --report",
        cli + " tightness --D 2 --resolution 1e-5",
        cli + " oracle -d " + dir.file("p4.txt") + " -s " + dir.file("s.txt") + " -r " +
            dir.file("rho.txt") + " --resolution 1e-5",
    };
    for (const auto& templ : repeat_cmds) {
        std::string captures[2];
        for (int round = 0; round < 2; ++round) {
            std::string cmd = templ;
            const std::string out_file = dir.file("det_" + std::to_string(round) + ".txt");
            if (const auto pos = cmd.find("OUT"); pos != std::string::npos) {
                cmd.replace(pos, 3, out_file);
            }
            const auto r = must_run(cmd);
            captures[round] = r.out;
            if (templ.find("OUT") != std::string::npos) {
                captures[round] += testutil::read_file(out_file);
            }
        }
        expect(captures[0] == captures[1], "repeated invocation differs for: " + templ);
    }
    detail = "6 fixtures round trip byte-exact; 5 invocation families byte-identical on repeat";
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        void (*run)(std::string&);
    };
    const Criterion criteria[] = {
        {"criterion 1: tightness reproduction (construction and oracle hit 2D+1)", criterion_tightness},
        {"criterion 2: extension property suite on 200 random instances", criterion_property_suite},
        {"criterion 3: chain lower bound over dominating ultrametrics", criterion_chain_bound},
        {"criterion 4: subdominant ultrametric vs brute-force minimax oracle", criterion_subdominant},
        {"criterion 5: degenerate subsets (S = X and |S| = 1)", criterion_degenerate},
        {"criterion 6: CLI determinism and fixture round-trip", criterion_cli},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            c.run(detail);
            std::printf("[PASS] %s — %s\n", c.label, detail.c_str());
        } catch (const Failure& f) {
            ++failures;
            std::printf("[FAIL] %s — %s\n", c.label, f.reason.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %s — unexpected exception: %s\n", c.label, e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
