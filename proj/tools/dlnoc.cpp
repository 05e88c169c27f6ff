// dlnoc: command-line front end for flow-matrix load distribution.
//
//   dlnoc profile  FILE
//   dlnoc solve    FILE [--truncate] [--dump-matrix]
//   dlnoc verify   FILE [--truncate]
//   dlnoc sweep    FILE --grid START:STOP:STEP [--truncate] [--format csv|json] [--out PATH] [--threads N]
//   dlnoc gantt    FILE [--truncate] [--out PATH]
//
// Exit codes: 0 ok, 2 invalid input, 3 infeasible without truncation,
// 4 verification failure. Without --out, sweep and gantt write into
// $DLNOC_OUTPUT_DIR when set, else to stdout.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dlnoc/dlnoc.hpp"

namespace {

using namespace dlnoc;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_verify_failed = 4;

struct Solution {
    FlowMatrix matrix; ///< system actually solved (truncated when levels were dropped)
    LevelAllocation allocation;
    std::size_t levels_used = 0;
    FeasibilityReport feasibility;
};

Solution solve_scenario(const ScenarioFile& f, const LevelProfile& profile, bool truncate) {
    Solution s;
    if (truncate) {
        auto t = solve_with_truncation(profile, f.scenario.sigma, f.protocol);
        s.matrix = std::move(t.matrix);
        s.allocation = std::move(t.allocation);
        s.levels_used = t.levels_used;
    } else {
        s.matrix = build_flow_matrix(f.protocol, profile, f.scenario.sigma);
        s.allocation = solve(s.matrix);
        s.levels_used = profile.levels();
    }
    s.feasibility = check_feasibility(s.allocation, s.matrix);
    return s;
}

std::string coords_text(const Topology& topo, NodeId node) {
    std::string out = "(";
    const auto c = topo.coordinates(node);
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
    return out + ")";
}

void print_header(std::ostream& os, const ScenarioFile& f) {
    os << "topology   " << f.topology.name() << '\n';
    os << "injection  node " << f.injection.node << ' ' << coords_text(f.topology, f.injection.node) << ' '
       << to_string(f.injection.cls) << '\n';
    os << "protocol   " << to_string(f.protocol) << '\n';
    os << "sigma      " << sig12(f.scenario.sigma);
    if (f.sigma_derived)
        os << "  (derived: z*Tcm/(omega*Tcp) with omega=" << sig12(f.scenario.omega) << " z=" << sig12(f.scenario.z)
           << " Tcp=" << sig12(f.scenario.tcp) << " Tcm=" << sig12(f.scenario.tcm) << ')';
    os << '\n';
}

std::string counts_text(const LevelProfile& p) {
    std::string out;
    for (std::size_t d = 0; d < p.levels(); ++d) out += (d ? " " : "") + std::to_string(p.counts[d]);
    return out;
}

/// Resolves --out / $DLNOC_OUTPUT_DIR; null means stdout.
std::unique_ptr<std::ofstream> open_output(const std::string& out, const std::string& default_name) {
    std::filesystem::path path;
    if (!out.empty()) {
        if (out == "-") return nullptr;
        path = out;
    } else if (const char* dir = std::getenv("DLNOC_OUTPUT_DIR"); dir && *dir) {
        std::filesystem::create_directories(dir);
        path = std::filesystem::path(dir) / default_name;
    } else {
        return nullptr;
    }
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw std::runtime_error("cannot open output file " + path.string());
    std::cerr << "wrote " << path.string() << '\n';
    return f;
}

int cmd_profile(const ScenarioFile& f) {
    const auto p = level_profile(f.topology, f.injection);
    std::cout << "topology   " << f.topology.name() << " (" << f.topology.node_count() << " nodes)\n";
    std::cout << "injection  node " << f.injection.node << ' ' << coords_text(f.topology, f.injection.node) << ' '
              << to_string(f.injection.cls) << '\n';
    std::cout << "levels     " << p.levels() << '\n';
    std::cout << "counts     " << counts_text(p) << '\n';
    return exit_ok;
}

int cmd_solve(const ScenarioFile& f, bool truncate, bool dump_matrix) {
    const auto profile = level_profile(f.topology, f.injection);
    const auto s = solve_scenario(f, profile, truncate);
    print_header(std::cout, f);
    std::cout << "counts     " << counts_text(profile) << '\n';
    if (dump_matrix) {
        std::cout << "flow matrix\n";
        dump(std::cout, s.matrix.entries);
    }
    const auto reps = profile.representatives();
    std::cout << "level  nodes  node  fraction\n";
    for (std::size_t d = 0; d < profile.levels(); ++d)
        std::cout << d << "  " << profile.counts[d] << "  " << reps[d] << "  " << sig12(s.allocation.fractions[d])
                  << '\n';
    std::cout << "levels_used      " << s.levels_used << '\n';
    std::cout << "residual         " << sig12(s.allocation.residual_norm) << '\n';
    std::cout << "feasible         " << (s.feasibility.feasible ? "yes" : "no") << '\n';
    for (const auto& [level, value] : s.feasibility.violations)
        std::cout << "  violation      level " << level << " fraction " << sig12(value) << '\n';
    std::cout << "sigma_in_regime  " << (s.feasibility.sigma_in_regime ? "yes" : "no") << '\n';
    if (s.allocation.fractions.front() > 0.0) {
        const auto m = compute_metrics(s.allocation, f.scenario, s.matrix, f.load);
        std::cout << "speedup          " << sig12(m.speedup) << '\n';
        std::cout << "speedup_det      " << sig12(m.speedup_det) << '\n';
        std::cout << "makespan         " << sig12(m.makespan) << '\n';
        std::cout << "w_eq             " << sig12(m.w_eq) << '\n';
    }
    return s.feasibility.feasible ? exit_ok : exit_infeasible;
}

int cmd_verify(const ScenarioFile& f, bool truncate) {
    const auto profile = level_profile(f.topology, f.injection);
    const auto s = solve_scenario(f, profile, truncate);
    print_header(std::cout, f);
    if (!s.feasibility.feasible) {
        std::cout << "FAIL feasibility (use --truncate or options.truncate)\n";
        return exit_infeasible;
    }
    bool ok = true;
    auto report = [&](bool pass, const std::string& what, double value) {
        std::cout << (pass ? "PASS " : "FAIL ") << what << "  " << sig12(value) << '\n';
        ok = ok && pass;
    };

    const std::size_t k = s.matrix.size();
    report(s.allocation.residual_norm <= f.residual_tol * double(k), "residual", s.allocation.residual_norm);

    double norm = 0.0;
    for (std::size_t d = 0; d < profile.levels(); ++d) norm += double(profile.counts[d]) * s.allocation.fractions[d];
    report(std::abs(norm - 1.0) <= tolerance::golden, "normalization", norm);

    const auto tl = evaluate(f.protocol, s.allocation, profile, f.scenario);
    const auto sim = verify_simultaneous(tl, f.simultaneous_tol);
    report(sim.simultaneous, "simultaneous_finish", sim.max_deviation);

    double cramer_dev = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
        const double a = s.allocation.fractions[d];
        const double rel = std::abs(cramer_fraction(s.matrix, d) - a) / std::max(std::abs(a), 1e-300);
        cramer_dev = std::max(cramer_dev, rel);
    }
    report(cramer_dev <= f.cramer_tol, "cramer_agreement", cramer_dev);

    const auto m = compute_metrics(s.allocation, f.scenario, s.matrix);
    const double det_dev = std::abs(m.speedup - m.speedup_det) / m.speedup;
    report(det_dev <= f.cramer_tol, "determinant_speedup", det_dev);

    const double mk_dev = std::abs(tl.makespan - m.makespan) / m.makespan;
    report(mk_dev <= tolerance::golden, "makespan_consistency", mk_dev);

    return ok ? exit_ok : exit_verify_failed;
}

int cmd_sweep(const ScenarioFile& f, const std::string& grid_spec, bool truncate, const std::string& format,
              const std::string& out, unsigned threads) {
    const auto grid = parse_grid(grid_spec);
    const auto mode = truncate ? InfeasibleMode::truncate : InfeasibleMode::flag;
    const auto table = sweep_sigma(f.topology, f.injection, f.protocol, grid, f.scenario, mode, threads);
    auto file = open_output(out, sweep_file_name(f.topology, f.injection, f.protocol, format));
    std::ostream& os = file ? *file : std::cout;
    if (format == "json") emit_json(os, table);
    else emit_csv(os, table);
    return exit_ok;
}

int cmd_gantt(const ScenarioFile& f, bool truncate, const std::string& out) {
    const auto profile = level_profile(f.topology, f.injection);
    const auto s = solve_scenario(f, profile, truncate);
    if (!s.feasibility.feasible) {
        std::cerr << "infeasible allocation; rerun with --truncate\n";
        return exit_infeasible;
    }
    const auto tl = evaluate(f.protocol, s.allocation, profile, f.scenario);
    const auto records = expand_gantt(tl, distribution_tree(f.topology, f.injection), profile);
    std::string label = to_string(f.injection.cls);
    if (f.injection.node != 0) label += std::to_string(f.injection.node);
    auto file = open_output(out, f.topology.name() + "_" + label + "_" + to_string(f.protocol) + "_gantt.csv");
    write_gantt_csv(file ? *file : std::cout, records);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal divisible-load distribution on mesh, torus and hypercube networks"};
    app.require_subcommand(1);

    std::string file, grid, format = "csv", out;
    bool truncate = false, dump_matrix = false;
    unsigned threads = 1;

    auto* profile = app.add_subcommand("profile", "Print hop-level node counts and injection class");
    auto* solve_cmd = app.add_subcommand("solve", "Print optimal fractions, metrics and feasibility");
    auto* verify = app.add_subcommand("verify", "Cross-check solve against timeline, Cramer and determinants");
    auto* sweep = app.add_subcommand("sweep", "Solve over a sigma grid and write CSV/JSON");
    auto* gantt = app.add_subcommand("gantt", "Write per-node Gantt CSV");

    for (auto* sub : {profile, solve_cmd, verify, sweep, gantt})
        sub->add_option("file", file, "Scenario file (JSON)")->required();
    for (auto* sub : {solve_cmd, verify, sweep, gantt})
        sub->add_flag("--truncate", truncate, "Drop deepest levels until the allocation is feasible");
    solve_cmd->add_flag("--dump-matrix", dump_matrix, "Also print the flow matrix");
    sweep->add_option("--grid", grid, "Sigma grid start:stop:step")->required();
    sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 64u));
    for (auto* sub : {sweep, gantt}) sub->add_option("--out", out, "Output path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_invalid;
    }

    try {
        const auto f = load_scenario(file);
        const bool trunc = truncate || f.truncate;
        if (*profile) return cmd_profile(f);
        if (*solve_cmd) return cmd_solve(f, trunc, dump_matrix);
        if (*verify) return cmd_verify(f, trunc);
        if (*sweep) return cmd_sweep(f, grid, trunc, format, out, threads);
        if (*gantt) return cmd_gantt(f, trunc, out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_infeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_invalid;
}
