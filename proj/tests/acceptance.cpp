// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dlnoc/dlnoc.hpp"
#include "oracle/rational_oracle.hpp"

using namespace dlnoc;
using Counts = std::vector<std::size_t>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

std::string num(double v) { return sig12(v); }

Counts corner_counts(const Topology& t) { return level_profile(t, injection_at(t, NodeId{0})).counts; }

struct Instance {
    Topology topology;
    Counts counts;
};

/// mesh m x n (m, n <= 6), torus up to 5 x 5, hypercube q <= 5; node 0 injection.
std::vector<Instance> oracle_instances() {
    std::vector<Instance> out;
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= 6; ++n) out.push_back({Topology::mesh(m, n), corner_counts(Topology::mesh(m, n))});
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) out.push_back({Topology::torus(m, n), corner_counts(Topology::torus(m, n))});
    for (int q = 0; q <= 5; ++q) out.push_back({Topology::hypercube(q), corner_counts(Topology::hypercube(q))});
    return out;
}

const std::vector<double> tenth_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// Node fractions of the 2x2 mesh, P0..P3, from per-level fractions.
std::vector<double> nodes_2x2(const std::vector<double>& level) { return {level[0], level[1], level[1], level[2]}; }

Outcome criterion_vct_closed_form() {
    Outcome o;
    double worst = 0;
    for (double s : tenth_grid) {
        const auto fm = build_vct(Counts{1, 2, 1}, s);
        const auto a = solve(fm);
        const auto n = nodes_2x2(a.fractions);
        const double want[] = {1 / (4 - s), 1 / (4 - s), 1 / (4 - s), (1 - s) / (4 - s)};
        for (int i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(n[static_cast<std::size_t>(i)] - want[i]));
            o.check(std::abs(n[static_cast<std::size_t>(i)] - want[i]) <= 1e-12,
                    "sigma=" + num(s) + " alpha_" + std::to_string(i));
        }
        const auto m = compute_metrics(a, Scenario::from_sigma(s), fm);
        o.check(std::abs(m.speedup - (4 - s)) <= 1e-12 * (4 - s), "speedup at sigma=" + num(s));
    }
    o.detail = "max |err| " + num(worst);
    return o;
}

Outcome criterion_snf_closed_form() {
    Outcome o;
    double worst = 0;
    for (double s : tenth_grid) {
        const auto n = nodes_2x2(solve(build_snf(Counts{1, 2, 1}, s)).fractions);
        const double s1 = s + 1, s2 = s + 2;
        const double want[] = {(s1 / s2) * (s1 / s2), s1 / (s2 * s2), s1 / (s2 * s2), 1 / (s2 * s2)};
        for (int i = 0; i < 4; ++i) {
            worst = std::max(worst, std::abs(n[static_cast<std::size_t>(i)] - want[i]));
            o.check(std::abs(n[static_cast<std::size_t>(i)] - want[i]) <= 1e-12,
                    "sigma=" + num(s) + " alpha_" + std::to_string(i));
        }
    }
    const double at_one = solve(build_snf(Counts{1, 2, 1}, 1.0)).fractions[2];
    o.check(std::abs(at_one - 1.0 / 9) <= 1e-12, "level-2 fraction at sigma=1 is " + num(at_one));
    o.detail = "max |err| " + num(worst) + ", level 2 at sigma=1: " + num(at_one);
    return o;
}

Outcome criterion_fast_limit() {
    Outcome o;
    const double s = 1e-9;
    for (Protocol p : {Protocol::vct, Protocol::snf}) {
        const auto fm = build_flow_matrix(p, Counts{1, 2, 1}, s);
        const auto a = solve(fm);
        for (double v : nodes_2x2(a.fractions)) o.check(std::abs(v - 0.25) <= 1e-6, std::string(to_string(p)) + " fraction " + num(v));
        const auto m = compute_metrics(a, Scenario::from_sigma(s), fm);
        o.check(std::abs(m.speedup - 4.0) <= 1e-6, std::string(to_string(p)) + " speedup " + num(m.speedup));
        o.detail += std::string(to_string(p)) + " speedup " + num(m.speedup) + " ";
    }
    return o;
}

Outcome criterion_level_profiles() {
    Outcome o;
    const auto a = corner_counts(Topology::mesh(3, 8));
    const auto b = corner_counts(Topology::mesh(5, 5));
    o.check(a == Counts{1, 2, 3, 3, 3, 3, 3, 3, 2, 1}, "mesh3x8");
    o.check(b == Counts{1, 2, 3, 4, 5, 4, 3, 2, 1}, "mesh5x5");
    // first row of the flow matrix is the level profile
    for (std::size_t d = 0; d < b.size(); ++d) o.check(build_vct(b, 0.5).entries(0, d) == double(b[d]), "row 0");
    o.detail = "3x8 and 5x5 corner profiles";
    return o;
}

oracle::Switching switching(Protocol p) {
    return p == Protocol::vct ? oracle::Switching::cut_through : oracle::Switching::store_forward;
}

Outcome criterion_oracle_equivalence(std::size_t& solves) {
    Outcome o;
    double worst_abs = 0, worst_cramer = 0;
    for (const auto& inst : oracle_instances())
        for (Protocol p : {Protocol::vct, Protocol::snf})
            for (int i = 1; i <= 9; ++i) {
                const auto exact = oracle::solve(inst.counts, oracle::Rational(i) / 10, switching(p));
                const auto fm = build_flow_matrix(p, inst.counts, i / 10.0);
                const auto a = solve(fm);
                ++solves;
                for (std::size_t d = 0; d < inst.counts.size(); ++d) {
                    const double err = std::abs(a.fractions[d] - oracle::to_double(exact[d]));
                    worst_abs = std::max(worst_abs, err);
                    o.check(err <= 1e-12, inst.topology.name() + " " + to_string(p) + " level " + std::to_string(d));
                    const double c = cramer_fraction(fm, d);
                    const double rel = std::abs(c - a.fractions[d]) / std::abs(a.fractions[d]);
                    worst_cramer = std::max(worst_cramer, rel);
                    o.check(rel <= 1e-9, inst.topology.name() + " cramer level " + std::to_string(d));
                }
            }
    o.detail = std::to_string(solves) + " solves, max |err| " + num(worst_abs) + ", max cramer rel " + num(worst_cramer);
    return o;
}

Outcome criterion_simultaneous_finish() {
    Outcome o;
    std::size_t checked = 0, perturbed = 0;
    double worst = 0;
    for (const auto& inst : oracle_instances())
        for (Protocol p : {Protocol::vct, Protocol::snf})
            for (double s : tenth_grid) {
                const auto fm = build_flow_matrix(p, inst.counts, s);
                const auto a = solve(fm);
                if (!check_feasibility(a, fm).feasible) continue;
                const auto profile = profile_from_counts(inst.counts);
                const auto sc = Scenario::from_sigma(s);
                const auto chk = verify_simultaneous(evaluate(p, a, profile, sc), 1e-9);
                worst = std::max(worst, chk.max_deviation);
                ++checked;
                o.check(chk.simultaneous, inst.topology.name() + " " + to_string(p) + " sigma=" + num(s));
                if (inst.counts.size() < 2) continue; // a lone node cannot be unbalanced
                auto bumped = a;
                bumped.fractions[0] *= 1.01;
                double total = 0;
                for (std::size_t d = 0; d < inst.counts.size(); ++d) total += double(inst.counts[d]) * bumped.fractions[d];
                for (double& x : bumped.fractions) x /= total;
                ++perturbed;
                o.check(!verify_simultaneous(evaluate(p, bumped, profile, sc), 1e-9).simultaneous,
                        "perturbed " + inst.topology.name() + " still simultaneous");
            }
    o.detail = std::to_string(checked) + " feasible timelines, max dev " + num(worst) + "; " + std::to_string(perturbed) +
               " perturbed allocations rejected";
    return o;
}

Outcome criterion_determinant_identities() {
    Outcome o;
    double worst_a0 = 0, worst_speedup = 0, min_det = INFINITY;
    for (const auto& inst : oracle_instances()) {
        for (double s : tenth_grid) {
            const auto fm = build_vct(inst.counts, s);
            const double a0 = replaced_determinant(fm, 0);
            worst_a0 = std::max(worst_a0, std::abs(std::abs(a0) - 1.0));
            o.check(std::abs(std::abs(a0) - 1.0) <= 1e-9, inst.topology.name() + " |det A*_0| = " + num(a0));
            const double speedup = 1.0 / solve(fm).fractions[0];
            const double rel = std::abs(speedup - std::abs(determinant(fm))) / speedup;
            worst_speedup = std::max(worst_speedup, rel);
            o.check(rel <= 1e-9, inst.topology.name() + " speedup vs |det A| at sigma=" + num(s));
        }
        for (int i = 1; i <= 99; ++i) {
            const double det = std::abs(determinant(build_vct(inst.counts, i / 100.0)));
            min_det = std::min(min_det, det);
            o.check(det > 0.0, inst.topology.name() + " singular at sigma=" + num(i / 100.0));
        }
    }
    o.detail = "max ||det A*_0|-1| " + num(worst_a0) + ", max speedup/|det A| rel " + num(worst_speedup) +
               ", min |det A| " + num(min_det);
    return o;
}

Outcome criterion_hand_instance() {
    Outcome o;
    const auto topo = Topology::mesh(2, 3);
    const auto counts = corner_counts(topo);
    o.check(counts == Counts{1, 2, 2, 1}, "mesh2x3 profile");
    const auto fm = build_vct(counts, 0.5);
    const auto a = solve(fm);
    const double want[] = {4.0 / 17, 4.0 / 17, 2.0 / 17, 1.0 / 17};
    for (std::size_t d = 0; d < 4; ++d) o.check(std::abs(a.fractions[d] - want[d]) <= 1e-12, "level " + std::to_string(d));
    const auto exact = oracle::solve(counts, oracle::Rational(1) / 2, oracle::Switching::cut_through);
    for (std::size_t d = 0; d < 4; ++d)
        o.check(exact[d] == oracle::Rational(d < 2 ? 4 : d == 2 ? 2 : 1) / 17, "oracle level " + std::to_string(d));
    const auto m = compute_metrics(a, Scenario::from_sigma(0.5), fm);
    o.check(std::abs(m.speedup - 4.25) <= 1e-12, "speedup " + num(m.speedup));
    o.detail = "speedup " + num(m.speedup);
    return o;
}

Outcome criterion_trends() {
    Outcome o;
    const auto topo = Topology::mesh(2, 2);
    const auto inj = injection_at(topo, NodeId{0});
    const auto grid = parse_grid("0.01:0.99:0.01");
    const auto base = Scenario::from_sigma(0.5);
    const auto snf = sweep_sigma(topo, inj, Protocol::snf, grid, base);
    const auto vct = sweep_sigma(topo, inj, Protocol::vct, grid, base);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto& a = snf.rows[i - 1].level_fractions;
        const auto& b = snf.rows[i].level_fractions;
        o.check(b[0] > a[0], "snf alpha_0 not increasing at " + num(grid[i]));
        o.check(b[1] < a[1], "snf alpha_1 not decreasing at " + num(grid[i]));
        o.check(b[2] < a[2], "snf level 2 not decreasing at " + num(grid[i]));
        o.check(vct.rows[i].level_fractions[2] < vct.rows[i - 1].level_fractions[2],
                "vct level 2 not decreasing at " + num(grid[i]));
    }
    auto csv = [&](Protocol p, unsigned threads) {
        std::ostringstream os;
        emit_csv(os, sweep_sigma(topo, inj, p, grid, base, InfeasibleMode::flag, threads));
        return os.str();
    };
    for (Protocol p : {Protocol::snf, Protocol::vct}) {
        const auto first = csv(p, 1);
        o.check(first == csv(p, 1), "csv differs between runs");
        o.check(first == csv(p, 4), "csv differs with threads");
    }
    o.detail = std::to_string(grid.size()) + " grid points, CSV byte-identical across runs";
    return o;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    std::size_t solves = 0;
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {"2x2 VCT closed form", criterion_vct_closed_form, 1.0},
        {"2x2 modified S&F closed form", criterion_snf_closed_form, 1.0},
        {"fast-communication limit", criterion_fast_limit, 1.0},
        {"level profiles", criterion_level_profiles, 1.0},
        {"oracle equivalence", [&] { return criterion_oracle_equivalence(solves); }, 60.0},
        {"simultaneous-finish property", criterion_simultaneous_finish, 60.0},
        {"determinant identities", criterion_determinant_identities, 60.0},
        {"hand-derived instance", criterion_hand_instance, 1.0},
        {"trend reproduction", criterion_trends, 60.0},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        o.check(secs < criteria[i].budget_s, "runtime " + num(secs) + " s over budget");
        std::printf("%s [%zu] %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), secs);
        for (const auto& f : o.failures) std::printf("       - %s\n", f.c_str());
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
