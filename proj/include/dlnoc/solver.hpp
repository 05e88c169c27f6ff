#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlnoc/error.hpp"
#include "dlnoc/flow_matrix.hpp"

namespace dlnoc {

namespace tolerance {
inline constexpr double pivot = 1e-12;    ///< relative to max |A_ij|
inline constexpr double residual = 1e-10; ///< per level, max-norm of A*x - b
inline constexpr double golden = 1e-12;
inline constexpr double cramer = 1e-9; ///< relative
inline constexpr double negative = 1e-12;
} // namespace tolerance

/// Per-level optimal fractions alpha_hat_d; each node on level d receives fractions[d].
struct LevelAllocation {
    std::vector<double> fractions;
    double residual_norm = 0.0;
    bool rank_ok = true;
    std::size_t rank = 0;

    std::size_t levels() const noexcept { return fractions.size(); }
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<std::pair<std::size_t, double>> violations;
    bool sigma_in_regime = true; ///< 0 < sigma < 1
};

/// Max-norm of A*x - b.
inline double residual_norm(const FlowMatrix& fm, std::span<const double> x) {
    double worst = 0.0;
    for (std::size_t r = 0; r < fm.size(); ++r) {
        double acc = -fm.rhs[r];
        for (std::size_t c = 0; c < fm.size(); ++c) acc += fm.entries(r, c) * x[c];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

/// Gaussian elimination with partial pivoting. Throws SolverError when a pivot
/// falls below tolerance::pivot * max|A|.
inline LevelAllocation solve(const FlowMatrix& fm) {
    const std::size_t k = fm.size();
    if (k == 0 || fm.entries.rows() != k || fm.entries.cols() != k || fm.rhs.size() != k)
        throw InputError("malformed flow matrix");

    Matrix a = fm.entries;
    std::vector<double> b = fm.rhs;
    double scale = 0.0;
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) scale = std::max(scale, std::abs(a(r, c)));
    const double eps = tolerance::pivot * scale;

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (!(std::abs(a(piv, col)) > eps))
            throw SolverError("singular flow matrix: no usable pivot in column " + std::to_string(col),
                              col);
        a.swap_rows(piv, col);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < k; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }

    LevelAllocation out;
    out.fractions.assign(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < k; ++c) acc -= a(i, c) * out.fractions[c];
        out.fractions[i] = acc / a(i, i);
    }
    out.residual_norm = residual_norm(fm, out.fractions);
    out.rank = k;
    out.rank_ok = true;
    return out;
}

/// det(A*_i) / det(A), with A*_i = A whose column i is replaced by b.
/// The sign is kept, so infeasible (negative) fractions come back negative.
inline double cramer_fraction(const FlowMatrix& fm, std::size_t level) {
    if (level >= fm.size()) throw InputError("level " + std::to_string(level) + " out of range");
    const double det = determinant(fm);
    // Hadamard's bound: |det A| <= prod_r ||row_r||_2.
    double bound = 1.0;
    for (std::size_t r = 0; r < fm.size(); ++r) {
        double sq = 0.0;
        for (double v : fm.entries.row(r)) sq += v * v;
        bound *= std::sqrt(sq);
    }
    if (!std::isfinite(det) || !(std::abs(det) > tolerance::pivot * bound))
        throw SolverError("singular flow matrix: det A = " + decimal_literal(det), level);
    return replaced_determinant(fm, level) / det;
}

inline FeasibilityReport check_feasibility(const LevelAllocation& alloc, const FlowMatrix& fm) {
    FeasibilityReport rep;
    rep.sigma_in_regime = fm.sigma > 0.0 && fm.sigma < 1.0;
    for (std::size_t d = 0; d < alloc.fractions.size(); ++d) {
        const double v = alloc.fractions[d];
        const bool bad = d == 0 ? !(v > 0.0 && v <= 1.0 + tolerance::golden)
                                : !(v >= -tolerance::negative);
        if (bad) rep.violations.emplace_back(d, v);
    }
    rep.feasible = rep.violations.empty();
    return rep;
}

struct TruncatedSolve {
    LevelAllocation allocation; ///< padded with zeros to the full profile depth
    std::size_t levels_used = 0;
    FlowMatrix matrix; ///< the system actually solved (levels_used x levels_used)
};

/// Drop the deepest level (assigning it zero load) and re-solve until the
/// solution is feasible. A single level is always feasible.
inline TruncatedSolve solve_with_truncation(std::span<const std::size_t> counts, double sigma, Protocol protocol) {
    if (counts.empty()) throw InputError("level profile needs at least one level");
    for (std::size_t used = counts.size(); used >= 1; --used) {
        FlowMatrix fm = build_flow_matrix(protocol, counts.first(used), sigma);
        LevelAllocation alloc;
        try {
            alloc = solve(fm);
        } catch (const SolverError&) {
            if (used == 1) throw;
            continue;
        }
        if (used > 1 && !check_feasibility(alloc, fm).feasible) continue;
        alloc.fractions.resize(counts.size(), 0.0);
        return {std::move(alloc), used, std::move(fm)};
    }
    throw SolverError("truncation exhausted", 0); // unreachable: one level is [[1]]
}

inline TruncatedSolve solve_with_truncation(const LevelProfile& profile, double sigma, Protocol protocol) {
    return solve_with_truncation(std::span<const std::size_t>(profile.counts), sigma, protocol);
}

/// Explicit 2x2-mesh corner-injection solutions, per level (P0, {P1,P2}, P3).
///   VCT: a0 = a1 = 1/(4 - sigma), a3 = (1 - sigma)/(4 - sigma)
///   SNF: a0 = ((sigma+1)/(sigma+2))^2, a1 = (sigma+1)/(sigma+2)^2, a3 = 1/(sigma+2)^2
inline LevelAllocation closed_form_2x2(Protocol protocol, double sigma) {
    if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
    LevelAllocation out;
    out.rank = 3;
    if (protocol == Protocol::vct) {
        const double a = 1.0 / (4.0 - sigma);
        out.fractions = {a, a, (1.0 - sigma) / (4.0 - sigma)};
    } else {
        const double s1 = sigma + 1.0;
        const double s2 = sigma + 2.0;
        out.fractions = {(s1 / s2) * (s1 / s2), s1 / (s2 * s2), 1.0 / (s2 * s2)};
    }
    return out;
}

} // namespace dlnoc
