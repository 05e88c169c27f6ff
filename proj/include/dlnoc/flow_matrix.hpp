#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlnoc/error.hpp"
#include "dlnoc/topology.hpp"

namespace dlnoc {

/// Row-major dense square-or-rectangular matrix.
template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>(b * cols_));
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;

enum class Protocol {
    vct, ///< virtual cut-through
    snf, ///< modified store-and-forward (compute after full receipt, cut-through relay)
};

inline const char* to_string(Protocol p) { return p == Protocol::vct ? "vct" : "snf"; }

/// Homogeneous processor/link constants. sigma = z*Tcm / (omega*Tcp) is fixed
/// at construction and carried as-is into the matrix builders.
struct Scenario {
    double omega = 1.0;
    double z = 0.0;
    double tcp = 1.0;
    double tcm = 1.0;
    double sigma = 0.0;

    static Scenario from_constants(double omega, double z, double tcp, double tcm) {
        auto bad = [](double v) { return !std::isfinite(v); };
        if (bad(omega) || bad(z) || bad(tcp) || bad(tcm))
            throw InputError("scenario constants must be finite");
        if (omega <= 0) throw InputError("omega must be > 0");
        if (z < 0) throw InputError("z must be >= 0");
        if (tcp <= 0) throw InputError("Tcp must be > 0");
        if (tcm <= 0) throw InputError("Tcm must be > 0");
        return {omega, z, tcp, tcm, z * tcm / (omega * tcp)};
    }

    /// Unit compute constants (omega = Tcp = Tcm = 1) with z chosen so that z*Tcm = sigma.
    static Scenario from_sigma(double sigma) {
        if (!std::isfinite(sigma) || sigma < 0) throw InputError("sigma must be finite and >= 0");
        return {1.0, sigma, 1.0, 1.0, sigma};
    }

    /// Same omega, Tcp, Tcm; z rescaled to hit the requested sigma.
    Scenario with_sigma(double new_sigma) const {
        if (!std::isfinite(new_sigma) || new_sigma < 0)
            throw InputError("sigma must be finite and >= 0");
        Scenario s = *this;
        s.z = new_sigma * omega * tcp / tcm;
        s.sigma = new_sigma;
        return s;
    }

    double compute_time() const noexcept { return omega * tcp; } ///< whole load on one processor
    double link_time() const noexcept { return z * tcm; }        ///< whole load over one link
};

/// A * alpha_hat = b over one unknown per hop level; b = (1, 0, ..., 0).
struct FlowMatrix {
    Matrix entries;
    std::vector<double> rhs;
    Protocol protocol = Protocol::vct;
    double sigma = 0.0;
    std::vector<std::size_t> counts;

    std::size_t size() const noexcept { return counts.size(); }
};

namespace detail {

inline FlowMatrix flow_matrix_shell(std::span<const std::size_t> counts, double sigma, Protocol protocol) {
    if (counts.empty()) throw InputError("flow matrix needs at least one level");
    if (!std::isfinite(sigma) || sigma < 0) throw InputError("sigma must be finite and >= 0");
    const std::size_t k = counts.size();
    FlowMatrix fm;
    fm.entries = Matrix(k, k, 0.0);
    fm.rhs.assign(k, 0.0);
    fm.rhs[0] = 1.0;
    fm.protocol = protocol;
    fm.sigma = sigma;
    fm.counts.assign(counts.begin(), counts.end());
    for (std::size_t d = 0; d < k; ++d) fm.entries(0, d) = static_cast<double>(counts[d]);
    return fm;
}

} // namespace detail

/// Virtual cut-through. Levels 0 and 1 compute from t = 0; level d >= 2 starts
/// once the serialized transfers of levels 1..d-1 have passed:
///   sigma * (a_1 + ... + a_{d-1}) + a_d = a_1
inline FlowMatrix build_vct(std::span<const std::size_t> counts, double sigma) {
    FlowMatrix fm = detail::flow_matrix_shell(counts, sigma, Protocol::vct);
    const std::size_t k = counts.size();
    if (k >= 2) {
        fm.entries(1, 0) = 1.0;
        fm.entries(1, 1) = -1.0;
    }
    for (std::size_t d = 2; d < k; ++d) {
        fm.entries(d, 1) = sigma - 1.0;
        for (std::size_t j = 2; j < d; ++j) fm.entries(d, j) = sigma;
        fm.entries(d, d) = 1.0;
    }
    return fm;
}

/// Modified store-and-forward. Level d computes only after its own share has
/// arrived behind those of levels 1..d-1:
///   a_0 = sigma * (a_1 + ... + a_d) + a_d
inline FlowMatrix build_snf(std::span<const std::size_t> counts, double sigma) {
    FlowMatrix fm = detail::flow_matrix_shell(counts, sigma, Protocol::snf);
    const std::size_t k = counts.size();
    for (std::size_t d = 1; d < k; ++d) {
        fm.entries(d, 0) = 1.0;
        for (std::size_t j = 1; j < d; ++j) fm.entries(d, j) = -sigma;
        fm.entries(d, d) = -(sigma + 1.0);
    }
    return fm;
}

inline FlowMatrix build_vct(const LevelProfile& profile, double sigma) { return build_vct(profile.counts, sigma); }
inline FlowMatrix build_snf(const LevelProfile& profile, double sigma) { return build_snf(profile.counts, sigma); }

inline FlowMatrix build_flow_matrix(Protocol protocol, std::span<const std::size_t> counts, double sigma) {
    return protocol == Protocol::vct ? build_vct(counts, sigma) : build_snf(counts, sigma);
}

inline FlowMatrix build_flow_matrix(Protocol protocol, const LevelProfile& profile, double sigma) {
    return build_flow_matrix(protocol, std::span<const std::size_t>(profile.counts), sigma);
}

/// Determinant by Gaussian elimination with partial pivoting. An exactly zero
/// pivot column yields 0.
inline double determinant(Matrix a) {
    if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            a.swap_rows(piv, col);
            det = -det;
        }
        const double p = a(col, col);
        det *= p;
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / p;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

inline double determinant(const FlowMatrix& fm) { return determinant(fm.entries); }

/// A with column `column` replaced by b (Cramer's A*_i).
inline Matrix replaced_column(const FlowMatrix& fm, std::size_t column) {
    if (column >= fm.size()) throw InputError("column " + std::to_string(column) + " out of range");
    Matrix m = fm.entries;
    for (std::size_t r = 0; r < fm.size(); ++r) m(r, column) = fm.rhs[r];
    return m;
}

inline double replaced_determinant(const FlowMatrix& fm, std::size_t column) {
    return determinant(replaced_column(fm, column));
}

/// Shortest round-trip decimal; zero is always written as "0".
inline std::string decimal_literal(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// One matrix row per line, entries separated by single spaces.
inline std::string dump(const Matrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ' ';
            out += decimal_literal(m(r, c));
        }
        out += '\n';
    }
    return out;
}

inline void dump(std::ostream& os, const Matrix& m) { os << dump(m); }

} // namespace dlnoc
