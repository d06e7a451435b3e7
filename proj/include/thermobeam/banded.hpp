#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace thermobeam {

/// Square matrix with kl sub-diagonals and ku super-diagonals, stored row-wise.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t lower() const noexcept { return kl_; }
    [[nodiscard]] std::size_t upper() const noexcept { return ku_; }

    [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const noexcept {
        return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
    }
    /// Zero outside the band.
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return in_band(i, j) ? data_[index(i, j)] : 0.0;
    }
    /// Throws std::out_of_range outside the band.
    double& at(std::size_t i, std::size_t j);
    void add(std::size_t i, std::size_t j, double value) { at(i, j) += value; }

    /// y = M x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

    /// max |M_ij - M_ji|
    [[nodiscard]] double max_asymmetry() const;

    /// One "row col value" line per stored entry, 0-based indices.
    void write_triplets(std::ostream& os) const;

private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * (kl_ + ku_ + 1) + (j + kl_ - i);
    }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> data_;
};

/// LU factorization with partial pivoting that keeps band storage.
/// Fill-in widens the upper bandwidth to ku + kl.
class BandedLU {
public:
    /// Throws SingularSystemError on an exactly zero pivot.
    explicit BandedLU(const BandedMatrix& a);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Overwrites b with the solution of A x = b.
    void solve(std::span<double> b) const;
    [[nodiscard]] std::vector<double> solve(std::vector<double> b) const {
        solve(std::span<double>(b));
        return b;
    }

private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * width_ + (j + kl_ - i);
    }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;  // after fill-in
    std::size_t width_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> pivots_;
};

}  // namespace thermobeam
