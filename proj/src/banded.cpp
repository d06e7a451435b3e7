#include "thermobeam/banded.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace thermobeam {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), data_(n * (kl + ku + 1), 0.0) {}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) {
        throw std::out_of_range(fmt::format("entry ({}, {}) outside band [-{}, +{}] of {}x{} matrix", i,
                                            j, kl_, ku_, n_, n_));
    }
    return data_[index(i, j)];
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw DimensionError(fmt::format("banded multiply: matrix is {}x{}, x has {}, y has {}", n_, n_,
                                         x.size(), y.size()));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) {
            s += data_[index(i, j)] * x[j];
        }
        y[i] = s;
    }
}

std::vector<double> BandedMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

double BandedMatrix::max_asymmetry() const {
    double worst = 0.0;
    const std::size_t k = std::max(kl_, ku_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j <= std::min(n_ - 1, i + k); ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return worst;
}

void BandedMatrix::write_triplets(std::ostream& os) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j) {
            os << fmt::format("{} {} {:.17e}\n", i, j, data_[index(i, j)]);
        }
    }
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.size()), kl_(a.lower()), ku_(a.upper() + a.lower()), width_(kl_ + ku_ + 1),
      lu_(n_ * width_, 0.0), pivots_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + a.upper());
        for (std::size_t j = j0; j <= j1; ++j) {
            lu_[index(i, j)] = a(i, j);
        }
    }

    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + ku_);

        std::size_t p = k;
        double best = std::abs(lu_[index(k, k)]);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            const double cand = std::abs(lu_[index(r, k)]);
            if (cand > best) {
                best = cand;
                p = r;
            }
        }
        if (best == 0.0) {
            throw SingularSystemError(fmt::format("zero pivot in column {} of {}x{} banded system", k, n_, n_));
        }
        pivots_[k] = p;
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) {
                std::swap(lu_[index(k, j)], lu_[index(p, j)]);
            }
        }

        const double pivot = lu_[index(k, k)];
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            double& l = lu_[index(r, k)];
            if (l == 0.0) continue;
            l /= pivot;
            for (std::size_t j = k + 1; j <= last_col; ++j) {
                lu_[index(r, j)] -= l * lu_[index(k, j)];
            }
        }
    }
}

void BandedLU::solve(std::span<double> b) const {
    if (b.size() != n_) {
        throw DimensionError(fmt::format("banded solve: system is {}x{}, rhs has {}", n_, n_, b.size()));
    }
    for (std::size_t k = 0; k < n_; ++k) {
        if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            b[r] -= lu_[index(r, k)] * b[k];
        }
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, k + ku_);
        double s = b[k];
        for (std::size_t j = k + 1; j <= last_col; ++j) {
            s -= lu_[index(k, j)] * b[j];
        }
        b[k] = s / lu_[index(k, k)];
    }
}

}  // namespace thermobeam
