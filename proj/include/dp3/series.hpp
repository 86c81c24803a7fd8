#pragma once

// Truncated power series over the exact rationals.  A Series carries its own
// truncation order: arithmetic truncates to the minimum of the operand
// orders, so precision loss is explicit and monotone.

#include "dp3/poly.hpp"
#include "dp3/rational.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace dp3 {

class Series {
  public:
    Series() = default;

    /// Zero series known through order n_max (inclusive).
    explicit Series(int n_max) : order_(n_max), coeff_(static_cast<std::size_t>(n_max) + 1, rat(0)) {
        if (n_max < 0) throw std::domain_error("Series: negative truncation order");
    }

    Series(int n_max, std::vector<Rat> coeffs) : Series(n_max) {
        if (coeffs.size() > coeff_.size()) coeffs.resize(coeff_.size());
        std::copy(coeffs.begin(), coeffs.end(), coeff_.begin());
    }

    static Series constant(const Rat& c, int n_max) {
        Series s(n_max);
        s.coeff_[0] = c;
        return s;
    }

    /// c * z^k truncated at n_max.
    static Series monomial(const Rat& c, int k, int n_max) {
        Series s(n_max);
        if (k <= n_max) s.coeff_[static_cast<std::size_t>(k)] = c;
        return s;
    }

    static Series from_poly(const Poly& p, int n_max) {
        Series s(n_max);
        for (long k = 0; k <= std::min<long>(p.degree(), n_max); ++k)
            s.coeff_[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)];
        return s;
    }

    int order() const { return order_; }

    const Rat& operator[](int k) const {
        if (k < 0 || k > order_) throw std::out_of_range("Series: coefficient beyond truncation order");
        return coeff_[static_cast<std::size_t>(k)];
    }

    Rat& mutable_coeff(int k) {
        if (k < 0 || k > order_) throw std::out_of_range("Series: coefficient beyond truncation order");
        return coeff_[static_cast<std::size_t>(k)];
    }

    Series truncated(int new_order) const {
        if (new_order > order_) throw std::domain_error("Series: cannot extend truncation order");
        Series s(new_order);
        std::copy(coeff_.begin(), coeff_.begin() + new_order + 1, s.coeff_.begin());
        return s;
    }

    bool operator==(const Series& o) const { return order_ == o.order_ && coeff_ == o.coeff_; }

    Series operator-() const {
        Series r = *this;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series r(std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) r.coeff_[k] = a.coeff_[k] + b.coeff_[k];
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) {
        Series r(std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) r.coeff_[k] = a.coeff_[k] - b.coeff_[k];
        return r;
    }
    friend Series operator*(const Series& a, const Series& b) {
        Series r(std::min(a.order_, b.order_));
        for (int i = 0; i <= r.order_; ++i) {
            if (a.coeff_[i] == 0) continue;
            for (int j = 0; i + j <= r.order_; ++j) {
                if (b.coeff_[j] == 0) continue;
                r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
            }
        }
        return r;
    }
    friend Series operator*(Series a, const Rat& c) {
        for (auto& x : a.coeff_) x *= c;
        return a;
    }
    friend Series operator*(const Rat& c, Series a) { return std::move(a) * c; }

    /// Multiplicative inverse; requires an invertible constant term.
    Series inverse() const {
        if (coeff_[0] == 0) throw std::domain_error("Series::inverse: constant term is zero");
        Series r(order_);
        const Rat c0_inv = rat(1) / coeff_[0];
        r.coeff_[0] = c0_inv;
        for (int k = 1; k <= order_; ++k) {
            Rat acc = rat(0);
            for (int j = 1; j <= k; ++j) acc += coeff_[j] * r.coeff_[k - j];
            r.coeff_[k] = -c0_inv * acc;
        }
        return r;
    }

    friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

    Series pow(unsigned long e) const {
        Series acc = Series::constant(rat(1), order_);
        Series base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            if (e >>= 1) base = base * base;
        }
        return acc;
    }

    /// Euler operator z d/dz (multiplies the k-th coefficient by k).
    Series euler_delta() const {
        Series r = *this;
        for (int k = 0; k <= order_; ++k) r.coeff_[k] *= rat(k);
        return r;
    }

    /// Multiply by z^k (shifting coefficients up, truncating at the top).
    Series shifted_up(int k) const {
        Series r(order_);
        for (int j = 0; j + k <= order_; ++j) r.coeff_[j + k] = coeff_[j];
        return r;
    }

    /// True if all coefficients through the truncation order vanish.
    bool is_zero() const {
        for (const auto& c : coeff_)
            if (c != 0) return false;
        return true;
    }

    /// Index of the first nonzero coefficient, or order()+1 if none.
    int valuation() const {
        for (int k = 0; k <= order_; ++k)
            if (coeff_[k] != 0) return k;
        return order_ + 1;
    }

  private:
    int order_ = 0;                // coefficients are exact through z^order_
    std::vector<Rat> coeff_{rat(0)};
};

/// Evaluate a polynomial in w on a series argument (w -> arg), truncating at
/// arg.order().  Horner over series.
inline Series poly_on_series(const Poly& p, const Series& arg) {
    Series acc(arg.order());
    for (long k = p.degree(); k >= 0; --k) {
        acc = acc * arg;
        acc = acc + Series::constant(p[static_cast<std::size_t>(k)], arg.order());
    }
    return acc;
}

}  // namespace dp3
