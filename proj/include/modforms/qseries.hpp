#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "level_arith.hpp"

namespace modforms {

/// Truncated q-expansion sum_{n < prec} a(n) q^n with exact rational coefficients.
///
/// All binary operations return a series whose precision is the minimum of the
/// operand precisions; coefficients beyond what is known are never invented.
class QSeries {
  public:
    QSeries() = default;
    explicit QSeries(std::size_t prec) : coeffs_(prec) {}
    explicit QSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
        for (auto& c : coeffs_) c.canonicalize();
    }

    static QSeries one(std::size_t prec) {
        QSeries s(prec);
        if (prec > 0) s.coeffs_[0] = 1;
        return s;
    }

    /// Series from integer coefficients, e.g. {1, 0, -1} for 1 - q^2.
    static QSeries from_integers(std::initializer_list<long> xs) {
        std::vector<Rational> v;
        v.reserve(xs.size());
        for (long x : xs) v.emplace_back(x);
        return QSeries(std::move(v));
    }

    std::size_t prec() const { return coeffs_.size(); }
    const Rational& operator[](std::size_t n) const { return coeffs_[n]; }
    Rational& operator[](std::size_t n) { return coeffs_[n]; }
    std::span<const Rational> coefficients() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
    }

    /// Index of the first nonzero coefficient; nullopt if every stored coefficient vanishes.
    std::optional<std::size_t> valuation(std::size_t from = 0) const {
        for (std::size_t n = from; n < coeffs_.size(); ++n)
            if (sgn(coeffs_[n]) != 0) return n;
        return std::nullopt;
    }

    QSeries truncated(std::size_t prec) const {
        if (prec > coeffs_.size()) throw std::invalid_argument("QSeries::truncated: cannot extend precision");
        return QSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(prec)));
    }

    /// f <- f + c g on the common precision; used by row reduction.
    void add_scaled(const Rational& c, const QSeries& g) {
        if (g.prec() < prec()) coeffs_.resize(g.prec());
        Rational t;
        for (std::size_t n = 0; n < coeffs_.size(); ++n) {
            if (sgn(g.coeffs_[n]) == 0) continue;
            t = c * g.coeffs_[n];
            coeffs_[n] += t;
        }
    }

    friend bool operator==(const QSeries& a, const QSeries& b) { return a.coeffs_ == b.coeffs_; }

  private:
    std::vector<Rational> coeffs_;
};

inline QSeries add(const QSeries& f, const QSeries& g) {
    QSeries r = f.truncated(std::min(f.prec(), g.prec()));
    for (std::size_t n = 0; n < r.prec(); ++n) r[n] += g[n];
    return r;
}

inline QSeries scale(const Rational& c, const QSeries& f) {
    QSeries r(f.prec());
    if (sgn(c) == 0) return r;
    for (std::size_t n = 0; n < f.prec(); ++n) r[n] = c * f[n];
    return r;
}

inline QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return add(f, scale(Rational(-1), g)); }

namespace detail {

// Clears denominators: returns integer numerators and their common denominator.
inline std::pair<std::vector<Integer>, Integer> integer_form(const QSeries& f, std::size_t prec) {
    Integer den = 1;
    for (std::size_t n = 0; n < prec; ++n)
        if (f[n].get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), f[n].get_den_mpz_t());
    std::vector<Integer> nums(prec);
    for (std::size_t n = 0; n < prec; ++n) {
        if (den == 1) {
            nums[n] = f[n].get_num();
        } else {
            mpz_divexact(nums[n].get_mpz_t(), den.get_mpz_t(), f[n].get_den_mpz_t());
            nums[n] *= f[n].get_num();
        }
    }
    return {std::move(nums), std::move(den)};
}

}  // namespace detail

/// Cauchy product truncated to min(f.prec, g.prec).
///
/// Runs the schoolbook kernel on integers after clearing denominators, which
/// gives results identical to rational arithmetic without per-term gcds.
inline QSeries mul(const QSeries& f, const QSeries& g) {
    const std::size_t prec = std::min(f.prec(), g.prec());
    auto [a, da] = detail::integer_form(f, prec);
    auto [b, db] = detail::integer_form(g, prec);

    std::size_t va = 0, vb = 0;
    while (va < prec && a[va] == 0) ++va;
    while (vb < prec && b[vb] == 0) ++vb;

    std::vector<Integer> c(prec);
    for (std::size_t i = va; i < prec; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = vb; i + j < prec; ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }

    Integer den = da * db;
    QSeries r(prec);
    for (std::size_t n = 0; n < prec; ++n) {
        if (c[n] == 0) continue;
        mpz_set(r[n].get_num_mpz_t(), c[n].get_mpz_t());
        mpz_set(r[n].get_den_mpz_t(), den.get_mpz_t());
        r[n].canonicalize();
    }
    return r;
}

inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }

/// f(q^t). Every index that is not a multiple of t is known to be zero, so the
/// precision grows to t * f.prec.
inline QSeries dilate(const QSeries& f, std::size_t t) {
    if (t == 0) throw std::invalid_argument("dilate: t must be positive");
    QSeries r(f.prec() * t);
    for (std::size_t n = 0; n < f.prec(); ++n) r[n * t] = f[n];
    return r;
}

/// q^s f, keeping prec coefficients of the result (requires prec <= f.prec + s).
inline QSeries shift(const QSeries& f, std::size_t s, std::size_t prec) {
    if (prec > f.prec() + s) throw std::invalid_argument("shift: not enough known coefficients");
    QSeries r(prec);
    for (std::size_t n = s; n < prec; ++n) r[n] = f[n - s];
    return r;
}

/// Multiplicative inverse of a series with nonzero constant term.
inline QSeries inverse(const QSeries& f) {
    if (f.prec() == 0 || sgn(f[0]) == 0) throw std::domain_error("inverse: constant term must be nonzero");
    const std::size_t prec = f.prec();
    QSeries g(prec);
    Rational inv0 = 1 / f[0];
    g[0] = inv0;
    Rational acc, t;
    for (std::size_t n = 1; n < prec; ++n) {
        acc = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            if (sgn(f[j]) == 0) continue;
            t = f[j] * g[n - j];
            acc += t;
        }
        g[n] = -acc * inv0;
    }
    return g;
}

/// f^e for any integer e; negative powers need an invertible constant term.
inline QSeries pow(const QSeries& f, std::int64_t e) {
    QSeries base = e < 0 ? inverse(f) : f;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    QSeries result = QSeries::one(f.prec());
    while (n) {
        if (n & 1) result = mul(result, base);
        n >>= 1;
        if (n) base = mul(base, base);
    }
    return result;
}

/// prod_{n >= 1} (1 - q^n) via the pentagonal number theorem; the q^(1/24)
/// prefactor of eta is tracked by callers.
inline QSeries eta_expansion(std::size_t prec) {
    QSeries r(prec);
    if (prec == 0) return r;
    r[0] = 1;
    for (std::int64_t n = 1;; ++n) {
        const std::size_t lo = static_cast<std::size_t>(n * (3 * n - 1) / 2);
        const std::size_t hi = static_cast<std::size_t>(n * (3 * n + 1) / 2);
        if (lo >= prec) break;
        const int sign = (n % 2 == 0) ? 1 : -1;
        r[lo] = sign;
        if (hi < prec) r[hi] = sign;
    }
    return r;
}

inline std::string to_string(const Rational& c) { return c.get_str(); }

/// Renders `a0 a1 a2 ...` with each coefficient as an integer or p/q.
inline std::string to_string(const QSeries& f) {
    std::string out;
    for (std::size_t n = 0; n < f.prec(); ++n) {
        if (n) out += ' ';
        out += f[n].get_str();
    }
    return out;
}

inline Rational parse_rational(const std::string& token) {
    Rational r;
    if (token.empty() || r.set_str(token, 10) != 0)
        throw std::invalid_argument("not a rational number: '" + token + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + token + "'");
    r.canonicalize();
    return r;
}

/// Inverse of to_string(QSeries).
inline QSeries parse_series(const std::string& line) {
    std::istringstream in(line);
    std::vector<Rational> coeffs;
    std::string tok;
    while (in >> tok) coeffs.push_back(parse_rational(tok));
    return QSeries(std::move(coeffs));
}

inline std::ostream& operator<<(std::ostream& os, const QSeries& f) { return os << to_string(f); }

}  // namespace modforms
