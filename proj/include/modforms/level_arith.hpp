#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace modforms {

using Integer = mpz_class;
using Rational = mpq_class;

/// All positive divisors of n in increasing order.
inline std::vector<std::int64_t> divisors(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("divisors: n must be positive");
    std::vector<std::int64_t> small, large;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

/// Prime factorization by trial division as (prime, exponent) pairs.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    auto f = factorize(n);
    return f.size() == 1 && f.front().second == 1;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

struct CuspClass {
    std::int64_t denominator;   // d | N
    std::int64_t multiplicity;  // phi(gcd(d, N/d))
};

/// Number-theoretic profile of Gamma0(N).
struct LevelData {
    std::int64_t N = 1;
    std::int64_t mu = 1;
    std::vector<CuspClass> cusp_classes;
    std::int64_t cusps = 1;  // total count of cusps (epsilon_infinity)
    std::int64_t eps2 = 0;
    std::int64_t eps3 = 0;
    std::int64_t genus = 0;
};

namespace detail {

// Kronecker symbol (-4/p) and (-3/p) for primes p.
inline int chi_minus4(std::int64_t p) {
    if (p == 2) return 0;
    return p % 4 == 1 ? 1 : -1;
}

inline int chi_minus3(std::int64_t p) {
    if (p == 3) return 0;
    return p % 3 == 1 ? 1 : -1;
}

}  // namespace detail

inline LevelData level_data(std::int64_t N) {
    if (N < 1) throw std::invalid_argument("level_data: N must be positive");
    LevelData L;
    L.N = N;
    const auto primes = factorize(N);

    L.mu = N;
    for (auto [p, e] : primes) L.mu = L.mu / p * (p + 1);

    L.cusps = 0;
    for (std::int64_t d : divisors(N)) {
        std::int64_t m = euler_phi(std::gcd(d, N / d));
        L.cusp_classes.push_back({d, m});
        L.cusps += m;
    }

    if (N % 4 == 0) {
        L.eps2 = 0;
    } else {
        L.eps2 = 1;
        for (auto [p, e] : primes) L.eps2 *= 1 + detail::chi_minus4(p);
    }
    if (N % 9 == 0) {
        L.eps3 = 0;
    } else {
        L.eps3 = 1;
        for (auto [p, e] : primes) L.eps3 *= 1 + detail::chi_minus3(p);
    }

    // 12 g = 12 + mu - 3 eps2 - 4 eps3 - 6 eps_inf
    std::int64_t twelve_g = 12 + L.mu - 3 * L.eps2 - 4 * L.eps3 - 6 * L.cusps;
    if (twelve_g < 0 || twelve_g % 12 != 0)
        throw std::logic_error("level_data: non-integral genus at level " + std::to_string(N));
    L.genus = twelve_g / 12;
    return L;
}

/// Condition (1): 4 | N or some prime p = 3 (mod 4) divides N.
inline bool no_order2_points(std::int64_t N) {
    if (N % 4 == 0) return true;
    for (auto [p, e] : factorize(N))
        if (p % 4 == 3) return true;
    return false;
}

/// Condition (2): 9 | N or some prime p = 2 (mod 3) divides N.
inline bool no_order3_points(std::int64_t N) {
    if (N % 9 == 0) return true;
    for (auto [p, e] : factorize(N))
        if (p % 3 == 2) return true;
    return false;
}

/// Composite level without elliptic points; there the graded ring is generated in weight two.
inline bool is_good(std::int64_t N) {
    if (N < 4 || is_prime(N)) return false;
    return no_order2_points(N) && no_order3_points(N);
}

inline void require_even_weight(int k) {
    if (k < 0 || k % 2 != 0)
        throw std::invalid_argument("weight must be an even nonnegative integer, got " + std::to_string(k));
}

inline std::int64_t dim_Mk(const LevelData& L, int k) {
    require_even_weight(k);
    if (k == 0) return 1;
    if (k == 2) return L.genus + L.cusps - 1;
    return (k - 1) * (L.genus - 1) + (k / 4) * L.eps2 + (k / 3) * L.eps3 + (k / 2) * L.cusps;
}

inline std::int64_t dim_Mk(std::int64_t N, int k) { return dim_Mk(level_data(N), k); }

/// B(N,k) = mu k / 12. Forms in M_k(Gamma0(N)) are determined by coefficients 0..floor(B).
inline Rational sturm_bound(std::int64_t N, int k) {
    require_even_weight(k);
    Rational b(Integer(level_data(N).mu) * k, Integer(12));
    b.canonicalize();
    return b;
}

/// floor(B(N,k)) + 1: the number of coefficients that pins down a weight-k form.
inline std::size_t sturm_precision(std::int64_t N, int k) {
    Rational b = sturm_bound(N, k);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    return static_cast<std::size_t>(fl.get_ui()) + 1;
}

}  // namespace modforms
