#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis_search.hpp"
#include "level_arith.hpp"
#include "qseries.hpp"

namespace modforms {

/// prod_{delta | N} eta(delta z)^{r_delta}. exponents[i] belongs to divisors(N)[i].
struct EtaQuotient {
    std::int64_t level = 1;
    std::vector<std::int64_t> exponents;

    static EtaQuotient zero(std::int64_t N) { return {N, std::vector<std::int64_t>(divisors(N).size(), 0)}; }

    /// Builds from (delta, r_delta) pairs; unspecified divisors get exponent 0.
    static EtaQuotient from_map(std::int64_t N, const std::map<std::int64_t, std::int64_t>& r) {
        const auto divs = divisors(N);
        EtaQuotient e{N, std::vector<std::int64_t>(divs.size(), 0)};
        for (auto [delta, x] : r) {
            auto it = std::find(divs.begin(), divs.end(), delta);
            if (it == divs.end())
                throw std::invalid_argument(std::to_string(delta) + " does not divide " + std::to_string(N));
            e.exponents[static_cast<std::size_t>(it - divs.begin())] = x;
        }
        return e;
    }

    std::int64_t exponent(std::int64_t delta) const {
        const auto divs = divisors(level);
        auto it = std::find(divs.begin(), divs.end(), delta);
        return it == divs.end() ? 0 : exponents[static_cast<std::size_t>(it - divs.begin())];
    }

    friend auto operator<=>(const EtaQuotient&, const EtaQuotient&) = default;
};

/// Orders of vanishing at the cusps, indexed like divisors(level).
struct Divisor {
    std::int64_t level = 1;
    std::vector<Rational> orders;

    friend bool operator==(const Divisor&, const Divisor&) = default;
};

inline Rational weight(const EtaQuotient& e) {
    Integer s = 0;
    for (auto r : e.exponents) s += r;
    Rational w(s, 2);
    w.canonicalize();
    return w;
}

/// Ligozat's cusp-order relations at one level, together with their exact inverse.
class LigozatSystem {
  public:
    explicit LigozatSystem(std::int64_t N) : N_(N), divs_(divisors(N)) {
        const std::size_t n = divs_.size();
        matrix_.assign(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t d = divs_[i];
            for (std::size_t j = 0; j < n; ++j) {
                const std::int64_t delta = divs_[j];
                const std::int64_t g = std::gcd(d, delta);
                matrix_[i][j] = Rational(Integer(N) * g * g, Integer(24) * std::gcd(d, N / d) * d * delta);
                matrix_[i][j].canonicalize();
            }
        }
        invert();
    }

    std::int64_t level() const { return N_; }
    const std::vector<std::int64_t>& divisors_of_level() const { return divs_; }
    const std::vector<std::vector<Rational>>& matrix() const { return matrix_; }
    const std::vector<std::vector<Rational>>& inverse() const { return inverse_; }

    std::size_t index_of(std::int64_t d) const {
        auto it = std::find(divs_.begin(), divs_.end(), d);
        if (it == divs_.end())
            throw std::invalid_argument("cusp denominator " + std::to_string(d) + " does not divide " + std::to_string(N_));
        return static_cast<std::size_t>(it - divs_.begin());
    }

    /// Row i of the relation applied to an exponent vector.
    Rational order(std::size_t i, const std::vector<std::int64_t>& r) const {
        Rational s = 0;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (r[j] != 0) s += matrix_[i][j] * r[j];
        return s;
    }

    /// Integer scaling of the inverse: inverse = scaled / denominator.
    const std::vector<std::vector<std::int64_t>>& scaled_inverse() const { return scaled_; }
    std::int64_t inverse_denominator() const { return scale_; }

  private:
    void invert() {
        const std::size_t n = divs_.size();
        auto a = matrix_;
        inverse_.assign(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) inverse_[i][i] = 1;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && sgn(a[piv][col]) == 0) ++piv;
            if (piv == n) throw std::logic_error("Ligozat matrix is singular at level " + std::to_string(N_));
            std::swap(a[piv], a[col]);
            std::swap(inverse_[piv], inverse_[col]);
            const Rational inv = 1 / a[col][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[col][j] *= inv;
                inverse_[col][j] *= inv;
            }
            for (std::size_t row = 0; row < n; ++row) {
                if (row == col || sgn(a[row][col]) == 0) continue;
                const Rational f = a[row][col];
                for (std::size_t j = 0; j < n; ++j) {
                    a[row][j] -= f * a[col][j];
                    inverse_[row][j] -= f * inverse_[col][j];
                }
            }
        }
        Integer den = 1;
        for (const auto& row : inverse_)
            for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
        if (!den.fits_slong_p()) throw std::overflow_error("Ligozat inverse denominator too large");
        scale_ = den.get_si();
        scaled_.assign(n, std::vector<std::int64_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational x = inverse_[i][j] * den;
                if (!x.get_num().fits_slong_p()) throw std::overflow_error("Ligozat inverse entry too large");
                scaled_[i][j] = x.get_num().get_si();
            }
    }

    std::int64_t N_;
    std::vector<std::int64_t> divs_;
    std::vector<std::vector<Rational>> matrix_;
    std::vector<std::vector<Rational>> inverse_;
    std::vector<std::vector<std::int64_t>> scaled_;
    std::int64_t scale_ = 1;
};

inline Rational order_at_cusp(const EtaQuotient& e, std::int64_t d) {
    if (d < 1 || e.level % d != 0)
        throw std::invalid_argument("cusp denominator " + std::to_string(d) + " does not divide " + std::to_string(e.level));
    const auto divs = divisors(e.level);
    Rational s = 0;
    for (std::size_t j = 0; j < divs.size(); ++j) {
        if (e.exponents[j] == 0) continue;
        const std::int64_t delta = divs[j];
        const std::int64_t g = std::gcd(d, delta);
        s += Rational(Integer(g) * g * e.exponents[j], Integer(std::gcd(d, e.level / d)) * d * delta);
    }
    s *= Rational(e.level, 24);
    s.canonicalize();
    return s;
}

inline Divisor divisor_of(const EtaQuotient& e) {
    Divisor v{e.level, {}};
    for (std::int64_t d : divisors(e.level)) v.orders.push_back(order_at_cusp(e, d));
    return v;
}

/// Sum over cusp classes of multiplicity times order; equals B(N,k) for holomorphic weight-k forms.
inline Rational weighted_degree(const Divisor& v) {
    const auto L = level_data(v.level);
    Rational s = 0;
    for (std::size_t i = 0; i < v.orders.size(); ++i) s += v.orders[i] * L.cusp_classes[i].multiplicity;
    return s;
}

/// Exact solve of divisor_of(e) = v; nullopt when the solution is not integral.
inline std::optional<EtaQuotient> exponents_from_divisor(const LigozatSystem& sys, const Divisor& v) {
    const auto& inv = sys.inverse();
    if (v.level != sys.level() || v.orders.size() != inv.size())
        throw std::invalid_argument("divisor does not match the level");
    EtaQuotient e{v.level, std::vector<std::int64_t>(inv.size())};
    for (std::size_t i = 0; i < inv.size(); ++i) {
        Rational r = 0;
        for (std::size_t j = 0; j < inv.size(); ++j) r += inv[i][j] * v.orders[j];
        if (r.get_den() != 1 || !r.get_num().fits_slong_p()) return std::nullopt;
        e.exponents[i] = r.get_num().get_si();
    }
    return e;
}

inline std::optional<EtaQuotient> exponents_from_divisor(std::int64_t N, const Divisor& v) {
    return exponents_from_divisor(LigozatSystem(N), v);
}

/// Exchanges r_delta and r_{N/delta}.
inline EtaQuotient fricke(const EtaQuotient& e) {
    EtaQuotient out = e;
    std::reverse(out.exponents.begin(), out.exponents.end());  // divisors(N) is symmetric under delta -> N/delta
    return out;
}

/// f(tz) for f at level e.level, as an eta-quotient at level N.
inline EtaQuotient lift_to_level(const EtaQuotient& e, std::int64_t N, std::int64_t t) {
    if (N < 1 || N % e.level != 0)
        throw std::invalid_argument(std::to_string(e.level) + " does not divide " + std::to_string(N));
    if (t < 1 || (N / e.level) % t != 0)
        throw std::invalid_argument("dilation " + std::to_string(t) + " does not divide " + std::to_string(N / e.level));
    std::map<std::int64_t, std::int64_t> r;
    const auto divs = divisors(e.level);
    for (std::size_t j = 0; j < divs.size(); ++j)
        if (e.exponents[j] != 0) r[t * divs[j]] = e.exponents[j];
    return EtaQuotient::from_map(N, r);
}

enum class HolomorphyFailure {
    PoleAtCusp,
    InfinityOrderNotIntegral,  // sum delta r_delta not divisible by 24
    ZeroOrderNotIntegral,      // sum (N/delta) r_delta not divisible by 24
    NotRationalSquare,
    WeightNotEvenInteger,
};

inline const char* to_string(HolomorphyFailure f) {
    switch (f) {
        case HolomorphyFailure::PoleAtCusp: return "pole at a cusp";
        case HolomorphyFailure::InfinityOrderNotIntegral: return "sum of delta*r_delta not divisible by 24";
        case HolomorphyFailure::ZeroOrderNotIntegral: return "sum of (N/delta)*r_delta not divisible by 24";
        case HolomorphyFailure::NotRationalSquare: return "product of delta^r_delta is not a rational square";
        case HolomorphyFailure::WeightNotEvenInteger: return "weight is not a nonnegative even integer";
    }
    return "?";
}

struct HolomorphyCheck {
    std::vector<HolomorphyFailure> failures;
    explicit operator bool() const { return failures.empty(); }
};

/// Whether e is a holomorphic modular form on Gamma0(N) of even weight with trivial character.
inline HolomorphyCheck check_holomorphic(const EtaQuotient& e) {
    HolomorphyCheck out;
    const auto divs = divisors(e.level);
    for (std::int64_t d : divs) {
        if (sgn(order_at_cusp(e, d)) < 0) {
            out.failures.push_back(HolomorphyFailure::PoleAtCusp);
            break;
        }
    }
    Integer s_inf = 0, s_zero = 0;
    for (std::size_t j = 0; j < divs.size(); ++j) {
        s_inf += Integer(divs[j]) * e.exponents[j];
        s_zero += Integer(e.level / divs[j]) * e.exponents[j];
    }
    if (s_inf % 24 != 0) out.failures.push_back(HolomorphyFailure::InfinityOrderNotIntegral);
    if (s_zero % 24 != 0) out.failures.push_back(HolomorphyFailure::ZeroOrderNotIntegral);

    std::map<std::int64_t, std::int64_t> parity;
    for (std::size_t j = 0; j < divs.size(); ++j)
        for (auto [p, k] : factorize(divs[j])) parity[p] += k * e.exponents[j];
    if (std::any_of(parity.begin(), parity.end(), [](const auto& pe) { return pe.second % 2 != 0; }))
        out.failures.push_back(HolomorphyFailure::NotRationalSquare);

    Integer sum = 0;
    for (auto r : e.exponents) sum += r;
    if (sum < 0 || sum % 4 != 0) out.failures.push_back(HolomorphyFailure::WeightNotEvenInteger);
    return out;
}

inline bool is_holomorphic_modform(const EtaQuotient& e) { return static_cast<bool>(check_holomorphic(e)); }

/// q-expansion to prec coefficients. The leading coefficient is 1.
inline QSeries expansion(const EtaQuotient& e, std::size_t prec) {
    if (auto chk = check_holomorphic(e); !chk)
        throw std::invalid_argument(std::string("expansion: not a holomorphic modular form: ") + to_string(chk.failures.front()));
    const auto divs = divisors(e.level);
    std::int64_t s = 0;
    for (std::size_t j = 0; j < divs.size(); ++j) s += divs[j] * e.exponents[j];
    const auto lead = static_cast<std::size_t>(s / 24);
    if (lead >= prec) return QSeries(prec);
    const std::size_t inner = prec - lead;
    QSeries prod = QSeries::one(inner);
    for (std::size_t j = 0; j < divs.size(); ++j) {
        if (e.exponents[j] == 0) continue;
        const auto delta = static_cast<std::size_t>(divs[j]);
        QSeries base = dilate(eta_expansion((inner + delta - 1) / delta), delta).truncated(inner);
        prod = mul(prod, pow(base, e.exponents[j]));
    }
    return shift(prod, lead, prec);
}

namespace detail {

/// Integer row echelon form over columns [c0, c1); returns the pivot count.
/// Pivot rows come first, in column order, with positive pivots.
inline std::size_t echelon(std::vector<std::vector<Integer>>& rows, std::size_t c0, std::size_t c1) {
    std::size_t top = 0;
    for (std::size_t c = c0; c < c1 && top < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = top; r < rows.size(); ++r)
                if (sgn(rows[r][c]) != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
            if (best == rows.size()) break;
            std::swap(rows[top], rows[best]);
            bool clean = true;
            for (std::size_t r = top + 1; r < rows.size(); ++r) {
                if (sgn(rows[r][c]) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[top][c].get_mpz_t());
                for (std::size_t j = c; j < rows[r].size(); ++j) rows[r][j] -= q * rows[top][j];
                if (sgn(rows[r][c]) != 0) clean = false;
            }
            if (clean) break;
        }
        if (sgn(rows[top][c]) == 0) continue;
        if (sgn(rows[top][c]) < 0)
            for (auto& x : rows[top]) x = -x;
        ++top;
    }
    return top;
}

/// Echelon basis of {o in Z^n : M o = 0 mod D}: row j is zero before column j
/// and has a positive entry there, so a point of the lattice is built one
/// coordinate at a time with coordinate j fixed modulo row j's pivot.
inline std::vector<std::vector<std::int64_t>> congruence_lattice(const std::vector<std::vector<std::int64_t>>& M, std::int64_t D) {
    const std::size_t n = M.size();
    std::vector<std::vector<Integer>> rows;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Integer> row(2 * n, 0);
        for (std::size_t i = 0; i < n; ++i) row[i] = M[i][j];
        row[n + j] = 1;
        rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Integer> row(2 * n, 0);
        row[k] = D;
        rows.push_back(std::move(row));
    }
    const std::size_t pivots = echelon(rows, 0, n);
    std::vector<std::vector<Integer>> kernel;
    for (std::size_t r = pivots; r < rows.size(); ++r) kernel.emplace_back(rows[r].begin() + static_cast<std::ptrdiff_t>(n), rows[r].end());
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Integer> row(n, 0);
        row[k] = D;
        kernel.push_back(std::move(row));
    }
    if (echelon(kernel, 0, n) != n) throw std::logic_error("congruence lattice is not of full rank");
    std::vector<std::vector<std::int64_t>> basis(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        if (sgn(kernel[j][j]) == 0) throw std::logic_error("congruence lattice echelon form has a gap");
        basis[j][j] = kernel[j][j].get_si();
        for (std::size_t i = j + 1; i < n; ++i) {
            Integer x;
            mpz_fdiv_r(x.get_mpz_t(), kernel[j][i].get_mpz_t(), Integer(D).get_mpz_t());
            basis[j][i] = x.get_si();
        }
    }
    return basis;
}

}  // namespace detail

/// Holomorphic weight-2 eta-quotients at level N, found from their divisors.
///
/// Runs over nonnegative integer cusp orders with weighted total B(N,2) in
/// lexicographic order (smallest denominator first) and solves for exponents.
/// Only orders that come from integer exponent vectors are visited: each
/// coordinate is restricted to one residue class given the earlier ones.
/// fn returns false to stop early; the return value says whether the walk ran
/// to completion.
inline bool for_each_weight2_eta_quotient(const LigozatSystem& sys, const std::function<bool(const EtaQuotient&)>& fn) {
    const std::int64_t N = sys.level();
    const auto L = level_data(N);
    if (L.mu % 6 != 0) return true;  // B(N,2) not integral: no eta-quotient has that many zeros
    const std::int64_t total = L.mu / 6;
    const std::size_t n = sys.divisors_of_level().size();
    std::vector<std::int64_t> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = L.cusp_classes[i].multiplicity;
    const auto& M = sys.scaled_inverse();
    const std::int64_t D = sys.inverse_denominator();
    const auto lattice = detail::congruence_lattice(M, D);

    std::vector<std::int64_t> orders(n, 0);
    // offset[i] = lattice combination fixed by coordinates before i
    std::vector<std::vector<std::int64_t>> offset(n + 1, std::vector<std::int64_t>(n, 0));
    bool stopped = false;
    auto emit = [&]() {
        EtaQuotient e{N, std::vector<std::int64_t>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            __int128 acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += static_cast<__int128>(M[i][j]) * orders[j];
            if (acc % D != 0) return;
            e.exponents[i] = static_cast<std::int64_t>(acc / D);
        }
        if (!is_holomorphic_modform(e)) return;
        if (!fn(e)) stopped = true;
    };
    auto place = [&](std::size_t i, std::int64_t o) {
        orders[i] = o;
        const std::int64_t c = (o - offset[i][i]) / lattice[i][i];
        for (std::size_t j = i + 1; j < n; ++j) offset[i + 1][j] = offset[i][j] + c * lattice[i][j];
    };
    auto first = [&](std::size_t i) {
        const std::int64_t h = lattice[i][i];
        return ((offset[i][i] % h) + h) % h;
    };
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (stopped) return;
        if (i + 1 == n) {
            if (left % w[i] != 0) return;
            const std::int64_t o = left / w[i];
            if ((o - offset[i][i]) % lattice[i][i] != 0) return;
            orders[i] = o;
            emit();
            return;
        }
        for (std::int64_t o = first(i); o * w[i] <= left && !stopped; o += lattice[i][i]) {
            place(i, o);
            rec(i + 1, left - o * w[i]);
        }
        orders[i] = 0;
    };
    rec(0, total);
    return !stopped;
}

struct EtaSpanningSet {
    std::int64_t level = 1;
    std::size_t target_dim = 0;
    TriangularBasis basis;                 // representations over `generators`
    std::vector<EtaQuotient> generators;   // independent eta-quotients, in order of discovery
    bool complete = false;
    std::size_t candidates = 0;            // distinct eta-quotients expanded
};

/// Weight-2 eta-quotient search with per-level memoization.
///
/// Candidate order at level N: every quotient of each proper sublevel (in
/// increasing order) lifted by each admissible dilation, then the quotients
/// found directly from divisors at level N; each candidate is followed by
/// its Fricke image. The search stops once the span reaches dim M_2.
class EtaSearch {
  public:
    explicit EtaSearch(std::optional<std::filesystem::path> cache_dir = std::nullopt) : cache_dir_(std::move(cache_dir)) {}

    const LigozatSystem& system(std::int64_t N) {
        auto it = systems_.find(N);
        if (it == systems_.end()) it = systems_.emplace(N, std::make_unique<LigozatSystem>(N)).first;
        return *it->second;
    }

    /// Every holomorphic weight-2 eta-quotient at level N.
    const std::vector<EtaQuotient>& weight2_quotients(std::int64_t N) {
        if (auto it = memo_.find(N); it != memo_.end()) return it->second;
        std::vector<EtaQuotient> all;
        if (!load_cache(N, all)) {
            for_each_weight2_eta_quotient(system(N), [&](const EtaQuotient& e) {
                all.push_back(e);
                return true;
            });
            store_cache(N, all);
        }
        return memo_.emplace(N, std::move(all)).first->second;
    }

    EtaSpanningSet spanning_set(std::int64_t N, std::size_t prec) {
        if (prec < sturm_precision(N, 2))
            throw std::invalid_argument("eta spanning set: precision must exceed floor(B(N,2))");
        EtaSpanningSet out;
        out.level = N;
        out.target_dim = static_cast<std::size_t>(dim_Mk(N, 2));
        out.basis = TriangularBasis(prec);
        std::set<EtaQuotient> seen;

        auto offer = [&](const EtaQuotient& e) {
            for (const EtaQuotient& c : {e, fricke(e)}) {
                if (out.basis.size() >= out.target_dim) return false;
                if (!seen.insert(c).second) continue;
                ++out.candidates;
                auto slot = out.generators.size();
                auto res = out.basis.insert(expansion(c, prec), Representation::generator(slot, out.target_dim));
                if (res.inserted) out.generators.push_back(c);
            }
            return out.basis.size() < out.target_dim;
        };

        bool running = out.target_dim > 0;
        const auto divs = divisors(N);
        for (std::size_t i = 0; running && i + 1 < divs.size(); ++i) {
            const std::int64_t delta = divs[i];
            for (const auto& q : weight2_quotients(delta)) {
                for (std::int64_t t : divisors(N / delta)) {
                    running = offer(lift_to_level(q, N, t));
                    if (!running) break;
                }
                if (!running) break;
            }
        }
        if (running) {
            auto mit = memo_.find(N);
            if (mit != memo_.end()) {
                for (const auto& q : mit->second)
                    if (!offer(q)) break;
            } else {
                std::vector<EtaQuotient> all;
                bool finished = for_each_weight2_eta_quotient(system(N), [&](const EtaQuotient& q) {
                    all.push_back(q);
                    return offer(q);
                });
                if (finished) memo_.emplace(N, std::move(all));
            }
        }
        // Representations were sized for dim M_2; trim them to the generators actually found.
        if (out.generators.size() < out.target_dim) {
            std::vector<BasisEntry> trimmed;
            for (const auto& e : out.basis.entries()) {
                Representation r;
                for (const auto& [m, c] : e.rep.terms()) {
                    Monomial short_m(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(out.generators.size()));
                    r.add_scaled(c, Representation::monomial(short_m));
                }
                trimmed.push_back(BasisEntry{e.series, std::move(r), e.pivot});
            }
            out.basis = TriangularBasis::from_entries(prec, std::move(trimmed));
        }
        out.complete = out.basis.size() == out.target_dim;
        return out;
    }

  private:
    std::optional<std::filesystem::path> cache_file(std::int64_t N) const {
        if (!cache_dir_) return std::nullopt;
        return *cache_dir_ / ("eta_w2_" + std::to_string(N) + ".txt");
    }

    bool load_cache(std::int64_t N, std::vector<EtaQuotient>& out) const {
        auto path = cache_file(N);
        if (!path) return false;
        std::ifstream in(*path);
        if (!in) return false;
        std::string tag;
        std::int64_t level = 0;
        std::size_t count = 0;
        if (!(in >> tag >> level >> count) || tag != "level" || level != N) return false;
        const std::size_t n = divisors(N).size();
        std::vector<EtaQuotient> loaded;
        for (std::size_t i = 0; i < count; ++i) {
            EtaQuotient e{N, std::vector<std::int64_t>(n)};
            for (auto& r : e.exponents)
                if (!(in >> r)) return false;
            if (!is_holomorphic_modform(e)) return false;
            loaded.push_back(std::move(e));
        }
        out = std::move(loaded);
        return true;
    }

    void store_cache(std::int64_t N, const std::vector<EtaQuotient>& all) const {
        auto path = cache_file(N);
        if (!path) return;
        std::error_code ec;
        std::filesystem::create_directories(*cache_dir_, ec);
        std::ofstream out(*path);
        if (!out) return;
        out << "level " << N << ' ' << all.size() << '\n';
        for (const auto& e : all) {
            for (std::size_t j = 0; j < e.exponents.size(); ++j) out << (j ? " " : "") << e.exponents[j];
            out << '\n';
        }
    }

    std::optional<std::filesystem::path> cache_dir_;
    std::map<std::int64_t, std::unique_ptr<LigozatSystem>> systems_;
    std::map<std::int64_t, std::vector<EtaQuotient>> memo_;
};

inline EtaSpanningSet weight2_eta_spanning_set(std::int64_t N, std::size_t prec) {
    EtaSearch search;
    return search.spanning_set(N, prec);
}

}  // namespace modforms
