#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "level_arith.hpp"
#include "qseries.hpp"

namespace modforms {

/// Exponent vector over the weight-2 generators.
using Monomial = std::vector<std::uint32_t>;

/// Rational linear combination of monomials in the weight-2 generators.
/// Terms are kept combined and free of zero coefficients.
class Representation {
  public:
    Representation() = default;

    static Representation monomial(Monomial m) {
        Representation r;
        r.terms_.emplace(std::move(m), Rational(1));
        return r;
    }

    /// e_index in a generator set of the given size.
    static Representation generator(std::size_t index, std::size_t count) {
        Monomial m(count, 0);
        m.at(index) = 1;
        return monomial(std::move(m));
    }

    /// this <- this + c * other
    void add_scaled(const Rational& c, const Representation& other) {
        if (sgn(c) == 0) return;
        for (const auto& [m, a] : other.terms_) {
            auto [it, fresh] = terms_.try_emplace(m, 0);
            it->second += c * a;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    friend bool operator==(const Representation&, const Representation&) = default;

  private:
    std::map<Monomial, Rational> terms_;
};

struct BasisEntry {
    QSeries series;
    Representation rep;
    std::size_t pivot = 0;  // valuation of series
};

struct InsertOutcome {
    bool inserted = false;
    std::size_t position = 0;  // index of the new entry when inserted
};

namespace detail {

/// A series stored as scale * row with row a primitive integer vector.
struct IntRow {
    std::vector<Integer> row;
    Rational scale;

    static IntRow from_series(const QSeries& f) {
        IntRow r;
        Integer den = 1;
        for (const auto& c : f.coefficients()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        r.row.resize(f.prec());
        for (std::size_t n = 0; n < f.prec(); ++n) {
            const Rational& c = f[n];
            if (sgn(c) == 0) continue;
            r.row[n] = c.get_num() * (den / c.get_den());
        }
        r.scale = Rational(r.make_primitive(0), den);
        r.scale.canonicalize();
        return r;
    }

    /// Divides out the content of row[from..]; returns it (1 for a zero row).
    Integer make_primitive(std::size_t from) {
        Integer g = 0;
        for (std::size_t n = from; n < row.size(); ++n) {
            if (sgn(row[n]) == 0) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[n].get_mpz_t());
            if (g == 1) return g;
        }
        if (g <= 1) return 1;
        for (std::size_t n = from; n < row.size(); ++n)
            if (sgn(row[n]) != 0) mpz_divexact(row[n].get_mpz_t(), row[n].get_mpz_t(), g.get_mpz_t());
        return g;
    }

    QSeries to_series() const {
        std::vector<Rational> c(row.size());
        for (std::size_t n = 0; n < row.size(); ++n)
            if (sgn(row[n]) != 0) {
                c[n] = scale * Rational(row[n]);
            }
        return QSeries(std::move(c));
    }
};

}  // namespace detail

/// Forms with strictly increasing valuations at infinity, all at one precision.
class TriangularBasis {
  public:
    TriangularBasis() = default;
    explicit TriangularBasis(std::size_t prec) : prec_(prec) {}

    /// Adopts entries that already satisfy the invariants; throws otherwise.
    static TriangularBasis from_entries(std::size_t prec, std::vector<BasisEntry> entries) {
        TriangularBasis b(prec);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (e.series.prec() != prec) throw std::invalid_argument("TriangularBasis: precision mismatch");
            auto v = e.series.valuation();
            if (!v || *v != e.pivot) throw std::invalid_argument("TriangularBasis: pivot is not the valuation");
            if (i > 0 && entries[i - 1].pivot >= e.pivot)
                throw std::invalid_argument("TriangularBasis: pivots not strictly increasing");
        }
        b.entries_ = std::move(entries);
        for (const auto& e : b.entries_) b.rows_.push_back(detail::IntRow::from_series(e.series));
        return b;
    }

    std::size_t prec() const { return prec_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<BasisEntry>& entries() const { return entries_; }
    const BasisEntry& operator[](std::size_t i) const { return entries_[i]; }

    std::vector<std::size_t> pivots() const {
        std::vector<std::size_t> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.pivot);
        return out;
    }

    /// Upper-triangular insertion.
    ///
    /// Walks the entries in pivot order. An entry whose pivot equals the
    /// current valuation of f is eliminated from f (and from its
    /// representation); the first entry whose pivot exceeds it marks the
    /// insertion slot. A remainder of zero means f was already in the span
    /// and the basis is left untouched.
    InsertOutcome insert(QSeries f, Representation rep) {
        if (f.prec() != prec_)
            throw std::invalid_argument("triangular insert: precision " + std::to_string(f.prec()) +
                                        " does not match basis precision " + std::to_string(prec_));
        auto v = f.valuation();
        if (!v) return {};
        // Fraction-free elimination on integer rows. Each step uses the same
        // multiplier as plain rational elimination, so results are identical.
        // Representation updates are deferred until f is known to survive.
        auto F = detail::IntRow::from_series(f);
        std::vector<std::pair<std::size_t, Rational>> steps;
        std::size_t slot = entries_.size();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const std::size_t p = entries_[i].pivot;
            if (p == *v) {
                const auto& H = rows_[i];
                const Integer& hp = H.row[p];
                const Integer fp = F.row[p];
                Rational c = -F.scale * fp / (H.scale * hp);
                c.canonicalize();
                steps.emplace_back(i, std::move(c));
                for (std::size_t n = p; n < prec_; ++n) {
                    Integer& x = F.row[n];
                    if (sgn(x) != 0) x *= hp;
                    if (sgn(H.row[n]) != 0) mpz_submul(x.get_mpz_t(), fp.get_mpz_t(), H.row[n].get_mpz_t());
                }
                F.scale /= hp;
                v.reset();
                for (std::size_t n = p + 1; n < prec_; ++n)
                    if (sgn(F.row[n]) != 0) {
                        v = n;
                        break;
                    }
                if (!v) return {};
                F.scale *= F.make_primitive(*v);
            } else if (p > *v) {
                slot = i;
                break;
            }
        }
        for (const auto& [i, c] : steps) rep.add_scaled(c, entries_[i].rep);
        const auto at = static_cast<std::ptrdiff_t>(slot);
        entries_.insert(entries_.begin() + at, BasisEntry{F.to_series(), std::move(rep), *v});
        rows_.insert(rows_.begin() + at, std::move(F));
        return {true, slot};
    }

  private:
    std::size_t prec_ = 0;
    std::vector<BasisEntry> entries_;
    std::vector<detail::IntRow> rows_;  // integer form of entries_[i].series
};

/// Functional form of TriangularBasis::insert.
inline std::pair<TriangularBasis, bool> triangular_insert(TriangularBasis b, QSeries f, Representation rep) {
    bool inserted = b.insert(std::move(f), std::move(rep)).inserted;
    return {std::move(b), inserted};
}

/// Product of gens[i]^m[i], truncated to prec.
inline QSeries evaluate_monomial(const Monomial& m, std::span<const QSeries> gens, std::size_t prec) {
    if (m.size() != gens.size()) throw std::invalid_argument("monomial length does not match generator count");
    std::optional<QSeries> acc;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::uint32_t e = 0; e < m[i]; ++e) {
            QSeries g = gens[i].truncated(prec);
            acc = acc ? mul(*acc, g) : std::move(g);
        }
    }
    return acc ? std::move(*acc) : QSeries::one(prec);
}

inline QSeries evaluate(const Representation& rep, std::span<const QSeries> gens, std::size_t prec) {
    QSeries out(prec);
    for (const auto& [m, c] : rep.terms()) out.add_scaled(c, evaluate_monomial(m, gens, prec));
    return out;
}

/// Reordering sigma of the generators such that, for every i, the first i
/// reordered generators span the same space as the first i triangular forms.
/// Returns 0-based indices into gens.
inline std::vector<std::size_t> sigma_reorder(std::span<const QSeries> gens) {
    if (gens.empty()) return {};
    const std::size_t prec = gens.front().prec();
    TriangularBasis b(prec);
    std::vector<std::size_t> source;  // source[i] = generator behind entry i
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].prec() != prec) throw std::invalid_argument("sigma_reorder: generators differ in precision");
        auto out = b.insert(gens[j], Representation::generator(j, gens.size()));
        if (!out.inserted)
            throw std::invalid_argument("sigma_reorder: generator " + std::to_string(j) +
                                        " is linearly dependent on the previous ones");
        source.insert(source.begin() + static_cast<std::ptrdiff_t>(out.position), j);
    }
    return source;
}

/// Raised when every degree-(k/2) monomial has been tried without reaching the
/// requested dimension: the weight-2 input does not generate.
class SearchExhausted : public std::runtime_error {
  public:
    SearchExhausted(std::size_t found, std::size_t wanted)
        : std::runtime_error("monomial supply exhausted: found " + std::to_string(found) + " of " +
                             std::to_string(wanted) + " independent forms"),
          found_(found) {}
    std::size_t found() const { return found_; }

  private:
    std::size_t found_;
};

struct SearchOptions {
    unsigned threads = 1;
};

struct SearchStats {
    std::size_t candidates = 0;      // products handed to triangular insertion
    std::size_t multiplications = 0;  // series products computed
    std::size_t branches = 0;
};

namespace detail {

/// Depth-first walk over the degree-m monomials on an ordered alphabet of
/// generators: index sequences a_1 <= a_2 <= ... <= a_m (positions in the
/// alphabet), last position varying fastest. Prefix products are cached so
/// each new leaf costs a single multiplication; a prefix is dropped as soon
/// as the walk leaves its subtree.
class MonomialWalk {
  public:
    MonomialWalk(std::vector<std::size_t> alphabet, std::size_t degree, std::span<const QSeries> gens,
                 std::size_t generator_count)
        : alphabet_(std::move(alphabet)), degree_(degree), gens_(gens), count_(generator_count),
          seq_(degree, 0), prefix_(degree) {}

    const std::vector<std::size_t>& alphabet() const { return alphabet_; }
    bool exhausted() const { return done_; }

    /// Next monomial not in `skip`, with its product; nullopt once exhausted.
    std::optional<std::pair<Monomial, QSeries>> next(const std::set<Monomial>& skip, SearchStats& stats) {
        while (!done_) {
            if (started_ && !advance()) break;
            started_ = true;
            Monomial m = current_monomial();
            if (skip.contains(m)) continue;
            return std::make_pair(std::move(m), leaf_product(stats));
        }
        done_ = true;
        return std::nullopt;
    }

  private:
    bool advance() {
        const std::size_t top = alphabet_.size() - 1;
        std::size_t i = degree_;
        while (i > 0 && seq_[i - 1] == top) --i;
        if (i == 0) return false;
        --i;
        ++seq_[i];
        for (std::size_t j = i + 1; j < degree_; ++j) seq_[j] = seq_[i];
        valid_ = std::min(valid_, i);
        return true;
    }

    Monomial current_monomial() const {
        Monomial m(count_, 0);
        for (std::size_t p : seq_) ++m[alphabet_[p]];
        return m;
    }

    const QSeries& gen(std::size_t pos) const { return gens_[alphabet_[seq_[pos]]]; }

    QSeries leaf_product(SearchStats& stats) {
        if (degree_ == 1) return gen(0);
        // prefix_[j] = product of the first j+1 factors; only j < degree-1 is cached.
        if (valid_ == 0) {
            prefix_[0] = gen(0);
            valid_ = 1;
        }
        for (std::size_t j = valid_; j + 1 < degree_; ++j) {
            prefix_[j] = mul(prefix_[j - 1], gen(j));
            ++stats.multiplications;
        }
        valid_ = degree_ - 1;
        ++stats.multiplications;
        return mul(prefix_[degree_ - 2], gen(degree_ - 1));
    }

    std::vector<std::size_t> alphabet_;
    std::size_t degree_;
    std::span<const QSeries> gens_;
    std::size_t count_;
    std::vector<std::size_t> seq_;
    std::vector<QSeries> prefix_;
    std::size_t valid_ = 0;  // number of prefix_ entries matching seq_
    bool started_ = false;
    bool done_ = false;
};

inline std::vector<std::size_t> index_range(std::size_t from, std::size_t to) {
    std::vector<std::size_t> out;
    if (from <= to) {
        for (std::size_t i = from; i <= to; ++i) out.push_back(i);
    } else {
        for (std::size_t i = from + 1; i-- > to;) out.push_back(i);
    }
    return out;
}

}  // namespace detail

/// Basis of M_k(Gamma0(N)) from products of k/2 weight-2 generators.
///
/// The generators are put in sigma order, then four monomial walks run in
/// round-robin: upward from the first generator, downward from the last, and
/// both directions from the middle one. Each round the active walks produce
/// their next untried product (concurrently when options.threads > 1); the
/// products are then inserted one walk at a time in a fixed order, so the
/// result does not depend on the thread count.
///
/// Representations in the result are over the generators in their given
/// order. prec is the common working precision and must exceed floor(B(N,k)).
inline TriangularBasis weight_k_basis(std::int64_t N, int k, std::span<const QSeries> gens, std::size_t dim,
                                      std::size_t prec, SearchOptions options = {}, SearchStats* stats_out = nullptr) {
    require_even_weight(k);
    if (prec < sturm_precision(N, k))
        throw std::invalid_argument("weight_k_basis: precision " + std::to_string(prec) + " does not exceed the Sturm bound");
    SearchStats stats;
    TriangularBasis basis(prec);
    const std::size_t t = gens.size();

    if (k == 0) {
        basis.insert(QSeries::one(prec), Representation::monomial(Monomial(t, 0)));
        if (stats_out) *stats_out = stats;
        return basis;
    }
    if (dim == 0) {
        if (stats_out) *stats_out = stats;
        return basis;
    }
    if (t == 0) throw SearchExhausted(0, dim);

    std::vector<QSeries> work;
    work.reserve(t);
    for (const auto& g : gens) {
        if (g.prec() < prec) throw std::invalid_argument("weight_k_basis: generator precision below working precision");
        work.push_back(g.prec() == prec ? g : g.truncated(prec));
    }
    // Walk alphabets refer to positions in sigma order; map them back to generator indices.
    const auto sigma = sigma_reorder(work);
    auto to_gen = [&](std::vector<std::size_t> positions) {
        for (auto& p : positions) p = sigma[p];
        return positions;
    };

    const std::size_t degree = static_cast<std::size_t>(k / 2);
    const std::size_t mid = std::max<std::size_t>(t / 2, 1) - 1;
    std::vector<std::vector<std::size_t>> alphabets = {
        to_gen(detail::index_range(0, t - 1)),
        to_gen(detail::index_range(t - 1, 0)),
        to_gen(detail::index_range(mid, t - 1)),
        to_gen(detail::index_range(mid, 0)),
    };
    std::vector<detail::MonomialWalk> walks;
    for (auto& a : alphabets) {
        bool duplicate = std::any_of(walks.begin(), walks.end(), [&](const auto& w) { return w.alphabet() == a; });
        if (!duplicate) walks.emplace_back(std::move(a), degree, std::span<const QSeries>(work), t);
    }
    stats.branches = walks.size();

    std::set<Monomial> tried;
    std::vector<std::optional<std::pair<Monomial, QSeries>>> round(walks.size());
    std::vector<SearchStats> walk_stats(walks.size());
    const unsigned threads = std::max(1u, options.threads);

    while (basis.size() < dim) {
        bool any = false;
        if (threads == 1) {
            for (std::size_t b = 0; b < walks.size(); ++b) round[b] = walks[b].next(tried, walk_stats[b]);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t first = 0; first < walks.size(); first += threads) {
                const std::size_t last = std::min(walks.size(), first + threads);
                pool.clear();
                for (std::size_t b = first; b < last; ++b)
                    pool.emplace_back([&, b] { round[b] = walks[b].next(tried, walk_stats[b]); });
                pool.clear();  // joins
            }
        }
        for (std::size_t b = 0; b < walks.size() && basis.size() < dim; ++b) {
            if (!round[b]) continue;
            any = true;
            auto& [m, series] = *round[b];
            if (!tried.insert(m).second) continue;
            ++stats.candidates;
            basis.insert(std::move(series), Representation::monomial(m));
        }
        if (!any) break;
    }
    for (const auto& s : walk_stats) stats.multiplications += s.multiplications;
    if (stats_out) *stats_out = stats;
    if (basis.size() < dim) throw SearchExhausted(basis.size(), dim);
    return basis;
}

/// Re-evaluates every stored representation on generators known to new_prec
/// coefficients. The leading coefficients agree with the old series.
inline TriangularBasis lift_precision(const TriangularBasis& b, std::span<const QSeries> gens, std::size_t new_prec) {
    if (new_prec < b.prec()) throw std::invalid_argument("lift_precision: new precision is below the current one");
    for (const auto& g : gens)
        if (g.prec() < new_prec) throw std::invalid_argument("lift_precision: generator not known to the new precision");
    std::map<Monomial, QSeries> cache;
    std::vector<BasisEntry> lifted;
    lifted.reserve(b.size());
    for (const auto& e : b.entries()) {
        QSeries s(new_prec);
        for (const auto& [m, c] : e.rep.terms()) {
            if (m.size() != gens.size()) throw std::invalid_argument("lift_precision: generator count mismatch");
            auto it = cache.find(m);
            if (it == cache.end()) it = cache.emplace(m, evaluate_monomial(m, gens, new_prec)).first;
            s.add_scaled(c, it->second);
        }
        for (std::size_t n = 0; n < b.prec(); ++n)
            if (s[n] != e.series[n]) throw std::logic_error("lift_precision: representation does not reproduce stored series");
        lifted.push_back(BasisEntry{std::move(s), e.rep, e.pivot});
    }
    return TriangularBasis::from_entries(new_prec, std::move(lifted));
}

}  // namespace modforms
