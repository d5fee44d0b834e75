#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis_search.hpp"
#include "eta_quotient.hpp"
#include "io.hpp"
#include "level_arith.hpp"
#include "qseries.hpp"

namespace modforms {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNotGood = 2,
    kExitIncompleteWeight2 = 3,
    kExitSearchExhausted = 4,
    kExitInput = 5,
};

enum class OutputFormat { Text, Json };

class CommandError : public std::runtime_error {
  public:
    CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

  private:
    int code_;
};

// ---------------------------------------------------------------------------
// dim / good

inline int cmd_dim(std::int64_t N, int k, OutputFormat format, std::ostream& out, std::ostream& err) {
    if (N < 1 || k < 0 || k % 2 != 0) {
        err << "error: need a level >= 1 and an even weight >= 0\n";
        return kExitUsage;
    }
    const auto dim = dim_Mk(N, k);
    const auto b = sturm_bound(N, k);
    if (format == OutputFormat::Json) {
        out << Json{{"level", N}, {"weight", k}, {"dimension", dim}, {"sturm_bound", b.get_str()}}.dump() << '\n';
    } else {
        out << "dim M_" << k << "(Gamma0(" << N << ")) = " << dim << '\n';
        out << "B(" << N << "," << k << ") = " << b.get_str() << '\n';
    }
    return kExitOk;
}

/// Empty when N is good, otherwise the first reason it is not.
inline std::string not_good_reason(std::int64_t N) {
    if (N < 4 || is_prime(N)) return "not composite";
    if (!no_order2_points(N)) return "condition (1) fails: 4 does not divide N and no prime p = 3 (mod 4) divides N";
    if (!no_order3_points(N)) return "condition (2) fails: 9 does not divide N and no prime p = 2 (mod 3) divides N";
    return {};
}

inline int cmd_good(std::int64_t N, std::ostream& out, std::ostream& err) {
    if (N < 1) {
        err << "error: level must be >= 1\n";
        return kExitUsage;
    }
    auto why = not_good_reason(N);
    if (why.empty())
        out << N << " is good\n";
    else
        out << N << " is not good: " << why << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eta-search

struct EtaSearchOptions {
    std::int64_t level = 1;
    std::optional<std::size_t> prec;
    OutputFormat format = OutputFormat::Text;
    std::optional<std::filesystem::path> cache_dir;
};

inline int cmd_eta_search(const EtaSearchOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.level < 1) {
        err << "error: level must be >= 1\n";
        return kExitUsage;
    }
    const std::size_t min_prec = sturm_precision(opts.level, 2);
    const std::size_t prec = opts.prec.value_or(min_prec);
    if (prec < min_prec) {
        err << "error: --prec must exceed floor(B(N,2)) = " << min_prec - 1 << '\n';
        return kExitUsage;
    }
    if (!is_good(opts.level)) err << "warning: level " << opts.level << " is not good (" << not_good_reason(opts.level) << ")\n";

    EtaSearch search(opts.cache_dir);
    auto result = search.spanning_set(opts.level, prec);
    if (opts.format == OutputFormat::Json) {
        Json q = Json::array();
        for (const auto& e : result.generators) q.push_back(to_json(e));
        out << Json{{"level", opts.level},
                    {"dimension", result.target_dim},
                    {"span_dimension", result.basis.size()},
                    {"complete", result.complete},
                    {"precision", prec},
                    {"quotients", q}}
                   .dump()
            << '\n';
    } else {
        out << "level " << opts.level << '\n';
        out << "dimension " << result.target_dim << '\n';
        out << "span_dimension " << result.basis.size() << '\n';
        out << "complete: " << (result.complete ? "true" : "false") << '\n';
        for (const auto& e : result.generators) out << to_text(e) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// basis

enum class Weight2Mode { Eta, File };

struct Weight2Source {
    Weight2Mode mode = Weight2Mode::Eta;
    std::optional<std::filesystem::path> path;  // required for File
};

struct BasisOptions {
    std::int64_t level = 1;
    int weight = 2;
    Weight2Source source;
    OutputFormat format = OutputFormat::Json;
    std::optional<std::size_t> prec;
    unsigned threads = 1;
    bool allow_bad_level = false;
    std::optional<std::filesystem::path> cache_dir;
};

struct BasisResult {
    std::int64_t level = 1;
    int weight = 2;
    std::size_t dimension = 0;
    std::vector<QSeries> generators;           // at the output precision
    std::vector<EtaQuotient> eta_generators;   // empty for file input
    TriangularBasis basis;
    SearchStats stats;
};

namespace detail {

inline std::vector<QSeries> file_generators(const std::filesystem::path& path, std::int64_t N, std::size_t dim2,
                                            std::size_t needed_prec) {
    std::ifstream in(path);
    if (!in) throw CommandError(kExitInput, "cannot read " + path.string());
    SeriesFile f;
    try {
        f = read_series_file(in);
    } catch (const FormatError& e) {
        throw CommandError(kExitInput, path.string() + ": " + e.what());
    }
    if (f.level != N)
        throw CommandError(kExitInput, "weight-2 file is for level " + std::to_string(f.level) + ", not " + std::to_string(N));
    if (f.weight != 2) throw CommandError(kExitInput, "weight-2 file declares weight " + std::to_string(f.weight));
    if (f.prec < needed_prec)
        throw CommandError(kExitInput, "weight-2 file has " + std::to_string(f.prec) + " coefficients; " +
                                           std::to_string(needed_prec) + " are needed");
    if (f.series.size() != dim2)
        throw CommandError(kExitIncompleteWeight2, "weight-2 file has " + std::to_string(f.series.size()) +
                                                       " forms but dim M_2 = " + std::to_string(dim2));
    return std::move(f.series);
}

}  // namespace detail

/// Weight-2 generators, weight-k search, and optional precision lift.
inline BasisResult compute_basis(const BasisOptions& opts) {
    const std::int64_t N = opts.level;
    const int k = opts.weight;
    if (N < 1) throw CommandError(kExitUsage, "level must be >= 1");
    if (k < 2 || k % 2 != 0) throw CommandError(kExitUsage, "weight must be an even integer >= 2");
    if (!is_good(N) && !opts.allow_bad_level)
        throw CommandError(kExitNotGood, "level " + std::to_string(N) + " is not good (" + not_good_reason(N) +
                                             "); pass --allow-bad-level to try anyway");
    if (opts.source.mode == Weight2Mode::File && !opts.source.path)
        throw CommandError(kExitUsage, "--weight2-source file needs --weight2-file");

    BasisResult r;
    r.level = N;
    r.weight = k;
    r.dimension = static_cast<std::size_t>(dim_Mk(N, k));
    const std::size_t dim2 = static_cast<std::size_t>(dim_Mk(N, 2));
    const std::size_t work_prec = sturm_precision(N, k);
    const std::size_t out_prec = std::max(work_prec, opts.prec.value_or(work_prec));

    std::vector<QSeries> gens_out;
    if (opts.source.mode == Weight2Mode::Eta) {
        EtaSearch search(opts.cache_dir);
        auto span = search.spanning_set(N, sturm_precision(N, 2));
        if (!span.complete)
            throw CommandError(kExitIncompleteWeight2, "eta-quotients span only " + std::to_string(span.basis.size()) +
                                                           " of " + std::to_string(dim2) + " dimensions of M_2");
        r.eta_generators = span.generators;
        for (const auto& e : span.generators) gens_out.push_back(expansion(e, out_prec));
    } else {
        gens_out = detail::file_generators(*opts.source.path, N, dim2, out_prec);
        for (auto& g : gens_out) g = g.truncated(out_prec);
    }

    std::vector<QSeries> gens_work;
    for (const auto& g : gens_out) gens_work.push_back(g.truncated(work_prec));
    try {
        (void)sigma_reorder(gens_work);
    } catch (const std::invalid_argument& e) {
        throw CommandError(kExitIncompleteWeight2, std::string("weight-2 forms are not independent: ") + e.what());
    }

    try {
        r.basis = weight_k_basis(N, k, gens_work, r.dimension, work_prec, SearchOptions{opts.threads}, &r.stats);
    } catch (const SearchExhausted& e) {
        throw CommandError(kExitSearchExhausted, e.what());
    }
    if (out_prec > work_prec) r.basis = lift_precision(r.basis, gens_out, out_prec);
    r.generators = std::move(gens_out);
    return r;
}

inline Json to_json(const BasisResult& r) {
    Json gens = Json::array();
    for (std::size_t i = 0; i < r.generators.size(); ++i) {
        Json g = Json::object();
        if (i < r.eta_generators.size()) {
            g["source"] = "eta";
            g["eta"] = to_json(r.eta_generators[i]);
        } else {
            g["source"] = "file";
        }
        g["coefficients"] = coefficients_json(r.generators[i]);
        gens.push_back(std::move(g));
    }
    Json forms = Json::array();
    for (const auto& e : r.basis.entries())
        forms.push_back(Json{{"valuation", e.pivot}, {"coefficients", coefficients_json(e.series)}, {"representation", to_json(e.rep)}});
    return Json{{"level", r.level},
                {"weight", r.weight},
                {"dimension", r.dimension},
                {"precision", r.basis.prec()},
                {"generators", gens},
                {"forms", forms}};
}

inline void write_basis(const BasisResult& r, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::Json) {
        out << to_json(r).dump() << '\n';
        return;
    }
    SeriesFile f{r.level, r.weight, r.basis.prec(), {}};
    for (const auto& e : r.basis.entries()) f.series.push_back(e.series);
    write_series_file(out, f);
}

inline int cmd_basis(const BasisOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (!is_good(opts.level) && opts.allow_bad_level && opts.level >= 1)
            err << "warning: level " << opts.level << " is not good (" << not_good_reason(opts.level) << ")\n";
        auto r = compute_basis(opts);
        write_basis(r, opts.format, out);
        return kExitOk;
    } catch (const CommandError& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    }
}

// ---------------------------------------------------------------------------
// bench

/// Hooks into whatever allocation accounting the host process provides.
struct MemoryProbe {
    std::function<void()> reset_peak = [] {};
    std::function<std::size_t()> peak_bytes = [] { return std::size_t{0}; };
};

struct BenchCase {
    std::int64_t level = 0;
    int weight = 0;
};

/// One `N k` pair per line; blank lines and `#` comments are ignored.
inline std::vector<BenchCase> read_bench_spec(std::istream& in) {
    std::vector<BenchCase> cases;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long N = 0, k = 0;
        if (!(ls >> N)) continue;
        std::string extra;
        if (!(ls >> k) || (ls >> extra)) throw FormatError(lineno, "expected '<level> <weight>'");
        cases.push_back({N, static_cast<int>(k)});
    }
    return cases;
}

inline int cmd_bench(const std::vector<BenchCase>& cases, unsigned threads, std::ostream& out, const MemoryProbe& probe = {}) {
    out << "N,k,dim,seconds,peak_bytes,error\n";
    for (const auto& c : cases) {
        BasisOptions opts;
        opts.level = c.level;
        opts.weight = c.weight;
        opts.threads = threads;
        std::string error;
        std::size_t dim = 0;
        probe.reset_peak();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            dim = compute_basis(opts).basis.size();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::size_t peak = probe.peak_bytes();
        for (char& ch : error)
            if (ch == ',' || ch == '\n') ch = ';';
        std::ostringstream row;
        row.setf(std::ios::fixed);
        row.precision(6);
        row << c.level << ',' << c.weight << ',' << dim << ',' << secs << ',' << peak << ',' << error;
        out << row.str() << std::endl;
    }
    return kExitOk;
}

}  // namespace modforms
