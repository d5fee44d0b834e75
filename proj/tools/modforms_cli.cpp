// modforms: bases of M_k(Gamma0(N)) from weight-2 generators.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alloc_tracker.hpp"
#include "modforms/modforms.hpp"

namespace {

std::optional<std::filesystem::path> cache_dir_from_env() {
    if (const char* dir = std::getenv("MODFORMS_ETA_CACHE"); dir && *dir) return std::filesystem::path(dir);
    return std::nullopt;
}

const std::map<std::string, modforms::OutputFormat> kFormats = {
    {"json", modforms::OutputFormat::Json},
    {"text", modforms::OutputFormat::Text},
};

}  // namespace

int main(int argc, char** argv) {
    using namespace modforms;
    alloc_tracker::install_gmp_hooks();

    CLI::App app{"Bases of holomorphic modular forms on Gamma0(N) generated in weight two"};
    app.require_subcommand(1);

    std::int64_t level = 0;
    int weight = 0;
    OutputFormat format = OutputFormat::Text;
    std::optional<std::size_t> prec;
    unsigned threads = 1;

    auto* dim = app.add_subcommand("dim", "Dimension of M_k(Gamma0(N)) and the Sturm bound B(N,k)");
    dim->add_option("--level,-N", level, "Level N")->required();
    dim->add_option("--weight,-k", weight, "Even weight k")->required();
    dim->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

    auto* good = app.add_subcommand("good", "Whether Gamma0(N) is composite without elliptic points");
    good->add_option("--level,-N", level, "Level N")->required();

    auto* eta = app.add_subcommand("eta-search", "Weight-2 eta-quotients spanning M_2(Gamma0(N))");
    eta->add_option("--level,-N", level, "Level N")->required();
    eta->add_option("--prec", prec, "Coefficients used for independence tests");
    eta->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

    BasisOptions basis_opts;
    std::string source = "eta";
    std::string weight2_file;
    std::string output_path;
    auto* basis = app.add_subcommand("basis", "Upper-triangular basis of M_k(Gamma0(N))");
    basis->add_option("--level,-N", level, "Level N")->required();
    basis->add_option("--weight,-k", weight, "Even weight k >= 2")->required();
    basis->add_option("--weight2-source", source, "Where the weight-2 basis comes from")
        ->check(CLI::IsMember({"eta", "file"}));
    basis->add_option("--weight2-file", weight2_file, "Weight-2 series file (for --weight2-source file)");
    basis->add_option("--format", basis_opts.format, "Output format (default json)")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    basis->add_option("--prec", prec, "Output precision; above the Sturm bound the basis is lifted");
    basis->add_option("--threads", threads, "Threads for candidate products (1 = serial)")->check(CLI::PositiveNumber);
    basis->add_option("--output,-o", output_path, "Write the basis here instead of stdout");
    basis->add_flag("--allow-bad-level", basis_opts.allow_bad_level, "Run even if N is not good");

    std::string bench_spec;
    auto* bench = app.add_subcommand("bench", "Time basis computations listed in a spec file (CSV output)");
    bench->add_option("spec", bench_spec, "File with one '<level> <weight>' pair per line")->required()->check(CLI::ExistingFile);
    bench->add_option("--threads", threads, "Threads for candidate products")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (app.got_subcommand(dim)) return cmd_dim(level, weight, format, std::cout, std::cerr);
    if (app.got_subcommand(good)) return cmd_good(level, std::cout, std::cerr);
    if (app.got_subcommand(eta)) {
        EtaSearchOptions o{level, prec, format, cache_dir_from_env()};
        return cmd_eta_search(o, std::cout, std::cerr);
    }
    if (app.got_subcommand(basis)) {
        basis_opts.level = level;
        basis_opts.weight = weight;
        basis_opts.source.mode = source == "file" ? Weight2Mode::File : Weight2Mode::Eta;
        if (!weight2_file.empty()) basis_opts.source.path = weight2_file;
        basis_opts.prec = prec;
        basis_opts.threads = threads;
        basis_opts.cache_dir = cache_dir_from_env();
        if (output_path.empty()) return cmd_basis(basis_opts, std::cout, std::cerr);
        std::ofstream out(output_path);
        if (!out) {
            std::cerr << "error: cannot write " << output_path << '\n';
            return kExitInput;
        }
        return cmd_basis(basis_opts, out, std::cerr);
    }
    if (app.got_subcommand(bench)) {
        std::ifstream in(bench_spec);
        std::vector<BenchCase> cases;
        try {
            cases = read_bench_spec(in);
        } catch (const FormatError& e) {
            std::cerr << "error: " << bench_spec << ": " << e.what() << '\n';
            return kExitInput;
        }
        MemoryProbe probe{alloc_tracker::reset_peak, alloc_tracker::peak_bytes};
        return cmd_bench(cases, threads, std::cout, probe);
    }
    return kExitUsage;
}
