#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "modforms/commands.hpp"
#include "modforms/io.hpp"
#include "oracles.hpp"

using namespace modforms;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST(SeriesFile, RoundTrip) {
    std::mt19937_64 rng(41);
    SeriesFile f{12, 2, 7, {}};
    for (int i = 0; i < 3; ++i) f.series.emplace_back(oracle::random_poly(rng, 7));
    std::stringstream ss;
    write_series_file(ss, f);
    auto g = read_series_file(ss);
    EXPECT_EQ(g.level, 12);
    EXPECT_EQ(g.weight, 2);
    EXPECT_EQ(g.prec, 7u);
    EXPECT_EQ(g.series, f.series);
}

TEST(SeriesFile, ExactHeaderLayout) {
    SeriesFile f{8, 2, 3, {QSeries(std::vector<Rational>{Rational(1), Rational(-1, 2), Rational(0)})}};
    std::stringstream ss;
    write_series_file(ss, f);
    EXPECT_EQ(ss.str(), "N 8 k 2 prec 3 count 1\n1 -1/2 0\n");
}

TEST(SeriesFile, Errors) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_series_file(in);
    };
    EXPECT_THROW(parse(""), FormatError);
    EXPECT_THROW(parse("N 8 k 2 prec 3\n"), FormatError);
    EXPECT_THROW(parse("N 8 k 2 prec 3 count 1\n1 2\n"), FormatError);
    EXPECT_THROW(parse("N 8 k 2 prec 3 count 2\n1 2 3\n"), FormatError);
    EXPECT_THROW(parse("N 8 k 2 prec 2 count 1\n1 a\n"), FormatError);
    EXPECT_THROW(parse("N 8 k 2 prec 2 count 1\n1 2\n3 4\n"), FormatError);
    try {
        parse("N 8 k 2 prec 2 count 1\n1 2 3\n");
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Json, EtaQuotientShape) {
    auto e = EtaQuotient::from_map(8, {{2, 4}, {4, 4}});
    auto j = to_json(e);
    EXPECT_EQ(j.dump(), R"({"N":8,"r":{"1":0,"2":4,"4":4,"8":0}})");
    EXPECT_EQ(eta_from_json(j), e);
}

TEST(Commands, Dim) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_dim(8, 96, OutputFormat::Text, out, err), kExitOk);
    EXPECT_EQ(out.str(), "dim M_96(Gamma0(8)) = 97\nB(8,96) = 96\n");
    out.str("");
    EXPECT_EQ(cmd_dim(8, 0, OutputFormat::Json, out, err), kExitOk);
    EXPECT_EQ(Json::parse(out.str())["dimension"], 1);
    EXPECT_EQ(cmd_dim(8, 3, OutputFormat::Text, out, err), kExitUsage);
    EXPECT_EQ(cmd_dim(0, 2, OutputFormat::Text, out, err), kExitUsage);
}

TEST(Commands, Good) {
    std::ostringstream out, err;
    cmd_good(8, out, err);
    cmd_good(9, out, err);
    cmd_good(5, out, err);
    cmd_good(10, out, err);
    EXPECT_EQ(out.str(),
              "8 is good\n9 is good\n5 is not good: not composite\n"
              "10 is not good: condition (1) fails: 4 does not divide N and no prime p = 3 (mod 4) divides N\n");
}

TEST(Commands, EtaSearch) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_eta_search({68, std::nullopt, OutputFormat::Json, std::nullopt}, out, err), kExitOk);
    auto j = Json::parse(out.str());
    EXPECT_FALSE(j["complete"].get<bool>());
    EXPECT_LT(j["span_dimension"].get<int>(), 12);

    out.str("");
    cmd_eta_search({8, std::nullopt, OutputFormat::Text, std::nullopt}, out, err);
    EXPECT_NE(out.str().find("complete: true"), std::string::npos);

    out.str("");
    cmd_eta_search({1, std::nullopt, OutputFormat::Json, std::nullopt}, out, err);
    j = Json::parse(out.str());
    EXPECT_TRUE(j["complete"].get<bool>());
    EXPECT_TRUE(j["quotients"].empty());

    EXPECT_EQ(cmd_eta_search({8, 1, OutputFormat::Json, std::nullopt}, out, err), kExitUsage);
}

TEST(Commands, BasisLevel8Weight12) {
    BasisOptions o;
    o.level = 8;
    o.weight = 12;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_basis(o, out, err), kExitOk) << err.str();
    auto j = Json::parse(out.str());
    EXPECT_EQ(j["dimension"], 13);
    ASSERT_EQ(j["forms"].size(), 13u);
    for (std::size_t i = 0; i < 13; ++i) EXPECT_EQ(j["forms"][i]["valuation"], i);
    EXPECT_EQ(j["generators"].size(), 3u);
    EXPECT_EQ(j["generators"][0]["source"], "eta");
    // key order of the schema
    std::vector<std::string> keys;
    for (auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"level", "weight", "dimension", "precision", "generators", "forms"}));
}

TEST(Commands, BasisJsonRepresentationsReevaluate) {
    BasisOptions o;
    o.level = 36;
    o.weight = 4;
    auto r = compute_basis(o);
    auto j = Json::parse(to_json(r).dump());
    std::vector<QSeries> gens;
    for (const auto& g : j["generators"]) {
        std::vector<Rational> c;
        for (const auto& x : g["coefficients"]) c.push_back(parse_rational(x.get<std::string>()));
        gens.emplace_back(std::move(c));
    }
    const std::size_t prec = j["precision"];
    for (const auto& f : j["forms"]) {
        auto rep = representation_from_json(f["representation"]);
        auto s = evaluate(rep, gens, prec);
        for (std::size_t n = 0; n < prec; ++n) EXPECT_EQ(s[n].get_str(), f["coefficients"][n].get<std::string>());
    }
}

TEST(Commands, BasisTextRoundTripsThroughIngestionFormat) {
    BasisOptions o;
    o.level = 8;
    o.weight = 10;
    o.format = OutputFormat::Text;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_basis(o, out, err), kExitOk);
    std::istringstream in(out.str());
    auto f = read_series_file(in);
    auto r = compute_basis(o);
    ASSERT_EQ(f.series.size(), r.basis.size());
    for (std::size_t i = 0; i < f.series.size(); ++i) EXPECT_EQ(f.series[i], r.basis[i].series);
    std::ostringstream again;
    write_series_file(again, f);
    EXPECT_EQ(again.str(), out.str());
}

TEST(Commands, BasisFromFileMatchesEta) {
    const std::size_t prec = sturm_precision(8, 8);
    auto span = weight2_eta_spanning_set(8, sturm_precision(8, 2));
    SeriesFile f{8, 2, prec + 5, {}};
    for (const auto& e : span.generators) f.series.push_back(expansion(e, prec + 5));
    std::ostringstream body;
    write_series_file(body, f);
    auto path = temp_file("modforms_w2_level8.txt", body.str());

    BasisOptions file_opts;
    file_opts.level = 8;
    file_opts.weight = 8;
    file_opts.source = {Weight2Mode::File, path};
    auto from_file = compute_basis(file_opts);
    BasisOptions eta_opts = file_opts;
    eta_opts.source = {};
    auto from_eta = compute_basis(eta_opts);
    ASSERT_EQ(from_file.basis.size(), from_eta.basis.size());
    for (std::size_t i = 0; i < from_file.basis.size(); ++i) EXPECT_EQ(from_file.basis[i].series, from_eta.basis[i].series);

    auto j = to_json(from_file);
    EXPECT_EQ(j["generators"][0]["source"], "file");

    // --prec above what the file provides
    file_opts.prec = prec + 20;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_basis(file_opts, out, err), kExitInput);
    std::filesystem::remove(path);
}

TEST(Commands, BasisExitCodes) {
    std::ostringstream out, err;
    BasisOptions o;
    o.level = 5;
    o.weight = 4;
    EXPECT_EQ(cmd_basis(o, out, err), kExitNotGood);

    o.level = 68;
    EXPECT_EQ(cmd_basis(o, out, err), kExitIncompleteWeight2);

    o.level = 8;
    o.weight = 3;
    EXPECT_EQ(cmd_basis(o, out, err), kExitUsage);

    o.weight = 4;
    o.source = {Weight2Mode::File, std::nullopt};
    EXPECT_EQ(cmd_basis(o, out, err), kExitUsage);

    o.source = {Weight2Mode::File, "/nonexistent/w2.txt"};
    EXPECT_EQ(cmd_basis(o, out, err), kExitInput);

    // Dependent weight-2 forms: same series twice plus one more.
    auto span = weight2_eta_spanning_set(8, 3);
    const std::size_t prec = sturm_precision(8, 4);
    SeriesFile f{8, 2, prec, {}};
    auto g0 = expansion(span.generators[0], prec);
    f.series = {g0, g0, expansion(span.generators[1], prec)};
    std::ostringstream body;
    write_series_file(body, f);
    auto path = temp_file("modforms_w2_dependent.txt", body.str());
    o.source = {Weight2Mode::File, path};
    EXPECT_EQ(cmd_basis(o, out, err), kExitIncompleteWeight2);

    // Only two weight-2 forms: wrong count.
    f.series.pop_back();
    std::ostringstream body2;
    write_series_file(body2, f);
    temp_file("modforms_w2_dependent.txt", body2.str());
    EXPECT_EQ(cmd_basis(o, out, err), kExitIncompleteWeight2);
    std::filesystem::remove(path);
}

TEST(Commands, BasisPrecisionLift) {
    BasisOptions o;
    o.level = 8;
    o.weight = 6;
    o.prec = 40;
    auto r = compute_basis(o);
    EXPECT_EQ(r.basis.prec(), 40u);
    EXPECT_EQ(r.basis.size(), 7u);
    BasisOptions plain = o;
    plain.prec.reset();
    auto p = compute_basis(plain);
    for (std::size_t i = 0; i < p.basis.size(); ++i) EXPECT_EQ(r.basis[i].series.truncated(p.basis.prec()), p.basis[i].series);
}

TEST(Commands, Bench) {
    std::istringstream spec("# level weight\n8 12\n\n8 24  # comment\n7 4\n");
    auto cases = read_bench_spec(spec);
    ASSERT_EQ(cases.size(), 3u);
    std::ostringstream out;
    cmd_bench(cases, 1, out);
    std::istringstream rows(out.str());
    std::string line;
    std::getline(rows, line);
    EXPECT_EQ(line, "N,k,dim,seconds,peak_bytes,error");
    std::getline(rows, line);
    EXPECT_EQ(line.rfind("8,12,13,", 0), 0u);
    std::getline(rows, line);
    EXPECT_EQ(line.rfind("8,24,25,", 0), 0u);
    std::getline(rows, line);
    EXPECT_EQ(line.rfind("7,4,0,", 0), 0u);
    EXPECT_NE(line.find("not good"), std::string::npos);

    std::ostringstream empty;
    cmd_bench({}, 1, empty);
    EXPECT_EQ(empty.str(), "N,k,dim,seconds,peak_bytes,error\n");

    std::istringstream bad("8\n");
    EXPECT_THROW(read_bench_spec(bad), FormatError);
}
