#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "csl/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run lab(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = csl::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string table_path() { return std::string(CSL_TEST_DATA_DIR) + "/zeros_t100.txt"; }

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
public:
    TempDir() : path_(std::filesystem::temp_directory_path() / ("csl_cli_" + std::to_string(::getpid())))
    {
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace

TEST(ParseComplex, AcceptsSignedForms)
{
    EXPECT_EQ(csl::parse_complex("0.5+14.1i"), csl::Complex(0.5, 14.1));
    EXPECT_EQ(csl::parse_complex("-1e-3-2i"), csl::Complex(-1e-3, -2.0));
    EXPECT_EQ(csl::parse_complex("2+0i"), csl::Complex(2.0, 0.0));
}

TEST(ParseComplex, RejectsMalformed)
{
    for (const char* bad : {"", "abc", "0.5", "0.5+i", "0.5+14", "0.5 + 14i", "0.5+-1i", "0.5+1ix", "nan+1i",
                            "inf+0i"}) {
        EXPECT_FALSE(csl::parse_complex(bad).has_value()) << bad;
    }
}

TEST(FormatDouble, RoundTrips)
{
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 14.134725141734694}) {
        EXPECT_EQ(std::stod(csl::format_double(x)), x);
    }
    EXPECT_EQ(csl::format_double(0.5), "0.5");
}

TEST(DumpJson, NonFiniteBecomesNull)
{
    const csl::Json j{{"a", std::numeric_limits<double>::infinity()}, {"b", 1.5}};
    EXPECT_EQ(csl::dump_json(j), "{\n  \"a\": null,\n  \"b\": 1.5\n}\n");
}

TEST(CsvWriter, RejectsRaggedRows)
{
    csl::CsvWriter csv({"a", "b"});
    csv.append_row({"1", "2"});
    EXPECT_EQ(csv.str(), "a,b\n1,2\n");
    EXPECT_THROW(csv.append_row({"1"}), csl::DomainError);
}

TEST(Cli, EvalReportsValueAndConfig)
{
    const auto r = lab({"eval", "--z", "2+0i", "--n", "1000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = csl::Json::parse(r.out);
    EXPECT_EQ(j["manifest"]["command"], "eval");
    EXPECT_EQ(j["manifest"]["parameters"]["--z"], "2+0i");
    EXPECT_EQ(j["config"]["n_terms"], 1000);
    EXPECT_TRUE(j.contains("results"));
    EXPECT_NE(r.out.find("1.64493406684822"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(lab({}).code, 2);
    EXPECT_EQ(lab({"bogus"}).code, 2);
    EXPECT_EQ(lab({"eval"}).code, 2);
    const auto malformed = lab({"eval", "--z", "abc"});
    EXPECT_EQ(malformed.code, 2);
    EXPECT_NE(malformed.err.find("UsageError"), std::string::npos);
    EXPECT_EQ(lab({"eval", "--z", "0.5+1i", "--accel-order", "0"}).code, 2);

    const auto pole = lab({"eval", "--z", "1+0i"});
    EXPECT_EQ(pole.code, 1);
    EXPECT_NE(pole.err.find("PrefactorSingularityError"), std::string::npos);
    EXPECT_TRUE(pole.out.empty());
}

TEST(Cli, ResidualCsvAndSkippedRows)
{
    const auto r = lab({"residual", "--re-steps", "2", "--im-steps", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "re,im,residual,lhs_re,lhs_im,rhs_re,rhs_im");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);

    const auto edge = lab({"residual", "--re-min", "0.5", "--re-max", "1", "--re-steps", "2", "--im-steps", "1"});
    EXPECT_NE(edge.out.find("1,0,skipped"), std::string::npos);
    EXPECT_NE(edge.err.find("skipped=1"), std::string::npos);

    EXPECT_EQ(lab({"residual", "--re-steps", "2", "--im-steps", "2", "--tol", "1e-30"}).code, 1);
    EXPECT_EQ(lab({"residual", "--re-max", "1.5"}).code, 2);
}

TEST(Cli, ZerosWithReference)
{
    const auto r = lab({"zeros", "--tmin", "10", "--tmax", "35", "--reference", table_path()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = csl::Json::parse(r.out);
    EXPECT_EQ(j["results"]["zeros"].size(), 5u);
    EXPECT_TRUE(j["results"]["crosscheck"]["all_matched"].get<bool>());

    const auto empty = lab({"zeros", "--tmin", "0", "--tmax", "10"});
    ASSERT_EQ(empty.code, 0);
    EXPECT_TRUE(csl::Json::parse(empty.out)["results"]["zeros"].empty());

    EXPECT_EQ(lab({"zeros", "--step", "0.6"}).code, 2);
}

TEST(Cli, ZerosRejectsNonMonotonicTable)
{
    TempDir dir;
    const auto bad = dir.path() / "bad.txt";
    std::ofstream(bad) << "21.0\n14.1\n";
    const auto r = lab({"zeros", "--tmin", "10", "--tmax", "25", "--reference", bad.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("NonMonotonicError"), std::string::npos);
}

TEST(Cli, DoublingAtZeroAndControl)
{
    const auto r = lab({"doubling", "--zero-index", "1", "--reference", table_path()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = csl::Json::parse(r.out);
    for (const auto& m : j["results"]["moduli"]) {
        EXPECT_GE(m.get<double>(), 0.98);
        EXPECT_LE(m.get<double>(), 1.02);
    }

    const auto control = lab({"doubling", "--z", "0.75+5i", "--nbase", "4096", "--m", "5"});
    ASSERT_EQ(control.code, 0) << control.err;
    const auto c = csl::Json::parse(control.out)["results"]["fitted_exponent"];
    EXPECT_LT(std::hypot(c["re"].get<double>(), c["im"].get<double>()), 0.05);

    EXPECT_EQ(lab({"doubling", "--z", "0.5+14i", "--m", "0"}).code, 2);
    EXPECT_EQ(lab({"doubling"}).code, 2);
    EXPECT_EQ(lab({"doubling", "--z", "0.5+14i", "--zero-index", "1"}).code, 2);
    EXPECT_EQ(lab({"doubling", "--zero-index", "40", "--reference", table_path()}).code, 2);
}

TEST(Cli, ErrscanSlopeAndDomain)
{
    const auto r = lab({"errscan", "--z", "0.5+10i"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = csl::Json::parse(r.out);
    EXPECT_NEAR(j["results"]["fitted_slope"].get<double>(), -0.5, 0.1);

    const auto far = lab({"errscan", "--z", "0.5+1000000i", "--nmax", "4096"});
    EXPECT_EQ(far.code, 1);
    EXPECT_NE(far.err.find("InsufficientDomain"), std::string::npos);
}

TEST(Cli, RepeatedRunsGiveIdenticalResults)
{
    const std::vector<std::string> args = {"doubling", "--z", "0.4+20i", "--nbase", "256", "--m", "4"};
    const auto a = csl::Json::parse(lab(args).out);
    const auto b = csl::Json::parse(lab(args).out);
    EXPECT_EQ(csl::dump_json(a["results"]), csl::dump_json(b["results"]));
    EXPECT_EQ(csl::dump_json(a["config"]), csl::dump_json(b["config"]));
}

TEST(Cli, OutWritesFileAtomically)
{
    TempDir dir;
    const auto path = dir.path() / "eval.json";
    const auto r = lab({"eval", "--z", "0.5+3i", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto j = csl::Json::parse(slurp(path));
    EXPECT_EQ(j["manifest"]["command"], "eval");
    for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
        EXPECT_EQ(entry.path().filename(), "eval.json");
    }
    EXPECT_EQ(lab({"eval", "--z", "0.5+3i", "--out", (dir.path() / "missing" / "x.json").string()}).code, 2);
}
