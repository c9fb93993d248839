#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "commands.hpp"
#include "gammadisc/io.hpp"
#include "support.hpp"

namespace gammadisc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gammadisc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

TEST_F(CliTest, GenBoundaryFile) {
  const auto r = run({"gen", "--d", "2", "--n", "3", "--kind", "NormalBoundary", "--seed", "1", "--out", path("a.json")});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const auto f = load_instance(path("a.json"));
  EXPECT_LT(fro(f.tuple.P.adjoint() * f.tuple.P - identity(3)), 1e-12);
  EXPECT_NE(r.out.find(instance_digest(f.tuple)), std::string::npos);
  EXPECT_EQ(f.tuple.certificate, Certificate::Constructed);
  EXPECT_EQ(f.seed, 1u);
}

TEST_F(CliTest, GenIsDeterministic) {
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(run({"gen", "--d", "3", "--n", "4", "--kind", "Ando2", "--seed", "5", "--out", path(name)}).code,
              cli::kInputError);
  for (const char* name : {"a.json", "b.json"})
    ASSERT_EQ(run({"gen", "--d", "3", "--n", "4", "--kind", "MixedPurity", "--seed", "5", "--out", path(name)}).code,
              cli::kPass);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(CliTest, GenMixedPurityHasIntermediateRank) {
  ASSERT_EQ(run({"gen", "--d", "3", "--n", "4", "--kind", "MixedPurity", "--seed", "9", "--out", path("m.json")}).code,
            cli::kPass);
  const auto r = run({"q", path("m.json"), "--json"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_GT(j["rank"].get<int>(), 1);
  EXPECT_LT(j["rank"].get<int>(), 3);
}

TEST_F(CliTest, VerifyZeroTupleEquivalence) {
  InstanceFile f{testing::zero_tuple(2, 2), std::nullopt, std::nullopt};
  save_instance(f, path("zero.json"));
  const auto r = run({"verify", path("zero.json"), "--suites", "thm1", "--json"});
  ASSERT_EQ(r.code, cli::kPass) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "gammadisc/1");
  EXPECT_EQ(j["status"], "pass");
  int predicates = 0;
  for (const auto& c : j["checks"])
    if (c.contains("value")) {
      EXPECT_FALSE(c["value"].get<bool>()) << c["name"];
      ++predicates;
    }
  EXPECT_EQ(predicates, 4);
}

TEST_F(CliTest, VerifyBoundaryFullSuite) {
  ASSERT_EQ(run({"gen", "--d", "3", "--n", "4", "--kind", "NormalBoundary", "--seed", "2", "--out", path("b.json")}).code,
            cli::kPass);
  const auto r = run({"verify", path("b.json")});
  EXPECT_EQ(r.code, cli::kPass) << r.out;
  EXPECT_NE(r.out.find("status: pass"), std::string::npos);
}

TEST_F(CliTest, VerifyReportsCheckFailureWithExitOne) {
  ASSERT_EQ(run({"gen", "--d", "2", "--n", "3", "--kind", "MixedPurity", "--seed", "2", "--out", path("m.json")}).code,
            cli::kPass);
  const auto r = run({"verify", path("m.json"), "--suites", "fo", "--suite-tol", "fo=0"});
  EXPECT_EQ(r.code, cli::kCheckFailure) << r.out;
}

TEST_F(CliTest, NonCommutingFileIsInputError) {
  write("bad.json", R"({"d":2,"n":2,"S":[[[[0,0],[1,0]],[[1,0],[0,0]]]],"P":[[[0.5,0],[0,0]],[[0,0],[-0.5,0]]]})");
  const auto r = run({"verify", path("bad.json")});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("S_1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedInputsAreInputErrors) {
  write("trunc.json", R"({"d":2,"n":)");
  write("ragged.json", R"({"d":2,"n":2,"S":[[[[0,0]],[[0,0],[0,0]]]],"P":[[[0,0],[0,0]],[[0,0],[0,0]]]})");
  write("nan.json", R"({"d":2,"n":1,"S":[[[[1e999,0]]]],"P":[[[0,0]]]})");
  write("shape.json", R"({"d":3,"n":1,"S":[[[[0,0]]]],"P":[[[0,0]]]})");
  for (const char* f : {"trunc.json", "ragged.json", "nan.json", "shape.json", "missing.json"})
    EXPECT_EQ(run({"verify", path(f)}).code, cli::kInputError) << f;
  EXPECT_EQ(run({}).code, cli::kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
  EXPECT_EQ(run({"gen", "--d", "2"}).code, cli::kInputError);
  EXPECT_EQ(run({"gen", "--d", "2", "--n", "2", "--kind", "Nope", "--out", path("x.json")}).code, cli::kInputError);
  EXPECT_EQ(run({"verify", path("trunc.json"), "--suites", "thm9"}).code, cli::kInputError);
}

TEST_F(CliTest, RoundTripIsExact) {
  const double tricky[] = {5e-324, 1.0 / 3.0, -0.1, 2.2250738585072014e-308, 0.9999999999999999, 0.0, -0.0, 1e-17};
  std::vector<Complex> diagonal;
  for (std::size_t k = 0; k + 1 < std::size(tricky); k += 2) diagonal.emplace_back(tricky[k], tricky[k + 1]);
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  CMatrix p = CMatrix::Zero(n, n), s = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    p(k, k) = diagonal[static_cast<std::size_t>(k)] * 0.5;
    s(k, k) = Complex(1.7976931348623157e308, -4.9e-324);
  }
  InstanceFile f{make_gamma_tuple({s}, p), 77u, std::string("hand")};
  const auto text = serialize_instance(f);
  const auto back = parse_instance(text);
  EXPECT_EQ(back.tuple.P, f.tuple.P);
  EXPECT_EQ(back.tuple.S[0], f.tuple.S[0]);
  EXPECT_EQ(serialize_instance(back), text);
  EXPECT_EQ(instance_digest(back.tuple), instance_digest(f.tuple));
}

TEST_F(CliTest, RoundTripRandomPayloads) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_gamma_tuple(2 + trial % 3, 1 + trial % 5,
                                      trial % 2 ? GeneratorKind::NormalInterior : GeneratorKind::NormalBoundary,
                                      static_cast<std::uint64_t>(trial));
    InstanceFile f{t, static_cast<std::uint64_t>(trial), std::nullopt};
    const auto back = parse_instance(serialize_instance(f));
    EXPECT_EQ(back.tuple.P, t.P);
    for (std::size_t i = 0; i < t.S.size(); ++i) EXPECT_EQ(back.tuple.S[i], t.S[i]);
  }
}

TEST_F(CliTest, ReportEmptyDirectory) {
  const auto r = run({"report", dir_.string()});
  EXPECT_EQ(r.code, cli::kPass);
  EXPECT_NE(r.out.find("total 0"), std::string::npos);
}

TEST_F(CliTest, ReportDimensionsMatchPerRow) {
  const char* kinds[] = {"NormalBoundary", "MixedPurity", "MixedPurity"};
  for (int k = 0; k < 3; ++k)
    ASSERT_EQ(run({"gen", "--d", "3", "--n", "4", "--kind", kinds[k], "--seed", std::to_string(k), "--out",
                   path("i" + std::to_string(k) + ".json")})
                  .code,
              cli::kPass);
  const auto r = run({"report", dir_.string(), "--json"});
  ASSERT_EQ(r.code, cli::kPass) << r.out;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  std::vector<std::string> names;
  for (const auto& row : j["rows"]) {
    EXPECT_EQ(row["dim_toeplitz"], row["dim_commutant"]) << row["file"];
    EXPECT_EQ(row["status"], "pass");
    names.push_back(row["file"]);
  }
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_EQ(j["summary"]["pass"], 3);
}

TEST_F(CliTest, ReportFlagsMalformedFile) {
  ASSERT_EQ(run({"gen", "--d", "2", "--n", "2", "--kind", "Ando2", "--seed", "1", "--out", path("ok.json")}).code,
            cli::kPass);
  write("broken.json", "{ nope");
  const auto r = run({"report", dir_.string()});
  EXPECT_NE(r.code, cli::kPass);
  EXPECT_NE(r.out.find("parse-error"), std::string::npos);
  EXPECT_EQ(run({"report", path("not_a_dir")}).code, cli::kInputError);
}

TEST_F(CliTest, SingleCommandsProduceSchemaTaggedJson) {
  ASSERT_EQ(run({"gen", "--d", "3", "--n", "3", "--kind", "MixedPurity", "--seed", "4", "--out", path("m.json")}).code,
            cli::kPass);
  for (const char* cmd : {"q", "fo", "extend", "toeplitz", "lift"}) {
    const auto r = run({cmd, path("m.json"), "--json"});
    ASSERT_EQ(r.code, cli::kPass) << cmd << ": " << r.err << r.out;
    EXPECT_EQ(json::parse(r.out)["schema"], kReportSchema) << cmd;
  }
  const auto r = run({"toeplitz", path("m.json"), "--json"});
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["dim_toeplitz"], j["dim_commutant"]);
}

TEST_F(CliTest, ExtendOnPureTupleIsCheckFailure) {
  InstanceFile f{testing::zero_tuple(2, 2), std::nullopt, std::nullopt};
  save_instance(f, path("zero.json"));
  const auto r = run({"extend", path("zero.json")});
  EXPECT_EQ(r.code, cli::kCheckFailure);
  EXPECT_NE(r.err.find("PureTuple"), std::string::npos);
}

}  // namespace
}  // namespace gammadisc
