#include <gtest/gtest.h>

#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sobolev/cli.hpp"

using sobolev::Json;

namespace {

struct CliRun {
  int code;
  Json doc;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = sobolev::cli::execute(args, out, err);
  Json doc = Json::parse(out.str());
  return {code, doc, err.str()};
}

void expect_document(const CliRun& r, const std::string& command) {
  EXPECT_EQ(r.doc.at("schema"), "v1");
  EXPECT_EQ(r.doc.at("command"), command);
  EXPECT_TRUE(r.doc.contains("config"));
  EXPECT_TRUE(r.doc.contains("result"));
}

void expect_error(const CliRun& r, int code, const std::string& type) {
  EXPECT_EQ(r.code, code);
  EXPECT_EQ(r.doc.at("schema"), "v1");
  EXPECT_EQ(r.doc.at("error").at("type"), type);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace

TEST(Cli, CheckMultiplyAdmissible) {
  CliRun r = run({"check", "multiply", "--n", "3", "--a", "1,2", "--b", "1,2", "--target", "0,2"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "check multiply");
  EXPECT_EQ(r.doc["result"]["result"], "Admissible");
  EXPECT_EQ(r.doc["result"]["theorem"], "Thm 4.1");
  EXPECT_EQ(r.doc["config"]["a"]["s"], "1");
}

TEST(Cli, CheckEmbedNotGuaranteedExitsOne) {
  CliRun r = run({"check", "embed", "--n", "1", "--from", "0,2", "--to", "1,2"});
  EXPECT_EQ(r.code, 1);
  expect_document(r, "check embed");
  EXPECT_EQ(r.doc["result"]["result"], "NotGuaranteed");
  EXPECT_FALSE(r.doc["result"]["conditions"].empty());
}

TEST(Cli, CheckPointwiseDerivativeExtend) {
  CliRun a = run({"check", "pointwise", "--n", "2", "--a", "3/2,2", "--mode", "algebra"});
  EXPECT_EQ(a.code, 0);
  expect_document(a, "check pointwise");
  CliRun d = run({"check", "derivative", "--n", "2", "--a", "2,2", "--order", "1", "--domain", "lipschitz"});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.doc["result"]["target"]["s"], "1");
  CliRun e = run({"check", "extend", "--n", "1", "--a", "1/2,2", "--domain", "compact-support"});
  expect_document(e, "check extend");
  EXPECT_TRUE(e.code == 0 || e.code == 1);
}

TEST(Cli, PrettyAddsTrace) {
  CliRun r = run({"check", "embed", "--n", "1", "--from", "1,2", "--to", "0,2", "--pretty"});
  EXPECT_EQ(r.code, 0);
  ASSERT_TRUE(r.doc["result"].contains("trace"));
  EXPECT_FALSE(r.doc["result"]["trace"].empty());
}

TEST(Cli, ExponentsAreExactRationals) {
  CliRun r = run({"check", "embed", "--n", "1", "--from", "0.5,2", "--to", "1/2,2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.doc["config"]["from"]["s"], "1/2");
}

TEST(Cli, NormEuclidSeminormExample) {
  CliRun r = run({"norm", "euclid", "--expr", "x1", "--box", "0,1", "--s", "1/2", "--p", "2", "--grid", "512", "--part",
               "seminorm"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "norm euclid");
  EXPECT_NEAR(r.doc["result"]["value"].get<double>(), 1.0, 0.02);
  EXPECT_EQ(r.doc["config"]["grid"], 512);
}

TEST(Cli, NormEuclidParseErrorExitsTwo) {
  CliRun r = run({"norm", "euclid", "--expr", "sin((x1", "--box", "0,1"});
  expect_error(r, 2, "parse");
  EXPECT_TRUE(r.doc["error"].contains("position"));
}

TEST(Cli, DomainErrorExitsThree) {
  CliRun r = run({"norm", "euclid", "--expr", "log(x1 - 2)", "--box", "0,1"});
  expect_error(r, 3, "domain");
}

TEST(Cli, UsageErrorsExitTwo) {
  expect_error(run({"check", "multiply", "--n", "3"}), 2, "usage");
  expect_error(run({"frobnicate"}), 2, "usage");
  expect_error(run({"check", "embed", "--from", "1", "--to", "0,2"}), 2, "invalid");
}

TEST(Cli, NormManifold) {
  CliRun r = run({"norm", "manifold", "--manifold", "torus1", "--expr", "sin(2*pi*x1)", "--grid", "256"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "norm manifold");
  EXPECT_NEAR(r.doc["result"]["intrinsic"]["value"].get<double>(), std::sqrt(0.5), 1e-3);
}

TEST(Cli, NormConnection) {
  CliRun r = run({"norm", "connection", "--manifold", "torus1", "--expr", "sin(2*pi*x1)", "--k", "1", "--grid", "256"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "norm connection");
  const double pi = std::numbers::pi;
  EXPECT_NEAR(r.doc["result"]["value"].get<double>(), std::sqrt(0.5 + 2 * pi * pi), 0.01);
}

TEST(Cli, Compare) {
  CliRun r = run({"compare", "--manifold", "s1-stereo", "--expr", "x1", "--expr", "1 + x2", "--e", "1", "--grid", "64"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "compare");
  EXPECT_EQ(r.doc["result"]["entries"].size(), 2u);
  EXPECT_LE(r.doc["result"]["lower"].get<double>(), r.doc["result"]["upper"].get<double>());
}

TEST(Cli, OpApply) {
  CliRun r = run({"op", "apply", "--op", "laplace", "--manifold", "torus1", "--expr", "sin(2*pi*x1)"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "op apply");
  EXPECT_LT(r.doc["result"]["overlap_discrepancy"].get<double>(), 1e-12);
  CliRun bad = run({"op", "apply", "--op", "curl", "--expr", "x1"});
  expect_error(bad, 2, "invalid");
}

TEST(Cli, OpBound) {
  CliRun r = run({"op", "bound", "--op", "d", "--manifold", "torus1", "--from", "1,2", "--to", "0,2", "--expr",
               "sin(2*pi*x1)", "--expr", "cos(4*pi*x1)"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "op bound");
  EXPECT_LE(r.doc["result"]["sup"].get<double>(), 1.0);
  EXPECT_TRUE(r.doc["result"]["prescreen"]["admissible"].get<bool>());
}

TEST(Cli, AtlasShowRoundTrips) {
  CliRun r = run({"atlas", "show", "--manifold", "s2-stereo"});
  EXPECT_EQ(r.code, 0);
  expect_document(r, "atlas show");
  Json atlas = r.doc["result"];
  atlas.erase("partition_of_unity");
  EXPECT_NO_THROW(sobolev::atlas_from_json(atlas));

  const std::string path = "cli_test_atlas.json";
  {
    std::ofstream f(path);
    f << atlas.dump();
  }
  CliRun again = run({"atlas", "show", "--atlas", path});
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.doc["result"]["charts"], r.doc["result"]["charts"]);

  {
    std::ofstream f(path);
    f << R"({"schema": "v1", "manifold": "torus1", "charts": [], "colour": 3})";
  }
  expect_error(run({"atlas", "show", "--atlas", path}), 2, "parse");
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  expect_error(run({"atlas", "show", "--atlas", path}), 2, "parse");
  std::remove(path.c_str());
}

TEST(Cli, OutputFlagWritesFile) {
  const std::string path = "cli_test_output.json";
  std::ostringstream out, err;
  int code = sobolev::cli::execute({"check", "embed", "--from", "1,2", "--to", "0,2", "--output", path}, out, err);
  EXPECT_EQ(code, 0);
  EXPECT_TRUE(out.str().empty());
  std::ifstream f(path);
  Json doc = Json::parse(f);
  EXPECT_EQ(doc["schema"], "v1");
  std::remove(path.c_str());
}
