#include <gtest/gtest.h>

#include <sstream>

#include "edgeseg/cli.hpp"
#include "edgeseg/edges.hpp"
#include "edgeseg/fileio.hpp"
#include "edgeseg/metrics.hpp"
#include "edgeseg/nifti.hpp"
#include "oracles.hpp"

using namespace edgeseg;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = oracle::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    ASSERT_EQ(run_cli({"phantom", "--seed", "3", "--count", "2", "--size", "20", "--out-dir", (dir_ / "data").string()}).code, 0);
  }
  fs::path c(int i) const { return dir_ / "data" / ("phantom_00" + std::to_string(i)); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EdgesMatchLibrary) {
  const auto r = run_cli({"edges", "--labels", (c(1) / "seg.nii").string(), "--out", p("e.nii")});
  ASSERT_EQ(r.code, 0) << r.err;
  const LabelVolume labels = read_labels(c(1) / "seg.nii");
  EXPECT_EQ(read_labels(p("e.nii")), extract_edges(labels));
  ASSERT_EQ(run_cli({"edges", "--labels", (c(1) / "seg.nii").string(), "--out", p("o.nii"), "--oracle"}).code, 0);
  EXPECT_EQ(read_labels(p("o.nii")), oracle_boundary(labels));
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const auto r = run_cli({"edges", "--labels", (c(1) / "seg.nii").string(), "--out", p("e.nii"), "--fast"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_FALSE(fs::exists(p("e.nii")));
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"train", "--data-dir", p("data"), "--model-out", p("m.txt"), "--classes", "5"}).code, cli::kExitUsage);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({"normalize", "--in", p("missing.nii"), "--out", p("n.nii")}).code, cli::kExitIo);
  Volume flat({4, 4, 4});
  flat.data.setConstant(2.0f);
  write_nifti(flat, p("flat.nii"));
  const auto r = run_cli({"normalize", "--in", p("flat.nii"), "--out", p("n.nii")});
  EXPECT_EQ(r.code, cli::kExitDomain);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(p("n.nii")));
  EXPECT_EQ(run_cli({"onehot", "--labels", (c(0) / "flair.nii").string(), "--out", p("x.nii")}).code, cli::kExitIo);
}

TEST_F(CliTest, EvaluateIdenticalAndAggregate) {
  const std::string seg0 = (c(0) / "seg.nii").string(), seg1 = (c(1) / "seg.nii").string();
  ASSERT_EQ(run_cli({"evaluate", "--pred", seg0, "--gt", seg0, "--subject", "a", "--csv", p("m.csv")}).code, 0);
  ASSERT_EQ(run_cli({"evaluate", "--pred", seg1, "--gt", seg1, "--subject", "b", "--csv", p("m.csv")}).code, 0);
  const std::string text = read_file(p("m.csv"));
  EXPECT_EQ(text.find("subject,region,dice,hd95,penalized"), 0u);
  EXPECT_EQ(text.find("subject", 1), std::string::npos);
  const auto recs = parse_metrics_csv(text);
  ASSERT_EQ(recs.size(), 6u);
  for (const auto& r : recs) {
    // case 0 has no ET: both empty -> 1 / 0 as well
    EXPECT_EQ(r.dice, 1.0);
    EXPECT_EQ(r.hd95, 0.0);
  }
  ASSERT_EQ(run_cli({"aggregate", "--csv", p("m.csv"), "--out", p("s.csv"), "--stat", "median"}).code, 0);
  EXPECT_EQ(read_file(p("s.csv")), "stat,region,dice,hd95,n\nmedian,WT,1,0,2\nmedian,TC,1,0,2\nmedian,ET,1,0,2\n");
  EXPECT_EQ(run_cli({"aggregate", "--csv", p("m.csv"), "--out", p("s.csv"), "--stat", "mode"}).code, cli::kExitUsage);
}

TEST_F(CliTest, NormalizeAndOnehot) {
  ASSERT_EQ(run_cli({"normalize", "--in", (c(0) / "t2.nii").string(), "--out", p("n.nii")}).code, 0);
  ASSERT_EQ(run_cli({"edges", "--labels", (c(0) / "seg.nii").string(), "--out", p("e.nii")}).code, 0);
  ASSERT_EQ(run_cli({"onehot", "--labels", (c(0) / "seg.nii").string(), "--out", p("h4.nii")}).code, 0);
  ASSERT_EQ(run_cli({"onehot", "--labels", (c(0) / "seg.nii").string(), "--edges", p("e.nii"), "--out", p("h7.nii")}).code, 0);
  EXPECT_EQ(read_onehot(p("h4.nii")).channels(), 4);
  EXPECT_EQ(read_onehot(p("h7.nii")).channels(), 7);
}

TEST_F(CliTest, TrainPredictRoundTrip) {
  const auto t = run_cli({"train", "--data-dir", p("data"), "--classes", "7", "--epochs", "2", "--batch", "512", "--seed", "1",
                          "--model-out", p("m.txt"), "--trace-out", p("trace.csv")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(read_file(p("trace.csv")).substr(0, 11), "epoch,loss\n");
  const auto r = run_cli({"predict", "--model", p("m.txt"), "--case-dir", c(1).string(), "--pred-out", p("pred.nii"),
                          "--activations-dir", p("act"), "--edge-overlay", "10", p("overlay.ppm")});
  ASSERT_EQ(r.code, 0) << r.err;
  validate_labels(read_labels(p("pred.nii")));
  EXPECT_TRUE(fs::exists(dir_ / "act" / "activation_c3_z10.pgm"));
  EXPECT_EQ(read_file(p("overlay.ppm")).substr(0, 11), "P6\n20 20\n25");
  EXPECT_EQ(run_cli({"predict", "--model", p("m.txt"), "--case-dir", c(1).string(), "--pred-out", p("p2.nii"),
                     "--edge-overlay", "99", p("o2.ppm")})
                .code,
            cli::kExitUsage);
  EXPECT_FALSE(fs::exists(p("p2.nii")));
}
