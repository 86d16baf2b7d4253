#include <gtest/gtest.h>

#include <sstream>

#include <sogq/params.hpp>

using namespace sogq;

namespace {
std::string error_of(const std::string& text) {
  SolverPlan p;
  std::istringstream in(text);
  try {
    apply_config(in, p);
  } catch (const PlanError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST(Config, CommentsAndBlankLinesAreIgnored) {
  SolverPlan p;
  std::istringstream in("# header\n\n  eta = 0.5   # trailing\nlong.mode = fft\nmid.enabled = true\n");
  apply_config(in, p);
  EXPECT_DOUBLE_EQ(p.eta, 0.5);
  EXPECT_EQ(p.lng.mode, LongMode::Fft);
  EXPECT_TRUE(p.mid.enabled);
}

TEST(Config, OverridesOnlyNamedKeys) {
  auto p = select_parameters(1000, Box{20, 20, 20}, 1e-6);
  auto q = p;
  std::istringstream in("long.P = 12\n");
  apply_config(in, q);
  EXPECT_EQ(q.lng.P, 12);
  q.lng.P = p.lng.P;
  EXPECT_TRUE(p == q);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("eta = 1\nbogus = 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("eta = 1\nbogus = 3\n").find("unknown key"), std::string::npos);
  EXPECT_NE(error_of("M = twelve\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("M = 12x\n").find("bad value"), std::string::npos);
  EXPECT_NE(error_of("\n\nmid.window = hann\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("mid.enabled = maybe\n").find("bad boolean"), std::string::npos);
  EXPECT_NE(error_of("just words\n").find("key = value"), std::string::npos);
  EXPECT_TRUE(error_of("long.window = kb\n").empty());
}

TEST(Config, WrittenPlanIsComplete) {
  auto p = select_parameters(1000, Box{30, 30, 0.3}, 1e-6);
  std::stringstream ss;
  write_plan(ss, p);
  SolverPlan q;
  apply_config(ss, q);
  EXPECT_TRUE(p == q);
}
