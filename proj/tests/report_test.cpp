#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace csiaug;

namespace {

EvalReport make(const std::string& scenario, const std::string& method, Ratio eta, double db) {
  EvalReport r;
  r.scenario = scenario;
  r.method = method;
  r.ratio = eta;
  r.result = {std::pow(10.0, db / 10.0), db};
  r.samples = 500;
  r.rows = 32;
  r.cols = 32;
  r.dim = 2048;
  r.components = static_cast<Eigen::Index>(eta.scale(2048));
  r.train_seed = 1;
  r.augment_seeds = {3};
  return r;
}

TEST(Report, JsonRoundTrip) {
  const EvalReport r = make("motion-range", "bs-down", Ratio(1, 4), -6.4321);
  const auto j = nlohmann::json::parse(reports_to_json({r}));
  EXPECT_EQ(j.at("schema"), "csiaug-eval-report/1");
  EXPECT_EQ(j.at("ratio"), "1/4");
  EXPECT_TRUE(j.at("seeds").at("test").is_null());
  const EvalReport back = report_from_json(j);
  EXPECT_EQ(back.method, r.method);
  EXPECT_EQ(back.ratio, r.ratio);
  EXPECT_EQ(back.result.db, r.result.db);
  EXPECT_EQ(back.train_seed, r.train_seed);
  EXPECT_FALSE(back.test_seed.has_value());
  EXPECT_EQ(back.augment_seeds, r.augment_seeds);
  EXPECT_THROW(report_from_json(nlohmann::json{{"schema", "other"}}), InvalidInput);
}

TEST(Report, GridLayout) {
  const std::vector<EvalReport> reports = {
      make("s", "none", Ratio(1, 4), -5.0),   make("s", "bs-down", Ratio(1, 4), -6.25),
      make("s", "none", Ratio(1, 64), -1.0),  make("s", "bs-down", Ratio(1, 64), -1.5),
      make("s", "bs-up", Ratio(1, 16), -3.333),
  };
  const std::string md = render_grid(reports, GridFormat::Markdown);
  EXPECT_EQ(md, "| method | 1/4 | 1/16 | 1/64 |\n"
                "|---|---:|---:|---:|\n"
                "| bs-down | -6.25 | - | -1.50 |\n"
                "| bs-up | - | -3.33 | - |\n"
                "| none | -5.00 | - | -1.00 |\n");
  const std::string csv = render_grid(reports, GridFormat::Csv);
  EXPECT_EQ(csv, "method,1/4,1/16,1/64\n"
                 "bs-down,-6.25,-,-1.50\n"
                 "bs-up,-,-3.33,-\n"
                 "none,-5.00,-,-1.00\n");
}

TEST(Report, GridStableUnderReordering) {
  std::vector<EvalReport> reports = {
      make("a", "none", Ratio(1, 4), -5.0), make("b", "rg", Ratio(1, 8), -4.0),
      make("a", "rg", Ratio(1, 4), -5.5),   make("a", "rg", Ratio(1, 4), -7.0),
      make("b", "none", Ratio(1, 4), -3.0),
  };
  const std::string ref = render_grid(reports, GridFormat::Markdown);
  EXPECT_NE(ref.find("1/4 a"), std::string::npos);
  EXPECT_NE(ref.find("-5.50"), std::string::npos); // duplicate keeps the higher dB
  std::sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) { return x.result.db < y.result.db; });
  do {
    ASSERT_EQ(render_grid(reports, GridFormat::Markdown), ref);
  } while (std::next_permutation(reports.begin(), reports.end(),
                                 [](const auto& x, const auto& y) { return x.result.db < y.result.db; }));
}

} // namespace
