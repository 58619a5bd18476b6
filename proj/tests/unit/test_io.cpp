#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "decaylab/errors.hpp"
#include "decaylab/io.hpp"

using namespace decaylab;

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1e-300), "1e-300");
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_real(INFINITY), "inf");
  EXPECT_EQ(format_real(-INFINITY), "-inf");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(Csv, QuotesAndRows) {
  Table t;
  t.columns = {"name", "value", "n", "ok"};
  t.add_row({std::string("a,b"), 0.5, 3LL, true});
  t.add_row({std::string("say \"hi\""), -2.0, -1LL, false});
  EXPECT_EQ(to_csv(t), "name,value,n,ok\n\"a,b\",0.5,3,true\n\"say \"\"hi\"\"\",-2,-1,false\n");
  EXPECT_THROW(t.add_row({1.0}), DomainError);
  EXPECT_THROW(to_csv(Table{}), DomainError);
}

TEST(Json, IntegersAsStrings) {
  Table t;
  t.columns = {"k", "x"};
  t.add_row({123456789012345LL, 1.5});
  const Json j = to_json(t);
  EXPECT_EQ(j["rows"][0][0], "123456789012345");
  EXPECT_EQ(j["rows"][0][1], 1.5);
}

TEST(Manifest, SeedAndFailures) {
  RunManifest m;
  m.subcommand = "lq-scan";
  m.seed = 18446744073709551615ULL;
  m.checks = {{"first", true, ""}, {"second", false, "off by one"}};
  EXPECT_FALSE(m.all_passed());
  ASSERT_EQ(m.failed().size(), 1u);
  EXPECT_EQ(m.failed().front(), "second");
  const Json j = m.to_json();
  EXPECT_EQ(j["seed"], "18446744073709551615");
  EXPECT_EQ(j["all_passed"], false);
  EXPECT_EQ(j.find("wall_seconds"), j.end());
}
