#include "tsmc/spec_strings.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>

#include "tsmc/errors.hpp"

namespace tsmc {
namespace {

std::string config_error_field(const std::string& law_or_kernel, bool kernel) {
  try {
    if (kernel) {
      (void)parse_kernel(law_or_kernel);
    } else {
      (void)parse_law(law_or_kernel);
    }
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.9), "0.9");
  EXPECT_EQ(format_real(-0.9), "-0.9");
  EXPECT_EQ(format_real(19.0), "19");
  EXPECT_EQ(format_real(1e-300), "1e-300");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  for (double x : {0.1, 1.0 / 3.0, 3.404093, 6.02e23}) EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(ParseReal, AcceptsAndRejects) {
  EXPECT_EQ(parse_real("0.5", "f"), 0.5);
  EXPECT_EQ(parse_real("-1e-3", "f"), -1e-3);
  EXPECT_THROW((void)parse_real("", "f"), ConfigError);
  EXPECT_THROW((void)parse_real("+1", "f"), ConfigError);
  EXPECT_THROW((void)parse_real("1.5x", "f"), ConfigError);
  EXPECT_THROW((void)parse_real("inf", "f"), ConfigError);
  EXPECT_THROW((void)parse_real("nan", "f"), ConfigError);
}

TEST(ParseUint, AcceptsAndRejects) {
  EXPECT_EQ(parse_uint("20100401", "seed"), 20100401U);
  EXPECT_EQ(parse_uint("18446744073709551615", "seed"), UINT64_MAX);
  EXPECT_THROW((void)parse_uint("18446744073709551616", "seed"), ConfigError);
  EXPECT_THROW((void)parse_uint("-1", "seed"), ConfigError);
  EXPECT_THROW((void)parse_uint("12a", "seed"), ConfigError);
  EXPECT_THROW((void)parse_uint("3", "power", 2), ConfigError);
}

TEST(ParseLaw, AllKinds) {
  EXPECT_EQ(parse_law("point:1").spec(), "point:1");
  EXPECT_EQ(parse_law("  lazy:0.5 ").spec(), "lazy:0.5");
  EXPECT_EQ(parse_law("shiftpois:1:5").pgf(0.9), SamplingLaw::shifted_poisson(1, 5.0).pgf(0.9));
  const auto pmf = parse_law("pmf:0=0.25,2=0.75");
  EXPECT_EQ(pmf.spec(), "pmf:0=0.25,2=0.75");
  EXPECT_TRUE(pmf.supported_on_even());
  EXPECT_EQ(pmf.mass_at_zero(), 0.25);
}

TEST(ParseLaw, ErrorsNameTheField) {
  for (const char* bad : {"point", "point:-1", "point:1.5", "lazy:2", "lazy:", "shiftpois:1", "shiftpois:1:-1",
                          "shiftpois:1:5:7", "pmf:0=0.5", "pmf:0=0.5,0=0.5", "pmf:0:1", "geom:0.5", ""}) {
    EXPECT_EQ(config_error_field(bad, false), "mu") << bad;
  }
}

TEST(ParseKernel, AllFamilies) {
  const auto cn = parse_kernel("cn:-0.9");
  EXPECT_EQ(cn.family, KernelSpec::Family::contracting_normal);
  EXPECT_EQ(cn.theta, -0.9);
  EXPECT_EQ(cn.text, "cn:-0.9");
  EXPECT_EQ(cn.params(), "-0.9");
  EXPECT_EQ(cn.build().name(), "cn:-0.9");

  const auto mh = parse_kernel("rwm:mh");
  EXPECT_EQ(mh.family, KernelSpec::Family::random_walk);
  EXPECT_EQ(mh.rule.kind(), AcceptanceRule::Kind::metropolis_hastings);
  EXPECT_EQ(mh.half_width, 2.0);
  EXPECT_EQ(mh.text, "rwm:mh");
  EXPECT_EQ(mh.params(), "mh");

  const auto lazy = parse_kernel("rwm:lazy:0.5");
  EXPECT_EQ(lazy.rule.kind(), AcceptanceRule::Kind::lazy_metropolis);
  EXPECT_EQ(lazy.rule.eps(), 0.5);
  EXPECT_EQ(lazy.text, "rwm:lazy:0.5");
  EXPECT_EQ(lazy.params(), "eps=0.5");

  const auto wide = parse_kernel("rwm:barker:h=4");
  EXPECT_EQ(wide.half_width, 4.0);
  EXPECT_EQ(wide.text, "rwm:barker:h=4");
  EXPECT_EQ(wide.params(), "barker;h=4");
  EXPECT_EQ(wide.build().name(), "rwm:barker:h=4");
  EXPECT_EQ(parse_kernel("rwm:mh:h=2").text, "rwm:mh");

  const auto counter = parse_kernel("counter:2");
  EXPECT_EQ(counter.family, KernelSpec::Family::counterexample);
  EXPECT_EQ(counter.power, 2);
  EXPECT_EQ(counter.build().name(), "counter:2");
}

TEST(ParseKernel, ErrorsNameTheField) {
  for (const char* bad : {"cn", "cn:1", "cn:-1.5", "cn:x", "rwm", "rwm:gibbs", "rwm:lazy", "rwm:lazy:1",
                          "rwm:lazy:0", "rwm:mh:h=0", "rwm:mh:h=-2", "rwm:mh:extra", "counter:3", "counter:0",
                          "counter", "ising:1", ""}) {
    EXPECT_EQ(config_error_field(bad, true), "kernel") << bad;
  }
}

}  // namespace
}  // namespace tsmc
