#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gen.hpp"
#include "hdhn/config_io.hpp"
#include "hdhn/model.hpp"

using namespace hdhn;

TEST(Model, DefaultConfigIsValid) {
  const auto c = table2_config();
  EXPECT_TRUE(validate(c).empty());
  EXPECT_EQ(c.size(), 2u);
  EXPECT_DOUBLE_EQ(c.tiers[0].fd_density(), 1e-3);
  EXPECT_DOUBLE_EQ(c.tiers[1].hd_density(), 1e-3);
  const auto th = target_sirs(c);
  EXPECT_DOUBLE_EQ(th.theta_a, 1.0);
  EXPECT_DOUBLE_EQ(th.theta_u, 1.0);
}

TEST(Model, SelfInterference) {
  TierParams t;
  t.self_ic_db = -30.0;
  EXPECT_NEAR(t.self_interference(6.0), 6e-3, 1e-15);
  t.self_ic_db = kPerfectIc;
  EXPECT_TRUE(t.perfect_ic());
  EXPECT_EQ(t.self_interference(6.0), 0.0);
}

TEST(Model, LinkPowersSwapWithDirection) {
  TierParams t;
  t.ap_power = 30;
  t.user_power = 3;
  EXPECT_EQ(link_powers(t, Direction::Downlink).tx, 30);
  EXPECT_EQ(link_powers(t, Direction::Downlink).rx, 3);
  EXPECT_EQ(link_powers(t, Direction::Uplink).tx, 3);
  EXPECT_EQ(link_powers(t, Direction::Uplink).rx, 30);
}

TEST(Model, ValidationNamesEachField) {
  auto c = table2_config();
  c.tiers[0].pathloss_exp = 2.0;
  c.tiers[1].fd_portion = 1.5;
  c.tiers[1].bias = 0.0;
  c.bandwidth = 0.0;
  const auto v = validate(c);
  const auto text = describe(v);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_NE(text.find("tier[0].alpha"), std::string::npos);
  EXPECT_NE(text.find("tier[1].fd_portion"), std::string::npos);
  EXPECT_NE(text.find("tier[1].bias"), std::string::npos);
  EXPECT_NE(text.find("bandwidth_hz"), std::string::npos);

  HdhnConfig empty;
  EXPECT_FALSE(validate(empty).empty());
  auto pos_inf = table2_config();
  pos_inf.tiers[0].self_ic_db = INFINITY;
  EXPECT_FALSE(validate(pos_inf).empty());
}

TEST(Model, QueryValidation) {
  const auto c = table2_config();
  EXPECT_TRUE(validate(c, LinkQuery{1, DuplexMode::FD, Direction::Uplink, 1.0}).empty());
  EXPECT_FALSE(validate(c, LinkQuery{2, DuplexMode::HD, Direction::Downlink, 1.0}).empty());
  EXPECT_FALSE(validate(c, LinkQuery{0, DuplexMode::HD, Direction::Uplink, 1.0}).empty());
  EXPECT_FALSE(validate(c, LinkQuery{0, DuplexMode::HD, Direction::Downlink, 0.0}).empty());
}

TEST(ConfigIo, ParsesShippedFile) {
  const auto c = config_io::load(std::string(HDHN_SOURCE_DIR) + "/configs/table2.toml");
  const auto ref = table2_config();
  ASSERT_EQ(c.size(), ref.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_EQ(c.tiers[k].density, ref.tiers[k].density);
    EXPECT_EQ(c.tiers[k].pathloss_exp, ref.tiers[k].pathloss_exp);
    EXPECT_EQ(c.tiers[k].bias, ref.tiers[k].bias);
    EXPECT_EQ(c.tiers[k].ap_power, ref.tiers[k].ap_power);
    EXPECT_EQ(c.tiers[k].user_power, ref.tiers[k].user_power);
    EXPECT_EQ(c.tiers[k].fd_portion, ref.tiers[k].fd_portion);
    EXPECT_EQ(c.tiers[k].self_ic_db, ref.tiers[k].self_ic_db);
  }
  EXPECT_EQ(c.rate_ap, ref.rate_ap);
  EXPECT_EQ(c.symbol_time, ref.symbol_time);
}

TEST(ConfigIo, RoundTripRandomConfigs) {
  gen::Source s(21);
  for (int i = 0; i < 50; ++i) {
    const auto c = s.config(s.integer(1, 4));
    const auto back = config_io::parse(config_io::serialize(c));
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      EXPECT_EQ(back.tiers[k].density, c.tiers[k].density);
      EXPECT_EQ(back.tiers[k].pathloss_exp, c.tiers[k].pathloss_exp);
      EXPECT_EQ(back.tiers[k].bias, c.tiers[k].bias);
      EXPECT_EQ(back.tiers[k].ap_power, c.tiers[k].ap_power);
      EXPECT_EQ(back.tiers[k].user_power, c.tiers[k].user_power);
      EXPECT_EQ(back.tiers[k].fd_portion, c.tiers[k].fd_portion);
      EXPECT_EQ(back.tiers[k].self_ic_db, c.tiers[k].self_ic_db);
    }
    EXPECT_EQ(back.rate_ap, c.rate_ap);
    EXPECT_EQ(back.rate_user, c.rate_user);
  }
}

TEST(ConfigIo, CommentsAndDefaults) {
  const auto c = config_io::parse(
      "# only one tier\n"
      "[[tier]]\n"
      "density = 1_000e-6  # underscores allowed\n"
      "alpha = 3.5\nbias = 2\np_ap_watts = 10\np_user_watts = 1\nfd_portion = 0.5\nself_ic_db = -inf\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c.tiers[0].density, 1e-3);
  EXPECT_TRUE(c.tiers[0].perfect_ic());
  EXPECT_EQ(c.rate_ap, 1e4);
  EXPECT_EQ(c.bandwidth, 1e4);
}

TEST(ConfigIo, RejectsMalformedInput) {
  const std::string tier =
      "[[tier]]\ndensity = 1e-3\nalpha = 4\nbias = 1\np_ap_watts = 1\np_user_watts = 1\nfd_portion = 0\n";
  auto kind = [](const std::string& text) {
    try {
      config_io::parse(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Domain;
  };
  EXPECT_EQ(kind(tier), ErrorKind::BadInput);                          // missing self_ic_db
  EXPECT_EQ(kind(tier + "self_ic_db = abc\n"), ErrorKind::BadInput);   // not a number
  EXPECT_EQ(kind(tier + "self_ic_db = -1\ncolour = 3\n"), ErrorKind::BadInput);
  EXPECT_EQ(kind(tier + "self_ic_db = -1\nalpha = 3\n"), ErrorKind::BadInput);
  EXPECT_EQ(kind("[tier]\n"), ErrorKind::BadInput);
  EXPECT_EQ(kind("rate_ap 5\n"), ErrorKind::BadInput);
  EXPECT_EQ(kind("density = 1\n"), ErrorKind::BadInput);  // tier key at top level
  EXPECT_TRUE(config_io::parse("").tiers.empty());
  EXPECT_THROW(config_io::load("/nonexistent/path.toml"), Error);
}
