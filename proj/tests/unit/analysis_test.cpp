// Copyright 2026 The IoD Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include "iodsim/analysis.hpp"
#include "iodsim/error.hpp"
#include "test_support.hpp"

namespace iodsim {
namespace {

using test::num;
using test::parse_csv;

// Drone 0 (host 1) sends sn 1..4 from app 0; the ZSP (host 2) receives two.
constexpr const char* kSynthetic = R"(<?xml version="1.0" encoding="UTF-8"?>
<Simulation scenario="s" executedAt="x" seed="1">
 <duration virtual="4"/>
 <Drones>
  <Drone id="0" host="1">
   <Applications>
    <Application id="0" type="udpEchoClient" start="0" stop="4">
     <Event time="0.5" kind="tx" sn="1" bytes="100"/>
     <Event time="1.5" kind="tx" sn="2" bytes="100"/>
     <Event time="2.5" kind="tx" sn="3" bytes="100"/>
     <Event time="3.5" kind="tx" sn="4" bytes="100"/>
    </Application>
   </Applications>
  </Drone>
 </Drones>
 <Zsps>
  <Zsp id="0" host="2">
   <Applications>
    <Application id="0" type="echoServer" start="0" stop="4">
     <Event time="0.6" kind="rx" sn="1" bytes="100" peerNode="0" peerApp="0" created="0.5"/>
     <Event time="2.75" kind="rx" sn="3" bytes="50" peerNode="0" peerApp="0" created="2.5"/>
    </Application>
   </Applications>
  </Zsp>
 </Zsps>
</Simulation>
)";

class Synthetic : public ::testing::Test {
 protected:
  void SetUp() override { test::write_file(dir_ / "report.xml", kSynthetic); }
  std::string run(Kpi k, double window = 1.0) {
    return analyze(dir_.str(), k, AnalyzeOptions{window});
  }
  test::TempDir dir_{"analysis"};
};

TEST_F(Synthetic, PacketLossRatio) {
  const auto rows = parse_csv(run(Kpi::plr));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("host"), "1");
  EXPECT_EQ(rows[0].at("sent"), "4");
  EXPECT_EQ(rows[0].at("delivered"), "2");
  EXPECT_DOUBLE_EQ(num(rows[0], "plr"), 0.5);
}

TEST_F(Synthetic, Latency) {
  const auto rows = parse_csv(run(Kpi::latency));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(num(rows[0], "latency"), 0.1, 1e-12);
  EXPECT_NEAR(num(rows[1], "latency"), 0.25, 1e-12);
  EXPECT_EQ(rows[1].at("origin_host"), "1");
  EXPECT_EQ(rows[1].at("receiver_host"), "2");
}

TEST_F(Synthetic, ThroughputWindowsSumToTotal) {
  for (double w : {0.5, 1.0, 3.0, 10.0}) {
    const auto rows = parse_csv(run(Kpi::throughput, w));
    std::uint64_t total = 0;
    for (const auto& r : rows) total += std::stoull(r.at("bits"));
    EXPECT_EQ(total, 1200u) << w;
    EXPECT_DOUBLE_EQ(num(rows.back(), "window_end"), 4.0);
  }
  const auto one = parse_csv(run(Kpi::throughput, 1.0));
  ASSERT_EQ(one.size(), 4u);
  EXPECT_EQ(one[0].at("bits"), "800");
  EXPECT_EQ(one[2].at("bits"), "400");
  EXPECT_DOUBLE_EQ(num(one[2], "bps"), 400.0);
}

TEST_F(Synthetic, EmptyKpiIsHeaderOnly) {
  EXPECT_EQ(run(Kpi::rssi), std::string(csv_header(Kpi::rssi)) + "\n");
  EXPECT_EQ(run(Kpi::power), std::string(csv_header(Kpi::power)) + "\n");
}

TEST_F(Synthetic, AnalysisIsPure) {
  const auto before = test::read_file(dir_ / "report.xml");
  const auto a = run(Kpi::plr);
  const auto b = run(Kpi::plr);
  EXPECT_EQ(a, b);
  EXPECT_EQ(test::read_file(dir_ / "report.xml"), before);
}

TEST_F(Synthetic, NonPositiveWindowRejected) {
  try {
    run(Kpi::throughput, 0.0);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::validation_error);
  }
}

TEST(Analysis, FullDeliveryIsZeroLoss) {
  test::TempDir dir("analysis");
  std::string xml = kSynthetic;
  const std::string extra =
      R"(     <Event time="1.6" kind="rx" sn="2" bytes="100" peerNode="0" peerApp="0" created="1.5"/>
     <Event time="3.6" kind="rx" sn="4" bytes="100" peerNode="0" peerApp="0" created="3.5"/>
)";
  const auto at = xml.find("    </Application>", xml.find("echoServer"));
  xml.insert(at, extra);
  test::write_file(dir / "report.xml", xml);
  const auto rows = parse_csv(analyze(dir.str(), Kpi::plr));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(num(rows[0], "plr"), 0.0);
}

TEST(Analysis, MissingAndBrokenReports) {
  test::TempDir dir("analysis");
  try {
    analyze(dir.str(), Kpi::power);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::missing_artifact);
  }
  test::write_file(dir / "report.xml", "<Other/>");
  EXPECT_THROW(analyze(dir.str(), Kpi::power), SimError);
  test::write_file(dir / "report.xml", "<Simulation><duration virtual=\"1\">");
  EXPECT_THROW(analyze(dir.str(), Kpi::power), SimError);
}

TEST(Analysis, KpiNames) {
  for (const auto& n : kpi_names()) {
    auto k = parse_kpi(n);
    ASSERT_TRUE(k);
    EXPECT_EQ(to_string(*k), n);
  }
  EXPECT_FALSE(parse_kpi("jitter"));
}

TEST(Analysis, RealRunStorageAndPerf) {
  test::TempDir dir("analysis");
  auto cfg = test::load_ok("storage1mbps");
  cfg.duration = 5;
  const auto out = test::run_into(cfg, dir.path());
  const auto storage = parse_csv(analyze(dir.str(), Kpi::storage));
  ASSERT_FALSE(storage.empty());
  for (const auto& r : storage) EXPECT_LE(num(r, "occupied_bits"), num(r, "capacity_bits"));
  const auto perf = parse_csv(analyze(dir.str(), Kpi::perf));
  ASSERT_EQ(perf.size(), 5u);
  std::uint64_t sum = 0;
  for (const auto& r : perf) {
    sum += std::stoull(r.at("events"));
    EXPECT_FALSE(r.at("speedup").empty());
  }
  EXPECT_EQ(sum, out.stats.events_processed);
}

}  // namespace
}  // namespace iodsim
