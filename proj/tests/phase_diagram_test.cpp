#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/fixed_points.hpp"
#include "gibbs_tree/phase_diagram.hpp"

namespace gibbs_tree {
namespace {

TEST(PhaseRecord, ThetaTwo) {
  const PhaseRecord r = phase_record(2.0);
  EXPECT_EQ(r.rho, 2.5);
  EXPECT_EQ(r.n_fixed_points, 3);
  ASSERT_EQ(r.z_roots.size(), 3u);
  EXPECT_NEAR(r.z_roots[1], 1.0, 0.0);
  EXPECT_EQ(r.phase_region, PhaseRegion::coexistence);
  EXPECT_EQ(r.extremality, Extremality::extreme);
  EXPECT_NEAR(r.kappa, 45.0 / 157.0, 1e-14);
}

TEST(PhaseRecord, RegionFollowsCount) {
  for (double t = 0.1; t < 8.0; t *= 1.1) {
    const PhaseRecord r = phase_record(t);
    EXPECT_EQ(r.phase_region == PhaseRegion::coexistence, r.n_fixed_points == 3);
    EXPECT_EQ(r.extremality, extremality(ModelParams::from_theta(t)).verdict);
  }
}

TEST(Sweep, GridOrderAndEndpoints) {
  const auto rs = sweep(0.5, 2.0, 7);
  ASSERT_EQ(rs.size(), 7u);
  EXPECT_EQ(rs.front().theta, 0.5);
  EXPECT_EQ(rs.back().theta, 2.0);
  for (std::size_t i = 1; i < rs.size(); ++i) EXPECT_NEAR(rs[i].theta - rs[i - 1].theta, 0.25, 1e-15);
}

TEST(Sweep, ReciprocalPairsAgree) {
  const auto rs = sweep(0.25, 4.0, 376);  // step 0.01, so 0.25/4, 0.5/2 are nodes
  auto find = [&](double t) {
    for (const auto& r : rs)
      if (std::abs(r.theta - t) < 1e-9) return r;
    ADD_FAILURE() << "missing " << t;
    return rs.front();
  };
  for (auto [a, b] : {std::pair{0.25, 4.0}, std::pair{0.5, 2.0}, std::pair{0.8, 1.25}}) {
    EXPECT_NEAR(find(a).kappa, find(b).kappa, 1e-12);
    EXPECT_NEAR(find(a).jacobian_radius, find(b).jacobian_radius, 1e-12);
  }
}

TEST(Sweep, RejectsBadRange) {
  EXPECT_THROW(sweep(0.0, 1.0, 10), InputError);
  EXPECT_THROW(sweep(2.0, 1.0, 10), InputError);
  EXPECT_THROW(sweep(0.5, 1.0, 1), InputError);
}

TEST(Sweep, TwoStepsCsv) {
  const std::string csv = records_to_csv(sweep(0.5, 2.0, 2));
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "theta,rho,n_fixed_points,z_roots,jacobian_radius,kappa,two_kappa_sq,ks_value,phase_region,extremality");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Formats, CsvAndJsonRoundTripExactly) {
  const auto rs = sweep(0.1, 4.0, 50);
  EXPECT_EQ(records_from_csv(records_to_csv(rs)), rs);
  EXPECT_EQ(records_from_json(records_to_json(rs)), rs);
  EXPECT_EQ(records_from_json(records_to_json(records_from_csv(records_to_csv(rs)))), rs);
}

TEST(Formats, RejectMalformedInput) {
  EXPECT_THROW(records_from_csv("theta,rho\n1,2\n"), InputError);
  EXPECT_THROW(records_from_json("{\"schema_version\": 2, \"records\": []}"), InputError);
  EXPECT_THROW(records_from_json("[1, 2"), InputError);
  const std::string bad_region = std::string(kPhaseCsvHeader) + "\n2,2.5,3,1,1,1,1,1,sideways,extreme\n";
  EXPECT_THROW(records_from_csv(bad_region), InputError);
}

TEST(Formats, SvgIsSelfContained) {
  const std::string svg = records_to_svg(sweep(0.1, 4.0, 100));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("http://www.w3.org/2000/svg"), svg.find("http"));
}

}  // namespace
}  // namespace gibbs_tree
