#include <sstream>

#include <gtest/gtest.h>

#include "lattice/errors.hpp"
#include "lattice/io.hpp"

namespace {

using namespace lattice;
using io::json;

TEST(Io, PotentialRoundTrip) {
  const json j = json::parse(R"({"terms":[{"k":1,"l":0,"amp":1.0,"phase":0.0},{"k":1,"l":1,"amp":0.05,"phase":0.2}]})");
  EXPECT_FALSE(io::is_generating_function(j));
  const TrigPotential p = io::potential_from_json(j);
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.terms()[1].l, 1);
  EXPECT_EQ(io::to_json(p), j);
}

TEST(Io, GeneratingFunction) {
  const json j = json::parse(R"({"a":0.1,"terms":[{"k":1,"l":0,"amp":0.2}]})");
  EXPECT_TRUE(io::is_generating_function(j));
  const GeneratingFunction h = io::generating_from_json(j);
  EXPECT_EQ(h.a(), 0.1);
  EXPECT_EQ(h.b(), 0.0);
  EXPECT_EQ(h.periodic_part().terms()[0].phase, 0.0);
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(io::potential_from_json(json::parse("[]")), ValidationError);
  EXPECT_THROW(io::potential_from_json(json::parse(R"({"term":[]})")), ValidationError);
  EXPECT_THROW(io::potential_from_json(json::parse(R"({"terms":[{"k":1.5,"l":0,"amp":1}]})")), ValidationError);
  EXPECT_THROW(io::potential_from_json(json::parse(R"({"terms":[{"k":1,"l":0}]})")), ValidationError);
  EXPECT_THROW(io::potential_from_json(json::parse(R"({"terms":[{"k":1,"l":0,"amp":"x"}]})")), ValidationError);
  EXPECT_THROW(io::potential_from_json(json::parse(R"({"terms":[{"k":1,"l":0,"amp":1,"q":2}]})")), ValidationError);
  EXPECT_THROW(io::base_from_json(json::parse(R"({"terms":[{"k":1,"l":0,"amp":1}]})")), ValidationError);
  EXPECT_THROW(io::model_from_json(json::parse(R"({"d":2,"r":1,"R":1,"degrees":[2,2],"N":2})")), ValidationError);
}

TEST(Io, Model) {
  const AlgebraicModel m = io::model_from_json(json::parse(R"({"d":2,"r":1,"R":1,"degrees":[2],"N":2})"));
  EXPECT_EQ(m.degrees.size(), 1u);
  EXPECT_EQ(m.N, 2);
}

TEST(Io, PointsCsvPadsShortRows) {
  CountReport a;
  a.n = 1;
  a.points.push_back({LatticeConfig({0.0, 1.0}, LatticeMode::torus), 1e-12, 1, 0.5, std::nullopt});
  CountReport b;
  b.n = 2;
  b.points.push_back({LatticeConfig({0.0, 1.0, 2.0}, LatticeMode::torus), 0.0, std::nullopt, 0.0, std::nullopt});
  std::vector<CountReport> reports{a, b};
  std::ostringstream os;
  io::write_points_csv(os, reports);
  EXPECT_EQ(os.str(),
            "n,method,x_0,x_1,x_2,grad_norm,index,min_abs_eig\n"
            "1,newton,0,1,,9.9999999999999998e-13,1,0.5\n"
            "2,newton,0,1,2,0,,0\n");
}

TEST(Io, CountReportCarriesTolerances) {
  CountReport r;
  r.n = 3;
  r.resolution = 0.25;
  const json j = io::to_json(r);
  EXPECT_EQ(j.at("resolution"), 0.25);
  EXPECT_EQ(j.at("tolerances").at("polish"), kPolishTolerance);
  EXPECT_EQ(j.at("alternating_index_sum"), 0);
}

}  // namespace
