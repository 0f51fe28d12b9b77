#include <string>

#include <gtest/gtest.h>

#include "carleson/io.hpp"

namespace {

using namespace carleson;
using io::json;

std::string data_path(const char* name) { return std::string(CARLESON_DATA_DIR) + "/" + name; }

std::string error_text(const auto& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

TEST(Io, MeasureRoundTrip) {
  numerics::RngStream rng(61, 0);
  for (const Space s : {Space::disc(), Space::ball(2), Space::ball(3)}) {
    const auto mu = random_measure(rng, s, 6, 0.99);
    const auto back = io::measure_from_json(json::parse(io::to_json(mu).dump()));
    EXPECT_EQ(back.space(), mu.space());
    ASSERT_EQ(back.size(), mu.size());
    for (std::size_t k = 0; k < mu.size(); ++k) {
      EXPECT_EQ(back[k].point, mu[k].point);
      EXPECT_EQ(back[k].weight, mu[k].weight);
    }
  }
}

TEST(Io, SequenceRoundTripAndAtomsForm) {
  const PointSequence seq{cplx(0.5, 0.1), cplx(-0.25, 0.3)};
  const auto back = io::sequence_from_json(json::parse(io::to_json(seq).dump()));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1], seq[1]);
  const auto atoms = io::sequence_from_json(
      json::parse(R"({"space": {"kind": "disc"}, "atoms": [{"point": [0.5, 0.0], "weight": 3.0}, {"point": [-0.5, 0.0]}]})"));
  EXPECT_NEAR(carleson_delta(atoms), 0.8, 1e-15);
  EXPECT_THROW(io::sequence_from_json(json::parse(R"({"space": {"kind": "ball", "dim": 2}, "points": [[0,0,0,0]]})")),
               InputError);
}

TEST(Io, PolyRoundTrip) {
  numerics::RngStream rng(62, 0);
  const auto f = random_poly(rng, 2, 4);
  EXPECT_EQ(io::poly_from_json(json::parse(io::to_json(f).dump())), f);
  const auto zero = io::load_poly(data_path("poly_zero.json"));
  EXPECT_TRUE(zero.is_zero());
}

TEST(Io, DataFilesLoad) {
  EXPECT_EQ(io::load_measure(data_path("two_atoms.json")).size(), 2u);
  EXPECT_EQ(io::load_measure(data_path("ball2_measure.json")).space(), Space::ball(2));
  EXPECT_EQ(io::load_sequence(data_path("sequence_geometric.json")).size(), 8u);
  EXPECT_EQ(io::load_poly(data_path("poly_ball2.json")).dim(), 2);
}

TEST(Io, MalformedReportsLineAndColumn) {
  const std::string msg = error_text([] { io::load_measure(data_path("malformed.json")); });
  ASSERT_FALSE(msg.empty());
  EXPECT_NE(msg.find("malformed.json:4:"), std::string::npos) << msg;
}

TEST(Io, SchemaErrors) {
  auto parse = [](const char* text) { return io::measure_from_json(json::parse(text)); };
  EXPECT_NE(error_text([&] { parse(R"({"atoms": []})"); }).find("space"), std::string::npos);
  EXPECT_NE(error_text([&] { parse(R"({"space": {"kind": "torus"}, "atoms": [{"point": [0,0], "weight": 1}]})"); })
                .find("torus"),
            std::string::npos);
  EXPECT_NE(error_text([&] { parse(R"({"space": {"kind": "disc"}, "atoms": [{"point": [0,0,0], "weight": 1}]})"); })
                .find("atoms[0].point"),
            std::string::npos);
  EXPECT_NE(error_text([&] { parse(R"({"space": {"kind": "disc"}, "atoms": [{"point": [0,0], "weight": -1}]})"); })
                .find("weight"),
            std::string::npos);
  EXPECT_NE(error_text([&] { parse(R"({"space": {"kind": "disc"}, "atoms": [{"point": [1,0], "weight": 1}]})"); })
                .find("atoms[0].point"),
            std::string::npos);
  EXPECT_THROW(io::poly_from_json(json::parse(R"({"dim": 1, "terms": [{"alpha": [-1], "re": 1}]})")), InputError);
  EXPECT_THROW(io::load_measure(data_path("does_not_exist.json")), InputError);
}

TEST(Io, CsvKeepsFullPrecision) {
  EXPECT_EQ(std::stod(io::csv_number(0.1)), 0.1);
  const DiscreteMeasure mu(Space::disc(), {{SpacePoint{cplx(0.5)}, 0.75}, {SpacePoint{cplx(-0.5)}, 0.75}});
  const auto csv = io::to_csv(analyze(mu, 16));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "space,atom_count,a_sq,c_supp,c_grid,i_box,bound,ratio,holds,grid_resolution");
  const auto j = io::to_json(analyze(mu, 16));
  EXPECT_EQ(j["ratio"].get<double>(), analyze(mu, 16).ratio);
}

}  // namespace
