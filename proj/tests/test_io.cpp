#include <doctest.h>

#include <clocale>
#include <cstring>
#include <limits>
#include <sstream>

#include "geomreach/geodesics.hpp"
#include "geomreach/io.hpp"
#include "test_support.hpp"

using namespace geomreach;

TEST_SUITE("io") {

TEST_CASE("doubles round trip bit for bit") {
  std::mt19937_64 rng(97);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(parse_double(" 2.5 ") == 2.5);
  CHECK_THROWS_AS(parse_double("2,5"), IoError);
  CHECK_THROWS_AS(parse_double(""), IoError);
}

TEST_CASE("decimal point is independent of the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
    CHECK(format_double(1.5) == "1.5");
    CHECK(parse_double("1.5") == 1.5);
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("point CSV round trip with tangents") {
  std::mt19937_64 rng(101);
  Matrix pts = testsupport::gaussian(rng, 3, 50);
  PointCloud c(pts, 2);
  std::vector<Subspace> t;
  for (int i = 0; i < 50; ++i) t.push_back(Subspace::span(testsupport::gaussian(rng, 3, 2)));
  c.set_tangents(t);
  std::stringstream ss;
  write_points_csv(ss, c);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  CHECK(header == "x0,x1,x2,t0_0,t0_1,t0_2,t1_0,t1_1,t1_2");
  PointCloud back = read_points_csv(ss);
  CHECK(back.points() == pts);
  CHECK(back.intrinsic_dim() == 2);
  for (std::size_t i = 0; i < 50; ++i) CHECK(back.tangent(i).basis() == c.tangent(i).basis());
  std::stringstream again;
  write_points_csv(again, back);
  std::stringstream first;
  write_points_csv(first, c);
  CHECK(again.str() == first.str());
}

TEST_CASE("point CSV without tangents and malformed input") {
  std::stringstream ok("x0,x1\n1,2\n3.5,-4e-3\n");
  PointCloud c = read_points_csv(ok);
  CHECK(c.size() == 2);
  CHECK_FALSE(c.has_tangents());
  CHECK(c.point(1)(1) == -4e-3);

  std::stringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_AS(read_points_csv(bad_header), IoError);
  std::stringstream short_row("x0,x1\n1\n");
  CHECK_THROWS_AS(read_points_csv(short_row), IoError);
  std::stringstream odd("x0,x1,t0_0\n1,2,3\n");
  CHECK_THROWS_AS(read_points_csv(odd), IoError);
  CHECK_THROWS_AS(read_points_csv(std::string("/nonexistent/points.csv")), IoError);
}

TEST_CASE("infinity is the string inf") {
  CHECK(real_to_json(kInf) == "inf");
  CHECK(real_to_json(0.5) == 0.5);
  CHECK(real_from_json(Json("inf")) == kInf);
  CHECK(real_from_json(Json(2.0)) == 2.0);
  CHECK_THROWS_AS(real_from_json(Json("big")), IoError);
}

TEST_CASE("manifest round trip") {
  Manifest m;
  m.d = 3;
  m.n = 2;
  m.count = 10;
  m.has_tangents = true;
  ShapeSpec s;
  s.kind = ShapeKind::torus;
  s.R = 2;
  s.r = 0.5;
  s.count = 10;
  s.seed = 7;
  m.shape = s;
  m.ground_truth = GroundTruth{0.5, 0.5, 0.5, 2.0};
  Json j = manifest_to_json(m);
  CHECK(j["shape"]["kind"] == "torus");
  Manifest back = manifest_from_json(Json::parse(j.dump()));
  CHECK(back.d == 3);
  CHECK(back.n == 2);
  CHECK(back.count == 10);
  CHECK(back.shape->R == 2);
  CHECK(back.shape->seed == 7);
  CHECK(back.ground_truth->tangent_variation_sup == 2.0);

  Manifest seg;
  seg.d = 2;
  seg.n = 1;
  seg.count = 3;
  seg.ground_truth = GroundTruth{kInf, kInf, kInf, 0};
  CHECK(manifest_to_json(seg)["ground_truth"]["rch"] == "inf");
  CHECK(manifest_from_json(manifest_to_json(seg)).ground_truth->rch_glob == kInf);
  CHECK_THROWS_AS(manifest_from_json(Json{{"d", 2}}), IoError);
}

TEST_CASE("sibling paths") {
  CHECK(sibling_path("a/b.csv", ".manifest.json") == "a/b.manifest.json");
  CHECK(sibling_path("pts", ".manifest.json") == "pts.manifest.json");
}

}
