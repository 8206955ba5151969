#include <doctest.h>

#include <cstring>
#include <sstream>

#include "test_support.hpp"
#include "wtv/grid.hpp"
#include "wtv/grid_io.hpp"

using namespace wtv;
using namespace wtv::testing;

TEST_CASE("grid: constructor rejects payload of the wrong length") {
  CHECK_THROWS_AS(Image(3, std::vector<double>(8)), DimensionError);
}

TEST_CASE("grid: weight field invariants") {
  CHECK_THROWS_AS(WeightField(Image(4, 1.0), Image(5, 1.0)), ConfigError);
  Image bad(4, 1.0);
  bad(2, 2) = 0.0;
  CHECK_THROWS_AS(WeightField(bad, Image(4, 1.0)), ConfigError);
  CHECK_NOTHROW(WeightField::uniform(4));
}

TEST_CASE("grad_w: constant image has zero gradient") {
  const auto w = random_weights(8, 3);
  const auto g = grad_w(Image(8, 4.2), w);
  CHECK(norm2(g.x) == 0.0);
  CHECK(norm2(g.y) == 0.0);
}

TEST_CASE("grad_w: 2x2 hand example with zero last column and row") {
  const Image u(2, {0.0, 1.0, 0.0, 1.0});
  const auto g = grad_w(u, WeightField::uniform(2));
  CHECK(g.x == Image(2, {1.0, 0.0, 1.0, 0.0}));
  CHECK(g.y == Image(2, {0.0, 0.0, 0.0, 0.0}));
}

TEST_CASE("grad_w: matches dense difference matrices") {
  const auto w = random_weights(8, 11);
  const auto u = random_image(8, 12);
  const auto d = assemble_dense(w);
  const auto g = grad_w(u, w);
  CHECK((to_vec(g.x) - d.gx * to_vec(u)).norm() < 1e-13);
  CHECK((to_vec(g.y) - d.gy * to_vec(u)).norm() < 1e-13);
}

TEST_CASE("grad_w: dimension mismatch throws") {
  CHECK_THROWS_AS(grad_w(Image(4), WeightField::uniform(5)), DimensionError);
  CHECK_THROWS_AS(div_w(Image(4), Image(5), WeightField::uniform(4)), DimensionError);
  CHECK_THROWS_AS(laplacian_w(Image(4), WeightField::uniform(5)), DimensionError);
}

TEST_CASE("div_w: zero input gives zero image") {
  const auto w = random_weights(6, 5);
  CHECK(norm2(div_w(Image(6), Image(6), w)) == 0.0);
}

TEST_CASE("div_w: is the adjoint of grad_w (100 random trials, 16x16)") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto w = random_weights(16, 100 + t);
    const auto u = random_image(16, 200 + t);
    const auto px = random_image(16, 300 + t);
    const auto py = random_image(16, 400 + t);
    const auto g = grad_w(u, w);
    const double lhs = dot(g.x, px) + dot(g.y, py);
    const double rhs = dot(u, div_w(px, py, w));
    const double scale = norm2(u) * std::sqrt(dot(px, px) + dot(py, py)) * 4.0;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("div_w: unit impulse in gx maps to a +-1 pair") {
  Image gx(5), gy(5);
  gx(2, 1) = 1.0;
  const auto d = div_w(gx, gy, WeightField::uniform(5));
  CHECK(d(2, 1) == -1.0);
  CHECK(d(2, 2) == 1.0);
  double count = 0;
  for (double x : d) count += (x != 0.0);
  CHECK(count == 2);
}

TEST_CASE("laplacian_w: constants are in the null space") {
  CHECK(norm2(laplacian_w(Image(9, -3.0), random_weights(9, 1))) < 1e-13);
}

TEST_CASE("laplacian_w: equals -div_w(grad_w u) and the dense operator") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto w = random_weights(8, 40 + t);
    const auto u = random_image(8, 50 + t);
    const auto g = grad_w(u, w);
    Image ref = div_w(g.x, g.y, w);
    ref *= -1.0;
    const auto lap = laplacian_w(u, w);
    CHECK(rel_err(lap, ref) < 1e-13);
    const auto d = assemble_dense(w);
    CHECK((to_vec(lap) - d.lap * to_vec(u)).norm() <= 1e-13 * norm2(ref));
  }
}

TEST_CASE("laplacian_w: unit weights, interior impulse gives the 5-point pattern") {
  Image u(7);
  u(3, 3) = 1.0;
  const auto l = laplacian_w(u, WeightField::uniform(7));
  CHECK(l(3, 3) == -4.0);
  CHECK(l(2, 3) == 1.0);
  CHECK(l(4, 3) == 1.0);
  CHECK(l(3, 2) == 1.0);
  CHECK(l(3, 4) == 1.0);
  // Weights c scale the pattern by c^2.
  const auto l2 = laplacian_w(u, WeightField::uniform(7, 3.0));
  CHECK(l2(3, 3) == doctest::Approx(-36.0));
  CHECK(l2(3, 4) == doctest::Approx(9.0));
}

TEST_CASE("laplacian_w: negative semidefinite") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto w = random_weights(12, 900 + t);
    const auto u = random_image(12, 950 + t);
    CHECK(dot(u, laplacian_w(u, w)) <= 0.0);
  }
}

TEST_CASE("laplacian_inf_norm: unit and constant weights") {
  CHECK(laplacian_inf_norm(WeightField::uniform(3)) == 8.0);
  CHECK(laplacian_inf_norm(WeightField::uniform(16)) == 8.0);
  CHECK(laplacian_inf_norm(WeightField::uniform(16, 0.5)) == doctest::Approx(8.0 * 0.25));
  CHECK(laplacian_inf_norm(WeightField::uniform(16, 3.0)) == doctest::Approx(72.0));
}

TEST_CASE("laplacian_inf_norm: equals the dense infinity norm") {
  for (std::size_t n : {4u, 16u, 32u}) {
    const auto w = random_weights(n, 77 + n);
    const auto d = assemble_dense(w);
    const double dense = d.lap.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(laplacian_inf_norm(w) == doctest::Approx(dense).epsilon(1e-13));
  }
}

TEST_CASE("grid_io: WTVGRID1 round trip and header layout") {
  const auto u = random_image(5, 9);
  std::stringstream ss;
  write_grid(ss, u);
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == 8 + 4 + 1 + 25 * 8);
  CHECK(bytes.substr(0, 8) == "WTVGRID1");
  CHECK(static_cast<unsigned char>(bytes[8]) == 5);
  CHECK(bytes[9] == 0);
  CHECK(bytes[12] == 0);
  const auto back = read_grid(ss);
  REQUIRE(std::holds_alternative<Image>(back));
  CHECK(std::get<Image>(back) == u);

  ComplexGrid c(3);
  c(1, 2) = {1.5, -2.25};
  std::stringstream cs;
  write_grid(cs, c);
  CHECK(static_cast<unsigned char>(cs.str()[12]) == 1);
  // First payload sample after the 13-byte header is re(0,0) = 0; (1,2) is k = 5.
  double re = 0.0;
  std::memcpy(&re, cs.str().data() + 13 + 5 * 16, 8);
  CHECK(re == 1.5);
  CHECK(std::get<ComplexGrid>(read_grid(cs)) == c);
}

TEST_CASE("grid_io: rejects bad magic, kind and truncation") {
  std::stringstream bad("NOTAGRID\x02\0\0\0\0");
  CHECK_THROWS_AS(read_grid(bad), IoError);
  std::stringstream ss;
  write_grid(ss, Image(2, 1.0));
  std::string s = ss.str();
  std::string kind = s;
  kind[12] = 7;
  std::stringstream k(kind);
  CHECK_THROWS_AS(read_grid(k), IoError);
  std::stringstream trunc(s.substr(0, s.size() - 3));
  CHECK_THROWS_AS(read_grid(trunc), IoError);
}
