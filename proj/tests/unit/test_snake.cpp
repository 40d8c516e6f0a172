#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "bdisk/errors.hpp"
#include "bdisk/snake.hpp"

using namespace bdisk;

namespace {

// Cheap grid for tests that only look at counts or heights.
ExcursionOptions coarse() {
  ExcursionOptions o;
  o.step = 1e-2;
  o.min_points = 4;
  o.max_points = 64;
  return o;
}

// Lattice excursion (a Dyck path) so that equal heights actually occur.
GridPath dyck_path(int half_length, std::mt19937_64& engine) {
  std::vector<double> v{0.0};
  int h = 0, ups = 0, downs = 0;
  while (ups + downs < 2 * half_length) {
    const int ups_left = half_length - ups;
    const bool must_down = ups_left == 0;
    const bool must_up = h == 0;
    bool up = std::bernoulli_distribution(0.5)(engine);
    if (must_down) up = false;
    if (must_up && !must_down) up = true;
    h += up ? 1 : -1;
    (up ? ups : downs)++;
    v.push_back(h);
  }
  while (h > 0) v.push_back(--h);
  GridPath p;
  p.step = 1.0;
  p.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return p;
}

GridPath constant_path(double value, double step, Eigen::Index n) {
  GridPath p;
  p.step = step;
  p.values = Eigen::VectorXd::Constant(n, value);
  return p;
}

}  // namespace

TEST_CASE("excursion lifetimes reach the cutoff and vanish at both ends") {
  RandomStream rng(11, 0);
  ExcursionOptions o;
  o.step = 1e-3;
  for (int i = 0; i < 200; ++i) {
    const GridPath z = sample_excursion_lifetime(0.05, o, rng);
    CHECK(z.values.maxCoeff() >= 0.05);
    CHECK(z.values[0] == 0.0);
    CHECK(z.values[z.size() - 1] == 0.0);
    CHECK(z.values.minCoeff() >= 0.0);
    // Very tall excursions are coarsened to about max_points grid points.
    const double height = z.values.maxCoeff();
    CHECK(z.step <= std::max(1e-3, 2.0 * height * height / (3.0 * o.max_points)));
  }
}

TEST_CASE("half of the excursions above eps also exceed 2 eps") {
  RandomStream rng(12, 0);
  const int n = 10000;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    if (sample_excursion_lifetime(0.1, coarse(), rng).values.maxCoeff() >= 0.2) ++above;
  }
  const double p = double(above) / n;
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("prescribed height is the exact maximum") {
  RandomStream rng(13, 0);
  ExcursionOptions o;
  o.min_points = 100;
  const GridPath z = sample_excursion_with_height(0.3, o, rng);
  CHECK(z.values.maxCoeff() == 0.3);
  CHECK(z.step <= 0.09 / 100 + 1e-15);
}

TEST_CASE("lifetime sampling rejects bad parameters") {
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(sample_excursion_lifetime(0.0, 1e-3, rng), ParameterError);
  CHECK_THROWS_AS(sample_excursion_lifetime(-1.0, 1e-3, rng), ParameterError);
  CHECK_THROWS_AS(sample_excursion_lifetime(0.1, 0.0, rng), ParameterError);
  CHECK_THROWS_AS(sample_excursion_lifetime(0.1, -1e-3, rng), ParameterError);
  ExcursionOptions o;
  o.min_points = 0;
  CHECK_THROWS_AS(sample_excursion_with_height(1.0, o, rng), ParameterError);
}

TEST_CASE("head starts at zero and keeps the snake property on a lattice tree") {
  std::mt19937_64 engine(5);
  RandomStream rng(14, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const GridPath z = dyck_path(200, engine);
    const GridPath w = sample_snake_head(z, rng);
    REQUIRE(w.size() == z.size());
    CHECK(w.values[0] == 0.0);
    CHECK(w.values[w.size() - 1] == 0.0);
    int pairs = 0;
    for (Eigen::Index s = 0; s < z.size(); ++s) {
      double low = z.values[s];
      for (Eigen::Index t = s + 1; t < z.size(); ++t) {
        low = std::min(low, z.values[t]);
        if (low < z.values[s]) break;
        if (z.values[t] == z.values[s]) {
          CHECK(w.values[t] == w.values[s]);
          ++pairs;
        }
      }
    }
    CHECK(pairs > 0);
  }
}

TEST_CASE("head covariance follows the minimum of the lifetime") {
  std::mt19937_64 engine(6);
  const GridPath z = dyck_path(40, engine);
  const Eigen::Index q = z.size() / 4;
  Eigen::Index s = 0, t = 0;
  z.values.segment(q, q).maxCoeff(&s);
  z.values.segment(2 * q, q).maxCoeff(&t);
  s += q;
  t += 2 * q;
  const double zs = z.values[s], zt = z.values[t];
  const double kst = z.values.segment(s, t - s + 1).minCoeff();

  RandomStream rng(15, 0);
  const int n = 10000;
  double ss = 0.0, tt = 0.0, st = 0.0;
  for (int i = 0; i < n; ++i) {
    const GridPath w = sample_snake_head(z, rng);
    ss += w.values[s] * w.values[s];
    tt += w.values[t] * w.values[t];
    st += w.values[s] * w.values[t];
  }
  ss /= n;
  tt /= n;
  st /= n;
  CHECK(std::abs(ss - zs) < 4.0 * zs * std::sqrt(2.0 / n));
  CHECK(std::abs(tt - zt) < 4.0 * zt * std::sqrt(2.0 / n));
  CHECK(std::abs(st - kst) < 4.0 * std::sqrt((zs * zt + kst * kst) / n));
}

TEST_CASE("head rejects invalid lifetimes") {
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(sample_snake_head(constant_path(1.0, 0.1, 5), rng), ParameterError);
  GridPath bad = constant_path(0.0, 0.1, 5);
  bad.values[2] = -0.5;
  CHECK_THROWS_AS(sample_snake_head(bad, rng), ParameterError);
}

TEST_CASE("make_excursion records duration and minimum label") {
  RandomStream rng(16, 0);
  GridPath z = sample_excursion_lifetime(0.1, 1e-3, rng);
  GridPath w = sample_snake_head(z, rng);
  const double low = w.values.minCoeff();
  const SnakeExcursion e = make_excursion(z, w, 0.1);
  CHECK(e.sigma == doctest::Approx(z.step * double(z.size() - 1)));
  CHECK(e.w_star == low);
  CHECK(e.w_star <= 0.0);
  CHECK(e.epsilon == 0.1);
  GridPath shorter = w;
  shorter.values.conservativeResize(w.size() - 1);
  CHECK_THROWS_AS(make_excursion(z, shorter, 0.1), ParameterError);
}

TEST_CASE("tree distance is a pseudo-metric with d(0, t) = zeta(t)") {
  RandomStream rng(17, 0);
  const GridPath z = sample_excursion_lifetime(0.2, 1e-4, rng);
  const Eigen::Index n = z.size();
  std::mt19937_64 engine(7);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index a = pick(engine), b = pick(engine), c = pick(engine);
    CHECK(tree_distance(z, a, a) == 0.0);
    CHECK(tree_distance(z, 0, a) == doctest::Approx(z.values[a]).epsilon(1e-12));
    CHECK(tree_distance(z, a, b) == tree_distance(z, b, a));
    CHECK(tree_distance(z, a, c) <= tree_distance(z, a, b) + tree_distance(z, b, c) + 1e-12);
    CHECK(tree_distance(z, a, b) >= 0.0);
  }
  CHECK_THROWS_AS(tree_distance(z, -1, 0), ParameterError);
  CHECK_THROWS_AS(tree_distance(z, 0, n), ParameterError);
}

TEST_CASE("forest proposals have mean 1/eps and halve when eps doubles") {
  const GridPath bridge = constant_path(1.0, 1.0 / 16, 17);
  const int runs = 10000;
  double sum1 = 0.0, sum2 = 0.0, sq1 = 0.0, sq2 = 0.0;
  for (int i = 0; i < runs; ++i) {
    RandomStream rng(18, static_cast<std::uint64_t>(i));
    const double a = double(sample_poisson_forest(bridge, 0.05, coarse(), rng).proposed);
    const double b = double(sample_poisson_forest(bridge, 0.1, coarse(), rng).proposed);
    sum1 += a;
    sq1 += a * a;
    sum2 += b;
    sq2 += b * b;
  }
  const double m1 = sum1 / runs, m2 = sum2 / runs;
  const double v1 = sq1 / runs - m1 * m1, v2 = sq2 / runs - m2 * m2;
  CHECK(std::abs(m1 - 20.0) < 4.0 * std::sqrt(20.0 / runs));
  CHECK(std::abs(m2 - 10.0) < 4.0 * std::sqrt(10.0 / runs));
  // Delta-method stderr of the ratio of two independent means.
  const double ratio = m2 / m1;
  const double se = ratio * std::sqrt(v1 / (runs * m1 * m1) + v2 / (runs * m2 * m2));
  CHECK(std::abs(ratio - 0.5) < 3.0 * se);
}

TEST_CASE("surviving atoms respect the thinning rule and are sorted") {
  RandomStream rng(19, 0);
  GridPath bridge;
  bridge.step = 1.0 / 64;
  bridge.values.resize(65);
  for (Eigen::Index i = 0; i <= 64; ++i) {
    const double t = bridge.time(i);
    bridge.values[i] = std::sqrt(t * (1.0 - t));
  }
  ExcursionOptions o;
  o.step = 1e-3;
  for (int rep = 0; rep < 20; ++rep) {
    const PoissonForest f = sample_poisson_forest(bridge, 0.02, o, rng);
    CHECK(f.atoms.size() <= f.proposed);
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
      const ForestAtom& a = f.atoms[i];
      const double base = std::sqrt(3.0) * bridge.value_at(a.t);
      CHECK(a.excursion.w_star >= -base);
      CHECK((a.excursion.head.values.array() + base).minCoeff() >= 0.0);
      CHECK(a.t > 0.0);
      CHECK(a.t < 1.0);
      if (i > 0) CHECK(f.atoms[i - 1].t < a.t);
    }
  }
}

TEST_CASE("a zero boundary kills every atom with a negative minimum") {
  // On a grid an excursion can keep all its labels >= 0, so W* = 0 and it
  // survives; that happens less and less as the trees get finer.
  const GridPath zero = constant_path(0.0, 1.0 / 16, 17);
  double fraction[2] = {0.0, 0.0};
  const int points[2] = {8, 256};
  for (int k = 0; k < 2; ++k) {
    ExcursionOptions o;
    o.min_points = points[k];
    o.step = 1e-3;
    std::size_t proposed = 0, survived = 0;
    for (int i = 0; i < 100; ++i) {
      RandomStream rng(20, static_cast<std::uint64_t>(i));
      const PoissonForest f = sample_poisson_forest(zero, 0.05, o, rng);
      for (const ForestAtom& a : f.atoms) CHECK(a.excursion.w_star == 0.0);
      proposed += f.proposed;
      survived += f.atoms.size();
    }
    REQUIRE(proposed > 0);
    fraction[k] = double(survived) / double(proposed);
  }
  CHECK(fraction[1] < fraction[0]);
  CHECK(fraction[1] < 0.05);
}

TEST_CASE("forest sampling is deterministic per stream and checks its inputs") {
  const GridPath bridge = constant_path(2.0, 1.0 / 16, 17);
  RandomStream a(21, 3), b(21, 3);
  const PoissonForest fa = sample_poisson_forest(bridge, 0.05, coarse(), a);
  const PoissonForest fb = sample_poisson_forest(bridge, 0.05, coarse(), b);
  REQUIRE(fa.atoms.size() == fb.atoms.size());
  for (std::size_t i = 0; i < fa.atoms.size(); ++i) {
    CHECK(fa.atoms[i].t == fb.atoms[i].t);
    CHECK(fa.atoms[i].excursion.head.values == fb.atoms[i].excursion.head.values);
  }
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(sample_poisson_forest(bridge, 0.0, coarse(), rng), ParameterError);
  GridPath shifted = bridge;
  shifted.start_time = 0.5;
  CHECK_THROWS_AS(sample_poisson_forest(shifted, 0.05, coarse(), rng), ParameterError);
}

TEST_CASE("excursion export writes a header and one row per grid point") {
  RandomStream rng(22, 0);
  GridPath z = sample_excursion_lifetime(0.1, coarse(), rng);
  GridPath w = sample_snake_head(z, rng);
  const SnakeExcursion e = make_excursion(z, w, 0.1);
  std::ostringstream os;
  write_excursion(os, e);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("excursion sigma=", 0) == 0);
  CHECK(line.find("count=" + std::to_string(z.size())) != std::string::npos);
  Eigen::Index rows = 0;
  double zeta_value = 0.0, head_value = 0.0;
  while (is >> zeta_value >> head_value) {
    CHECK(zeta_value == z.values[rows]);
    CHECK(head_value == w.values[rows]);
    ++rows;
  }
  CHECK(rows == z.size());
}
