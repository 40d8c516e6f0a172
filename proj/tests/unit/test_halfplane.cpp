#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bdisk/bessel.hpp"
#include "bdisk/errors.hpp"
#include "bdisk/halfplane.hpp"

using namespace bdisk;

namespace {

HalfPlaneOptions small_options() {
  HalfPlaneOptions o;
  o.step = 1.0 / 512;
  o.epsilon = 0.02;
  o.excursion.step = 1e-3;
  o.excursion.min_points = 16;
  return o;
}

HalfPlaneComplex small_halfplane(std::uint64_t id, double window = 1.0) {
  RandomStream rng(41, id);
  return build_halfplane(window, small_options(), rng);
}

// Root plus random entries attached inside [-eta, eta].
std::vector<EntryIndex> window_points(const HalfPlaneComplex& h, double eta, std::size_t count,
                                      std::mt19937_64& engine) {
  const ContourSequence& c = h.contour;
  std::vector<EntryIndex> pts{c.root_index};
  std::uniform_int_distribution<EntryIndex> pick(0, c.size() - 1);
  while (pts.size() < count) {
    const EntryIndex e = pick(engine);
    if (std::abs(c.position[e]) <= eta && std::find(pts.begin(), pts.end(), e) == pts.end()) {
      pts.push_back(e);
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("the two-sided boundary starts at zero and labels are nonnegative") {
  for (std::uint64_t id = 0; id < 5; ++id) {
    const HalfPlaneComplex h = small_halfplane(id);
    const ContourSequence& c = h.contour;
    CHECK(h.window == 1.0);
    CHECK(h.boundary.start_time == -1.0);
    CHECK(h.boundary.value_at(0.0) == 0.0);
    CHECK(c.labels[c.root_index] == 0.0);
    CHECK(c.position[c.root_index] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.labels.minCoeff() >= 0.0);
    for (const ForestAtom& a : h.atoms) {
      CHECK(a.excursion.w_star > -std::sqrt(3.0) * h.boundary.value_at(a.t));
      CHECK(std::abs(a.t) < h.window);
    }
  }
}

TEST_CASE("without atoms the labels are sqrt(3) X") {
  RandomStream rng(42, 0);
  const GridPath right = sample_bessel_process(5, 0.5, 1.0 / 64, rng);
  GridPath x;
  x.start_time = -0.5;
  x.step = right.step;
  x.values.resize(2 * right.size() - 1);
  for (Eigen::Index i = 0; i < right.size(); ++i) {
    x.values[right.size() - 1 - i] = 0.5 * right.values[i];
    x.values[right.size() - 1 + i] = right.values[i];
  }
  const HalfPlaneComplex h = assemble_halfplane(x, {});
  REQUIRE(h.contour.size() == x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    CHECK(h.contour.labels[i] == doctest::Approx(std::sqrt(3.0) * x.values[i]).epsilon(1e-15));
  }
  CHECK(h.contour.root_index == right.size() - 1);
  CHECK(omega_eta(h, 0.5) == std::numeric_limits<double>::infinity());
}

TEST_CASE("metric sandwich and root identity on the line") {
  std::mt19937_64 engine(1);
  for (std::uint64_t id = 0; id < 3; ++id) {
    const HalfPlaneComplex h = small_halfplane(10 + id);
    const ContourSequence& c = h.contour;
    const std::vector<EntryIndex> pts = window_points(h, h.window, 120, engine);
    const MetricApprox m = metric_infty(h, pts);
    const Eigen::Index root = m.local_index(c.root_index);
    for (Eigen::Index i = 0; i < m.dist.rows(); ++i) {
      const double li = c.labels[pts[i]];
      CHECK(std::abs(m.dist(root, i) - li) <= 1e-9);
      CHECK(d_circ_infty(h, pts[i], pts[i]) == 0.0);
      for (Eigen::Index j = 0; j < m.dist.rows(); ++j) {
        const double lj = c.labels[pts[j]];
        CHECK(m.dist(i, j) >= std::abs(li - lj) - 1e-12);
        CHECK(m.dist(i, j) <= d_circ_infty(h, pts[i], pts[j]) + 1e-12);
        CHECK(d_circ_infty(h, pts[i], pts[j]) <= li + lj + 1e-12);
      }
    }
  }
}

TEST_CASE("omega_eta is nondecreasing in eta") {
  const HalfPlaneComplex h = small_halfplane(20);
  double previous = 0.0;
  for (double eta = 0.05; eta < 1.0; eta += 0.05) {
    const double w = omega_eta(h, eta);
    CHECK(w >= previous);
    CHECK(w > 0.0);
    previous = w;
  }
}

TEST_CASE("truncation at the full window changes nothing") {
  std::mt19937_64 engine(2);
  const HalfPlaneComplex h = small_halfplane(21);
  const std::vector<EntryIndex> pts = window_points(h, h.window, 80, engine);
  const MetricApprox full = metric_infty(h, pts);
  const MetricApprox cut = truncated_metric(h, h.window, pts);
  CHECK(cut.points == full.points);
  CHECK((cut.dist - full.dist).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated and full metrics agree on low-label points") {
  std::mt19937_64 engine(3);
  int nonempty = 0;
  for (std::uint64_t id = 0; id < 10; ++id) {
    const HalfPlaneComplex h = small_halfplane(30 + id);
    const double eta = h.window / 4;
    const double omega = omega_eta(h, eta);
    const ContourSequence& c = h.contour;
    std::vector<EntryIndex> pts = window_points(h, eta, 100, engine);
    for (EntryIndex e = 0; e < c.size(); ++e) {
      if (std::abs(c.position[e]) <= eta && c.labels[e] <= omega / 3 && pts.size() < 400 &&
          std::find(pts.begin(), pts.end(), e) == pts.end()) {
        pts.push_back(e);
      }
    }
    const MetricApprox full = metric_infty(h, pts);
    const MetricApprox cut = truncated_metric(h, eta, pts);
    std::vector<Eigen::Index> low;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (c.labels[pts[i]] <= omega / 3) low.push_back(Eigen::Index(i));
    }
    nonempty += low.size() > 1;
    for (Eigen::Index i : low) {
      for (Eigen::Index j : low) CHECK(std::abs(cut.dist(i, j) - full.dist(i, j)) <= 1e-9);
    }
    // Same chain points, and every truncated interval is a sub-interval, so
    // truncated edges and distances can only be shorter.
    for (Eigen::Index i = 0; i < cut.dist.rows(); ++i) {
      for (Eigen::Index j = 0; j < cut.dist.rows(); ++j) {
        CHECK(cut.dist(i, j) <= full.dist(i, j) + 1e-12);
      }
    }
  }
  // The root is always in the set; count instances with another point too.
  CHECK(nonempty >= 5);
}

TEST_CASE("half-plane inputs are validated") {
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(build_halfplane(0.0, small_options(), rng), ParameterError);
  HalfPlaneOptions bad = small_options();
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(build_halfplane(1.0, bad, rng), ParameterError);
  bad = small_options();
  bad.step = -1.0;
  CHECK_THROWS_AS(build_halfplane(1.0, bad, rng), ParameterError);

  GridPath lopsided;
  lopsided.start_time = -0.5;
  lopsided.step = 0.25;
  lopsided.values = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(assemble_halfplane(lopsided, {}), ParameterError);

  const HalfPlaneComplex h = small_halfplane(50);
  std::vector<EntryIndex> pts{h.contour.root_index};
  CHECK_THROWS_AS(truncated_metric(h, 0.0, pts), ParameterError);
  CHECK_THROWS_AS(truncated_metric(h, 2.0 * h.window, pts), ParameterError);
  pts.push_back(0);  // attached at -T
  CHECK_THROWS_AS(truncated_metric(h, 0.25, pts), ParameterError);
}

TEST_CASE("half-plane export carries the window") {
  const HalfPlaneComplex h = small_halfplane(60);
  std::ostringstream os;
  write_halfplane(os, h);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "bdisk-halfplane 1");
  std::getline(is, line);
  CHECK(line == "window T=1");
  std::getline(is, line);
  CHECK(line.rfind("boundary start=-1 ", 0) == 0);
  CHECK(os.str().find("contour " + std::to_string(h.contour.size()) + " root=" +
                      std::to_string(h.contour.root_index)) != std::string::npos);
}
