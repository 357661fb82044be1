#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "lawless/connection.hpp"
#include "lawless/error.hpp"
#include "lawless/holonomy.hpp"
#include "lawless/lie_groups.hpp"

using namespace lawless;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd pt(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

ConnectionConfig preset(const std::string& name,
                        const std::map<std::string, double>& params = {}) {
  ConnectionConfig cfg;
  cfg.field = make_preset_connection(name, params);
  cfg.group = default_group_for_preset(name, params);
  return cfg;
}

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::MatrixXd rot2(double phi) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- curves

TEST_CASE("square and circle builders produce closed counterclockwise curves") {
  Curve sq = square_curve(pt(0, 0), 1.0);
  REQUIRE(sq.vertices.size() == 5);
  CHECK(sq.vertices[1] == pt(1, 0));
  CHECK(sq.vertices[2] == pt(1, 1));
  CHECK(sq.vertices[3] == pt(0, 1));
  CHECK(is_closed(sq));
  CHECK(curve_length(sq) == doctest::Approx(4.0));

  Curve ci = circle_curve(pt(0, 0), 1.0, 64);
  REQUIRE(ci.vertices.size() == 65);
  CHECK(is_closed(ci, 0.0));  // bitwise closed
  CHECK(curve_length(ci) == doctest::Approx(2 * kPi).epsilon(1e-3));
}

TEST_CASE("reverse and concat bookkeeping") {
  Curve a{{pt(0, 0), pt(1, 0)}};
  Curve b{{pt(1, 0), pt(1, 1)}};
  Curve ab = concat_curves(a, b);
  CHECK(ab.vertices.size() == 3);
  Curve rev = reverse_curve(ab);
  CHECK(rev.vertices.front() == pt(1, 1));
  CHECK(rev.vertices.back() == pt(0, 0));
  CHECK_THROWS_WITH_AS(concat_curves(b, a), doctest::Contains("InvalidArgument"),
                       Error);
}

TEST_CASE("curve files accept a header and comments, reject ragged rows") {
  auto path = (std::filesystem::temp_directory_path() / "lawless_curve.csv").string();
  std::ofstream(path) << "# comment\nx0,x1\n0,0\n1,0\n1,1\n";
  Curve c = curve_from_csv_file(path);
  REQUIRE(c.vertices.size() == 3);
  CHECK(c.vertices[2] == pt(1, 1));
  std::ofstream(path) << "0,0\n1\n";
  CHECK_THROWS_WITH_AS(curve_from_csv_file(path), doctest::Contains("SchemaError"),
                       Error);
  std::remove(path.c_str());
}

// ----------------------------------------------------------- connection_at

TEST_CASE("zero preset evaluates to vanishing connection components") {
  ConnectionConfig cfg = preset("zero");
  GeneratorCatalog cat = build_group(cfg.group);
  auto gamma = connection_at(cfg.field, cat, pt(0.3, -0.7));
  REQUIRE(gamma.size() == 2);
  CHECK(gamma[0].norm() == 0.0);
  CHECK(gamma[1].norm() == 0.0);
}

TEST_CASE("constant abelian potential contracts against -T") {
  ConnectionConfig cfg = preset("u1-constant", {{"c", 1.25}});
  GeneratorCatalog cat = build_group(cfg.group);
  auto gamma = connection_at(cfg.field, cat, pt(0, 0));
  // Gamma_x = -A_x T = -1.25 * (-e) with e = 1
  CHECK(gamma[0](0, 0) == Complex(1.25, 0.0));
  CHECK(gamma[1](0, 0) == Complex(0.0, 0.0));
}

TEST_CASE("flat solder form yields the shift generators") {
  ConnectionConfig cfg = preset("flat-solder");
  GeneratorCatalog cat = build_group(cfg.group);
  auto gamma = connection_at(cfg.field, cat, pt(0.5, 0.5));
  CHECK((gamma[0] - cat.P[0]).norm() < 1e-15);
  CHECK((gamma[1] - cat.P[1]).norm() < 1e-15);
}

TEST_CASE("connection evaluation polices chart and sector compatibility") {
  ConnectionConfig cfg = preset("u1-constant");
  GeneratorCatalog cat = build_group(cfg.group);
  CHECK_THROWS_WITH_AS(connection_at(cfg.field, cat, pt(5.0, 0.0)),
                       doctest::Contains("OutOfChart"), Error);
  // frame components against a gauge-only catalog
  ConnectionConfig solder = preset("flat-solder");
  CHECK_THROWS_WITH_AS(connection_at(solder.field, cat, pt(0, 0)),
                       doctest::Contains("UnsupportedFactor"), Error);
  // gauge table rows vs. generator count
  GeneratorCatalog su2 = build_group({{{FactorType::SU2, 1.0}}});
  CHECK_THROWS_WITH_AS(connection_at(cfg.field, su2, pt(0, 0)),
                       doctest::Contains("DimensionMismatch"), Error);
}

// ----------------------------------------------------------------- transport

TEST_CASE("straight segment through a constant potential is a pure phase") {
  ConnectionConfig cfg = preset("u1-constant", {{"c", 0.8}});
  GeneratorCatalog cat = build_group(cfg.group);
  Curve seg{{pt(-1, 0), pt(1, 0)}};  // length 2 along x
  HolonomyResult r = holonomy(cfg.field, cat, seg, 16);
  Complex expect = std::exp(Complex(0, -1) * 0.8 * 2.0);
  CHECK(std::abs(r.element.matrix(0, 0) - expect) < 1e-10);
  CHECK(r.element.unitarity_drift < 1e-12);
}

TEST_CASE("integrator converges at second order on the vortex circle") {
  ConnectionConfig cfg = preset("u1-solenoid", {{"flux", kPi}, {"core", 0.05}});
  GeneratorCatalog cat = build_group(cfg.group);
  Curve circle = circle_curve(pt(0, 0), 1.0, 64);
  // the phase factor integrates the polyline exactly: use it as reference
  Complex ref = u1_phase_factor(cfg.field, cat, circle);
  std::vector<double> ns = {64, 128, 256, 512};
  std::vector<double> errs;
  for (double n : ns) {
    HolonomyResult r = holonomy(cfg.field, cat, circle, static_cast<long long>(n));
    errs.push_back(std::abs(r.element.matrix(0, 0) - ref));
  }
  double slope = -loglog_slope(ns, errs);
  CHECK(slope >= 1.8);
  CHECK(slope <= 2.2);
  // the step-doubling estimate brackets the real error at these step counts
  HolonomyResult r256 = holonomy(cfg.field, cat, circle, 256);
  double true_err = std::abs(r256.element.matrix(0, 0) - ref);
  CHECK(r256.error_estimate >= 0.3 * true_err);
  CHECK(r256.error_estimate <= 3.0 * true_err);
}

TEST_CASE("reversing a curve inverts the transport") {
  ConnectionConfig cfg = preset("su2-linear");
  GeneratorCatalog cat = build_group(cfg.group);
  Curve path{{pt(0, 0), pt(1, 0.5), pt(0.5, 1.2)}};
  Mat g = holonomy(cfg.field, cat, path, 64).element.matrix;
  Mat gr = holonomy(cfg.field, cat, reverse_curve(path), 64).element.matrix;
  CHECK((gr * g - Mat::Identity(2, 2)).norm() < 1e-8);
  CHECK((g * gr - Mat::Identity(2, 2)).norm() < 1e-8);
}

TEST_CASE("transport over a concatenation composes left-to-right") {
  ConnectionConfig cfg = preset("su2-linear");
  GeneratorCatalog cat = build_group(cfg.group);
  Curve a{{pt(0, 0), pt(1, 0)}};
  Curve b{{pt(1, 0), pt(1, 1)}};
  Mat ga = holonomy(cfg.field, cat, a, 64).element.matrix;
  Mat gb = holonomy(cfg.field, cat, b, 64).element.matrix;
  Mat gab = holonomy(cfg.field, cat, concat_curves(a, b), 128).element.matrix;
  CHECK((gab - gb * ga).norm() < 1e-8);  // later pieces act on the left
}

TEST_CASE("non-commuting potentials order-sensitively transport") {
  ConnectionConfig cfg = preset("su2-constant", {{"cx", 0.8}, {"cy", 0.6}});
  GeneratorCatalog cat = build_group(cfg.group);
  Curve right_up{{pt(0, 0), pt(1, 0), pt(1, 1)}};
  Curve up_right{{pt(0, 0), pt(0, 1), pt(1, 1)}};
  Mat g1 = holonomy(cfg.field, cat, right_up, 128).element.matrix;
  Mat g2 = holonomy(cfg.field, cat, up_right, 128).element.matrix;
  CHECK((g1 - g2).norm() > 0.01);
}

TEST_CASE("unitarity drifts below 1e-9 over ten thousand steps") {
  ConnectionConfig cfg = preset("su2-linear");
  GeneratorCatalog cat = build_group(cfg.group);
  Curve path{{pt(-1, -1), pt(1, 1)}};
  HolonomyResult r = holonomy(cfg.field, cat, path, 10000);
  CHECK(r.element.unitarity_drift <= 1e-9);
}

// ------------------------------------------------------------ field strengths

TEST_CASE("constant potentials carry no field strength") {
  ConnectionConfig cfg = preset("u1-constant");
  GeneratorCatalog cat = build_group(cfg.group);
  FieldStrengths fs = field_strengths(cfg.field, cat, pt(0.2, 0.4));
  CHECK(std::abs(fs.gauge[0][1](0)) < 1e-14);
  CHECK(fs.deriv_error == 0.0);
}

TEST_CASE("uniform-field preset reports F_xy = B antisymmetrically") {
  ConnectionConfig cfg = preset("u1-uniform-field", {{"B", 1.7}});
  GeneratorCatalog cat = build_group(cfg.group);
  FieldStrengths fs = field_strengths(cfg.field, cat, pt(-0.3, 0.9));
  CHECK(fs.gauge[0][1](0) == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(fs.gauge[1][0](0) == doctest::Approx(-1.7).epsilon(1e-14));
}

TEST_CASE("non-abelian field strength includes the quadratic term") {
  ConnectionConfig cfg = preset("su2-linear");
  GeneratorCatalog cat = build_group(cfg.group);
  Eigen::VectorXd x = pt(0.6, -0.4);
  FieldStrengths fs = field_strengths(cfg.field, cat, x);
  // A^0_x = 0.3 + 0.7y, A^1_y = 0.5 + 0.4x:
  //   F^0 = -0.7, F^1 = 0.4, F^2 = A^0_x A^1_y
  CHECK(fs.gauge[0][1](0) == doctest::Approx(-0.7).epsilon(1e-13));
  CHECK(fs.gauge[0][1](1) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(fs.gauge[0][1](2) ==
        doctest::Approx((0.3 + 0.7 * x(1)) * (0.5 + 0.4 * x(0))).epsilon(1e-13));
}

TEST_CASE("flat solder form is torsion-free and curvature-free") {
  ConnectionConfig cfg = preset("flat-solder");
  GeneratorCatalog cat = build_group(cfg.group);
  FieldStrengths fs = field_strengths(cfg.field, cat, pt(0.1, 0.2));
  CHECK(fs.torsion[0][1].norm() < 1e-14);
  CHECK(fs.curvature[0][1].norm() < 1e-14);
}

TEST_CASE("torsion preset: rotation and stretch terms feed the torsion form") {
  ConnectionConfig cfg = preset("torsion-constant", {{"beta", 0.5}, {"w", 0.3}});
  GeneratorCatalog cat = build_group(cfg.group);
  FieldStrengths fs = field_strengths(cfg.field, cat, pt(0, 0));
  // Q^1 = w (omega wedge theta), Q^2 = beta (d theta), R = 0
  CHECK(fs.torsion[0][1](1) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(fs.torsion[0][1](2) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fs.torsion[0][1](0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(fs.curvature[0][1].norm() < 1e-13);
  CHECK((fs.torsion[1][0] + fs.torsion[0][1]).norm() < 1e-14);
}

TEST_CASE("smooth frame preset: curvature picks up the omega commutator") {
  ConnectionConfig cfg = preset("poincare-smooth");
  GeneratorCatalog cat = build_group(cfg.group);
  FieldStrengths fs = field_strengths(cfg.field, cat, pt(0, 0));
  // R^1_2 = d(0.7x)/dx - d(0.4y)/dy - omega_y^1_3 omega_x^3_2
  //       = 0.7 - 0.4 + 0.06
  CHECK(fs.curvature[0][1](1, 2) == doctest::Approx(0.36).epsilon(1e-12));
  CHECK((fs.curvature[1][0] + fs.curvature[0][1]).norm() < 1e-13);
}

TEST_CASE("sampled grid components reproduce analytic field strengths") {
  ConnectionConfig analytic = preset("u1-uniform-field", {{"B", 1.0}});
  GeneratorCatalog cat = build_group(analytic.group);
  ConnectionField sampled = analytic.field;
  // replace A_y = x by its grid-sampled version
  sampled.gauge[0][1] = GridField::sample(
      sampled.box_lo, sampled.box_hi, 41,
      [](const Eigen::VectorXd& x) { return x(0); });
  FieldStrengths fs = field_strengths(sampled, cat, pt(0.13, -0.42));
  CHECK(fs.deriv_error > 0.0);
  CHECK(fs.gauge[0][1](0) == doctest::Approx(1.0).epsilon(1e-10));
  // transport through the sampled field matches the analytic preset
  Curve seg{{pt(-0.5, -0.5), pt(0.5, 0.5)}};
  Mat ga = holonomy(analytic.field, cat, seg, 256).element.matrix;
  Mat gs = holonomy(sampled, cat, seg, 256).element.matrix;
  CHECK((ga - gs).norm() < 1e-8);
}

TEST_CASE("grid fields interpolate their samples and guard the boundary") {
  Eigen::VectorXd lo = pt(-1, -1), hi = pt(1, 1);
  auto g = GridField::sample(lo, hi, 21, [](const Eigen::VectorXd& x) {
    return 2.0 * x(0) - 0.5 * x(1);
  });
  CHECK(g->value(pt(0.33, -0.77)) ==
        doctest::Approx(2.0 * 0.33 + 0.5 * 0.77).epsilon(1e-12));
  Eigen::VectorXd grad = g->grad(pt(0.25, 0.25));
  CHECK(grad(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(grad(1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(g->grad_error() > 0.0);
  CHECK_THROWS_WITH_AS(g->grad(pt(-1.0, 0.0)), doctest::Contains("NonDifferentiable"),
                       Error);
  CHECK_THROWS_WITH_AS(g->value(pt(1.5, 0.0)), doctest::Contains("OutOfChart"), Error);
}

// -------------------------------------------------------------- small loops

TEST_CASE("small loops in a flat connection stay at the identity") {
  ConnectionConfig cfg = preset("zero");
  GeneratorCatalog cat = build_group(cfg.group);
  SmallLoopReport rep = small_loop_check(cfg.field, cat, pt(0, 0), 0, 1, 0.1);
  CHECK(rep.residual < 1e-12);
}

TEST_CASE("uniform-field loop residual shrinks at fourth order") {
  ConnectionConfig cfg = preset("u1-uniform-field", {{"B", 1.0}});
  GeneratorCatalog cat = build_group(cfg.group);
  double r02 = small_loop_check(cfg.field, cat, pt(0.4, 0.1), 0, 1, 0.2).residual;
  double r01 = small_loop_check(cfg.field, cat, pt(0.4, 0.1), 0, 1, 0.1).residual;
  CHECK(r02 / r01 > 7.0);  // constant F: O(a^4), ratio 16
  CHECK(r02 / r01 < 20.0);
}

TEST_CASE("loop residual order beats 2.7 across the three sectors") {
  const std::vector<double> sides = {0.1, 0.05, 0.025};
  struct Case {
    std::string preset_name;
    std::map<std::string, double> params;
    Eigen::VectorXd base;
  };
  std::vector<Case> cases = {
      {"u1-uniform-field", {{"B", 1.0}}, pt(0.4, 0.1)},
      {"su2-linear", {}, pt(0.3, -0.2)},
      {"torsion-constant", {{"beta", 0.5}, {"w", 0.3}}, pt(0.1, -0.3)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.preset_name);
    ConnectionConfig cfg = preset(c.preset_name, c.params);
    GeneratorCatalog cat = build_group(cfg.group);
    std::vector<double> residuals;
    for (double a : sides)
      residuals.push_back(
          small_loop_check(cfg.field, cat, c.base, 0, 1, a, 1024).residual);
    CHECK(loglog_slope(sides, residuals) >= 2.7);
  }
}

// ----------------------------------------------------------- gauge covariance

TEST_CASE("the identity transform leaves transport untouched") {
  ConnectionConfig cfg = preset("su2-constant");
  GeneratorCatalog cat = build_group(cfg.group);
  GaugeTransform id{Mat::Zero(2, 2), PolynomialField::constant(2, 1.0)};
  Curve path{{pt(0, 0), pt(1, 0.5)}};
  CHECK(gauge_covariance_check(cfg.field, cat, id, path, 64) < 1e-12);
}

TEST_CASE("position-dependent frame change conjugates the transport") {
  ConnectionConfig cfg = preset("su2-constant", {{"cx", 0.8}, {"cy", 0.6}});
  GeneratorCatalog cat = build_group(cfg.group);
  Mat K = Complex(0, 1) * (0.4 * cat.T[0] + 0.3 * cat.T[1] + 0.5 * cat.T[2]);
  Eigen::VectorXd slope(2);
  slope << 0.3, -0.2;
  GaugeTransform tr{K, std::make_shared<PolynomialField>(0.1, slope,
                                                         Eigen::MatrixXd::Zero(2, 2))};
  Curve path{{pt(0, 0), pt(1, 0.5), pt(0.5, 1.2)}};
  CHECK(gauge_covariance_check(cfg.field, cat, tr, path, 4096) <= 1e-6);
}

TEST_CASE("abelian potential shifts by a gradient leave closed loops alone") {
  ConnectionConfig cfg = preset("u1-uniform-field", {{"B", 1.0}});
  GeneratorCatalog cat = build_group(cfg.group);
  // chi = 0.2 x^2 - 0.3 xy + 0.1 y^2; K = iT turns the transform into
  // A -> A + grad(chi)
  Eigen::MatrixXd c2(2, 2);
  c2 << 0.2, -0.15, -0.15, 0.1;
  GaugeTransform tr{Complex(0, 1) * cat.T[0],
                    std::make_shared<PolynomialField>(0.0, Eigen::VectorXd::Zero(2),
                                                      c2)};
  Curve loop = square_curve(pt(-0.5, -0.5), 1.0);
  CHECK(gauge_covariance_check(cfg.field, cat, tr, loop, 256) <= 1e-9);
}

TEST_CASE("transform generators must match the representation") {
  ConnectionConfig cfg = preset("su2-constant");
  GeneratorCatalog cat = build_group(cfg.group);
  GaugeTransform bad{Mat::Zero(3, 3), PolynomialField::constant(2, 0.0)};
  Curve path{{pt(0, 0), pt(1, 0)}};
  CHECK_THROWS_WITH_AS(gauge_covariance_check(cfg.field, cat, bad, path, 8),
                       doctest::Contains("DimensionMismatch"), Error);
}

// ------------------------------------------------------------- phase factor

TEST_CASE("unit-winding vortex at half flux quantum flips the phase") {
  ConnectionConfig cfg = preset("u1-solenoid", {{"flux", kPi}, {"core", 0.05}});
  GeneratorCatalog cat = build_group(cfg.group);
  Curve circle = circle_curve(pt(0, 0), 1.0, 64);
  Complex phase = u1_phase_factor(cfg.field, cat, circle);
  CHECK(std::abs(phase - Complex(-1.0, 0.0)) <= 1e-9);
  // transport agrees once the integrator converges
  HolonomyResult r = holonomy(cfg.field, cat, circle, 2048);
  CHECK(std::abs(r.element.matrix(0, 0) - phase) < 1e-5);
}

TEST_CASE("full flux quantum is invisible") {
  ConnectionConfig cfg = preset("u1-solenoid", {{"flux", 2 * kPi}, {"core", 0.05}});
  GeneratorCatalog cat = build_group(cfg.group);
  Complex phase = u1_phase_factor(cfg.field, cat, circle_curve(pt(0, 0), 1.0, 64));
  CHECK(std::abs(phase - Complex(1.0, 0.0)) <= 1e-9);
}

TEST_CASE("loops that do not enclose the vortex see no phase") {
  ConnectionConfig cfg = preset("u1-solenoid", {{"flux", kPi}, {"core", 0.05}});
  GeneratorCatalog cat = build_group(cfg.group);
  Complex phase = u1_phase_factor(cfg.field, cat, square_curve(pt(0.3, 0.2), 0.5));
  CHECK(std::abs(phase - Complex(1.0, 0.0)) <= 1e-9);
}

TEST_CASE("phase factor input guards") {
  ConnectionConfig cfg = preset("u1-solenoid", {{"flux", kPi}, {"core", 0.05}});
  GeneratorCatalog cat = build_group(cfg.group);
  Curve open{{pt(1, 0), pt(0, 1)}};
  CHECK_THROWS_WITH_AS(u1_phase_factor(cfg.field, cat, open),
                       doctest::Contains("NotClosed"), Error);
  // a square straddling the vortex still encloses it once
  Complex enclosed = u1_phase_factor(cfg.field, cat, square_curve(pt(-0.5, -0.5), 1.0));
  CHECK(std::abs(enclosed - Complex(-1.0, 0.0)) <= 1e-9);
  // edge slicing through the excluded core
  Curve through{{pt(-1, -1), pt(1, 1), pt(-1, 1), pt(-1, -1)}};
  CHECK_THROWS_WITH_AS(u1_phase_factor(cfg.field, cat, through),
                       doctest::Contains("OutOfChart"), Error);
  // non-abelian input
  ConnectionConfig su2 = preset("su2-constant");
  GeneratorCatalog su2cat = build_group(su2.group);
  CHECK_THROWS_WITH_AS(
      u1_phase_factor(su2.field, su2cat, square_curve(pt(0, 0), 0.5)),
      doctest::Contains("UnsupportedFactor"), Error);
  // a potential-free field has unit phase
  ConnectionConfig zero = preset("zero");
  Complex one = u1_phase_factor(zero.field, build_group(zero.group),
                                square_curve(pt(0, 0), 0.5));
  CHECK(one == Complex(1.0, 0.0));
}

TEST_CASE("closed loop through a constant potential is phase-free") {
  ConnectionConfig cfg = preset("u1-constant", {{"c", 0.9}});
  GeneratorCatalog cat = build_group(cfg.group);
  Complex phase = u1_phase_factor(cfg.field, cat, square_curve(pt(-0.2, -0.2), 0.7));
  CHECK(std::abs(phase - Complex(1.0, 0.0)) <= 1e-12);
}

// --------------------------------------------------------- complex structure

TEST_CASE("planar rotations decompose onto a single unit-speed line") {
  Eigen::MatrixXd X(2, 2);
  X << 0, -1, 1, 0;
  std::vector<RotationSample> samples;
  for (double phi : {0.37, 0.11, -0.53}) samples.push_back({phi, rot2(phi)});
  auto speeds = complex_structure_decompose(samples, X);
  REQUIRE(speeds.size() == 1);
  CHECK(speeds[0] == 1);
}

TEST_CASE("two oriented planes decompose onto speeds one and three") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 4);
  X.block(0, 0, 2, 2) << 0, -1, 1, 0;
  X.block(2, 2, 2, 2) << 0, -1, 1, 0;
  std::vector<RotationSample> samples;
  for (double phi : {0.21, 0.37}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.block(0, 0, 2, 2) = rot2(phi);
    m.block(2, 2, 2, 2) = rot2(3 * phi);
    samples.push_back({phi, m});
  }
  auto speeds = complex_structure_decompose(samples, X);
  REQUIRE(speeds.size() == 2);
  CHECK(speeds[0] == 1);
  CHECK(speeds[1] == 3);
}

TEST_CASE("a counter-oriented plane shows up with a negative speed") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 4);
  X.block(0, 0, 2, 2) << 0, -1, 1, 0;
  X.block(2, 2, 2, 2) << 0, -1, 1, 0;
  std::vector<RotationSample> samples;
  for (double phi : {0.21, 0.37}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.block(0, 0, 2, 2) = rot2(phi);
    m.block(2, 2, 2, 2) = rot2(-2 * phi);
    samples.push_back({phi, m});
  }
  auto speeds = complex_structure_decompose(samples, X);
  REQUIRE(speeds.size() == 2);
  CHECK(speeds[0] == -2);
  CHECK(speeds[1] == 1);
}

TEST_CASE("structure and commutation preconditions are enforced") {
  Eigen::MatrixXd notX(2, 2);
  notX << 0, 1, 1, 0;  // squares to +I
  std::vector<RotationSample> samples = {{0.3, rot2(0.3)}};
  CHECK_THROWS_WITH_AS(complex_structure_decompose(samples, notX),
                       doctest::Contains("NotComplexStructure"), Error);

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 4);
  X.block(0, 0, 2, 2) << 0, -1, 1, 0;
  X.block(2, 2, 2, 2) << 0, -1, 1, 0;
  Eigen::MatrixXd mixer = Eigen::MatrixXd::Identity(4, 4);
  double c = std::cos(0.3), s = std::sin(0.3);
  mixer(0, 0) = c;
  mixer(0, 2) = -s;
  mixer(2, 0) = s;
  mixer(2, 2) = c;  // rotation in the (0, 2) plane straddles X's blocks
  CHECK_THROWS_WITH_AS(complex_structure_decompose({{0.3, mixer}}, X),
                       doctest::Contains("DoesNotCommute"), Error);

  std::vector<RotationSample> idle = {{0.0, Eigen::MatrixXd::Identity(2, 2)}};
  Eigen::MatrixXd X2(2, 2);
  X2 << 0, -1, 1, 0;
  CHECK_THROWS_WITH_AS(complex_structure_decompose(idle, X2),
                       doctest::Contains("InvalidArgument"), Error);
}

// ---------------------------------------------------------------- transport
// of solder forms, and the JSON loader

TEST_CASE("flat solder transport accumulates the chart displacement") {
  ConnectionConfig cfg = preset("flat-solder");
  GeneratorCatalog cat = build_group(cfg.group);
  Curve path{{pt(0, 0), pt(1, 0), pt(1, 1)}};
  Mat g = holonomy(cfg.field, cat, path, 64).element.matrix;
  CHECK((g.block(0, 0, 4, 4) - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK(std::abs(g(0, 4) - Complex(-1.0, 0.0)) < 1e-12);  // exp(-i P dx): -dx
  CHECK(std::abs(g(1, 4) - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(g(4, 4) == Complex(1.0, 0.0));  // snapped affine bottom row
}

TEST_CASE("connection configs load from JSON") {
  ConnectionConfig cfg = connection_config_from_json_text(R"({
    "preset": "u1-solenoid",
    "parameters": {"flux": 3.141592653589793, "core": 0.05}
  })");
  CHECK(cfg.field.preset == "u1-solenoid");
  REQUIRE(cfg.group.factors.size() == 1);
  CHECK(cfg.group.factors[0].type == FactorType::U1);
  GeneratorCatalog cat = build_group(cfg.group);
  Complex phase = u1_phase_factor(cfg.field, cat, circle_curve(pt(0, 0), 1.0, 64));
  CHECK(std::abs(phase - Complex(-1.0, 0.0)) <= 1e-9);

  CHECK_THROWS_WITH_AS(connection_config_from_json_text("{not json"),
                       doctest::Contains("SchemaError"), Error);
  CHECK_THROWS_WITH_AS(connection_config_from_json_text(R"({"par": 1})"),
                       doctest::Contains("SchemaError"), Error);
}
