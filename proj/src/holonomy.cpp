#include "lawless/holonomy.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "lawless/error.hpp"
#include "lawless/report.hpp"

namespace lawless {

namespace {

constexpr Complex kI(0.0, 1.0);

void validate_curve(const Curve& c) {
  if (c.vertices.size() < 2) fail("InvalidArgument", "curve needs at least two vertices");
  const Eigen::Index d = c.vertices.front().size();
  if (d < 1) fail("InvalidArgument", "curve vertices need at least one coordinate");
  for (const auto& v : c.vertices) {
    if (v.size() != d) fail("DimensionMismatch", "curve vertices have mixed dimensions");
    if (!v.allFinite()) fail("InvalidArgument", "curve vertex is not finite");
  }
}

// shortest distance from the segment p0..p1 to the origin of the (0,1) plane
double segment_core_distance(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1) {
  const Eigen::Vector2d d = p1 - p0;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? -p0.dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p0 + t * d).norm();
}

}  // namespace

// ------------------------------------------------------------------- curves

Curve curve_from_csv_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Curve curve;
  std::istringstream lines(text);
  std::string line;
  Eigen::Index width = -1;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<double> row;
    std::istringstream cells(trimmed);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) { numeric = false; break; }
        row.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (curve.vertices.empty()) continue;  // header line
      fail("SchemaError", "non-numeric cell in curve file " + path);
    }
    if (row.empty()) continue;
    if (width < 0) width = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != width)
      fail("SchemaError", "ragged vertex rows in curve file " + path);
    Eigen::VectorXd v(width);
    for (Eigen::Index i = 0; i < width; ++i) v(i) = row[static_cast<std::size_t>(i)];
    curve.vertices.push_back(std::move(v));
  }
  if (curve.vertices.size() < 2)
    fail("SchemaError", "curve file " + path + " holds fewer than two vertices");
  validate_curve(curve);
  return curve;
}

Curve square_curve(const Eigen::VectorXd& base, double side, int mu, int nu) {
  if (!(side > 0.0)) fail("InvalidArgument", "square side must be positive");
  if (mu == nu || mu < 0 || nu < 0 || mu >= base.size() || nu >= base.size())
    fail("InvalidArgument", "square plane axes must be distinct chart directions");
  Curve c;
  Eigen::VectorXd v = base;
  c.vertices.push_back(v);
  v(mu) += side;
  c.vertices.push_back(v);
  v(nu) += side;
  c.vertices.push_back(v);
  v(mu) -= side;
  c.vertices.push_back(v);
  c.vertices.push_back(base);
  return c;
}

Curve circle_curve(const Eigen::VectorXd& center, double radius, int segments) {
  if (!(radius > 0.0)) fail("InvalidArgument", "radius must be positive");
  if (segments < 3) fail("InvalidArgument", "need at least three segments");
  if (center.size() < 2) fail("InvalidArgument", "circle lives in the (0,1) plane");
  Curve c;
  for (int j = 0; j <= segments; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / segments;
    Eigen::VectorXd v = center;
    v(0) += radius * std::cos(phi);
    v(1) += radius * std::sin(phi);
    if (j == segments) v = c.vertices.front();  // bitwise-closed
    c.vertices.push_back(std::move(v));
  }
  return c;
}

Curve reverse_curve(const Curve& c) {
  validate_curve(c);
  Curve out;
  out.vertices.assign(c.vertices.rbegin(), c.vertices.rend());
  return out;
}

Curve concat_curves(const Curve& a, const Curve& b) {
  validate_curve(a);
  validate_curve(b);
  if (a.vertices.front().size() != b.vertices.front().size())
    fail("DimensionMismatch", "curves live in different chart dimensions");
  if ((a.vertices.back() - b.vertices.front()).norm() > 1e-9)
    fail("InvalidArgument", "second curve does not start where the first ends");
  Curve out = a;
  out.vertices.insert(out.vertices.end(), b.vertices.begin() + 1,
                      b.vertices.end());
  return out;
}

bool is_closed(const Curve& c, double tol) {
  validate_curve(c);
  return (c.vertices.front() - c.vertices.back()).norm() <= tol;
}

double curve_length(const Curve& c) {
  validate_curve(c);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i)
    total += (c.vertices[i + 1] - c.vertices[i]).norm();
  return total;
}

// ---------------------------------------------------------------- transport

Mat holonomy_product(const ConnectionEvaluator& eval, const Curve& curve,
                     long long steps) {
  validate_curve(curve);
  if (steps < 1) fail("InvalidArgument", "need at least one integration step");
  const double total = curve_length(curve);
  Mat g;
  for (std::size_t e = 0; e + 1 < curve.vertices.size(); ++e) {
    const Eigen::VectorXd& v0 = curve.vertices[e];
    const Eigen::VectorXd& v1 = curve.vertices[e + 1];
    const double len = (v1 - v0).norm();
    long long n = 1;
    if (total > 0.0)
      n = std::max<long long>(1, std::llround(static_cast<double>(steps) * len / total));
    const Eigen::VectorXd dx = (v1 - v0) / static_cast<double>(n);
    for (long long s = 0; s < n; ++s) {
      const Eigen::VectorXd xm =
          v0 + (static_cast<double>(s) + 0.5) * dx;
      const std::vector<Mat> gamma = eval(xm);
      if (gamma.empty()) fail("InvalidArgument", "connection evaluator returned nothing");
      Mat m = Mat::Zero(gamma.front().rows(), gamma.front().cols());
      for (std::size_t muu = 0; muu < gamma.size() && muu < static_cast<std::size_t>(dx.size()); ++muu)
        m += gamma[muu] * dx(static_cast<Eigen::Index>(muu));
      Mat seg = Mat((-kI * m).exp());
      g = (g.size() == 0) ? seg : Mat(seg * g);
    }
  }
  if (g.size() == 0) fail("InvalidArgument", "curve produced no segments");
  return g;
}

HolonomyResult holonomy(const ConnectionField& field,
                        const GeneratorCatalog& cat, const Curve& curve,
                        long long steps) {
  ConnectionEvaluator eval = [&](const Eigen::VectorXd& x) {
    return connection_at(field, cat, x);
  };
  Mat g_n = holonomy_product(eval, curve, steps);
  Mat g_2n = holonomy_product(eval, curve, 2 * steps);
  HolonomyResult result;
  result.element = make_element(cat, g_n);
  result.error_estimate = (4.0 / 3.0) * (g_2n - g_n).norm();
  return result;
}

SmallLoopReport small_loop_check(const ConnectionField& field,
                                 const GeneratorCatalog& cat,
                                 const Eigen::VectorXd& x, int mu, int nu,
                                 double side, long long steps) {
  if (mu == nu || mu < 0 || nu < 0 || mu >= field.chart_dim || nu >= field.chart_dim)
    fail("InvalidArgument", "loop plane axes must be distinct chart directions");
  const Curve loop = square_curve(x, side, mu, nu);
  for (const auto& v : loop.vertices)
    if (!field.in_chart(v)) fail("OutOfChart", "loop does not fit the chart box");

  SmallLoopReport report;
  report.loop = holonomy(field, cat, loop, steps).element;

  const FieldStrengths fs = field_strengths(field, cat, x);
  const double area = side * side;
  // Linearized counterclockwise transport. Orientation factors are pinned by
  // closed-form oracles: the gauge block exponentiates -i(-A.T)dx, giving
  // +i area F.T, while the frame block enters the connection with the
  // opposite sign and picks up -i area (Q.P + 1/2 R.M).
  Mat predicted = Mat::Identity(cat.dim, cat.dim);
  const auto um = static_cast<std::size_t>(mu);
  const auto un = static_cast<std::size_t>(nu);
  for (std::size_t k = 0; k < cat.T.size(); ++k)
    predicted += kI * area * fs.gauge[um][un](static_cast<Eigen::Index>(k)) * cat.T[k];
  if (cat.has_translations)
    for (int a = 0; a < 4; ++a)
      predicted -= kI * area * fs.torsion[um][un](a) * cat.P[static_cast<std::size_t>(a)];
  if (cat.has_rotations)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const double r = fs.curvature[um][un](a, b);
        if (r != 0.0)
          predicted -= kI * area * 0.5 * r * cat.frame_generator_mixed(b, a);
      }
  report.predicted = predicted;
  report.residual = (report.loop.matrix - predicted).norm();
  return report;
}

double gauge_covariance_check(const ConnectionField& field,
                              const GeneratorCatalog& cat,
                              const GaugeTransform& transform,
                              const Curve& curve, long long steps) {
  validate_curve(curve);
  if (transform.K.rows() != static_cast<Eigen::Index>(cat.dim) ||
      transform.K.cols() != static_cast<Eigen::Index>(cat.dim))
    fail("DimensionMismatch", "transform generator does not match the representation");
  ConnectionEvaluator plain = [&](const Eigen::VectorXd& x) {
    return connection_at(field, cat, x);
  };
  // h Gamma h^-1 - i h d(h^-1) collapses to h Gamma h^-1 + i (df) K because
  // the profile multiplies a fixed algebra element
  ConnectionEvaluator transformed = [&](const Eigen::VectorXd& x) {
    std::vector<Mat> gamma = connection_at(field, cat, x);
    const Mat hx = transform.h(x);
    const Mat hx_inv = transform.h_inverse(x);
    const Eigen::VectorXd df = transform.f->grad(x);
    for (std::size_t m = 0; m < gamma.size(); ++m)
      gamma[m] = hx * gamma[m] * hx_inv +
                 kI * df(static_cast<Eigen::Index>(m)) * transform.K;
    return gamma;
  };
  const Mat g = holonomy_product(plain, curve, steps);
  const Mat g_prime = holonomy_product(transformed, curve, steps);
  const Mat expected = transform.h(curve.vertices.back()) * g *
                       transform.h_inverse(curve.vertices.front());
  return (g_prime - expected).norm();
}

// ------------------------------------------------------------- phase factor

namespace {

struct VortexRow {
  const SolenoidComponentField* ax = nullptr;
  const SolenoidComponentField* ay = nullptr;
};

// line integral of one polynomial (or sampled) row along an edge via Simpson,
// exact for quadratic components on a straight segment
double simpson_edge(const std::vector<ScalarFieldPtr>& row,
                    const Eigen::VectorXd& v0, const Eigen::VectorXd& v1,
                    int panels) {
  const Eigen::VectorXd d = v1 - v0;
  auto integrand = [&](double t) {
    const Eigen::VectorXd x = v0 + t * d;
    double acc = 0.0;
    for (std::size_t muu = 0; muu < row.size(); ++muu)
      if (row[muu]) acc += row[muu]->value(x) * d(static_cast<Eigen::Index>(muu));
    return acc;
  };
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    total += (b - a) / 6.0 *
             (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
  }
  return total;
}

}  // namespace

Complex u1_phase_factor(const ConnectionField& field,
                        const GeneratorCatalog& cat, const Curve& curve) {
  validate_curve(curve);
  if (!is_closed(curve, 1e-12))
    fail("NotClosed", "phase factor needs a closed curve");
  for (const auto& v : curve.vertices)
    if (!field.in_chart(v)) fail("OutOfChart", "curve leaves the chart box");

  // locate the single abelian potential row
  int row_index = -1;
  for (std::size_t k = 0; k < field.gauge.size(); ++k)
    for (const auto& p : field.gauge[k])
      if (p) {
        if (row_index >= 0 && row_index != static_cast<int>(k))
          fail("UnsupportedFactor", "phase factor needs a single potential row");
        row_index = static_cast<int>(k);
      }
  if (row_index < 0) return Complex(1.0, 0.0);  // zero potential

  // map the row to its factor to read the coupling
  double charge = 0.0;
  bool found = false;
  std::size_t gauge_cursor = 0;
  for (const auto& fac : cat.spec.factors) {
    std::size_t count = 0;
    if (fac.type == FactorType::U1) count = 1;
    else if (fac.type == FactorType::SU2) count = 3;
    else if (fac.type == FactorType::SU3) count = 8;
    if (count && static_cast<std::size_t>(row_index) >= gauge_cursor &&
        static_cast<std::size_t>(row_index) < gauge_cursor + count) {
      if (fac.type != FactorType::U1)
        fail("UnsupportedFactor", "phase factor is abelian-only");
      charge = fac.charge;
      found = true;
    }
    gauge_cursor += count;
  }
  if (!found) fail("DimensionMismatch", "potential row has no matching factor");

  const auto& row = field.gauge[static_cast<std::size_t>(row_index)];

  // vortex rows integrate exactly as subtended angles
  VortexRow vortex;
  bool any_vortex = false, any_grid = false;
  for (std::size_t muu = 0; muu < row.size(); ++muu) {
    if (!row[muu]) continue;
    if (auto* s = dynamic_cast<const SolenoidComponentField*>(row[muu].get())) {
      any_vortex = true;
      if (muu == 0) vortex.ax = s;
      if (muu == 1) vortex.ay = s;
    } else if (dynamic_cast<const GridField*>(row[muu].get())) {
      any_grid = true;
    }
  }

  double integral = 0.0;
  if (any_vortex) {
    if (!vortex.ax || !vortex.ay || vortex.ax->flux() != vortex.ay->flux() ||
        vortex.ax->core() != vortex.ay->core())
      fail("InvalidArgument", "vortex potential needs matching planar components");
    const double pre = vortex.ax->flux() / (2.0 * std::numbers::pi);
    const double core = vortex.ax->core();
    double angle_sum = 0.0;
    for (std::size_t e = 0; e + 1 < curve.vertices.size(); ++e) {
      const Eigen::Vector2d p0 = curve.vertices[e].head<2>();
      const Eigen::Vector2d p1 = curve.vertices[e + 1].head<2>();
      if (segment_core_distance(p0, p1) < core)
        fail("OutOfChart", "curve edge enters the vortex core");
      const double cross = p0.x() * p1.y() - p0.y() * p1.x();
      const double dot = p0.dot(p1);
      angle_sum += std::atan2(cross, dot);
    }
    integral = pre * angle_sum;
  } else {
    const int panels = any_grid ? 64 : 1;  // Simpson is exact for quadratics
    for (std::size_t e = 0; e + 1 < curve.vertices.size(); ++e)
      integral += simpson_edge(row, curve.vertices[e], curve.vertices[e + 1],
                               panels);
  }
  return std::exp(-kI * charge * integral);
}

// -------------------------------------------------- complex-structure split

std::vector<long long> complex_structure_decompose(
    const std::vector<RotationSample>& samples, const Eigen::MatrixXd& X) {
  if (samples.empty()) fail("EmptyInput", "need at least one group sample");
  const Eigen::Index n = X.rows();
  if (X.cols() != n) fail("DimensionMismatch", "complex structure must be square");
  if ((X * X + Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    fail("NotComplexStructure", "X squared is not minus the identity");
  for (const auto& s : samples) {
    if (s.matrix.rows() != n || s.matrix.cols() != n)
      fail("DimensionMismatch", "sample size does not match the structure");
    if ((s.matrix * X - X * s.matrix).cwiseAbs().maxCoeff() > 1e-10)
      fail("DoesNotCommute", "sample does not commute with the structure");
  }

  // basis of the +i eigenspace of X
  Eigen::ComplexEigenSolver<Mat> xeig(X.cast<Complex>());
  if (xeig.info() != Eigen::Success)
    fail("ToleranceExceeded", "eigen decomposition of the structure failed");
  std::vector<Eigen::Index> plus;
  for (Eigen::Index i = 0; i < n; ++i)
    if (xeig.eigenvalues()(i).imag() > 0.0) plus.push_back(i);
  if (static_cast<Eigen::Index>(plus.size()) * 2 != n)
    fail("NotComplexStructure", "eigenvalues of X do not split evenly");
  Mat v(n, static_cast<Eigen::Index>(plus.size()));
  for (std::size_t j = 0; j < plus.size(); ++j)
    v.col(static_cast<Eigen::Index>(j)) = xeig.eigenvectors().col(plus[j]);

  const Mat gram = v.adjoint() * v;
  auto restrict_to_line = [&](const Eigen::MatrixXd& g) {
    return Mat(gram.partialPivLu().solve(v.adjoint() * g.cast<Complex>() * v));
  };

  // reference = smallest nonzero angle, to keep q*angle inside (-pi, pi]
  std::size_t ref = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i].angle) < 1e-12) continue;
    if (ref == samples.size() ||
        std::abs(samples[i].angle) < std::abs(samples[ref].angle))
      ref = i;
  }
  if (ref == samples.size())
    fail("InvalidArgument", "need a sample with a nonzero angle");
  const double phi_ref = samples[ref].angle;

  Eigen::ComplexEigenSolver<Mat> geig(restrict_to_line(samples[ref].matrix));
  if (geig.info() != Eigen::Success)
    fail("ToleranceExceeded", "eigen decomposition of the restriction failed");
  std::vector<long long> charges;
  for (Eigen::Index i = 0; i < geig.eigenvalues().size(); ++i) {
    const Complex mu = geig.eigenvalues()(i);
    if (std::abs(std::abs(mu) - 1.0) > 1e-8)
      fail("ToleranceExceeded", "restricted sample is not unitary");
    charges.push_back(std::llround(std::arg(mu) / phi_ref));
  }

  // every other sample must rotate each line at the same integer speed
  for (std::size_t s = 0; s < samples.size(); ++s) {
    Eigen::ComplexEigenSolver<Mat> eig(restrict_to_line(samples[s].matrix));
    std::vector<bool> used(charges.size(), false);
    for (long long q : charges) {
      const Complex want = std::exp(kI * (static_cast<double>(q) * samples[s].angle));
      double best = 1e300;
      std::size_t best_k = 0;
      for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        if (used[static_cast<std::size_t>(k)]) continue;
        const double dist = std::abs(eig.eigenvalues()(k) - want);
        if (dist < best) {
          best = dist;
          best_k = static_cast<std::size_t>(k);
        }
      }
      if (best > 1e-8)
        fail("ToleranceExceeded", "samples disagree about the line speeds");
      used[best_k] = true;
    }
  }

  std::sort(charges.begin(), charges.end());
  return charges;
}

}  // namespace lawless
