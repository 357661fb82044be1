#include "lawless/connection.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lawless/error.hpp"
#include "lawless/report.hpp"

namespace lawless {

namespace {

constexpr std::array<double, 4> kEta = {1.0, -1.0, -1.0, -1.0};

double get_param(const std::map<std::string, double>& params,
                 const std::string& name, double fallback) {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

const ScalarFieldPtr& entry_or_null(const std::vector<ScalarFieldPtr>& row,
                                    int mu) {
  static const ScalarFieldPtr null_field;
  if (row.empty()) return null_field;
  return row[static_cast<std::size_t>(mu)];
}

double value_or_zero(const ScalarFieldPtr& f, const Eigen::VectorXd& x) {
  return f ? f->value(x) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- scalar fields

PolynomialField::PolynomialField(double c0, Eigen::VectorXd c1,
                                 Eigen::MatrixXd c2)
    : c0_(c0), c1_(std::move(c1)), c2_(std::move(c2)) {
  if (c2_.size() == 0) c2_ = Eigen::MatrixXd::Zero(c1_.size(), c1_.size());
  if (c2_.rows() != c1_.size() || c2_.cols() != c1_.size())
    fail("DimensionMismatch", "quadratic coefficient block does not match dimension");
}

ScalarFieldPtr PolynomialField::constant(int dim, double c) {
  return std::make_shared<PolynomialField>(c, Eigen::VectorXd::Zero(dim),
                                           Eigen::MatrixXd());
}

ScalarFieldPtr PolynomialField::linear(int dim, int axis, double slope,
                                       double offset) {
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(dim);
  c1(axis) = slope;
  return std::make_shared<PolynomialField>(offset, std::move(c1),
                                           Eigen::MatrixXd());
}

double PolynomialField::value(const Eigen::VectorXd& x) const {
  return c0_ + c1_.dot(x) + x.dot(c2_ * x);
}

Eigen::VectorXd PolynomialField::grad(const Eigen::VectorXd& x) const {
  return c1_ + (c2_ + c2_.transpose()) * x;
}

SolenoidComponentField::SolenoidComponentField(int axis, double flux,
                                               double core)
    : axis_(axis), flux_(flux), core_(core) {
  if (axis != 0 && axis != 1) fail("InvalidArgument", "vortex lives in the (0,1) plane");
  if (!(core > 0.0)) fail("InvalidArgument", "core radius must be positive");
}

double SolenoidComponentField::value(const Eigen::VectorXd& x) const {
  const double r2 = x(0) * x(0) + x(1) * x(1);
  if (r2 < core_ * core_)
    fail("OutOfChart", "point inside the excluded core of the vortex potential");
  const double pre = flux_ / (2.0 * std::numbers::pi);
  return axis_ == 0 ? -pre * x(1) / r2 : pre * x(0) / r2;
}

Eigen::VectorXd SolenoidComponentField::grad(const Eigen::VectorXd& x) const {
  const double r2 = x(0) * x(0) + x(1) * x(1);
  if (r2 < core_ * core_)
    fail("OutOfChart", "point inside the excluded core of the vortex potential");
  const double pre = flux_ / (2.0 * std::numbers::pi);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  const double r4 = r2 * r2;
  if (axis_ == 0) {
    g(0) = 2.0 * pre * x(0) * x(1) / r4;
    g(1) = pre * (x(1) * x(1) - x(0) * x(0)) / r4;
  } else {
    g(0) = pre * (x(1) * x(1) - x(0) * x(0)) / r4;
    g(1) = -2.0 * pre * x(0) * x(1) / r4;
  }
  return g;
}

GridField::GridField(Eigen::VectorXd lo, Eigen::VectorXd hi,
                     std::vector<int> shape, std::vector<double> values)
    : lo_(std::move(lo)), hi_(std::move(hi)), shape_(std::move(shape)),
      values_(std::move(values)) {
  const auto d = static_cast<std::size_t>(lo_.size());
  if (hi_.size() != lo_.size() || shape_.size() != d)
    fail("DimensionMismatch", "grid box and shape disagree");
  std::size_t total = 1;
  for (auto s : shape_) {
    if (s < 2) fail("InvalidArgument", "need at least two samples per axis");
    total *= static_cast<std::size_t>(s);
  }
  if (values_.size() != total)
    fail("DimensionMismatch", "sample count does not match the grid shape");
  h_ = Eigen::VectorXd(lo_.size());
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (!(hi_(i) > lo_(i))) fail("InvalidArgument", "degenerate grid box");
    h_(i) = (hi_(i) - lo_(i)) / (shape_[static_cast<std::size_t>(i)] - 1);
  }
}

ScalarFieldPtr GridField::sample(
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int per_axis,
    const std::function<double(const Eigen::VectorXd&)>& fn) {
  const auto d = static_cast<int>(lo.size());
  std::vector<int> shape(static_cast<std::size_t>(d), per_axis);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<double> values(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i)
      x(i) = lo(i) + (hi(i) - lo(i)) * idx[static_cast<std::size_t>(i)] /
                         (per_axis - 1);
    values[flat] = fn(x);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return std::make_shared<GridField>(lo, hi, std::move(shape), std::move(values));
}

double GridField::at(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i)
    flat = flat * static_cast<std::size_t>(shape_[i]) +
           static_cast<std::size_t>(idx[i]);
  return values_[flat];
}

double GridField::value(const Eigen::VectorXd& x) const {
  const auto d = static_cast<std::size_t>(lo_.size());
  if (static_cast<std::size_t>(x.size()) != d)
    fail("DimensionMismatch", "point dimension does not match the grid");
  std::vector<int> cell(d);
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto ei = static_cast<Eigen::Index>(i);
    if (x(ei) < lo_(ei) - 1e-12 || x(ei) > hi_(ei) + 1e-12)
      fail("OutOfChart", "point outside the sampled box");
    double t = (x(ei) - lo_(ei)) / h_(ei);
    int c = static_cast<int>(std::floor(t));
    c = std::max(0, std::min(c, shape_[i] - 2));
    cell[i] = c;
    w[i] = t - c;
  }
  // multilinear blend over the 2^d cell corners
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << d;
  std::vector<int> idx(d);
  for (std::size_t corner = 0; corner < corners; ++corner) {
    double weight = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const bool hi_side = (corner >> i) & 1u;
      idx[i] = cell[i] + (hi_side ? 1 : 0);
      weight *= hi_side ? w[i] : 1.0 - w[i];
    }
    if (weight != 0.0) acc += weight * at(idx);
  }
  return acc;
}

Eigen::VectorXd GridField::grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd fwd = x, back = x;
    fwd(i) += h_(i);
    back(i) -= h_(i);
    if (fwd(i) > hi_(i) + 1e-12 || back(i) < lo_(i) - 1e-12)
      fail("NonDifferentiable",
           "central-difference stencil leaves the sampled box");
    g(i) = (value(fwd) - value(back)) / (2.0 * h_(i));
  }
  return g;
}

double GridField::grad_error() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < h_.size(); ++i)
    worst = std::max(worst, h_(i) * h_(i));
  return worst;
}

// ---------------------------------------------------------------- connection

bool ConnectionField::in_chart(const Eigen::VectorXd& x) const {
  if (x.size() != chart_dim) return false;
  for (int i = 0; i < chart_dim; ++i)
    if (x(i) < box_lo(i) - 1e-12 || x(i) > box_hi(i) + 1e-12) return false;
  return true;
}

bool ConnectionField::has_frame_part() const {
  for (const auto& row : theta)
    for (const auto& p : row)
      if (p) return true;
  for (const auto& per_mu : omega)
    for (const auto& row : per_mu)
      for (const auto& p : row)
        if (p) return true;
  return false;
}

bool ConnectionField::has_gauge_part() const {
  for (const auto& row : gauge)
    for (const auto& p : row)
      if (p) return true;
  return false;
}

namespace {

void check_sector_compat(const ConnectionField& field,
                         const GeneratorCatalog& cat) {
  bool any_theta = false;
  for (const auto& row : field.theta)
    for (const auto& p : row)
      if (p) any_theta = true;
  bool any_omega = false;
  for (const auto& per_mu : field.omega)
    for (const auto& row : per_mu)
      for (const auto& p : row)
        if (p) any_omega = true;
  if (any_theta && !cat.has_translations)
    fail("UnsupportedFactor", "solder components need an affine frame factor");
  if (any_omega && !cat.has_rotations)
    fail("UnsupportedFactor", "rotation components need a frame factor");
  if (!field.gauge.empty() && field.gauge.size() != cat.T.size())
    fail("DimensionMismatch", "gauge component rows do not match the generator count");
}

}  // namespace

std::vector<Mat> connection_at(const ConnectionField& field,
                               const GeneratorCatalog& cat,
                               const Eigen::VectorXd& x) {
  if (!field.in_chart(x)) fail("OutOfChart", "point outside the chart box");
  check_sector_compat(field, cat);
  const int d = field.chart_dim;
  std::vector<Mat> gamma(static_cast<std::size_t>(d),
                         Mat::Zero(cat.dim, cat.dim));
  for (int mu = 0; mu < d; ++mu) {
    Mat& g = gamma[static_cast<std::size_t>(mu)];
    for (int a = 0; a < 4; ++a) {
      const auto& th = entry_or_null(field.theta[static_cast<std::size_t>(a)], mu);
      if (th) g += th->value(x) * cat.P[static_cast<std::size_t>(a)];
    }
    if (!field.omega.empty()) {
      const auto& om = field.omega[static_cast<std::size_t>(mu)];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (om[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
            g += 0.5 *
                 om[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                     ->value(x) *
                 cat.frame_generator_mixed(b, a);
    }
    for (std::size_t k = 0; k < field.gauge.size(); ++k) {
      const auto& a_comp = entry_or_null(field.gauge[k], mu);
      if (a_comp) g -= a_comp->value(x) * cat.T[k];
    }
  }
  return gamma;
}

FieldStrengths field_strengths(const ConnectionField& field,
                               const GeneratorCatalog& cat,
                               const Eigen::VectorXd& x) {
  if (!field.in_chart(x)) fail("OutOfChart", "point outside the chart box");
  check_sector_compat(field, cat);
  const int d = field.chart_dim;
  const std::size_t nt = cat.T.size();

  FieldStrengths out;
  double deriv_error = 0.0;
  auto track = [&deriv_error](const ScalarFieldPtr& p) {
    if (p) deriv_error = std::max(deriv_error, p->grad_error());
  };

  // evaluate every component once
  std::array<std::array<double, 4>, 4> th_val{};          // [a][mu]
  std::array<std::array<Eigen::VectorXd, 4>, 4> th_grad;  // [a][mu]
  for (int a = 0; a < 4; ++a)
    for (int mu = 0; mu < d; ++mu) {
      const auto& p = entry_or_null(field.theta[static_cast<std::size_t>(a)], mu);
      th_val[a][mu] = value_or_zero(p, x);
      th_grad[a][mu] = p ? p->grad(x) : Eigen::VectorXd::Zero(d);
      track(p);
    }
  std::vector<std::array<std::array<double, 4>, 4>> om_val(
      static_cast<std::size_t>(d));
  std::vector<std::array<std::array<Eigen::VectorXd, 4>, 4>> om_grad(
      static_cast<std::size_t>(d));
  for (int mu = 0; mu < d; ++mu)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        ScalarFieldPtr p;
        if (!field.omega.empty())
          p = field.omega[static_cast<std::size_t>(mu)]
                         [static_cast<std::size_t>(a)]
                         [static_cast<std::size_t>(b)];
        om_val[mu][a][b] = value_or_zero(p, x);
        om_grad[mu][a][b] = p ? p->grad(x) : Eigen::VectorXd::Zero(d);
        track(p);
      }
  std::vector<std::array<double, 4>> a_val(nt);   // [k][mu], mu < 4
  std::vector<std::array<Eigen::VectorXd, 4>> a_grad(nt);
  for (std::size_t k = 0; k < nt; ++k)
    for (int mu = 0; mu < d; ++mu) {
      ScalarFieldPtr p;
      if (!field.gauge.empty()) p = entry_or_null(field.gauge[k], mu);
      a_val[k][mu] = value_or_zero(p, x);
      a_grad[k][mu] = p ? p->grad(x) : Eigen::VectorXd::Zero(d);
      track(p);
    }

  out.torsion.assign(d, std::vector<Eigen::Vector4d>(
                            static_cast<std::size_t>(d), Eigen::Vector4d::Zero()));
  out.curvature.assign(d, std::vector<Eigen::Matrix4d>(
                              static_cast<std::size_t>(d), Eigen::Matrix4d::Zero()));
  out.gauge.assign(d, std::vector<Eigen::VectorXd>(
                          static_cast<std::size_t>(d),
                          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nt))));

  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      if (mu == nu) continue;
      auto& q = out.torsion[mu][nu];
      auto& r = out.curvature[mu][nu];
      auto& fs = out.gauge[mu][nu];
      for (int a = 0; a < 4; ++a) {
        double acc = th_grad[a][nu](mu) - th_grad[a][mu](nu);
        for (int b = 0; b < 4; ++b)
          acc += om_val[mu][a][b] * th_val[b][nu] -
                 om_val[nu][a][b] * th_val[b][mu];
        q(a) = acc;
        for (int b = 0; b < 4; ++b) {
          double racc = om_grad[nu][a][b](mu) - om_grad[mu][a][b](nu);
          for (int c = 0; c < 4; ++c)
            racc += om_val[mu][a][c] * om_val[nu][c][b] -
                    om_val[nu][a][c] * om_val[mu][c][b];
          r(a, b) = racc;
        }
      }
      for (std::size_t k = 0; k < nt; ++k) {
        double acc = a_grad[k][nu](mu) - a_grad[k][mu](nu);
        for (std::size_t m = 0; m < nt; ++m)
          for (std::size_t n = 0; n < nt; ++n) {
            double c = cat.structure(k, m, n);
            if (c != 0.0) acc += c * a_val[m][mu] * a_val[n][nu];
          }
        fs(static_cast<Eigen::Index>(k)) = acc;
      }
    }
  out.deriv_error = deriv_error;
  return out;
}

Mat GaugeTransform::h(const Eigen::VectorXd& x) const {
  if (!f) fail("InvalidArgument", "gauge transform has no profile function");
  return Mat((f->value(x) * K).exp());
}

Mat GaugeTransform::h_inverse(const Eigen::VectorXd& x) const {
  if (!f) fail("InvalidArgument", "gauge transform has no profile function");
  return Mat((-f->value(x) * K).exp());
}

// ---------------------------------------------------------------- presets

GroupSpec default_group_for_preset(const std::string& preset,
                                   const std::map<std::string, double>& params) {
  const double e = get_param(params, "e", 1.0);
  GroupSpec spec;
  if (preset == "zero" || preset == "u1-constant" ||
      preset == "u1-uniform-field" || preset == "u1-solenoid") {
    spec.factors.push_back({FactorType::U1, e});
  } else if (preset == "su2-constant" || preset == "su2-linear") {
    spec.factors.push_back({FactorType::SU2, 0.0});
  } else if (preset == "flat-solder" || preset == "torsion-constant" ||
             preset == "poincare-smooth") {
    spec.factors.push_back({FactorType::Poincare, 0.0});
  } else {
    fail("InvalidArgument", "unknown preset '" + preset + "'");
  }
  return spec;
}

namespace {

// lowered-index antisymmetry of the rotation components, sampled on a small
// deterministic point set
void validate_omega(const ConnectionField& field) {
  if (field.omega.empty()) return;
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd center = 0.5 * (field.box_lo + field.box_hi);
  points.push_back(center);
  for (int i = 0; i < field.chart_dim; ++i) {
    Eigen::VectorXd p = center;
    p(i) += 0.3 * (field.box_hi(i) - center(i));
    points.push_back(p);
    p(i) = center(i) - 0.4 * (center(i) - field.box_lo(i));
    points.push_back(p);
  }
  for (const auto& x : points)
    for (int mu = 0; mu < field.chart_dim; ++mu) {
      const auto& om = field.omega[static_cast<std::size_t>(mu)];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          double w_ab = kEta[static_cast<std::size_t>(a)] *
                        value_or_zero(om[static_cast<std::size_t>(a)]
                                        [static_cast<std::size_t>(b)], x);
          double w_ba = kEta[static_cast<std::size_t>(b)] *
                        value_or_zero(om[static_cast<std::size_t>(b)]
                                        [static_cast<std::size_t>(a)], x);
          if (std::abs(w_ab + w_ba) > 1e-10)
            fail("InvalidArgument",
                 "rotation components violate lowered-index antisymmetry");
        }
    }
}

}  // namespace

ConnectionField make_preset_connection(
    const std::string& preset, const std::map<std::string, double>& params) {
  ConnectionField field;
  field.preset = preset;
  field.params = params;
  const int d = static_cast<int>(get_param(params, "chart_dim", 2.0));
  if (d < 2 || d > 4) fail("InvalidArgument", "chart dimension must be 2..4");
  field.chart_dim = d;
  const double lo = get_param(params, "box_lo", -2.0);
  const double hi = get_param(params, "box_hi", 2.0);
  if (!(hi > lo)) fail("InvalidArgument", "degenerate chart box");
  field.box_lo = Eigen::VectorXd::Constant(d, lo);
  field.box_hi = Eigen::VectorXd::Constant(d, hi);

  auto blank_gauge = [&](std::size_t rows) {
    field.gauge.assign(rows, std::vector<ScalarFieldPtr>(
                                 static_cast<std::size_t>(d)));
  };
  auto blank_frame = [&] {
    for (auto& row : field.theta)
      row.assign(static_cast<std::size_t>(d), nullptr);
    field.omega.assign(static_cast<std::size_t>(d), {});
  };

  if (preset == "zero") {
    // all components identically zero
  } else if (preset == "u1-constant") {
    blank_gauge(1);
    field.gauge[0][0] = PolynomialField::constant(d, get_param(params, "c", 1.0));
  } else if (preset == "u1-uniform-field") {
    blank_gauge(1);
    field.gauge[0][1] =
        PolynomialField::linear(d, 0, get_param(params, "B", 1.0));
  } else if (preset == "u1-solenoid") {
    blank_gauge(1);
    const double flux = get_param(params, "flux", std::numbers::pi);
    const double core = get_param(params, "core", 0.05);
    field.gauge[0][0] = std::make_shared<SolenoidComponentField>(0, flux, core);
    field.gauge[0][1] = std::make_shared<SolenoidComponentField>(1, flux, core);
  } else if (preset == "su2-constant") {
    blank_gauge(3);
    field.gauge[0][0] =
        PolynomialField::constant(d, get_param(params, "cx", 0.8));
    field.gauge[1][1] =
        PolynomialField::constant(d, get_param(params, "cy", 0.6));
  } else if (preset == "su2-linear") {
    blank_gauge(3);
    field.gauge[0][0] = PolynomialField::linear(d, 1, 0.7, 0.3);  // 0.3 + 0.7 x1
    field.gauge[1][1] = PolynomialField::linear(d, 0, 0.4, 0.5);  // 0.5 + 0.4 x0
  } else if (preset == "flat-solder") {
    blank_frame();
    for (int a = 0; a < d; ++a)
      field.theta[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] =
          PolynomialField::constant(d, 1.0);
  } else if (preset == "torsion-constant") {
    blank_frame();
    const double beta = get_param(params, "beta", 0.5);
    const double w = get_param(params, "w", 0.3);
    field.theta[1][0] = PolynomialField::constant(d, 1.0);
    field.theta[2][1] = PolynomialField::linear(d, 0, beta, 1.0);  // 1 + beta x0
    field.omega[0][1][2] = PolynomialField::constant(d, w);
    field.omega[0][2][1] = PolynomialField::constant(d, -w);
  } else if (preset == "poincare-smooth") {
    blank_frame();
    field.theta[1][0] = PolynomialField::linear(d, 1, 0.2, 1.0);   // 1 + 0.2 x1
    field.theta[2][1] = PolynomialField::constant(d, 1.0);
    field.theta[3][1] = PolynomialField::linear(d, 0, 0.1);        // 0.1 x0
    field.omega[0][1][2] = PolynomialField::linear(d, 1, 0.4);
    field.omega[0][2][1] = PolynomialField::linear(d, 1, -0.4);
    field.omega[0][2][3] = PolynomialField::linear(d, 0, 0.5, 0.2);
    field.omega[0][3][2] = PolynomialField::linear(d, 0, -0.5, -0.2);
    field.omega[1][1][2] = PolynomialField::linear(d, 0, 0.7);
    field.omega[1][2][1] = PolynomialField::linear(d, 0, -0.7);
    field.omega[1][1][3] = PolynomialField::constant(d, 0.3);
    field.omega[1][3][1] = PolynomialField::constant(d, -0.3);
  } else {
    fail("InvalidArgument", "unknown preset '" + preset + "'");
  }

  validate_omega(field);
  return field;
}

ConnectionConfig connection_config_from_json_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& ex) {
    fail("SchemaError", std::string("field config is not valid JSON: ") + ex.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("preset"))
      fail("SchemaError", "field config needs a 'preset' name");
    std::map<std::string, double> params;
    if (doc.contains("parameters"))
      for (auto& [key, val] : doc.at("parameters").items())
        params[key] = val.get<double>();
    if (doc.contains("chart_dim"))
      params["chart_dim"] = doc.at("chart_dim").get<double>();
    const std::string preset = doc.at("preset").get<std::string>();

    ConnectionConfig cfg;
    cfg.field = make_preset_connection(preset, params);
    if (doc.contains("factors")) {
      for (const auto& fac : doc.at("factors")) {
        GroupFactor gf;
        gf.type = factor_type_from_string(fac.at("type").get<std::string>());
        if (fac.contains("charge")) gf.charge = fac.at("charge").get<double>();
        cfg.group.factors.push_back(gf);
      }
    } else {
      cfg.group = default_group_for_preset(preset, params);
    }
    return cfg;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    fail("SchemaError", std::string("malformed field config: ") + ex.what());
  }
}

ConnectionConfig connection_config_from_json_file(const std::string& path) {
  return connection_config_from_json_text(read_text_file(path));
}

}  // namespace lawless
