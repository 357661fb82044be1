#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lawless/lie_groups.hpp"

namespace lawless {

// ============================================================================
// Scalar component fields on a chart box, and the Lie-algebra-valued
// connection assembled from them.
// ============================================================================

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd grad(const Eigen::VectorXd& x) const = 0;
  // 0 for closed forms; O(h^2) scale for sampled fields.
  virtual double grad_error() const { return 0.0; }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

// c0 + c1.x + x^T c2 x with exact gradients.
class PolynomialField : public ScalarField {
 public:
  PolynomialField(double c0, Eigen::VectorXd c1, Eigen::MatrixXd c2);
  static ScalarFieldPtr constant(int dim, double c);
  static ScalarFieldPtr linear(int dim, int axis, double slope, double offset = 0.0);

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const override;

 private:
  double c0_;
  Eigen::VectorXd c1_;
  Eigen::MatrixXd c2_;
};

// One chart component of the vortex potential flux/(2pi) * dphi around the
// origin of the (x0, x1) plane: axis 0 gives -pre*y/r^2, axis 1 gives
// pre*x/r^2. Throws OutOfChart within the core radius.
class SolenoidComponentField : public ScalarField {
 public:
  SolenoidComponentField(int axis, double flux, double core);

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const override;

  double flux() const { return flux_; }
  double core() const { return core_; }

 private:
  int axis_;
  double flux_;
  double core_;
};

// Regular-grid samples over a box, multilinear interpolation, central
// differences for the gradient (one grid spacing). NonDifferentiable when a
// stencil point would leave the box.
class GridField : public ScalarField {
 public:
  GridField(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<int> shape,
            std::vector<double> values);

  // Samples fn on a regular grid with `per_axis` points per axis.
  static ScalarFieldPtr sample(const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi, int per_axis,
                               const std::function<double(const Eigen::VectorXd&)>& fn);

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const override;
  double grad_error() const override;

 private:
  Eigen::VectorXd lo_, hi_;
  std::vector<int> shape_;
  std::vector<double> values_;
  Eigen::VectorXd h_;  // per-axis spacing

  double at(const std::vector<int>& idx) const;
};

// Component tables of the unified connection on a chart box. A null entry is
// an identically-zero component. theta[a][mu] and omega[mu][a][b] use frame
// indices a,b in 0..3; gauge[k][mu] rows follow the generator catalog order.
struct ConnectionField {
  int chart_dim = 2;
  Eigen::VectorXd box_lo, box_hi;
  std::string preset;
  std::map<std::string, double> params;

  std::array<std::vector<ScalarFieldPtr>, 4> theta;
  std::vector<std::array<std::array<ScalarFieldPtr, 4>, 4>> omega;
  std::vector<std::vector<ScalarFieldPtr>> gauge;

  bool in_chart(const Eigen::VectorXd& x) const;
  bool has_frame_part() const;
  bool has_gauge_part() const;
};

// Gamma_mu(x) = theta_mu^a P_a + 1/2 omega_mu^a_b M^b_a - A^k_mu T_k for each
// chart direction mu. Throws OutOfChart outside the box, DimensionMismatch
// when the gauge table does not match the catalog, UnsupportedFactor when
// frame components are present without a frame factor.
std::vector<Mat> connection_at(const ConnectionField& field,
                               const GeneratorCatalog& cat,
                               const Eigen::VectorXd& x);

// The three 2-forms of the connection, one entry per ordered chart pair,
// antisymmetric under swap:
//   torsion    Q^a_{mn} = d theta + omega.theta terms
//   curvature  R^a_b{mn} = d omega + omega.omega terms
//   gauge      F^k_{mn} = d A + C^k_ij A^i A^j terms
struct FieldStrengths {
  std::vector<std::vector<Eigen::Vector4d>> torsion;
  std::vector<std::vector<Eigen::Matrix4d>> curvature;
  std::vector<std::vector<Eigen::VectorXd>> gauge;
  double deriv_error = 0.0;  // worst grad_error over the components used
};

FieldStrengths field_strengths(const ConnectionField& field,
                               const GeneratorCatalog& cat,
                               const Eigen::VectorXd& x);

// h(x) = exp(f(x) K) for a fixed algebra element K and scalar profile f.
// Because K commutes with itself the transformed connection is exactly
// h Gamma h^-1 + i (d_mu f) K.
struct GaugeTransform {
  Mat K;
  ScalarFieldPtr f;

  Mat h(const Eigen::VectorXd& x) const;
  Mat h_inverse(const Eigen::VectorXd& x) const;
};

// --------------------------------------------------------------------------
// Presets. Names: zero, u1-constant {c}, u1-uniform-field {B}, u1-solenoid
// {flux, core}, su2-constant {cx, cy}, su2-linear, flat-solder,
// torsion-constant {beta, w}, poincare-smooth. Common parameters: e (U-1
// charge), chart_dim, box_lo, box_hi.
// --------------------------------------------------------------------------

GroupSpec default_group_for_preset(const std::string& preset,
                                   const std::map<std::string, double>& params);

ConnectionField make_preset_connection(const std::string& preset,
                                       const std::map<std::string, double>& params);

struct ConnectionConfig {
  ConnectionField field;
  GroupSpec group;
};

// {chart_dim, factors, preset, parameters} from a JSON file. SchemaError on
// malformed input.
ConnectionConfig connection_config_from_json_file(const std::string& path);
ConnectionConfig connection_config_from_json_text(const std::string& text);

}  // namespace lawless
