#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "lawless/connection.hpp"
#include "lawless/lie_groups.hpp"

namespace lawless {

// ============================================================================
// Path-ordered exponentials of the connection along polyline curves, plus
// the small-loop extraction of the three 2-forms, gauge covariance, the
// abelian phase factor, and the complex-structure charge decomposition.
// ============================================================================

struct Curve {
  std::vector<Eigen::VectorXd> vertices;  // >= 2, equal dims, finite
};

// CSV with one vertex per line, comma-separated coordinates; '#' comments and
// a non-numeric header line are skipped. SchemaError on ragged rows.
Curve curve_from_csv_file(const std::string& path);

// Counterclockwise square of side `side` in the (mu, nu) coordinate plane,
// based at `base` (the first corner).
Curve square_curve(const Eigen::VectorXd& base, double side, int mu = 0,
                   int nu = 1);

// Closed regular polygon approximating a circle in the (0, 1) plane.
Curve circle_curve(const Eigen::VectorXd& center, double radius, int segments);

Curve reverse_curve(const Curve& c);
// Joins end of a to start of b (must coincide within 1e-9).
Curve concat_curves(const Curve& a, const Curve& b);
bool is_closed(const Curve& c, double tol = 1e-12);
double curve_length(const Curve& c);

using ConnectionEvaluator =
    std::function<std::vector<Mat>(const Eigen::VectorXd&)>;

// Product of exp(-i Gamma_mu(midpoint) dx^mu) over sub-segments, later
// segments multiplying on the left; `steps` midpoints are distributed over
// the edges proportionally to length (at least one per edge).
Mat holonomy_product(const ConnectionEvaluator& eval, const Curve& curve,
                     long long steps);

struct HolonomyResult {
  GroupElement element;          // the n-step product
  double error_estimate = 0.0;   // (4/3) || g_2n - g_n ||, second-order rule
};

HolonomyResult holonomy(const ConnectionField& field,
                        const GeneratorCatalog& cat, const Curve& curve,
                        long long steps);

struct SmallLoopReport {
  GroupElement loop;     // transport around the square
  Mat predicted;         // identity + area * (2-form contraction)
  double residual = 0.0; // Frobenius norm of the difference
};

// Counterclockwise square of side `side` in the (mu, nu) plane based at x,
// integrated at a converged step count, against the linearized prediction
// built from field_strengths at x.
SmallLoopReport small_loop_check(const ConnectionField& field,
                                 const GeneratorCatalog& cat,
                                 const Eigen::VectorXd& x, int mu, int nu,
                                 double side, long long steps = 256);

// Transforms the connection by h(x), recomputes transport, and compares with
// h(end) g h(start)^-1. Returns the Frobenius residual.
double gauge_covariance_check(const ConnectionField& field,
                              const GeneratorCatalog& cat,
                              const GaugeTransform& transform,
                              const Curve& curve, long long steps);

// exp(-i e * loop integral of A) for a single-factor abelian potential.
// Exact per edge: straight-segment integrals of polynomial components via
// Simpson, vortex components via signed subtended angles. Throws NotClosed
// when the endpoints differ by more than 1e-12, OutOfChart if an edge dips
// into the vortex core or leaves the chart.
Complex u1_phase_factor(const ConnectionField& field,
                        const GeneratorCatalog& cat, const Curve& curve);

struct RotationSample {
  double angle = 0.0;      // group parameter of this sample
  Eigen::MatrixXd matrix;  // real representation matrix
};

// Splits a commuting family of planar rotations into invariant complex lines
// using the complex structure X (X^2 = -I within 1e-10, commuting with every
// sample within 1e-10) and returns the integer speed of each line, sorted
// ascending. Errors: NotComplexStructure, DoesNotCommute, ToleranceExceeded.
std::vector<long long> complex_structure_decompose(
    const std::vector<RotationSample>& samples, const Eigen::MatrixXd& X);

}  // namespace lawless
