#include "lawless/born_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lawless/error.hpp"
#include "lawless/state_geometry.hpp"

namespace lawless {

BornInstance::BornInstance(std::vector<double> coefficients)
    : c(std::move(coefficients)) {
  if (c.empty()) fail("EmptyInput", "instance needs at least one coefficient");
  double sumsq = 0.0;
  for (double ci : c) {
    if (!(ci > 0.0)) fail("InvalidArgument", "coefficients must be strictly positive");
    sumsq += ci * ci;
  }
  if (std::abs(sumsq - 1.0) > 1e-12)
    fail("InvalidArgument",
         "coefficients must have unit sum of squares, got " + std::to_string(sumsq));
}

namespace {

// One rounding pass at fixed M: round, clamp to >= 1, then push the total
// onto M by moving the entries with the largest signed rounding slack.
RationalPartition partition_at(const std::vector<double>& probs, long long M) {
  const std::size_t N = probs.size();
  RationalPartition part;
  part.M = M;
  part.n.resize(N);
  long long total = 0;
  for (std::size_t i = 0; i < N; ++i) {
    long long ni = std::llround(probs[i] * static_cast<double>(M));
    if (ni < 1) ni = 1;
    part.n[i] = ni;
    total += ni;
  }
  while (total > M) {
    // decrement the most over-allocated entry that can spare a unit
    std::size_t pick = N;
    double worst = -1.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (part.n[i] <= 1) continue;
      double excess = static_cast<double>(part.n[i]) - probs[i] * static_cast<double>(M);
      if (excess > worst) {
        worst = excess;
        pick = i;
      }
    }
    if (pick == N) break;  // all at the floor; M < N, caller moves on
    --part.n[pick];
    --total;
  }
  while (total < M) {
    // increment the most under-allocated entry
    std::size_t pick = 0;
    double worst = -1e300;
    for (std::size_t i = 0; i < N; ++i) {
      double deficit = probs[i] * static_cast<double>(M) - static_cast<double>(part.n[i]);
      if (deficit > worst) {
        worst = deficit;
        pick = i;
      }
    }
    ++part.n[pick];
    ++total;
  }
  part.residual = 0.0;
  if (total == M) {
    for (std::size_t i = 0; i < N; ++i) {
      double err = std::abs(static_cast<double>(part.n[i]) / static_cast<double>(M) - probs[i]);
      part.residual = std::max(part.residual, err);
    }
  } else {
    part.residual = 1e300;  // infeasible at this M (can only happen for M < N)
  }
  return part;
}

}  // namespace

RationalPartition rational_partition(const std::vector<double>& probs, double eps,
                                     long long m_cap) {
  if (probs.empty()) fail("EmptyInput", "no probabilities to partition");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) fail("InvalidArgument", "probabilities must be strictly positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail("InvalidArgument", "probabilities must sum to 1, got " + std::to_string(sum));
  if (!(eps > 0.0)) fail("InvalidArgument", "eps must be positive");

  for (long long M = static_cast<long long>(probs.size()); M <= m_cap; ++M) {
    RationalPartition part = partition_at(probs, M);
    if (part.residual <= eps) return part;
  }
  fail("TooTight", "no denominator <= " + std::to_string(m_cap) +
                       " reaches residual <= " + std::to_string(eps));
}

AuxiliaryExpansion auxiliary_expansion(const BornInstance& inst,
                                       const RationalPartition& part) {
  if (inst.c.size() != part.n.size())
    fail("LengthMismatch", "instance has " + std::to_string(inst.c.size()) +
                               " coefficients but partition has " +
                               std::to_string(part.n.size()) + " counts");
  AuxiliaryExpansion exp;
  exp.total_branches = part.M;
  exp.branch_coeff.reserve(static_cast<std::size_t>(part.M));
  exp.branch_owner.reserve(static_cast<std::size_t>(part.M));
  double bmin = 1e300, bmax = -1e300;
  for (std::size_t i = 0; i < inst.c.size(); ++i) {
    double b = inst.c[i] / std::sqrt(static_cast<double>(part.n[i]));
    bmin = std::min(bmin, b);
    bmax = std::max(bmax, b);
    for (long long j = 0; j < part.n[i]; ++j) {
      exp.branch_coeff.push_back(b);
      exp.branch_owner.push_back(static_cast<int>(i));
    }
  }
  exp.max_pair_spread = bmax - bmin;
  // c_i^2/n_i lies in [1/M - r/n_i, 1/M + r/n_i] with n_i >= 1, hence:
  double invM = 1.0 / static_cast<double>(part.M);
  double lo = std::max(0.0, invM - part.residual);
  exp.spread_bound = std::sqrt(invM + part.residual) - std::sqrt(lo);
  if (exp.max_pair_spread > exp.spread_bound + 1e-15)
    fail("ToleranceExceeded", "branch coefficient spread exceeds its residual bound");
  return exp;
}

EquidistanceReport check_equidistance(const AuxiliaryExpansion& exp) {
  if (exp.branch_coeff.empty()) fail("EmptyInput", "expansion has no branches");
  const auto K = static_cast<Eigen::Index>(exp.branch_coeff.size());
  Vec combined(K);
  for (Eigen::Index j = 0; j < K; ++j)
    combined[j] = Complex(exp.branch_coeff[static_cast<std::size_t>(j)], 0.0);
  PureState psi = make_state(combined);

  EquidistanceReport report;
  double dmin = 1e300, dmax = -1e300, acc = 0.0;
  Vec basis = Vec::Zero(K);
  for (Eigen::Index j = 0; j < K; ++j) {
    basis[j] = Complex(1.0, 0.0);
    double d = fs_distance(psi, make_state(basis));
    basis[j] = Complex(0.0, 0.0);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    acc += d;
  }
  report.theta = acc / static_cast<double>(K);
  report.spread = dmax - dmin;
  return report;
}

DerivedProbabilities derive_probabilities(const std::vector<double>& probs,
                                          double eps, long long m_cap) {
  DerivedProbabilities out;
  out.partition = rational_partition(probs, eps, m_cap);
  out.p.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    out.p[i] = static_cast<double>(out.partition.n[i]) /
               static_cast<double>(out.partition.M);
  out.bound = out.partition.residual;
  return out;
}

DerivedProbabilities derive_probabilities(const BornInstance& inst, double eps,
                                          long long m_cap) {
  std::vector<double> probs(inst.c.size());
  for (std::size_t i = 0; i < inst.c.size(); ++i) probs[i] = inst.c[i] * inst.c[i];
  return derive_probabilities(probs, eps, m_cap);
}

bool phase_invariance_check(const BornInstance& inst,
                            const std::vector<double>& phases, double eps,
                            double tol) {
  if (phases.size() != inst.c.size())
    fail("LengthMismatch", "need one phase per coefficient");
  const auto N = static_cast<Eigen::Index>(inst.c.size());

  // Distances among {combined, branches} with and without the branch phases.
  Vec plain(N), phased(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    plain[i] = Complex(inst.c[iu], 0.0);
    phased[i] = std::polar(inst.c[iu], phases[iu]);
  }
  PureState psi = make_state(plain);
  PureState psi_phased = make_state(phased);
  Vec basis = Vec::Zero(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    basis[i] = Complex(1.0, 0.0);
    PureState branch = make_state(basis);
    basis[i] = std::polar(1.0, phases[iu]);
    PureState branch_phased = make_state(basis);
    basis[i] = Complex(0.0, 0.0);
    if (std::abs(fs_distance(psi, branch) - fs_distance(psi_phased, branch_phased)) > tol)
      return false;
  }

  // Probabilities re-derived from the phased amplitudes must agree bitwise:
  // the partition sees only magnitudes, and p = n/M is integer arithmetic.
  std::vector<double> recovered(inst.c.size());
  for (std::size_t i = 0; i < inst.c.size(); ++i)
    recovered[i] = std::abs(phased[static_cast<Eigen::Index>(i)]);
  double norm = 0.0;
  for (double r : recovered) norm += r * r;
  norm = std::sqrt(norm);
  for (double& r : recovered) r /= norm;
  DerivedProbabilities a = derive_probabilities(inst, eps);
  DerivedProbabilities b = derive_probabilities(BornInstance(recovered), eps);
  if (a.p.size() != b.p.size()) return false;
  for (std::size_t i = 0; i < a.p.size(); ++i)
    if (a.p[i] != b.p[i]) return false;
  return true;
}

}  // namespace lawless
