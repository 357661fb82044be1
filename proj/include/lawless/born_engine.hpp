#pragma once

#include <cstdint>
#include <vector>

namespace lawless {

// Superposition coefficients taken positive real: any phases are stripped by
// construction elsewhere; distances from the superposition to its branches
// depend only on these magnitudes.
struct BornInstance {
  std::vector<double> c;  // all > 0, sum of squares 1 within 1e-12

  explicit BornInstance(std::vector<double> coefficients);
};

// n_i/M approximation of a probability vector: sum n_i == M exactly, every
// n_i >= 1, residual = max_i |p_i - n_i/M|.
struct RationalPartition {
  std::vector<long long> n;
  long long M = 0;
  double residual = 0.0;
};

// Smallest M (searched incrementally from M = len(probs)) whose rounded,
// largest-remainder-corrected counts meet `residual <= eps`. Throws TooTight
// when no M <= m_cap works.
RationalPartition rational_partition(const std::vector<double>& probs, double eps,
                                     long long m_cap = 100000000);

// Branch-level refinement: coefficient i splits into n_i branches of weight
// c_i / sqrt(n_i). When the partition is exact all branch weights equal
// 1/sqrt(M); otherwise their spread is bounded by a function of the residual.
struct AuxiliaryExpansion {
  std::vector<double> branch_coeff;  // flattened, group i contributes n_i copies
  std::vector<int> branch_owner;     // index i of the owning coefficient
  long long total_branches = 0;
  double max_pair_spread = 0.0;  // max |b_j - b_k| over branch pairs
  double spread_bound = 0.0;     // sqrt(1/M + r) - sqrt(max(0, 1/M - r))
};

AuxiliaryExpansion auxiliary_expansion(const BornInstance& inst,
                                       const RationalPartition& part);

// Embeds the expansion in dim = total_branches and measures the distance from
// the combined state to every branch state. With spread == 0 the mean angle
// theta satisfies total_branches * cos^2(theta/2) == 1.
struct EquidistanceReport {
  double theta = 0.0;   // mean distance
  double spread = 0.0;  // max - min distance
};

EquidistanceReport check_equidistance(const AuxiliaryExpansion& exp);

// p_i = n_i / M. |p_i - c_i^2| <= bound <= eps with bound = partition residual.
struct DerivedProbabilities {
  std::vector<double> p;
  double bound = 0.0;
  RationalPartition partition;
};

DerivedProbabilities derive_probabilities(const BornInstance& inst, double eps,
                                          long long m_cap = 100000000);

// Same, but partitions the given probabilities directly instead of squaring
// coefficients first; squaring sqrt(p) does not always round-trip in floating
// point, so callers that start from probabilities keep exact residuals here.
DerivedProbabilities derive_probabilities(const std::vector<double>& probs,
                                          double eps,
                                          long long m_cap = 100000000);

// Multiplies branch i by exp(i phases[i]) and verifies that (a) all pairwise
// distances among {combined state, branch states} are unchanged within tol
// and (b) the derived probabilities are bitwise identical.
bool phase_invariance_check(const BornInstance& inst,
                            const std::vector<double>& phases, double eps = 1e-6,
                            double tol = 1e-12);

}  // namespace lawless
