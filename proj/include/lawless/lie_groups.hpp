#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lawless/state_geometry.hpp"

namespace lawless {

// ============================================================================
// Matrix generator catalogs for products of U(1)/SU(2)/SU(3) with an optional
// frame factor (Lorentz or its affine extension). One factor = one diagonal
// block of the defining representation.
// ============================================================================

enum class FactorType { U1, SU2, SU3, Lorentz, Poincare };

std::string to_string(FactorType t);
FactorType factor_type_from_string(const std::string& name);

// Defining-representation size of a single factor.
std::size_t factor_dim(FactorType t);

struct GroupFactor {
  FactorType type = FactorType::U1;
  double charge = 1.0;  // coupling e; only U1 reads it
};

struct GroupSpec {
  std::vector<GroupFactor> factors;
};

struct SectorBlock {
  std::size_t offset = 0;
  std::size_t size = 0;
  FactorType type = FactorType::U1;
};

// Concrete matrix generators embedded in the direct sum, plus the structure
// constants they were validated against.
//
// Conventions (all commutators verified at build time to 1e-12):
//   gauge      [T_m, T_n] = i C^k_mn T_k      u(1): T = [-e]; su(2): sigma/2;
//                                             su(3): Gell-Mann/2
//   rotations  J_ab = i L_ab with (L_ab)^c_d = delta^c_a eta_bd - delta^c_b eta_ad,
//              eta = diag(1,-1,-1,-1); stored for (a,b) in
//              (01, 02, 03, 12, 13, 23)
//   shifts     P_a = -i E_{a4} in the 5x5 affine block
// With these choices group elements exp(-i Gamma dx) of a real connection are
// real affine matrices in the frame block and unitary in the gauge blocks.
class GeneratorCatalog {
 public:
  GroupSpec spec;
  std::size_t dim = 0;         // side of the direct-sum representation
  std::vector<SectorBlock> blocks;  // one per factor, in spec order

  std::vector<Mat> T;          // every gauge generator, catalog order
  std::vector<double> f;       // C^k_mn flattened k*nT*nT + m*nT + n
  std::vector<Mat> J;          // 6 frame rotations/boosts (empty without frame factor)
  std::vector<Mat> P;          // 4 translations (affine frame factor only)
  bool has_rotations = false;
  bool has_translations = false;

  double structure(std::size_t k, std::size_t m, std::size_t n) const;

  // M^b_a = eta^{bc} J_{ca}: the mixed-index form the connection contracts
  // with omega_mu^a_b. Zero matrix when a == b.
  Mat frame_generator_mixed(int b, int a) const;

  std::string tag() const;  // e.g. "POINCARE x SU2", "U1(e=2)"
};

// Builds and validates the catalog. Throws EmptyInput for no factors,
// UnsupportedFactor for more than one frame factor, ToleranceExceeded if a
// commutator strays from its table by more than 1e-12 (defensive; the tables
// are exact by construction).
GeneratorCatalog build_group(const GroupSpec& spec);

struct GroupElement {
  Mat matrix;
  std::string rep_tag;
  double unitarity_drift = 0.0;  // worst || g^dag g - I || over unitary blocks
};

// Wraps a raw matrix as a group element: checks every unitary block for
// drift <= 1e-9 (ToleranceExceeded otherwise) and snaps the affine block's
// bottom row to exactly (0,0,0,0,1). DimensionMismatch if the size is wrong.
GroupElement make_element(const GeneratorCatalog& cat, const Mat& m);

}  // namespace lawless
