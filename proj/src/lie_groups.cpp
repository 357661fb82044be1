#include "lawless/lie_groups.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "lawless/error.hpp"

namespace lawless {

namespace {

constexpr double kTableTol = 1e-12;
constexpr std::array<double, 4> kEta = {1.0, -1.0, -1.0, -1.0};
constexpr Complex kI(0.0, 1.0);

// storage slot for the ordered frame pair (a,b), a < b
int pair_index(int a, int b) {
  static constexpr int table[4][4] = {{-1, 0, 1, 2},
                                      {-1, -1, 3, 4},
                                      {-1, -1, -1, 5},
                                      {-1, -1, -1, -1}};
  return table[a][b];
}

Mat pauli(int k) {
  Mat s = Mat::Zero(2, 2);
  switch (k) {
    case 0: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 1: s(0, 1) = -kI; s(1, 0) = kI; break;
    default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
  }
  return s;
}

Mat gell_mann(int a) {
  Mat g = Mat::Zero(3, 3);
  switch (a) {
    case 0: g(0, 1) = 1.0; g(1, 0) = 1.0; break;
    case 1: g(0, 1) = -kI; g(1, 0) = kI; break;
    case 2: g(0, 0) = 1.0; g(1, 1) = -1.0; break;
    case 3: g(0, 2) = 1.0; g(2, 0) = 1.0; break;
    case 4: g(0, 2) = -kI; g(2, 0) = kI; break;
    case 5: g(1, 2) = 1.0; g(2, 1) = 1.0; break;
    case 6: g(1, 2) = -kI; g(2, 1) = kI; break;
    default: {
      const double r = 1.0 / std::sqrt(3.0);
      g(0, 0) = r; g(1, 1) = r; g(2, 2) = -2.0 * r;
      break;
    }
  }
  return g;
}

double levi_civita3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i) * (k - j) * (k - i) > 0) ? 1.0 : -1.0;
}

// totally antisymmetric su(3) constants, 0-based indices
double su3_f(int a, int b, int c) {
  int v[3] = {a, b, c};
  double sign = 1.0;
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i + 1 < 3; ++i)
      if (v[i] > v[i + 1]) {
        std::swap(v[i], v[i + 1]);
        sign = -sign;
      }
  const double root3_2 = std::sqrt(3.0) / 2.0;
  struct Entry { int a, b, c; double val; };
  const Entry base[] = {
      {0, 1, 2, 1.0},  {0, 3, 6, 0.5},      {0, 4, 5, -0.5},
      {1, 3, 5, 0.5},  {1, 4, 6, 0.5},      {2, 3, 4, 0.5},
      {2, 5, 6, -0.5}, {3, 4, 7, root3_2},  {5, 6, 7, root3_2},
  };
  for (const auto& e : base)
    if (e.a == v[0] && e.b == v[1] && e.c == v[2]) return sign * e.val;
  return 0.0;
}

// (L_ab)^c_d = delta^c_a eta_bd - delta^c_b eta_ad
Mat lorentz_l(int a, int b) {
  Mat l = Mat::Zero(4, 4);
  for (int d = 0; d < 4; ++d) {
    l(a, d) += (b == d) ? kEta[b] : 0.0;
    l(b, d) -= (a == d) ? kEta[a] : 0.0;
  }
  return l;
}

void check_gauge_tables(const GeneratorCatalog& cat) {
  const std::size_t n = cat.T.size();
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t nn = 0; nn < n; ++nn) {
      Mat lhs = cat.T[m] * cat.T[nn] - cat.T[nn] * cat.T[m];
      Mat rhs = Mat::Zero(cat.dim, cat.dim);
      for (std::size_t k = 0; k < n; ++k) {
        double c = cat.structure(k, m, nn);
        if (c != 0.0) rhs += kI * c * cat.T[k];
      }
      if ((lhs - rhs).cwiseAbs().maxCoeff() > kTableTol)
        fail("ToleranceExceeded", "gauge commutator strayed from its table");
    }
}

void check_frame_tables(const GeneratorCatalog& cat) {
  auto jmat = [&](int a, int b) -> Mat {
    if (a == b) return Mat::Zero(cat.dim, cat.dim);
    return a < b ? cat.J[pair_index(a, b)] : Mat(-cat.J[pair_index(b, a)]);
  };
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c + 1; d < 4; ++d) {
          Mat lhs = jmat(a, b) * jmat(c, d) - jmat(c, d) * jmat(a, b);
          Mat rhs = kI * (kEta[b] * (b == c) * jmat(a, d) -
                          kEta[b] * (b == d) * jmat(a, c) -
                          kEta[a] * (a == c) * jmat(b, d) +
                          kEta[a] * (a == d) * jmat(b, c));
          if ((lhs - rhs).cwiseAbs().maxCoeff() > kTableTol)
            fail("ToleranceExceeded", "rotation commutator strayed from its table");
        }
  if (!cat.has_translations) return;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        Mat lhs = jmat(a, b) * cat.P[c] - cat.P[c] * jmat(a, b);
        Mat rhs = kI * (kEta[b] * (b == c) * cat.P[a] -
                        kEta[a] * (a == c) * cat.P[b]);
        if ((lhs - rhs).cwiseAbs().maxCoeff() > kTableTol)
          fail("ToleranceExceeded", "rotation/shift commutator strayed from its table");
      }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if ((cat.P[a] * cat.P[b] - cat.P[b] * cat.P[a]).cwiseAbs().maxCoeff() >
          kTableTol)
        fail("ToleranceExceeded", "shift generators do not commute");
}

}  // namespace

std::string to_string(FactorType t) {
  switch (t) {
    case FactorType::U1: return "U1";
    case FactorType::SU2: return "SU2";
    case FactorType::SU3: return "SU3";
    case FactorType::Lorentz: return "LORENTZ";
    case FactorType::Poincare: return "POINCARE";
  }
  return "?";
}

FactorType factor_type_from_string(const std::string& name) {
  if (name == "U1") return FactorType::U1;
  if (name == "SU2") return FactorType::SU2;
  if (name == "SU3") return FactorType::SU3;
  if (name == "LORENTZ") return FactorType::Lorentz;
  if (name == "POINCARE") return FactorType::Poincare;
  fail("UnsupportedFactor", "unknown factor '" + name + "'");
}

std::size_t factor_dim(FactorType t) {
  switch (t) {
    case FactorType::U1: return 1;
    case FactorType::SU2: return 2;
    case FactorType::SU3: return 3;
    case FactorType::Lorentz: return 4;
    case FactorType::Poincare: return 5;
  }
  return 0;
}

double GeneratorCatalog::structure(std::size_t k, std::size_t m,
                                   std::size_t n) const {
  const std::size_t nt = T.size();
  return f[(k * nt + m) * nt + n];
}

Mat GeneratorCatalog::frame_generator_mixed(int b, int a) const {
  if (!has_rotations) fail("UnsupportedFactor", "no frame factor in this group");
  if (a == b) return Mat::Zero(dim, dim);
  // eta is diagonal, so eta^{bc} J_{ca} collapses to eta^{bb} J_{ba}
  Mat j = b < a ? J[pair_index(b, a)] : Mat(-J[pair_index(a, b)]);
  return kEta[b] * j;
}

std::string GeneratorCatalog::tag() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    if (i) out << " x ";
    out << to_string(spec.factors[i].type);
    if (spec.factors[i].type == FactorType::U1)
      out << "(e=" << spec.factors[i].charge << ")";
  }
  return out.str();
}

GeneratorCatalog build_group(const GroupSpec& spec) {
  if (spec.factors.empty()) fail("EmptyInput", "group needs at least one factor");

  GeneratorCatalog cat;
  cat.spec = spec;
  int frame_factors = 0;
  for (const auto& fac : spec.factors) {
    SectorBlock blk{cat.dim, factor_dim(fac.type), fac.type};
    cat.blocks.push_back(blk);
    cat.dim += blk.size;
    if (fac.type == FactorType::Lorentz || fac.type == FactorType::Poincare)
      ++frame_factors;
  }
  if (frame_factors > 1)
    fail("UnsupportedFactor", "at most one frame factor per group");

  // local structure constants per gauge block, then embed everything
  struct LocalGauge { std::size_t first; std::size_t count; FactorType type; };
  std::vector<LocalGauge> gauge_blocks;

  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    const auto& fac = spec.factors[i];
    const auto& blk = cat.blocks[i];
    auto embed = [&](const Mat& local) {
      Mat full = Mat::Zero(cat.dim, cat.dim);
      full.block(blk.offset, blk.offset, blk.size, blk.size) = local;
      return full;
    };
    switch (fac.type) {
      case FactorType::U1: {
        gauge_blocks.push_back({cat.T.size(), 1, fac.type});
        Mat t(1, 1);
        t(0, 0) = -fac.charge;
        cat.T.push_back(embed(t));
        break;
      }
      case FactorType::SU2: {
        gauge_blocks.push_back({cat.T.size(), 3, fac.type});
        for (int k = 0; k < 3; ++k) cat.T.push_back(embed(0.5 * pauli(k)));
        break;
      }
      case FactorType::SU3: {
        gauge_blocks.push_back({cat.T.size(), 8, fac.type});
        for (int a = 0; a < 8; ++a) cat.T.push_back(embed(0.5 * gell_mann(a)));
        break;
      }
      case FactorType::Lorentz: {
        cat.has_rotations = true;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b)
            cat.J.push_back(embed(kI * lorentz_l(a, b)));
        break;
      }
      case FactorType::Poincare: {
        cat.has_rotations = true;
        cat.has_translations = true;
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) {
            Mat local = Mat::Zero(5, 5);
            local.block(0, 0, 4, 4) = kI * lorentz_l(a, b);
            cat.J.push_back(embed(local));
          }
        for (int a = 0; a < 4; ++a) {
          Mat local = Mat::Zero(5, 5);
          local(a, 4) = -kI;
          cat.P.push_back(embed(local));
        }
        break;
      }
    }
  }

  const std::size_t nt = cat.T.size();
  cat.f.assign(nt * nt * nt, 0.0);
  auto put = [&](std::size_t k, std::size_t m, std::size_t n, double v) {
    cat.f[(k * nt + m) * nt + n] = v;
  };
  for (const auto& gb : gauge_blocks) {
    if (gb.type == FactorType::SU2) {
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m)
          for (int n = 0; n < 3; ++n)
            put(gb.first + k, gb.first + m, gb.first + n, levi_civita3(k, m, n));
    } else if (gb.type == FactorType::SU3) {
      for (int k = 0; k < 8; ++k)
        for (int m = 0; m < 8; ++m)
          for (int n = 0; n < 8; ++n)
            put(gb.first + k, gb.first + m, gb.first + n, su3_f(m, n, k));
    }
  }

  check_gauge_tables(cat);
  if (cat.has_rotations) check_frame_tables(cat);
  return cat;
}

GroupElement make_element(const GeneratorCatalog& cat, const Mat& m) {
  if (m.rows() != static_cast<Eigen::Index>(cat.dim) || m.rows() != m.cols())
    fail("DimensionMismatch", "element matrix does not match the representation");
  GroupElement g;
  g.matrix = m;
  g.rep_tag = cat.tag();
  for (const auto& blk : cat.blocks) {
    auto sub = g.matrix.block(blk.offset, blk.offset, blk.size, blk.size);
    if (blk.type == FactorType::U1 || blk.type == FactorType::SU2 ||
        blk.type == FactorType::SU3) {
      double drift =
          (sub.adjoint() * sub - Mat::Identity(blk.size, blk.size)).norm();
      g.unitarity_drift = std::max(g.unitarity_drift, drift);
      if (drift > 1e-9)
        fail("ToleranceExceeded", "unitary block drifted beyond 1e-9");
    } else if (blk.type == FactorType::Poincare) {
      // exact affine bottom row
      g.matrix.row(blk.offset + 4).setZero();
      g.matrix(blk.offset + 4, blk.offset + 4) = 1.0;
    }
  }
  return g;
}

}  // namespace lawless
