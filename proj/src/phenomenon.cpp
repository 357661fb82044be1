#include "lawless/phenomenon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lawless/error.hpp"
#include "lawless/report.hpp"

namespace lawless {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kSpanTol = 1e-9;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// |<b|U a>|^2 with the defensive clamp shared by sampler and classifier.
double born_probability(const Mat& U, const PureState& a, const PureState& b) {
  Complex amp = (b.amplitudes().adjoint() * (U * a.amplitudes()))(0);
  return std::norm(amp);
}

void check_span(const Scenario& sc, const PureState& alpha) {
  double covered = 0.0;
  for (const auto& [name, beta] : sc.finals) {
    (void)name;
    covered += born_probability(sc.evolution, alpha, beta);
  }
  if (std::abs(covered - 1.0) > kSpanTol)
    fail("SpanViolation", "evolved initial state leaks out of the final basis "
                          "(captured weight " + std::to_string(covered) + ")");
}

}  // namespace

const PureState& Scenario::initial(const std::string& name) const {
  for (const auto& [n, s] : initials)
    if (n == name) return s;
  fail("UnknownLabel", "no initial state named '" + name + "' in scenario " + label);
}

const PureState& Scenario::final_state(const std::string& name) const {
  for (const auto& [n, s] : finals)
    if (n == name) return s;
  fail("UnknownLabel", "no final state named '" + name + "' in scenario " + label);
}

bool Scenario::has_initial(const std::string& name) const {
  return std::any_of(initials.begin(), initials.end(),
                     [&](const auto& p) { return p.first == name; });
}

bool Scenario::has_final(const std::string& name) const {
  return std::any_of(finals.begin(), finals.end(),
                     [&](const auto& p) { return p.first == name; });
}

Scenario make_scenario(std::string label, Mat evolution,
                       std::vector<std::pair<std::string, PureState>> initials,
                       std::vector<std::pair<std::string, PureState>> finals) {
  Scenario sc;
  sc.label = std::move(label);
  sc.evolution = std::move(evolution);
  sc.initials = std::move(initials);
  sc.finals = std::move(finals);
  if (sc.initials.empty() || sc.finals.empty())
    fail("EmptyInput", "scenario needs at least one initial and one final state");
  sc.dim = sc.evolution.rows();
  if (sc.evolution.cols() != sc.dim || sc.dim == 0)
    fail("DimensionMismatch", "evolution matrix must be square and non-empty");
  if (max_abs(Mat(sc.evolution.adjoint() * sc.evolution) - Mat(Mat::Identity(sc.dim, sc.dim))) >
      kUnitaryTol)
    fail("NotUnitary", "evolution operator fails U^dagger U = I within 1e-10");
  for (const auto& [name, s] : sc.initials) {
    (void)name;
    if (s.dim() != sc.dim) fail("DimensionMismatch", "initial state dimension != evolution");
  }
  for (std::size_t i = 0; i < sc.finals.size(); ++i) {
    if (sc.finals[i].second.dim() != sc.dim)
      fail("DimensionMismatch", "final state dimension != evolution");
    for (std::size_t j = 0; j < i; ++j) {
      Complex ov = (sc.finals[j].second.amplitudes().adjoint() *
                    sc.finals[i].second.amplitudes())(0);
      if (std::abs(ov) > kUnitaryTol)
        fail("NotOrthonormal", "final states '" + sc.finals[j].first + "' and '" +
                                   sc.finals[i].first + "' are not orthogonal");
    }
  }
  for (const auto& [name, alpha] : sc.initials) {
    (void)name;
    check_span(sc, alpha);
  }
  return sc;
}

Scenario penrose_scenario() {
  // Two-port beam splitter; reflection picks up a factor i.  Symmetric under
  // the port swap, so the rotated arrangement shares the same evolution.
  const double r = 1.0 / std::sqrt(2.0);
  Mat U(2, 2);
  U << Complex(r, 0), Complex(0, r), Complex(0, r), Complex(r, 0);
  Vec e1(2), e2(2);
  e1 << Complex(1, 0), Complex(0, 0);
  e2 << Complex(0, 0), Complex(1, 0);
  return make_scenario("penrose", U, {{"alpha_1", make_state(e1)}},
                       {{"beta_1", make_state(e1)}, {"beta_2", make_state(e2)}});
}

Scenario stern_gerlach_scenario() {
  const double r = 1.0 / std::sqrt(2.0);
  Vec xp(2), up(2), dn(2);
  xp << Complex(r, 0), Complex(r, 0);
  up << Complex(1, 0), Complex(0, 0);
  dn << Complex(0, 0), Complex(1, 0);
  return make_scenario("stern-gerlach", Mat(Mat::Identity(2, 2)),
                       {{"x_plus", make_state(xp)}},
                       {{"up", make_state(up)}, {"down", make_state(dn)}});
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "penrose") return penrose_scenario();
  if (name == "stern-gerlach") return stern_gerlach_scenario();
  fail("UnknownLabel", "no built-in scenario named '" + name + "'");
}

Scenario scenario_from_json_file(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    fail("SchemaError", std::string("scenario file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) fail("SchemaError", "scenario file must hold a JSON object");
    std::string label = j.at("label").get<std::string>();
    Mat U = matrix_from_json(j.at("unitary"));
    auto read_states = [](const Json& arr) {
      std::vector<std::pair<std::string, PureState>> out;
      if (!arr.is_array()) fail("SchemaError", "state lists must be arrays");
      for (const auto& entry : arr)
        out.emplace_back(entry.at("label").get<std::string>(),
                         make_state(vector_from_json(entry.at("state"))));
      return out;
    };
    auto initials = read_states(j.at("initials"));
    auto finals = read_states(j.at("finals"));
    if (j.contains("dim") &&
        j.at("dim").get<Eigen::Index>() != U.rows())
      fail("SchemaError", "declared dim disagrees with the unitary size");
    return make_scenario(std::move(label), std::move(U), std::move(initials),
                         std::move(finals));
  } catch (const Json::exception& e) {
    fail("SchemaError", std::string("scenario file is missing fields: ") + e.what());
  }
}

std::string scenario_to_json(const Scenario& sc) {
  Json j;
  j["label"] = sc.label;
  j["dim"] = sc.dim;
  j["unitary"] = matrix_to_json(sc.evolution);
  auto states = [](const std::vector<std::pair<std::string, PureState>>& list) {
    Json arr = Json::array();
    for (const auto& [name, s] : list)
      arr.push_back(Json{{"label", name}, {"state", vector_to_json(s.amplitudes())}});
    return arr;
  };
  j["initials"] = states(sc.initials);
  j["finals"] = states(sc.finals);
  return j.dump(2) + "\n";
}

TrialLog run_phenomenon(const Scenario& sc, const std::string& initial,
                        long long n, std::uint64_t seed) {
  if (n < 1) fail("InvalidArgument", "trial count must be >= 1");
  const PureState& alpha = sc.initial(initial);
  check_span(sc, alpha);

  std::vector<double> cum;
  cum.reserve(sc.finals.size());
  double total = 0.0;
  for (const auto& [name, beta] : sc.finals) {
    (void)name;
    total += born_probability(sc.evolution, alpha, beta);
    cum.push_back(total);
  }

  TrialLog log;
  log.scenario_label = sc.label;
  log.seed = seed;
  log.trials.reserve(static_cast<std::size_t>(n));
  for (long long t = 0; t < n; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    double u = rng.uniform() * total;
    std::size_t pick = cum.size() - 1;
    for (std::size_t i = 0; i < cum.size(); ++i) {
      if (u < cum[i]) {
        pick = i;
        break;
      }
    }
    log.trials.emplace_back(initial, sc.finals[pick].first);
  }
  return log;
}

void write_trial_log_csv(const TrialLog& log, const std::string& path) {
  std::ostringstream out;
  out << "trial_index,initial,final\n";
  for (std::size_t t = 0; t < log.trials.size(); ++t)
    out << t << "," << log.trials[t].first << "," << log.trials[t].second << "\n";
  write_text_file(path, out.str());
}

TrialLog read_trial_log_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  TrialLog log;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      fail("SchemaError", "trial log rows need trial_index,initial,final");
    log.trials.emplace_back(line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1));
  }
  return log;
}

LogReport analyze_log(const TrialLog& log) {
  if (log.trials.empty()) fail("EmptyLog", "no trials to analyze");
  std::map<std::string, long long> first_count, second_count;
  std::map<std::pair<std::string, std::string>, long long> pair_count;
  for (const auto& tr : log.trials) {
    ++first_count[tr.first];
    ++second_count[tr.second];
    ++pair_count[tr];
  }
  LogReport report;
  for (const auto& [pair, c] : pair_count) {
    report.forward[pair.first][pair.second] =
        static_cast<double>(c) / static_cast<double>(first_count[pair.first]);
    report.backward[pair.second][pair.first] =
        static_cast<double>(c) / static_cast<double>(second_count[pair.second]);
  }
  const auto n = static_cast<double>(log.trials.size());
  double H = 0.0;
  for (const auto& [name, c] : second_count) {
    (void)name;
    double p = static_cast<double>(c) / n;
    if (p > 0.0) H -= p * std::log2(p);
  }
  report.entropy_bits = H;
  return report;
}

Scenario apply_symmetry(const Scenario& sc, const Mat& V) {
  if (V.rows() != sc.dim || V.cols() != sc.dim)
    fail("DimensionMismatch", "symmetry operator must match the scenario dimension");
  if (max_abs(Mat(V.adjoint() * V) - Mat(Mat::Identity(sc.dim, sc.dim))) > kUnitaryTol)
    fail("NotUnitary", "symmetry operator fails V^dagger V = I within 1e-10");
  auto map_states = [&](const std::vector<std::pair<std::string, PureState>>& list) {
    std::vector<std::pair<std::string, PureState>> out;
    out.reserve(list.size());
    for (const auto& [name, s] : list)
      out.emplace_back(name, make_state(Vec(V * s.amplitudes())));
    return out;
  };
  return make_scenario(sc.label, Mat(V * sc.evolution * V.adjoint()),
                       map_states(sc.initials), map_states(sc.finals));
}

const char* to_string(TimeDirection d) {
  switch (d) {
    case TimeDirection::Forward: return "Forward";
    case TimeDirection::Backward: return "Backward";
    default: return "Undecidable";
  }
}

TimeDirection classify_time_direction(const TrialLog& log, const Scenario& sc) {
  if (log.trials.empty()) fail("EmptyLog", "no trials to classify");

  auto resolve = [&](const std::string& name) -> const PureState& {
    if (sc.has_initial(name)) return sc.initial(name);
    if (sc.has_final(name)) return sc.final_state(name);
    fail("UnknownLabel", "label '" + name + "' is not a state of scenario " + sc.label);
  };

  // Model probabilities depend only on the label pair; cache them.  A value
  // within unitarity tolerance of 1 is the deterministic transition and is
  // snapped so that the two orientations of a deterministic record tie
  // exactly instead of differing by rounding noise.
  std::map<std::pair<std::string, std::string>, double> model_cache;
  auto model = [&](const std::string& f, const std::string& s) {
    auto key = std::make_pair(f, s);
    auto it = model_cache.find(key);
    if (it != model_cache.end()) return it->second;
    double p = born_probability(sc.evolution, resolve(f), resolve(s));
    if (p > 1.0 - kUnitaryTol) p = 1.0;
    model_cache[key] = p;
    return p;
  };

  auto score = [&](bool reversed) {
    std::map<std::string, long long> first_count;
    std::map<std::pair<std::string, std::string>, long long> pair_count;
    for (const auto& tr : log.trials) {
      auto p = reversed ? std::make_pair(tr.second, tr.first) : tr;
      ++first_count[p.first];
      ++pair_count[p];
    }
    double total = 0.0;
    for (const auto& [pair, c] : pair_count) {
      double born = model(pair.first, pair.second);
      if (born == 0.0) return -std::numeric_limits<double>::infinity();
      double emp = static_cast<double>(c) / static_cast<double>(first_count[pair.first]);
      total += static_cast<double>(c) * (std::log(born) - std::log(emp));
    }
    return total;
  };

  double fwd = score(false);
  double bwd = score(true);
  if (fwd > bwd) return TimeDirection::Forward;
  if (bwd > fwd) return TimeDirection::Backward;
  return TimeDirection::Undecidable;
}

double protective_measure(const PureState& s, const Mat& A) {
  if (A.rows() != s.dim() || A.cols() != s.dim())
    fail("DimensionMismatch", "observable must match the state dimension");
  if (max_abs(Mat(A - A.adjoint())) > kUnitaryTol)
    fail("NotHermitian", "observable fails A = A^dagger within 1e-10");
  Complex v = (s.amplitudes().adjoint() * (A * s.amplitudes()))(0);
  return v.real();
}

ProjectiveOutcome projective_measure(const PureState& s, const Mat& A,
                                     CounterRng& rng) {
  if (A.rows() != s.dim() || A.cols() != s.dim())
    fail("DimensionMismatch", "observable must match the state dimension");
  if (max_abs(Mat(A - A.adjoint())) > kUnitaryTol)
    fail("NotHermitian", "observable fails A = A^dagger within 1e-10");

  Eigen::SelfAdjointEigenSolver<Mat> solver(A);
  const Eigen::VectorXd evals = solver.eigenvalues();
  const Mat evecs = solver.eigenvectors();

  // Cluster near-degenerate eigenvalues into eigenspaces.
  struct Cluster {
    double value;
    Eigen::Index begin, end;  // eigenvector column range [begin, end)
    double weight;
  };
  std::vector<Cluster> clusters;
  for (Eigen::Index i = 0; i < evals.size();) {
    Eigen::Index j = i + 1;
    while (j < evals.size() && evals[j] - evals[j - 1] <= 1e-10) ++j;
    double mean = 0.0;
    for (Eigen::Index q = i; q < j; ++q) mean += evals[q];
    mean /= static_cast<double>(j - i);
    double w = 0.0;
    for (Eigen::Index q = i; q < j; ++q)
      w += std::norm((evecs.col(q).adjoint() * s.amplitudes())(0));
    clusters.push_back({mean, i, j, w});
    i = j;
  }

  double total = 0.0;
  for (const auto& c : clusters) total += c.weight;
  double u = rng.uniform() * total;
  const Cluster* pick = nullptr;
  double cum = 0.0;
  for (const auto& c : clusters) {
    cum += c.weight;
    if (u < cum) {
      pick = &c;
      break;
    }
  }
  if (pick == nullptr) {  // u landed on the top boundary; take last nonzero
    for (auto it = clusters.rbegin(); it != clusters.rend(); ++it)
      if (it->weight > 0.0) {
        pick = &*it;
        break;
      }
  }
  if (pick == nullptr) fail("ZeroVector", "state has no weight on any eigenspace");

  Vec proj = Vec::Zero(s.dim());
  for (Eigen::Index q = pick->begin; q < pick->end; ++q)
    proj += evecs.col(q) * (evecs.col(q).adjoint() * s.amplitudes())(0);
  return ProjectiveOutcome{pick->value, make_state(proj)};
}

ProjectiveOutcome projective_measure(const PureState& s, const Mat& A,
                                     std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  return projective_measure(s, A, rng);
}

ProtocolResult alternating_protocol(const PureState& s, const Mat& A,
                                    const Mat& B, int k, MeasureMode mode,
                                    std::uint64_t seed) {
  if (k < 2) fail("InvalidArgument", "need at least two A,B repetitions");
  ProtocolResult result;
  result.values.reserve(2 * static_cast<std::size_t>(k));
  if (mode == MeasureMode::Protective) {
    double va = protective_measure(s, A);
    double vb = protective_measure(s, B);
    for (int i = 0; i < k; ++i) {
      result.values.push_back(va);
      result.values.push_back(vb);
    }
  } else {
    CounterRng rng(seed, 0);
    PureState state = s;
    for (int i = 0; i < k; ++i) {
      auto ra = projective_measure(state, A, rng);
      result.values.push_back(ra.value);
      state = ra.post;
      auto rb = projective_measure(state, B, rng);
      result.values.push_back(rb.value);
      state = rb.post;
    }
  }
  bool constant = true;
  for (std::size_t i = 2; i < result.values.size(); ++i)
    if (std::abs(result.values[i] - result.values[i - 2]) > 1e-12) constant = false;
  result.constant = constant;
  return result;
}

}  // namespace lawless
