#pragma once
//
// Seeded measurement-record simulator: scenarios (initial states, a unitary
// process, an orthonormal final basis), trial sampling, frequency analysis,
// a statistical time-direction classifier, and the two measurement modes
// (expectation read-out vs. projective collapse).
//
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lawless/rng.hpp"
#include "lawless/state_geometry.hpp"

namespace lawless {

// A fixed experimental arrangement.  Validated on construction:
//   - evolution unitary within 1e-10          (NotUnitary)
//   - final basis orthonormal within 1e-10    (NotOrthonormal)
//   - every evolved initial lies in the span of the final basis,
//     sum_i |<beta_i|U alpha>|^2 = 1 within 1e-9   (SpanViolation)
struct Scenario {
  std::string label;
  Eigen::Index dim = 0;
  std::vector<std::pair<std::string, PureState>> initials;
  Mat evolution;
  std::vector<std::pair<std::string, PureState>> finals;

  const PureState& initial(const std::string& name) const;
  const PureState& final_state(const std::string& name) const;
  bool has_initial(const std::string& name) const;
  bool has_final(const std::string& name) const;
};

Scenario make_scenario(std::string label, Mat evolution,
                       std::vector<std::pair<std::string, PureState>> initials,
                       std::vector<std::pair<std::string, PureState>> finals);

// Built-in arrangements.
//   penrose:       2-port beam splitter U = (1/sqrt2)[[1,i],[i,1]],
//                  initial "alpha_1", finals "beta_1","beta_2" (each p = 1/2).
//   stern-gerlach: spin-x+ input, identity evolution, finals "up","down".
Scenario penrose_scenario();
Scenario stern_gerlach_scenario();
Scenario scenario_by_name(const std::string& name);  // UnknownLabel

// JSON round trip (schema documented in README).  SchemaError / FileNotFound.
Scenario scenario_from_json_file(const std::string& path);
std::string scenario_to_json(const Scenario& sc);

struct TrialLog {
  std::string scenario_label;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> trials;  // (initial, final)
};

// Each trial t draws from its own counter substream (seed, t): trials are
// order-independent and the whole log is bit-reproducible.
TrialLog run_phenomenon(const Scenario& sc, const std::string& initial,
                        long long n, std::uint64_t seed);

// CSV columns: trial_index, initial, final.
void write_trial_log_csv(const TrialLog& log, const std::string& path);
TrialLog read_trial_log_csv(const std::string& path);

struct LogReport {
  // forward[a][b]  = P(final=b | initial=a), relative frequencies
  // backward[b][a] = P(initial=a | final=b)
  std::map<std::string, std::map<std::string, double>> forward;
  std::map<std::string, std::map<std::string, double>> backward;
  double entropy_bits = 0.0;  // Shannon entropy of the final distribution
};

LogReport analyze_log(const TrialLog& log);  // EmptyLog

// States and basis mapped by V, evolution conjugated V U V^dagger; every
// process probability is unchanged.  NotUnitary / DimensionMismatch.
Scenario apply_symmetry(const Scenario& sc, const Mat& V);

enum class TimeDirection { Forward, Backward, Undecidable };
const char* to_string(TimeDirection d);

// Likelihood-ratio test between the two play directions of the record.
// For an orientation, each pair (first, second) is scored by
//     log P_model(second|first) - log P_emp(second|first),
// where P_model = |<state(second)|U state(first)>|^2 (labels resolved to
// states, initial table first) and P_emp is the record's own conditional
// frequency.  The saturated P_emp baseline makes the score a goodness-of-fit
// (-N * KL(empirical || model) <= 0); the raw model likelihood alone cannot
// separate the orientations because |<b|U a>| = |<a|U^dagger b>|.
// A model-impossible observed pair forces -infinity.  Equal scores (e.g. a
// record with a single possible final state) -> Undecidable.
TimeDirection classify_time_direction(const TrialLog& log, const Scenario& sc);

// Expectation read-out <s|A|s>; the state is left untouched.
double protective_measure(const PureState& s, const Mat& A);

struct ProjectiveOutcome {
  double value = 0.0;
  PureState post;
};

// Samples an eigenvalue with Born weights of the eigenspace projections and
// collapses to the normalized projection.  Eigenvalues within 1e-10 are
// clustered into one eigenspace.
ProjectiveOutcome projective_measure(const PureState& s, const Mat& A,
                                     CounterRng& rng);
ProjectiveOutcome projective_measure(const PureState& s, const Mat& A,
                                     std::uint64_t seed,
                                     std::uint64_t stream = 0);

enum class MeasureMode { Protective, Projective };

struct ProtocolResult {
  std::vector<double> values;  // A,B,A,B,... (length 2k)
  bool constant = false;       // every A value equal and every B value equal
};

// k >= 2 alternations of A then B.  Protective mode never touches the state
// (and ignores the seed); projective mode collapses after every read.
ProtocolResult alternating_protocol(const PureState& s, const Mat& A,
                                    const Mat& B, int k, MeasureMode mode,
                                    std::uint64_t seed);

}  // namespace lawless
