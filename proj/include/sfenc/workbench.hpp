// Seeded term generation, the three-layer pipeline trace, and the batch
// checks behind the command-line tool.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfenc/encoder.hpp"
#include "sfenc/lambda.hpp"
#include "sfenc/sn.hpp"
#include "sfenc/sf.hpp"
#include "sfenc/trs.hpp"

namespace sfenc::wb {

inline constexpr std::size_t kDefaultRewriteFuel = 10'000;
inline constexpr std::size_t kDefaultBetaFuel = 100'000;
inline constexpr std::size_t kDefaultSnBudget = 100'000;

/// splitmix64 of (seed, index); used to give every item of a batch its own
/// stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform over binary trees with `size` leaves (Remy's algorithm), each leaf
/// S or F with probability 1/2. Identical on every platform for equal input.
/// Throws std::invalid_argument when size is 0.
sf::Term gen_sf(std::uint64_t seed, std::size_t size);

/// A normal form with exactly `size` atoms.
sf::Term gen_sf_normal(std::uint64_t seed, std::size_t size);

/// Every normal form with at most `max_size` atoms, smallest first.
std::vector<sf::Term> enumerate_sf_normal(std::size_t max_size);

struct PipelineFuel {
  std::size_t rewrite = kDefaultRewriteFuel;  // SF and TRS steps
  std::size_t beta = kDefaultBetaFuel;
};

struct LambdaCheckpoint {
  sf::Term source;  // the SF term that was encoded
  std::size_t steps = 0;
  bool normal = false;
  std::optional<lam::Term> normal_form;
};

struct PipelineTrace {
  sf::NormalizationResult sf;
  std::vector<trs::Trace> segments;       // one per SF step
  trs::NormalizationResult trs;           // independent TRS run on the translation
  std::vector<LambdaCheckpoint> lambda;   // start and end of the SF trace
};

/// Reduces `m` in SF, simulates every step in the TRS and normalizes the
/// encodings of both endpoints. Throws MismatchError if two layers disagree;
/// running out of fuel is reported, not thrown.
PipelineTrace run_pipeline_trace(const sf::Term& m, PipelineFuel fuel);

/// JSON Lines records for a pipeline trace, in emission order.
std::vector<nlohmann::ordered_json> to_json_lines(const PipelineTrace& trace);

enum class Outcome { Pass, Fail, Inconclusive };
std::string to_string(Outcome o);
int exit_code(Outcome o);

/// Machine-readable summary of a command. Contains no timings, so equal
/// arguments give byte-identical JSON.
struct RunReport {
  std::string command;
  nlohmann::ordered_json args = nlohmann::ordered_json::object();
  Outcome outcome = Outcome::Pass;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  std::vector<nlohmann::ordered_json> items;

  nlohmann::ordered_json to_json() const;
};

struct SimOptions {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::size_t max_size = 10;
  std::size_t sf_fuel = 20;
  std::size_t beta_fuel = kDefaultBetaFuel;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// For seeded terms m: if m SF-normalizes within sf_fuel, every SF step is
/// simulated in the TRS and the encodings of m and its normal form must
/// beta-normalize to alpha-equal terms. Terms that do not normalize are
/// counted as skipped.
RunReport check_sim(const SimOptions& opts);

struct SnOptions {
  std::size_t max_size = 6;
  std::size_t budget = kDefaultSnBudget;
  lam::SnMethod method = lam::SnMethod::Auto;
  unsigned threads = 0;
};

/// Strong normalisation of the encoding of every SF normal form up to
/// max_size.
RunReport check_sn(const SnOptions& opts);

/// verify_solution wrapped as a report.
RunReport verify_report(const trs::System& sys, std::size_t fuel);

}  // namespace sfenc::wb
