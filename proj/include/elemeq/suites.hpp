// The acceptance suites, shared by the acceptance test binary and the
// selftest subcommand, and the semiring round trip used by both and by the
// roundtrip subcommand.

#ifndef ELEMEQ_SUITES_HPP
#define ELEMEQ_SUITES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "elemeq/algebra.hpp"
#include "elemeq/logic.hpp"

namespace elemeq {

struct SuiteResult {
  std::string id;
  std::string title;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;  // failure details first, then facts
  double seconds = 0;
  double limit_seconds = 0;  // 0 when untimed
  bool passed() const { return failures == 0 && (limit_seconds == 0 || seconds < limit_seconds); }
};

struct SuiteOptions {
  std::uint64_t seed = 20240601;
};

const std::vector<std::string>& suite_ids();
// Throws std::invalid_argument for an unknown id.
SuiteResult run_suite(const std::string& id, const SuiteOptions& opts = {});
// "PASS AC3 <title>: 200/200 checks, 0.01 s (limit 1 s)"
std::string summary_line(const SuiteResult& r);
nlohmann::json to_json(const SuiteResult& r);

struct RoundtripItem {
  std::string sentence;  // semiring; flattened before translation
  // Witness hints by source variable; on the group side x becomes B12(x).
  std::map<std::string, std::vector<Rational>> hints;
};

struct RoundtripConfig {
  std::size_t n = 3;
  long max_numerator = 2;
  long max_denominator = 2;
  // Monomial entries of the group model; B12(x) for every positive x of the
  // semiring domain is added.
  std::vector<Rational> entry_values;  // empty: {1/2, 1, 2}
};

struct RoundtripRow {
  std::string sentence;
  std::string flat;
  bool source_truth = false;
  bool target_truth = false;
  bool match() const { return source_truth == target_truth; }
  double source_seconds = 0;
  double target_seconds = 0;
  std::size_t target_nodes = 0;
};

const std::vector<RoundtripItem>& roundtrip_corpus();
std::vector<RoundtripRow> roundtrip(const std::vector<RoundtripItem>& corpus, const RoundtripConfig& cfg = {});
nlohmann::json to_json(const RoundtripRow& r);

// Corpora for the translation checks.
const std::vector<std::string>& group_corpus();
const std::vector<std::string>& semiring_corpus();

}  // namespace elemeq

#endif  // ELEMEQ_SUITES_HPP
