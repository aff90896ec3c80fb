#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodalsyz/io.hpp"
#include "nodalsyz/theorems.hpp"

namespace nodalsyz::sweep {

using io::Json;

// Names accepted by verify --theorem and by sweep configs.
const std::vector<std::string>& theorem_names();

struct CheckOptions {
  int threshold_offset = 0;
  std::optional<int> p_max;  // N_p range; default p_thm
  std::optional<int> q_max;  // largest q reported for Koszul tables
  int duality_p_max = -1;    // -1: all p in 0..m-2
  int green_e_max = 4;       // deg E range for the injectivity lemma
  std::uint64_t seed = 1;
};

struct CheckOutcome {
  Status status = Status::passed;
  Json detail;
};

// Runs one named check on (L, W, E).  E empty means the standard
// coefficient bundles.  Throws std::invalid_argument on an unknown name.
CheckOutcome run_check(const std::string& theorem, const LineBundle& l, const LinearSystem& w,
                       const std::vector<LineBundle>& e, const CheckOptions& options);

// Worst of two statuses: FAIL > PARTIAL > PASS > N/A.
Status combine(Status a, Status b);

struct Config {
  std::vector<std::string> catalog;  // catalog names or curve file paths
  int degree_min = 0;
  int degree_max = 5;
  std::vector<std::string> gluings{"ones", "random"};
  std::vector<std::string> systems{"complete"};  // "complete", "hyperplane"
  std::vector<std::string> theorems;
  CheckOptions options;
  unsigned threads = 1;
};

// Throws io::InputError on malformed configs, including an empty catalog.
Config parse_config(const io::Document& doc);

struct Instance {
  std::string key;
  std::string curve_name;
  CurvePtr curve;
  LineBundle bundle;
  std::string gluing_mode;
  std::string system;
  std::uint64_t seed = 0;

  LinearSystem linear_system() const;
  int size() const;  // sum of |deg_Z|, used to pick the minimal failure
};

std::vector<Instance> instances(const Config& config, std::uint64_t seed);

struct Result {
  Json report;
  bool failed = false;
  std::optional<Json> minimal_failure;  // {"curve": ..., "bundle": ...}
};

// Instances run on config.threads workers; the report lists them sorted by
// key.
Result run(const Config& config, std::uint64_t seed);

}  // namespace nodalsyz::sweep
