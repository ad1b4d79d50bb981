#pragma once
/**
 * @file config.hpp
 * @brief Run configuration: strict JSON parsing, canonical serialization and
 *        the digests stored in experiment reports.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "thermo_billiards/errors.hpp"
#include "thermo_billiards/experiments.hpp"

namespace tb {

enum class OutputFormat { Csv, Json, Both };
const char *to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view text);

struct RunConfig {
  BilliardTable table = reference_table();
  std::uint64_t seed = 1;
  std::string output = "out";
  OutputFormat format = OutputFormat::Both;
  ValidateConfig validate;
  SimulateConfig simulate;
  EquilibrationConfig equilibrate;
  TailConfig tails;
  SubexpConfig subexp;
  DriftConfig drift;
  GrazingConfig grazing;
};

/// Rejected configuration. line/column are 1-based and 0 when not applicable.
class ConfigError : public Error {
 public:
  ConfigError(const std::string &message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses and validates a JSON document; unknown keys are errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);
/// Canonical JSON form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig &config);
/// Semantic checks (geometry, potential, sizes); throws ConfigError.
void check_config(const RunConfig &config);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

std::string config_digest(const BilliardTable &table, const ValidateConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const SimulateConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const EquilibrationConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const TailConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const SubexpConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const DriftConfig &c, std::uint64_t seed);
std::string config_digest(const BilliardTable &table, const GrazingConfig &c, std::uint64_t seed);

}  // namespace tb
