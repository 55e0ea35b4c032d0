#pragma once

// Flat key/value run configuration: JSON config file first, command-line
// flags on top. Unknown keys are rejected so typos do not silently fall back
// to defaults.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermoq/thermoq.h"

namespace thermoq::cli {

/// Bad flags, bad config contents, missing required values. Exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable config, unwritable output. Exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Settings {
 public:
  Settings(std::string command, std::vector<std::string> keys);

  void load_file(const std::filesystem::path& path);
  void load_json(const nlohmann::json& object, const std::string& origin);
  void set(const std::string& key, nlohmann::json value);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::size_t count_or(const std::string& key, std::size_t fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  /// Non-empty list of numbers; a string value is split on commas.
  std::vector<double> numbers(const std::string& key) const;
  /// Time horizon: a non-negative number, or nullopt for "auto".
  std::optional<double> horizon(const std::string& key) const;
  /// Numbers are absolute populations; "pe", "pe+x", "pe-x" are offsets from
  /// the equilibrium population.
  std::vector<thermoq_population> populations(const std::string& key) const;

 private:
  const nlohmann::json& require(const std::string& key) const;
  void check_key(const std::string& key, const std::string& origin) const;

  std::string command_;
  std::vector<std::string> keys_;
  nlohmann::json values_ = nlohmann::json::object();
};

/// Strict decimal parse of the whole string.
std::optional<double> parse_double(const std::string& text);
thermoq_population parse_population(const std::string& text);

/// --jobs, else config "jobs", else THERMOQ_JOBS, else hardware threads.
unsigned resolve_jobs(const Settings& settings, const char* env_value);

}  // namespace thermoq::cli
