#include "settings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace thermoq::cli {

using nlohmann::json;

Settings::Settings(std::string command, std::vector<std::string> keys)
    : command_(std::move(command)), keys_(std::move(keys)) {}

void Settings::check_key(const std::string& key, const std::string& origin) const {
  if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) return;
  std::string known;
  for (const auto& k : keys_) known += (known.empty() ? "" : ", ") + k;
  throw UsageError(origin + ": unknown key '" + key + "' for " + command_ + " (known: " +
                   known + ")");
}

void Settings::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  json object;
  try {
    object = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  load_json(object, path.string());
}

void Settings::load_json(const json& object, const std::string& origin) {
  if (!object.is_object()) throw UsageError(origin + ": config must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    check_key(key, origin);
    if (value.is_object()) throw UsageError(origin + ": key '" + key + "' must not be nested");
    values_[key] = value;
  }
}

void Settings::set(const std::string& key, json value) {
  check_key(key, "command line");
  values_[key] = std::move(value);
}

bool Settings::has(const std::string& key) const { return values_.contains(key); }

const json& Settings::require(const std::string& key) const {
  if (!has(key)) throw UsageError("missing required parameter '" + key + "'");
  return values_.at(key);
}

std::optional<double> parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

namespace {

double as_number(const json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    if (const auto parsed = parse_double(value.get<std::string>())) return *parsed;
  }
  throw UsageError("parameter '" + key + "' must be a number (got " + value.dump() + ")");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) {
    const auto first = part.find_first_not_of(" \t");
    const auto last = part.find_last_not_of(" \t");
    parts.push_back(first == std::string::npos ? "" : part.substr(first, last - first + 1));
  }
  return parts;
}

json as_list(const json& value, const std::string& key) {
  json list = json::array();
  if (value.is_array()) {
    list = value;
  } else if (value.is_string()) {
    for (const auto& part : split(value.get<std::string>())) list.push_back(part);
  } else {
    list.push_back(value);
  }
  if (list.empty()) throw UsageError("parameter '" + key + "' must not be empty");
  return list;
}

}  // namespace

double Settings::number(const std::string& key) const { return as_number(require(key), key); }

double Settings::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t Settings::count_or(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const double value = number(key);
  if (!(value >= 0.0) || value != std::floor(value) || value > 1e15) {
    throw UsageError("parameter '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(value);
}

std::string Settings::text_or(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const json& value = values_.at(key);
  if (!value.is_string()) throw UsageError("parameter '" + key + "' must be a string");
  return value.get<std::string>();
}

std::vector<double> Settings::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : as_list(require(key), key)) out.push_back(as_number(item, key));
  return out;
}

std::optional<double> Settings::horizon(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  const json& value = values_.at(key);
  if (value.is_string() && value.get<std::string>() == "auto") return std::nullopt;
  const double t = as_number(value, key);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw UsageError("parameter '" + key + "' must be 'auto' or a finite number >= 0");
  }
  return t;
}

thermoq_population parse_population(const std::string& text) {
  if (text.rfind("pe", 0) == 0) {
    const std::string rest = text.substr(2);
    if (rest.empty()) return {1, 0.0};
    if (rest[0] == '+' || rest[0] == '-') {
      if (const auto offset = parse_double(rest.substr(1))) {
        return {1, rest[0] == '-' ? -*offset : *offset};
      }
    }
  } else if (const auto value = parse_double(text)) {
    return {0, *value};
  }
  throw UsageError("population '" + text + "' must be a number, 'pe', 'pe+x' or 'pe-x'");
}

std::vector<thermoq_population> Settings::populations(const std::string& key) const {
  std::vector<thermoq_population> out;
  for (const auto& item : as_list(require(key), key)) {
    if (item.is_number()) {
      out.push_back({0, item.get<double>()});
    } else if (item.is_string()) {
      out.push_back(parse_population(item.get<std::string>()));
    } else {
      throw UsageError("parameter '" + key + "' has a non-numeric entry " + item.dump());
    }
  }
  return out;
}

unsigned resolve_jobs(const Settings& settings, const char* env_value) {
  std::size_t jobs = 0;
  if (settings.has("jobs")) {
    jobs = settings.count_or("jobs", 0);
  } else if (env_value != nullptr && *env_value != '\0') {
    const auto parsed = parse_double(env_value);
    if (!parsed || *parsed < 1.0 || *parsed != std::floor(*parsed) || *parsed > 4096.0) {
      throw UsageError(std::string("THERMOQ_JOBS must be a positive integer (got '") +
                       env_value + "')");
    }
    jobs = static_cast<std::size_t>(*parsed);
  } else {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  if (jobs == 0 || jobs > 4096) throw UsageError("jobs must be in [1, 4096]");
  return static_cast<unsigned>(jobs);
}

}  // namespace thermoq::cli
