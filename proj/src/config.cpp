#include "subreg/config.hpp"

#include <fstream>
#include <stdexcept>

namespace subreg {

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  Json config;
  try {
    in >> config;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "' is not valid JSON: " +
                                e.what());
  }
  if (!config.is_object()) {
    throw std::invalid_argument("config '" + path + "' must be a JSON object");
  }
  return config;
}

double config_number(const Json& config, const char* key, double fallback) {
  if (!config.contains(key)) return fallback;
  return number_from_json(config[key], key);
}

double require_number(const Json& config, const char* key, const char* what) {
  if (!config.contains(key)) {
    throw std::invalid_argument(std::string(what) + ": missing required key '" +
                                key + "'");
  }
  return number_from_json(config[key], key);
}

int config_int(const Json& config, const char* key, int fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_number_integer()) {
    throw std::invalid_argument(std::string("key '") + key +
                                "' must be an integer");
  }
  return config[key].get<int>();
}

}  // namespace subreg
