#include "larmor/config.hpp"

#include <fstream>

#include <json.hpp>

#include "larmor/errors.hpp"

namespace larmor {

namespace {

double number_at(const nlohmann::json& node, const std::string& key) {
  const auto& value = node.at(key);
  if (!value.is_number())
    throw DomainError("config key '" + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

RuntimeConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& err) {
    throw DomainError("config file '" + path + "' is not valid JSON: " +
                      err.what());
  }

  RuntimeConfig cfg;
  if (doc.contains("hbar_J_s")) cfg.constants.hbar = number_at(doc, "hbar_J_s");
  if (cfg.constants.hbar <= 0.0)
    throw DomainError("config key 'hbar_J_s' must be positive");

  if (doc.contains("particle")) {
    const auto& particle = doc.at("particle");
    if (!particle.is_object())
      throw DomainError("config key 'particle' must be an object");
    if (particle.contains("mass_kg"))
      cfg.particle.mass = number_at(particle, "mass_kg");
    if (particle.contains("moment_J_per_T"))
      cfg.particle.magnetic_moment = number_at(particle, "moment_J_per_T");
    if (particle.contains("label")) {
      if (!particle.at("label").is_string())
        throw DomainError("config key 'particle.label' must be a string");
      cfg.particle.label = particle.at("label").get<std::string>();
    }
  }
  validate(cfg.particle);
  return cfg;
}

}  // namespace larmor
