#ifndef CTMC_ACF_IO_HPP
#define CTMC_ACF_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "lpnorm.hpp"
#include "model.hpp"

namespace ctmc {

/// How the initial distribution was specified in the model file.
enum class InitialKind { Stationary, Uniform, Explicit };

/// A chain plus its initial law, as read from
/// {"states": [...], "Q": [[...], ...], "initial": [...] | "stationary" | "uniform"}.
struct Model {
  GeneratorMatrix generator;
  InitialKind initial_kind = InitialKind::Stationary;
  std::vector<double> explicit_initial;

  ProbVector initial() const {
    switch (initial_kind) {
      case InitialKind::Stationary: return stationary_distribution(generator);
      case InitialKind::Uniform: return ProbVector::uniform(generator.size());
      case InitialKind::Explicit: break;
    }
    if (explicit_initial.size() != generator.size())
      throw Error(Errc::DimensionMismatch, "initial has " + std::to_string(explicit_initial.size()) +
                                               " entries, chain has " + std::to_string(generator.size()) + " states");
    return ProbVector(explicit_initial);
  }

  bool operator==(const Model& other) const {
    return generator.states() == other.generator.states() && generator.rates() == other.generator.rates() &&
           initial_kind == other.initial_kind && explicit_initial == other.explicit_initial;
  }
};

namespace detail {

template <class T>
T json_get(const nlohmann::json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::ParseError, std::string("\"") + what + "\" has the wrong type");
  }
}

}  // namespace detail

inline Model parse_model(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::ParseError, "model must be a JSON object");
  if (!doc.contains("states")) throw Error(Errc::ParseError, "missing key \"states\"");
  if (!doc.contains("Q")) throw Error(Errc::ParseError, "missing key \"Q\"");
  for (const auto& item : doc.items())
    if (item.key() != "states" && item.key() != "Q" && item.key() != "initial")
      throw Error(Errc::ParseError, "unknown key \"" + item.key() + "\"");

  auto states = detail::json_get<std::vector<double>>(doc.at("states"), "states");
  auto q = detail::json_get<std::vector<std::vector<double>>>(doc.at("Q"), "Q");
  Model model{validate_generator(q, StateSpace(std::move(states)))};

  if (doc.contains("initial")) {
    const auto& init = doc.at("initial");
    if (init.is_string()) {
      const auto name = init.get<std::string>();
      if (name == "stationary")
        model.initial_kind = InitialKind::Stationary;
      else if (name == "uniform")
        model.initial_kind = InitialKind::Uniform;
      else
        throw Error(Errc::ParseError, "\"initial\" must be \"stationary\", \"uniform\" or a list, got \"" + name + "\"");
    } else {
      model.initial_kind = InitialKind::Explicit;
      model.explicit_initial = detail::json_get<std::vector<double>>(init, "initial");
    }
  }
  (void)model.initial();  // validate eagerly
  return model;
}

inline Model parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return parse_model(doc);
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open model file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

inline nlohmann::json to_json(const Model& model) {
  nlohmann::json doc;
  const auto s = model.generator.states().values();
  doc["states"] = std::vector<double>(s.begin(), s.end());
  const auto& q = model.generator.rates();
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    std::vector<double> row(std::size_t(q.cols()));
    for (Eigen::Index j = 0; j < q.cols(); ++j) row[std::size_t(j)] = q(i, j);
    rows.push_back(row);
  }
  doc["Q"] = rows;
  switch (model.initial_kind) {
    case InitialKind::Stationary: doc["initial"] = "stationary"; break;
    case InitialKind::Uniform: doc["initial"] = "uniform"; break;
    case InitialKind::Explicit: doc["initial"] = model.explicit_initial; break;
  }
  return doc;
}

/// Key used for p in the "f_lp" object: shortest decimal form ("1", "2.5").
inline std::string p_key(double p) {
  std::ostringstream os;
  os.precision(17);
  os << p;
  return os.str();
}

/// {"c":..., "class":"NotInLpAnyP"|"InLpAllP", "sup_norm":..., "f_lp":{"1":..., ...}}.
/// When the mixture is unavailable "f_lp" is null and "f_lp_unavailable"
/// names the reason.
inline nlohmann::json to_json(const LpReport& report) {
  nlohmann::json doc;
  doc["c"] = report.c;
  doc["class"] = std::string(lp_class_name(report.integrable_class));
  doc["sup_norm"] = report.sup_norm;
  if (report.mixture_available) {
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [p, v] : report.f_lp_values) f[p_key(p)] = v;
    doc["f_lp"] = f;
  } else {
    doc["f_lp"] = nullptr;
    doc["f_lp_unavailable"] = "DegenerateSpectrum";
  }
  return doc;
}

}  // namespace ctmc

#endif  // CTMC_ACF_IO_HPP
