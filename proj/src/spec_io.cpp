#include "weierdim/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "weierdim/error.hpp"

namespace weierdim {

namespace {

constexpr char kModule[] = "seqcore";
using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) throw config_error(kModule, where + " must be a JSON object");
  for (const auto& key : required)
    if (!obj.contains(key)) throw config_error(kModule, where + " is missing \"" + key + "\"");
  for (const auto& [key, _] : obj.items())
    if (!required.count(key) && !optional.count(key))
      throw config_error(kModule, where + " has unknown field \"" + key + "\"");
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw config_error(kModule, where + "." + key + " must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_array()) throw config_error(kModule, where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw config_error(kModule, where + "." + key + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

json spec_to_json(const SequenceSpec& spec, const std::optional<std::string>& base) {
  json doc;
  std::visit(
      [&doc](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GeometricExponent>) {
          doc["kind"] = "geometric_exponent";
          doc["params"] = {{"base", k.base}, {"beta", k.beta}, {"alpha", k.alpha}};
        } else if constexpr (std::is_same_v<K, PowerTower>) {
          doc["kind"] = "power_tower";
          doc["params"] = {{"linear", k.linear}, {"sqrt", k.sqrt_coeff}};
        } else if constexpr (std::is_same_v<K, SuperTower>) {
          doc["kind"] = "super_tower";
          doc["params"] = {{"power", k.power}, {"root", k.root}, {"shifted", k.shifted}};
        } else {
          doc["kind"] = "explicit_table";
          doc["params"] = {{"log_a", k.log_a}, {"log_b", k.log_b}};
          if (!k.theta.empty()) doc["params"]["theta"] = k.theta;
        }
      },
      spec.kind());
  const auto& ph = spec.phase();
  switch (ph.rule) {
    case PhaseRule::Zero:
      doc["phase"] = {{"rule", "zero"}};
      break;
    case PhaseRule::Constant:
      doc["phase"] = {{"rule", "constant"}, {"theta", ph.constant}};
      break;
    case PhaseRule::ExplicitList:
      doc["phase"] = {{"rule", "list"}, {"values", ph.values}};
      break;
  }
  if (base) doc["base"] = *base;
  return doc;
}

SequenceSpec spec_from_json(const json& doc) {
  require_keys(doc, "spec", {"kind", "params"}, {"phase", "base"});
  if (!doc["kind"].is_string()) throw config_error(kModule, "spec.kind must be a string");
  const auto kind = doc["kind"].get<std::string>();
  const auto& p = doc["params"];
  const std::string where = "spec.params";

  SequenceKind k;
  if (kind == "geometric_exponent") {
    require_keys(p, where, {"base", "beta", "alpha"});
    k = GeometricExponent{number(p, "base", where), number(p, "beta", where), number(p, "alpha", where)};
  } else if (kind == "power_tower") {
    require_keys(p, where, {"linear"}, {"sqrt"});
    k = PowerTower{number(p, "linear", where), p.contains("sqrt") ? number(p, "sqrt", where) : 0.0};
  } else if (kind == "super_tower") {
    require_keys(p, where, {}, {"power", "root", "shifted"});
    SuperTower s;
    if (p.contains("power")) s.power = number(p, "power", where);
    if (p.contains("root")) s.root = number(p, "root", where);
    if (p.contains("shifted")) s.shifted = number(p, "shifted", where);
    k = s;
  } else if (kind == "explicit_table") {
    require_keys(p, where, {"log_a", "log_b"}, {"theta"});
    ExplicitTable t{numbers(p, "log_a", where), numbers(p, "log_b", where), {}};
    if (p.contains("theta")) t.theta = numbers(p, "theta", where);
    k = std::move(t);
  } else {
    throw config_error(kModule, "unknown spec.kind \"" + kind + "\"");
  }

  Phase phase;
  if (doc.contains("phase")) {
    const auto& ph = doc["phase"];
    require_keys(ph, "spec.phase", {"rule"}, {"theta", "values"});
    const auto rule = ph["rule"].is_string() ? ph["rule"].get<std::string>() : std::string();
    if (rule == "zero") {
      phase.rule = PhaseRule::Zero;
    } else if (rule == "constant") {
      if (!ph.contains("theta")) throw config_error(kModule, "spec.phase constant rule needs \"theta\"");
      phase.rule = PhaseRule::Constant;
      phase.constant = number(ph, "theta", "spec.phase");
    } else if (rule == "list") {
      if (!ph.contains("values")) throw config_error(kModule, "spec.phase list rule needs \"values\"");
      phase.rule = PhaseRule::ExplicitList;
      phase.values = numbers(ph, "values", "spec.phase");
    } else {
      throw config_error(kModule, "spec.phase.rule must be zero, constant or list");
    }
  }
  return SequenceSpec(std::move(k), std::move(phase));
}

std::optional<std::string> base_hint(const json& doc) {
  if (doc.is_object() && doc.contains("base") && doc["base"].is_string())
    return doc["base"].get<std::string>();
  return std::nullopt;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cli", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw config_error(kModule, path + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cli", "cannot open " + path + " for writing");
  out << text;
  if (!out) throw io_error("cli", "write to " + path + " failed");
}

}  // namespace weierdim
