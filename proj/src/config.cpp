#include "tracker/config.hpp"

#include <fstream>
#include <set>

namespace tracker {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("key \"" + key + "\" in " + where + " must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  const json& v = obj.at(key);
  if (!v.is_number_unsigned())
    throw ConfigError("key \"" + key + "\" in " + where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

MeanProfile parse_profile(const json& obj, std::optional<std::uint64_t> forced_horizon,
                          const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> allowed = {"transitions", "means"};
  if (!forced_horizon) allowed.insert("t");
  reject_unknown_keys(obj, allowed, where);

  MeanProfile p;
  p.horizon = forced_horizon ? *forced_horizon : get_uint(obj, "t", where);
  if (!obj.contains("transitions") || !obj.at("transitions").is_array())
    throw ConfigError(where + " needs a \"transitions\" array");
  if (!obj.contains("means") || !obj.at("means").is_array())
    throw ConfigError(where + " needs a \"means\" array");
  for (const json& v : obj.at("transitions")) {
    if (!v.is_number_unsigned())
      throw ConfigError("transitions in " + where + " must be non-negative integers");
    p.transitions.push_back(v.get<std::uint64_t>());
  }
  for (const json& v : obj.at("means")) {
    if (!v.is_number()) throw ConfigError("means in " + where + " must be numbers");
    p.means.push_back(v.get<double>());
  }
  return p;
}

RewardFamily parse_family(const json& obj) {
  if (!obj.is_object()) throw ConfigError("\"family\" must be an object");
  reject_unknown_keys(obj, {"kind", "concentration"}, "family");
  RewardFamily f;
  if (!obj.contains("kind") || !obj.at("kind").is_string())
    throw ConfigError("family needs a string \"kind\"");
  std::string kind = obj.at("kind").get<std::string>();
  if (kind == "bernoulli") f.kind = RewardKind::bernoulli;
  else if (kind == "beta") f.kind = RewardKind::beta;
  else if (kind == "constant") f.kind = RewardKind::constant;
  else throw ConfigError("unknown reward family \"" + kind + "\"");
  if (obj.contains("concentration")) {
    if (f.kind != RewardKind::beta)
      throw ConfigError("\"concentration\" only applies to the beta family");
    f.concentration = get_number(obj, "concentration", "family");
    if (!(f.concentration > 0.0)) throw ConfigError("concentration must be positive");
  }
  return f;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("top level must be an object");
  reject_unknown_keys(doc, {"profile", "params", "family", "estimator", "trials", "seed", "bandit"},
                      "top level");
  if (!doc.contains("profile")) throw ConfigError("missing \"profile\"");
  if (!doc.contains("params")) throw ConfigError("missing \"params\"");

  RunConfig rc;
  rc.experiment.profile = parse_profile(doc.at("profile"), std::nullopt, "profile");

  const json& pj = doc.at("params");
  if (!pj.is_object()) throw ConfigError("\"params\" must be an object");
  reject_unknown_keys(pj, {"gamma0", "gamma", "beta", "delta", "b", "mu0"}, "params");
  rc.experiment.params.gamma0 = get_number(pj, "gamma0", "params");
  rc.experiment.params.gamma = get_number(pj, "gamma", "params");
  rc.experiment.params.beta = get_number(pj, "beta", "params");
  rc.experiment.params.delta = get_number(pj, "delta", "params");
  rc.experiment.params.b = get_number(pj, "b", "params");
  rc.experiment.params.mu0 = get_number(pj, "mu0", "params");

  if (doc.contains("family")) rc.experiment.family = parse_family(doc.at("family"));
  if (doc.contains("estimator")) {
    const json& e = doc.at("estimator");
    if (!e.is_string()) throw ConfigError("\"estimator\" must be a string");
    std::string name = e.get<std::string>();
    if (name == "recursive") rc.experiment.estimator = EstimatorKind::recursive;
    else if (name == "oracle") rc.experiment.estimator = EstimatorKind::oracle;
    else throw ConfigError("unknown estimator \"" + name + "\"");
  }
  if (doc.contains("trials")) rc.experiment.trials = get_uint(doc, "trials", "top level");
  if (doc.contains("seed")) rc.experiment.seed = get_uint(doc, "seed", "top level");

  if (doc.contains("bandit")) {
    const json& bj = doc.at("bandit");
    if (!bj.is_object()) throw ConfigError("\"bandit\" must be an object");
    reject_unknown_keys(bj, {"horizon", "arms"}, "bandit");
    BanditConfig bc;
    bc.horizon = get_uint(bj, "horizon", "bandit");
    if (!bj.contains("arms") || !bj.at("arms").is_array() || bj.at("arms").empty())
      throw ConfigError("bandit needs a non-empty \"arms\" array");
    std::size_t idx = 0;
    for (const json& arm : bj.at("arms")) {
      MeanProfile p = parse_profile(arm, bc.horizon, "bandit arm " + std::to_string(idx));
      bc.arms.push_back(std::move(p));
      ++idx;
    }
    bc.beta = rc.experiment.params.beta;
    bc.delta = rc.experiment.params.delta;
    bc.family = rc.experiment.family;
    bc.seed = rc.experiment.seed;
    rc.bandit = std::move(bc);
  }

  // Resolved view with defaults made explicit, for the run manifest.
  json resolved = doc;
  if (!resolved.contains("family"))
    resolved["family"] = {{"kind", reward_kind_name(rc.experiment.family.kind)}};
  if (!resolved.contains("estimator"))
    resolved["estimator"] = estimator_kind_name(rc.experiment.estimator);
  if (!resolved.contains("trials")) resolved["trials"] = rc.experiment.trials;
  if (!resolved.contains("seed")) resolved["seed"] = rc.experiment.seed;
  rc.resolved = std::move(resolved);
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

}  // namespace tracker
