#include "tracker/model.hpp"

#include <algorithm>
#include <sstream>

namespace tracker {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::size_t MeanProfile::epoch_of(std::uint64_t round) const {
  // First transition strictly above the round, minus one. The closing round
  // equals transitions.back() and lands in the final epoch.
  auto it = std::upper_bound(transitions.begin(), transitions.end(), round);
  std::size_t idx = std::size_t(it - transitions.begin());
  if (idx == 0) return 0;  // round below 1; callers pass rounds >= 1
  return std::min(idx - 1, means.size() - 1);
}

std::string ValidationResult::summary() const {
  std::ostringstream os;
  for (const auto& v : malformed) os << "malformed: " << v.constraint << " (" << v.detail << ")\n";
  for (const auto& v : violations) os << "violated: " << v.constraint << " (" << v.detail << ")\n";
  return os.str();
}

ValidationResult validate_params(const ParamSet& p) {
  ValidationResult r;
  auto field = [&](const char* name, double v) {
    if (!finite_positive(v))
      r.malformed.push_back({"fields finite and positive", std::string(name) + " = " + fmt(v)});
  };
  field("gamma0", p.gamma0);
  field("gamma", p.gamma);
  field("beta", p.beta);
  field("delta", p.delta);
  field("b", p.b);
  field("mu0", p.mu0);
  if (!r.malformed.empty()) return r;

  auto require = [&](bool ok, const char* name, std::string detail) {
    if (!ok) r.violations.push_back({name, std::move(detail)});
  };
  require(p.beta < p.gamma, "beta < gamma",
          "beta = " + fmt(p.beta) + ", gamma = " + fmt(p.gamma));
  require(p.gamma < p.gamma0, "gamma < gamma0",
          "gamma = " + fmt(p.gamma) + ", gamma0 = " + fmt(p.gamma0));
  require(p.gamma0 <= 1.0, "gamma0 <= 1", "gamma0 = " + fmt(p.gamma0));
  require(p.mu0 <= 1.0, "mu0 <= 1", "mu0 = " + fmt(p.mu0));
  if (p.beta < 1.0) {
    double cap = (p.gamma - p.beta) / (1.0 - p.beta);
    require(p.delta < cap, "delta < (gamma-beta)/(1-beta)",
            "delta = " + fmt(p.delta) + ", cap = " + fmt(cap));
  }
  require(p.b < p.delta * p.gamma * (1.0 - p.beta) / 2.0,
          "b < delta*gamma*(1-beta)/2",
          "b = " + fmt(p.b) + ", cap = " + fmt(p.delta * p.gamma * (1.0 - p.beta) / 2.0));
  return r;
}

ValidationResult validate_profile(const MeanProfile& profile, const ParamSet& p) {
  ValidationResult r;
  // Fail closed when the parameters this check leans on are themselves bad.
  if (!finite_positive(p.gamma0) || p.gamma0 > 1.0)
    r.malformed.push_back({"gamma0 usable", "gamma0 = " + fmt(p.gamma0)});
  if (!finite_positive(p.mu0))
    r.malformed.push_back({"mu0 usable", "mu0 = " + fmt(p.mu0)});

  const auto& s = profile.transitions;
  if (profile.horizon < 2)
    r.malformed.push_back({"horizon >= 2", "horizon = " + std::to_string(profile.horizon)});
  if (s.size() < 2)
    r.malformed.push_back({"at least two transitions", "count = " + std::to_string(s.size())});
  if (profile.means.size() + 1 != s.size())
    r.malformed.push_back({"means length = transitions length - 1",
                           std::to_string(profile.means.size()) + " means, " +
                               std::to_string(s.size()) + " transitions"});
  if (!s.empty() && s.front() != 1)
    r.malformed.push_back({"first transition = 1", "got " + std::to_string(s.front())});
  if (!s.empty() && s.back() != profile.horizon)
    r.malformed.push_back({"last transition = horizon",
                           std::to_string(s.back()) + " vs " + std::to_string(profile.horizon)});
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] >= s[i + 1]) {
      r.malformed.push_back({"transitions strictly increasing",
                             "at index " + std::to_string(i)});
      break;
    }
  for (std::size_t k = 0; k < profile.means.size(); ++k) {
    double m = profile.means[k];
    if (!std::isfinite(m) || m <= 0.0 || m > 1.0) {
      r.malformed.push_back({"means in (0, 1]",
                             "epoch " + std::to_string(k + 1) + ": " + fmt(m)});
      break;
    }
  }
  if (!r.malformed.empty()) return r;

  double min_len = std::pow(double(profile.horizon), p.gamma0);
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    double len = double(s[k + 1] - s[k]);
    if (len < min_len)
      r.violations.push_back({"min epoch >= t^gamma0",
                              "epoch " + std::to_string(k + 1) + ": length " + fmt(len) +
                                  " < " + fmt(min_len)});
  }
  for (std::size_t k = 0; k < profile.means.size(); ++k)
    if (profile.means[k] < p.mu0)
      r.violations.push_back({"min mean >= mu0",
                              "epoch " + std::to_string(k + 1) + ": " + fmt(profile.means[k]) +
                                  " < " + fmt(p.mu0)});
  return r;
}

}  // namespace tracker
