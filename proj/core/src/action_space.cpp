#include "rlverif/action_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rlverif/errors.hpp"

namespace rlv {

KnobSpec KnobSpec::continuous(std::string name, double lo, double hi) {
  if (name.empty()) throw ContractViolation("knob name must not be empty");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ContractViolation("continuous knob '" + name + "' needs finite lo < hi");
  }
  KnobSpec k;
  k.kind_ = KnobKind::continuous;
  k.name_ = std::move(name);
  k.lo_ = lo;
  k.hi_ = hi;
  return k;
}

KnobSpec KnobSpec::discrete(std::string name, std::vector<double> values) {
  if (name.empty()) throw ContractViolation("knob name must not be empty");
  if (values.empty()) throw ContractViolation("discrete knob '" + name + "' has no values");
  std::set<double> seen;
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractViolation("discrete knob '" + name + "' has a non-finite value");
    if (!seen.insert(v).second) throw ContractViolation("discrete knob '" + name + "' has duplicate values");
  }
  KnobSpec k;
  k.kind_ = KnobKind::discrete;
  k.name_ = std::move(name);
  k.lo_ = *seen.begin();
  k.hi_ = *seen.rbegin();
  k.values_ = std::move(values);
  return k;
}

KnobSpec KnobSpec::integer_range(std::string name, long first, long last, long step) {
  if (step <= 0 || last < first) throw ContractViolation("bad integer range for knob '" + name + "'");
  std::vector<double> values;
  for (long v = first; v <= last; v += step) values.push_back(static_cast<double>(v));
  return discrete(std::move(name), std::move(values));
}

bool KnobSpec::contains(double v) const noexcept {
  if (kind_ == KnobKind::continuous) return v >= lo_ && v <= hi_;
  return index_of(v) != npos;
}

std::size_t KnobSpec::index_of(double v) const noexcept {
  auto it = std::find(values_.begin(), values_.end(), v);
  return it == values_.end() ? npos : static_cast<std::size_t>(it - values_.begin());
}

ActionSpace::ActionSpace(std::vector<KnobSpec> knobs) : knobs_(std::move(knobs)) {
  if (knobs_.empty()) throw ContractViolation("action space needs at least one knob");
  std::set<std::string> names;
  for (const auto& k : knobs_) {
    if (!names.insert(k.name()).second) throw ContractViolation("duplicate knob name '" + k.name() + "'");
  }
}

std::vector<std::string> ActionSpace::names() const {
  std::vector<std::string> out;
  out.reserve(knobs_.size());
  for (const auto& k : knobs_) out.push_back(k.name());
  return out;
}

std::vector<Violation> validate(const ActionSpace& space, const Action& action) {
  std::vector<Violation> out;
  if (action.values.size() != space.size()) {
    std::ostringstream msg;
    msg << "action has " << action.values.size() << " values, space has " << space.size() << " knobs";
    out.push_back({Violation::Kind::length_mismatch, 0, msg.str()});
    return out;
  }
  for (std::size_t k = 0; k < space.size(); ++k) {
    const KnobSpec& knob = space[k];
    const double v = action.values[k];
    if (knob.contains(v)) continue;
    std::ostringstream msg;
    msg << "knob " << k << " (" << knob.name() << "): " << v;
    if (knob.is_discrete()) {
      msg << " is not one of the " << knob.values().size() << " allowed values";
      out.push_back({Violation::Kind::not_in_set, k, msg.str()});
    } else {
      msg << " outside [" << knob.lo() << ", " << knob.hi() << "]";
      out.push_back({Violation::Kind::out_of_bounds, k, msg.str()});
    }
  }
  return out;
}

void require_valid(const ActionSpace& space, const Action& action) {
  auto violations = validate(space, action);
  if (violations.empty()) return;
  std::string msg = "invalid action:";
  for (const auto& v : violations) msg += " [" + v.message + "]";
  throw ValidationError(msg);
}

Action sample_uniform(const ActionSpace& space, Rng& rng) {
  Action a;
  a.values.reserve(space.size());
  for (const auto& knob : space.knobs()) {
    if (knob.is_discrete()) {
      std::uniform_int_distribution<std::size_t> pick(0, knob.values().size() - 1);
      a.values.push_back(knob.values()[pick(rng)]);
    } else {
      // uniform_real_distribution is half-open; the upper bound is still a
      // member of the knob, it is just never drawn.
      std::uniform_real_distribution<double> draw(knob.lo(), knob.hi());
      a.values.push_back(draw(rng));
    }
  }
  return a;
}

}  // namespace rlv
