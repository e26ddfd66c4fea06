#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rlverif/rng.hpp"

namespace rlv {

enum class KnobKind { continuous, discrete };

/// One factor of the action space: either a closed interval [lo, hi] or an
/// ordered finite set of values. Construct through the named factories; they
/// enforce the invariants and throw ContractViolation otherwise.
class KnobSpec {
 public:
  static KnobSpec continuous(std::string name, double lo, double hi);
  static KnobSpec discrete(std::string name, std::vector<double> values);
  /// {first, first + step, ..., last}, e.g. integer_range("len", 100, 1000, 100).
  static KnobSpec integer_range(std::string name, long first, long last, long step = 1);

  KnobKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == KnobKind::discrete; }
  const std::string& name() const noexcept { return name_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool contains(double v) const noexcept;
  /// Position of v in the discrete value list, or npos.
  std::size_t index_of(double v) const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const KnobSpec&, const KnobSpec&) = default;

 private:
  KnobSpec() = default;

  KnobKind kind_ = KnobKind::continuous;
  std::string name_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> values_;
};

/// One concrete value per knob, positionally matched.
struct Action {
  std::vector<double> values;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Violation {
  enum class Kind { length_mismatch, out_of_bounds, not_in_set };

  Kind kind;
  std::size_t knob;  // unused for length_mismatch
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class ActionSpace {
 public:
  ActionSpace() = default;
  explicit ActionSpace(std::vector<KnobSpec> knobs);

  std::size_t size() const noexcept { return knobs_.size(); }
  const KnobSpec& operator[](std::size_t k) const { return knobs_.at(k); }
  std::span<const KnobSpec> knobs() const noexcept { return knobs_; }
  std::vector<std::string> names() const;

  friend bool operator==(const ActionSpace&, const ActionSpace&) = default;

 private:
  std::vector<KnobSpec> knobs_;
};

/// Empty result means the action is valid.
std::vector<Violation> validate(const ActionSpace& space, const Action& action);

/// Throws ValidationError listing every violation.
void require_valid(const ActionSpace& space, const Action& action);

Action sample_uniform(const ActionSpace& space, Rng& rng);

}  // namespace rlv
