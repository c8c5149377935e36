#include "subdelay/delay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "subdelay/errors.hpp"

namespace subdelay {

DelayPmf::DelayPmf(std::vector<double> mass, double truncation_tail)
    : mass_(std::move(mass)), truncation_tail_(truncation_tail) {
  if (mass_.empty()) throw InvalidPmf("pmf has empty support");
  double sum = 0.0;
  for (double p : mass_) {
    if (!(p >= 0.0)) throw InvalidPmf("pmf has a negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InvalidPmf("pmf sums to " + std::to_string(sum) + ", not 1");
  // Trailing zeros carry no information; keeping support tight keeps deposits cheap.
  while (mass_.size() > 1 && mass_.back() == 0.0) mass_.pop_back();
}

DelayPmf DelayPmf::point(std::size_t delay) {
  std::vector<double> mass(delay + 1, 0.0);
  mass[delay] = 1.0;
  return DelayPmf(std::move(mass));
}

DelayPmf DelayPmf::geometric(double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw InvalidPmf("geometric ratio must lie in [0, 1)");
  std::vector<double> mass;
  double power = 1.0;  // ratio^i
  double partial = 0.0;
  while (power * ratio >= kTruncationTail) {
    const double p = (1.0 - ratio) * power;
    mass.push_back(p);
    partial += p;
    power *= ratio;
  }
  // power is the tail at the final index; writing it as 1 - partial keeps the
  // total at 1 to rounding.
  const double residual = 1.0 - partial;
  mass.push_back(residual);
  return DelayPmf(std::move(mass), residual - (1.0 - ratio) * power);
}

double DelayPmf::tail(std::size_t j) const noexcept {
  double t = 0.0;
  for (std::size_t i = mass_.size(); i-- > j;) t += mass_[i];
  return t;
}

double expected_tail(const DelayPmf& pmf) {
  // Suffix sums from the far end, accumulated for j = support-1 .. 1.
  double tail = 0.0;
  double total = 0.0;
  for (std::size_t j = pmf.support(); j-- > 1;) {
    tail += pmf[j];
    total += tail;
  }
  return total;
}

TailBound build_upper_tail_bound(std::span<const DelayPmf> family) {
  if (family.empty()) throw EmptyFamily("upper tail bound of an empty family");
  std::size_t support = 0;
  for (const auto& p : family) support = std::max(support, p.support());

  // sup_tail[j] = max_i P_i(delay ≥ j), for j = 0..support (last entry is 0).
  std::vector<double> sup_tail(support + 1, 0.0);
  for (const auto& p : family) {
    double tail = 0.0;
    for (std::size_t j = p.support(); j-- > 0;) {
      tail += p[j];
      sup_tail[j] = std::max(sup_tail[j], tail);
    }
  }
  std::vector<double> mass(support);
  for (std::size_t j = 0; j < support; ++j) mass[j] = sup_tail[j] - sup_tail[j + 1];
  DelayPmf pmf(std::move(mass));
  const double e = expected_tail(pmf);
  return TailBound{std::move(pmf), e};
}

DelayModel DelayModel::no_delay() { return DelayModel(DelayKind::NoDelay); }

DelayModel DelayModel::geometric_mixture(double lo, double hi) {
  if (!(0.0 <= lo && lo <= hi && hi < 1.0)) throw InvalidPmf("geometric ratio range must lie in [0, 1)");
  DelayModel m(DelayKind::GeometricMixture);
  m.lo_ = lo;
  m.hi_ = hi;
  return m;
}

DelayModel DelayModel::dirichlet_window(std::size_t lo, std::size_t hi) {
  if (lo > hi) throw InvalidPmf("dirichlet window is empty");
  DelayModel m(DelayKind::DirichletWindow);
  m.window_lo_ = lo;
  m.window_hi_ = hi;
  return m;
}

DelayModel DelayModel::reward_geometric(double base, double slope) {
  if (!(base >= 0.0 && slope >= 0.0 && base + slope < 1.0))
    throw InvalidPmf("reward-driven geometric ratio must stay in [0, 1)");
  DelayModel m(DelayKind::RewardGeometric);
  m.lo_ = base;
  m.hi_ = slope;
  return m;
}

DelayModel DelayModel::reward_point(double scale, std::size_t offset) {
  if (!(scale >= 0.0)) throw InvalidPmf("delay scale must be non-negative");
  DelayModel m(DelayKind::RewardPoint);
  m.hi_ = scale;
  m.window_lo_ = offset;
  return m;
}

DelayModel DelayModel::adversarial_point(double scale, std::size_t offset, std::size_t first) {
  if (!(scale >= 0.0)) throw InvalidPmf("delay scale must be non-negative");
  DelayModel m(DelayKind::AdversarialPoint);
  m.hi_ = scale;
  m.window_lo_ = offset;
  m.first_ = first;
  return m;
}

DelayModel DelayModel::bounded_adversarial(std::size_t d, Adversary adversary) {
  if (!adversary) throw InvalidPmf("bounded adversary needs a pmf supplier");
  DelayModel m(DelayKind::BoundedAdversarial);
  m.bound_ = d;
  m.adversary_ = std::move(adversary);
  return m;
}

DelayModel DelayModel::custom(DelayPmf pmf) {
  DelayModel m(DelayKind::Custom);
  m.bound_ = pmf.support() - 1;
  m.fixed_ = std::move(pmf);
  return m;
}

DelayModel DelayModel::from_name(std::string_view name) {
  if (name == "D1") return no_delay();
  if (name == "D2") return geometric_mixture();
  if (name == "D3") return dirichlet_window();
  if (name == "D4") return reward_geometric();
  if (name == "D5") return reward_point();
  if (name == "D6") return adversarial_point();
  constexpr std::string_view prefix = "bounded(";
  if (name.starts_with(prefix) && name.ends_with(")")) {
    const auto digits = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    std::size_t d = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
      const auto pmf = DelayPmf::point(d);
      auto model = bounded_adversarial(d, [pmf](const DelayContext&) { return pmf; });
      return model;
    }
  }
  throw InvalidPmf("unknown delay model '" + std::string(name) + "'");
}

DelayClass DelayModel::delay_class() const noexcept {
  switch (kind_) {
    case DelayKind::NoDelay:
    case DelayKind::GeometricMixture:
    case DelayKind::DirichletWindow:
    case DelayKind::Custom:
      return DelayClass::StochasticIndependent;
    case DelayKind::RewardGeometric:
    case DelayKind::RewardPoint:
      return DelayClass::StochasticConditionallyIndependent;
    case DelayKind::AdversarialPoint:
    case DelayKind::BoundedAdversarial:
      return DelayClass::BoundedAdversarial;
  }
  return DelayClass::StochasticIndependent;
}

std::string DelayModel::name() const {
  switch (kind_) {
    case DelayKind::NoDelay: return "D1";
    case DelayKind::GeometricMixture: return "D2";
    case DelayKind::DirichletWindow: return "D3";
    case DelayKind::RewardGeometric: return "D4";
    case DelayKind::RewardPoint: return "D5";
    case DelayKind::AdversarialPoint: return "D6";
    case DelayKind::BoundedAdversarial: return "bounded(" + std::to_string(bound_) + ")";
    case DelayKind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

std::size_t scaled_offset(double scale, double x, std::size_t offset) {
  return static_cast<std::size_t>(std::floor(scale * std::clamp(x, 0.0, 1.0))) + offset;
}

double require(const std::optional<double>& field, const char* what, const DelayModel& model) {
  if (!field) throw MissingContext(model.name() + " needs " + what);
  return *field;
}

}  // namespace

DelayPmf sample_delay_pmf(const DelayModel& model, const DelayContext& ctx, Rng& rng) {
  switch (model.kind_) {
    case DelayKind::NoDelay:
      return DelayPmf::point(0);
    case DelayKind::GeometricMixture:
      return DelayPmf::geometric(rng.uniform(model.lo_, model.hi_));
    case DelayKind::DirichletWindow: {
      // Flat Dirichlet as normalized unit exponentials.
      std::vector<double> mass(model.window_hi_ + 1, 0.0);
      double total = 0.0;
      for (std::size_t i = model.window_lo_; i <= model.window_hi_; ++i) {
        mass[i] = rng.exponential();
        total += mass[i];
      }
      for (std::size_t i = model.window_lo_; i <= model.window_hi_; ++i) mass[i] /= total;
      return DelayPmf(std::move(mass));
    }
    case DelayKind::RewardGeometric: {
      const double f = require(ctx.realized_reward, "the realized reward", model);
      return DelayPmf::geometric(model.lo_ + model.hi_ * std::clamp(f, 0.0, 1.0));
    }
    case DelayKind::RewardPoint: {
      const double f = require(ctx.realized_reward, "the realized reward", model);
      return DelayPmf::point(scaled_offset(model.hi_, f, model.window_lo_));
    }
    case DelayKind::AdversarialPoint: {
      if (ctx.t <= 1) return DelayPmf::point(model.first_);
      const double x = require(ctx.prev_observation, "the previous observation", model);
      return DelayPmf::point(scaled_offset(model.hi_, x, model.window_lo_));
    }
    case DelayKind::BoundedAdversarial: {
      auto pmf = model.adversary_(ctx);
      if (pmf.tail(model.bound_ + 1) != 0.0)
        throw InvalidPmf("adversary placed mass beyond its bound d=" + std::to_string(model.bound_));
      return pmf;
    }
    case DelayKind::Custom:
      return *model.fixed_;
  }
  throw InvalidPmf("unhandled delay kind");
}

std::optional<std::size_t> worst_case_bound(const DelayModel& model) {
  switch (model.kind_) {
    case DelayKind::NoDelay: return 0;
    case DelayKind::GeometricMixture:
    case DelayKind::RewardGeometric: return std::nullopt;
    case DelayKind::DirichletWindow: return model.window_hi_;
    case DelayKind::RewardPoint:
    case DelayKind::AdversarialPoint: {
      const auto top = scaled_offset(model.hi_, 1.0, model.window_lo_);
      return model.kind_ == DelayKind::AdversarialPoint ? std::max(top, model.first_) : top;
    }
    case DelayKind::BoundedAdversarial:
    case DelayKind::Custom: return model.bound_;
  }
  return std::nullopt;
}

std::string_view to_string(DelayKind kind) {
  switch (kind) {
    case DelayKind::NoDelay: return "NoDelay";
    case DelayKind::GeometricMixture: return "GeometricMixture";
    case DelayKind::DirichletWindow: return "DirichletWindow";
    case DelayKind::RewardGeometric: return "RewardGeometric";
    case DelayKind::RewardPoint: return "RewardPoint";
    case DelayKind::AdversarialPoint: return "AdversarialPoint";
    case DelayKind::BoundedAdversarial: return "BoundedAdversarial";
    case DelayKind::Custom: return "Custom";
  }
  return "Unknown";
}

std::string_view to_string(DelayClass cls) {
  switch (cls) {
    case DelayClass::StochasticIndependent: return "stochastic-independent";
    case DelayClass::StochasticConditionallyIndependent: return "stochastic-conditionally-independent";
    case DelayClass::BoundedAdversarial: return "bounded-adversarial";
  }
  return "unknown";
}

}  // namespace subdelay
