#include "subdelay/arms.hpp"

#include <algorithm>
#include <limits>

#include "subdelay/errors.hpp"

namespace subdelay {

GroundSet::GroundSet(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArity("ground set needs at least one arm");
}

ArmSet::ArmSet(std::size_t capacity, std::vector<Arm> members)
    : capacity_(capacity), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw DuplicateArm("arm set contains a repeated arm");
  if (members_.size() > capacity_)
    throw CapacityExceeded("arm set of size " + std::to_string(members_.size()) +
                           " exceeds capacity " + std::to_string(capacity_));
}

bool ArmSet::contains(Arm a) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), a);
}

bool ArmSet::subset_of(const ArmSet& other) const noexcept {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

bool ArmSet::fits(const GroundSet& ground) const noexcept {
  return members_.empty() || ground.contains(members_.back());
}

std::string ArmSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(members_[i]);
  }
  return out;
}

ArmSet with_arm(const ArmSet& base, Arm a) {
  if (base.contains(a)) throw DuplicateArm("arm " + std::to_string(a) + " already in set");
  if (base.full())
    throw CapacityExceeded("cannot add arm " + std::to_string(a) + " to a full set of capacity " +
                           std::to_string(base.capacity()));
  std::vector<Arm> members(base.members().begin(), base.members().end());
  members.insert(std::upper_bound(members.begin(), members.end(), a), a);
  return ArmSet(base.capacity(), std::move(members));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  __extension__ using u128 = unsigned __int128;
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * (n - k + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

void enumerate_into(std::size_t n, std::size_t k, bool exact, std::vector<Arm>& prefix,
                    std::vector<ArmSet>& out) {
  if (!exact || prefix.size() == k) out.emplace_back(k, prefix);
  if (prefix.size() == k) return;
  const Arm start = prefix.empty() ? 0 : prefix.back() + 1;
  const std::size_t still_needed = exact ? k - prefix.size() : 1;
  for (Arm a = start; a + still_needed <= n; ++a) {
    prefix.push_back(a);
    enumerate_into(n, k, exact, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<ArmSet> enumerate_actions(const GroundSet& ground, std::size_t k, bool exact) {
  const std::size_t n = ground.size();
  if (k > n)
    throw InvalidArity("k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));

  std::uint64_t count = 0;
  for (std::size_t j = exact ? k : 0; j <= k; ++j) {
    const auto c = binomial(n, j);
    count = (count > kEnumerationLimit || c > kEnumerationLimit) ? kEnumerationLimit + 1 : count + c;
  }
  if (count > kEnumerationLimit)
    throw CapacityExceeded("enumerating subsets of size " + std::string(exact ? "" : "<= ") +
                           std::to_string(k) + " of " + std::to_string(n) +
                           " arms exceeds the limit of " + std::to_string(kEnumerationLimit));

  std::vector<ArmSet> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<Arm> prefix;
  prefix.reserve(k);
  enumerate_into(n, k, exact, prefix, out);
  return out;
}

}  // namespace subdelay
