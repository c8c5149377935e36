#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace subdelay {

using Arm = std::uint32_t;

/// The base arms 0..n-1.
class GroundSet {
 public:
  explicit GroundSet(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool contains(Arm a) const noexcept { return a < n_; }

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::size_t n_;
};

/// An action: a sorted, duplicate-free set of at most `capacity` arms.
///
/// The canonical form makes equality, ordering and hashing structural, so two
/// sets built in different insertion orders compare equal.
class ArmSet {
 public:
  explicit ArmSet(std::size_t capacity) : capacity_(capacity) {}

  /// Members may arrive in any order; throws DuplicateArm or CapacityExceeded.
  ArmSet(std::size_t capacity, std::vector<Arm> members);
  ArmSet(std::size_t capacity, std::initializer_list<Arm> members)
      : ArmSet(capacity, std::vector<Arm>(members)) {}

  std::span<const Arm> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool full() const noexcept { return members_.size() >= capacity_; }
  bool contains(Arm a) const noexcept;

  /// True when every member is also in `other` (capacity is ignored).
  bool subset_of(const ArmSet& other) const noexcept;

  /// True when every member is a valid index into `ground`.
  bool fits(const GroundSet& ground) const noexcept;

  /// "0|6|12|18"; the empty set renders as "".
  std::string to_string() const;

  // Capacity is part of the contract but not of set identity.
  friend bool operator==(const ArmSet& a, const ArmSet& b) noexcept { return a.members_ == b.members_; }
  friend std::strong_ordering operator<=>(const ArmSet& a, const ArmSet& b) noexcept {
    return a.members_ <=> b.members_;
  }

 private:
  std::size_t capacity_;
  std::vector<Arm> members_;
};

/// Canonical union base ∪ {a}. Throws DuplicateArm when a is already present and
/// CapacityExceeded when base is full.
ArmSet with_arm(const ArmSet& base, Arm a);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// All subsets of size exactly k (exact) or at most k, in lexicographic order
/// of their sorted member lists. Throws InvalidArity when k > n and
/// CapacityExceeded when the result would exceed kEnumerationLimit sets.
std::vector<ArmSet> enumerate_actions(const GroundSet& ground, std::size_t k, bool exact);

}  // namespace subdelay

template <>
struct std::hash<subdelay::ArmSet> {
  std::size_t operator()(const subdelay::ArmSet& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto a : s.members()) h ^= a + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};
