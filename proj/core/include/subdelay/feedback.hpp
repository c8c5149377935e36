#pragma once

#include <cstddef>
#include <deque>

#include "subdelay/delay.hpp"

namespace subdelay {

/// Composite anonymous feedback: each deposited reward is spread over the
/// current and future steps by its delay pmf, and advance() emits the total
/// mass due at the current step with no attribution to the actions behind it.
///
/// Slots are a window of offsets relative to the clock; slot 0 is the
/// current step. Observations are not clamped and can exceed 1 under pile-up.
class PendingBuffer {
 public:
  /// Adds reward·mass[i] to the slot i steps ahead of the clock.
  void deposit(double reward, const DelayPmf& pmf);

  /// Removes and returns the mass scheduled for the current step, then moves
  /// the clock forward by one.
  double advance();

  /// Mass still scheduled, summed over all slots.
  double escaped_mass() const;

  double generated_total() const noexcept { return generated_; }
  double delivered_total() const noexcept { return delivered_; }
  std::size_t clock() const noexcept { return clock_; }
  std::size_t horizon() const noexcept { return slots_.size(); }

 private:
  std::deque<double> slots_;
  double generated_ = 0.0;
  double delivered_ = 0.0;
  std::size_t clock_ = 0;
};

}  // namespace subdelay
