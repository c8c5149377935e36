#include "subdelay/feedback.hpp"

#include <numeric>

namespace subdelay {

void PendingBuffer::deposit(double reward, const DelayPmf& pmf) {
  generated_ += reward;
  if (reward == 0.0) return;
  const auto mass = pmf.mass();
  if (slots_.size() < mass.size()) slots_.resize(mass.size(), 0.0);
  for (std::size_t i = 0; i < mass.size(); ++i)
    if (mass[i] != 0.0) slots_[i] += reward * mass[i];
}

double PendingBuffer::advance() {
  ++clock_;
  if (slots_.empty()) return 0.0;
  const double x = slots_.front();
  slots_.pop_front();
  delivered_ += x;
  return x;
}

double PendingBuffer::escaped_mass() const {
  return std::accumulate(slots_.begin(), slots_.end(), 0.0);
}

}  // namespace subdelay
