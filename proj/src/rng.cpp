#include "toepcov/rng.hpp"

#include <cmath>
#include <numbers>

namespace toepcov {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(mix64(base) ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(derive_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() {
  // Two rounds of the finalizer over (key, counter) behave well enough as a
  // counter-mode generator for Monte Carlo work.
  const std::uint64_t c = counter_++;
  return mix64(mix64(key_ + c * 0x9e3779b97f4a7c15ULL) ^ key_);
}

double CounterRng::next_uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace toepcov
