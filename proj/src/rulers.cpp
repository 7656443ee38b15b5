#include "toepcov/rulers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace toepcov {

namespace {

std::vector<bool> covered_distances(std::span<const int> indices, int d) {
  std::vector<bool> covered(static_cast<std::size_t>(d), false);
  for (int j : indices)
    for (int k : indices) {
      const int s = std::abs(j - k);
      if (s < d) covered[static_cast<std::size_t>(s)] = true;
    }
  return covered;
}

void check_marks(int d, const std::vector<int>& indices) {
  if (d < 1) throw std::invalid_argument("Ruler: d must be positive");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1 || indices[i] > d) {
      std::ostringstream msg;
      msg << "Ruler: mark " << indices[i] << " outside [1, " << d << "]";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && indices[i] <= indices[i - 1]) throw std::invalid_argument("Ruler: marks must be strictly increasing");
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Ruler::Ruler(int d, std::vector<int> indices) : d_(d), indices_(std::move(indices)) {
  check_marks(d_, indices_);
  if (!is_ruler(indices_, d_)) {
    const auto covered = covered_distances(indices_, d_);
    const auto missing = std::find(covered.begin(), covered.end(), false) - covered.begin();
    std::ostringstream msg;
    msg << "Ruler: distance " << missing << " is not realized";
    throw std::invalid_argument(msg.str());
  }
}

DistanceIndex Ruler::distance_index() const {
  DistanceIndex index;
  index.pairs.resize(static_cast<std::size_t>(d_));
  for (int j : indices_)
    for (int k : indices_) index.pairs[static_cast<std::size_t>(std::abs(j - k))].emplace_back(j, k);
  return index;
}

bool is_ruler(std::span<const int> indices, int d) {
  if (d < 1) return false;
  for (int j : indices)
    if (j < 1 || j > d) return false;
  const auto covered = covered_distances(indices, d);
  return std::all_of(covered.begin(), covered.end(), [](bool c) { return c; });
}

int ceil_power(int d, double p) {
  const double v = std::pow(static_cast<double>(d), p);
  const double r = std::round(v);
  return static_cast<int>(std::abs(v - r) < 1e-9 ? r : std::ceil(v));
}

int floor_power(int d, double p) {
  const double v = std::pow(static_cast<double>(d), p);
  const double r = std::round(v);
  return static_cast<int>(std::abs(v - r) < 1e-9 ? r : std::floor(v));
}

Ruler full_ruler(int d) {
  if (d < 1) throw std::invalid_argument("full_ruler: d must be positive");
  std::vector<int> marks(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) marks[static_cast<std::size_t>(i)] = i + 1;
  return Ruler(d, std::move(marks));
}

Ruler sqrt_ruler(int d) {
  if (d < 1) throw std::invalid_argument("sqrt_ruler: d must be positive");
  const int c = ceil_power(d, 0.5);
  std::vector<int> marks;
  for (int i = 1; i <= c; ++i) marks.push_back(i);
  for (int v = d; v > c; v -= c) marks.push_back(v);
  return Ruler(d, sorted_unique(std::move(marks)));
}

Ruler alpha_ruler(int d, double alpha) {
  if (d < 1) throw std::invalid_argument("alpha_ruler: d must be positive");
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("alpha_ruler: alpha must lie in [1/2, 1]");
  const int head = std::min(d, ceil_power(d, alpha));
  const int step = std::max(1, floor_power(d, 1.0 - alpha));
  std::vector<int> marks;
  for (int i = 1; i <= head; ++i) marks.push_back(i);
  for (int m = 0; m < head; ++m) {
    const int v = d - m * step;
    if (v < 1) break;
    marks.push_back(v);
  }
  marks = sorted_unique(std::move(marks));

  // Rounded powers can leave distances uncovered; add the smallest mark that
  // realizes the smallest missing distance until the set is complete.
  int slack = 0;
  for (;;) {
    const auto covered = covered_distances(marks, d);
    const auto it = std::find(covered.begin(), covered.end(), false);
    if (it == covered.end()) break;
    const int s = static_cast<int>(it - covered.begin());
    int best = d + 1;
    for (int r : marks) {
      for (int cand : {r - s, r + s}) {
        if (cand >= 1 && cand <= d && cand < best && !std::binary_search(marks.begin(), marks.end(), cand)) best = cand;
      }
    }
    marks.insert(std::upper_bound(marks.begin(), marks.end(), best), best);
    ++slack;
  }
  Ruler ruler(d, std::move(marks));
  ruler.repair_slack_ = slack;
  return ruler;
}

double coverage_coefficient(const Ruler& r) {
  const DistanceIndex index = r.distance_index();
  double delta = 0.0;
  for (int s = 0; s <= index.max_distance(); ++s) delta += 1.0 / index.size(s);
  return delta;
}

double coverage_coefficient(std::span<const int> indices, int d) {
  return coverage_coefficient(Ruler(d, sorted_unique({indices.begin(), indices.end()})));
}

double alpha_coverage_bound(int d, double alpha) {
  const double dd = static_cast<double>(d);
  return 2.0 * std::pow(dd, 2.0 - 2.0 * alpha) +
         std::pow(dd, 1.0 - alpha) * (1.0 + std::log(static_cast<double>(ceil_power(d, 2.0 * alpha - 1.0))));
}

double full_coverage_bound(int d) { return 1.0 + 0.5 * (1.0 + std::log(static_cast<double>(d))); }

}  // namespace toepcov
