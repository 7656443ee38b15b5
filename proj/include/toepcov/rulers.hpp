#pragma once

#include <span>
#include <utility>
#include <vector>

namespace toepcov {

/// Ordered pairs of ruler marks per distance.
struct DistanceIndex {
  std::vector<std::vector<std::pair<int, int>>> pairs;  ///< pairs[s], 1-based marks

  int size(int s) const { return static_cast<int>(pairs[s].size()); }
  int max_distance() const { return static_cast<int>(pairs.size()) - 1; }
};

/// A set of marks in [1, d] that realizes every distance 0..d-1.
class Ruler {
 public:
  /// Throws std::invalid_argument if the marks are out of range or incomplete.
  Ruler(int d, std::vector<int> indices);

  int dim() const { return d_; }
  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  /// Marks appended by the alpha construction to restore completeness.
  int repair_slack() const { return repair_slack_; }

  DistanceIndex distance_index() const;

 private:
  friend Ruler alpha_ruler(int d, double alpha);

  int d_;
  std::vector<int> indices_;
  int repair_slack_ = 0;
};

/// True iff every distance 0..d-1 is realized by some pair of marks.
bool is_ruler(std::span<const int> indices, int d);

Ruler full_ruler(int d);
/// {1..c} together with {d, d-c, d-2c, ...} down to the last value above c, c = ceil(sqrt d).
Ruler sqrt_ruler(int d);
/// {1..ceil(d^a)} together with {d - m floor(d^(1-a))}, repaired to completeness.
Ruler alpha_ruler(int d, double alpha);

/// Delta(R) = sum_s 1/|R_s|, by pair enumeration.
double coverage_coefficient(const Ruler& r);
/// Same for a raw mark set; throws std::invalid_argument if some distance is missing.
double coverage_coefficient(std::span<const int> indices, int d);

/// 2 d^(2-2a) + d^(1-a) (1 + ln ceil(d^(2a-1))).
double alpha_coverage_bound(int d, double alpha);
/// 1 + (1 + ln d)/2.
double full_coverage_bound(int d);

/// ceil(d^p) / floor(d^p) that snap to the nearest integer when within 1e-9.
int ceil_power(int d, double p);
int floor_power(int d, double p);

}  // namespace toepcov
