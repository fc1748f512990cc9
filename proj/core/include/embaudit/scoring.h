#pragma once

#include <span>
#include <vector>

namespace embaudit {

// Plain cosine similarity, accumulated in double precision. Throws
// InvalidArgument for a zero vector or mismatched dimensions.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

double l2_distance(std::span<const float> u, std::span<const float> v);
double l2_distance(std::span<const double> u, std::span<const double> v);

// cos(d, c) - cos(d, a) + cos(d, b)
double score_cosadd(std::span<const float> a, std::span<const float> b,
                    std::span<const float> c, std::span<const float> d);

// Maps a cosine in [-1, 1] onto [0, 1].
inline double shifted_cosine(double cos) { return (1.0 + cos) / 2.0; }

// (cos'(d, c) * cos'(d, b)) / (cos'(d, a) + epsilon) where cos' is
// shifted_cosine, or the raw cosine when `shifted` is false.
double score_cosmul(std::span<const float> a, std::span<const float> b,
                    std::span<const float> c, std::span<const float> d,
                    double epsilon, bool shifted = true);

// Outcome of the thresholded direction score cos(a - c, b - d).
enum class DirectionOutcome {
  kScored,
  kBeyondThreshold,  // ||b - d|| > delta
  kZeroDifference,   // b - d or a - c is the zero vector
};

struct DirectionScore {
  DirectionOutcome outcome = DirectionOutcome::kZeroDifference;
  double value = 0.0;  // 0 unless outcome == kScored

  bool scored() const { return outcome == DirectionOutcome::kScored; }
};

// The fixed offset a - c, kept in double precision, against which pair
// offsets b - d are scored. Both the pair search and the single-candidate
// solver go through score() so their values are bitwise identical.
class OffsetDirection {
 public:
  OffsetDirection(std::span<const float> a, std::span<const float> c);

  // The threshold test runs before the cosine is evaluated.
  DirectionScore score(std::span<const float> b, std::span<const float> d,
                       double delta) const;

  std::span<const double> offset() const { return offset_; }
  double norm() const { return norm_; }

 private:
  std::vector<double> offset_;
  double norm_ = 0.0;
};

// cos(a - c, b - d) when ||b - d|| <= delta, else 0; 0 when either
// difference vector is zero.
double score_bolukbasi(std::span<const float> a, std::span<const float> c,
                       std::span<const float> b, std::span<const float> d,
                       double delta);

}  // namespace embaudit
