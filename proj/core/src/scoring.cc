#include "embaudit/scoring.h"

#include <cmath>
#include <string>

#include "embaudit/errors.h"

namespace embaudit {

namespace {

template <typename T>
void check_dims(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(u.size()) +
                          " vs " + std::to_string(v.size()));
  }
}

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
  check_dims(u, v);
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k];
    const double y = v[k];
    dot += x * y;
    uu += x * x;
    vv += y * y;
  }
  if (uu == 0.0 || vv == 0.0) {
    throw InvalidArgument("cosine of a zero vector is undefined");
  }
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

template <typename T>
double l2_impl(std::span<const T> u, std::span<const T> v) {
  check_dims(u, v);
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double diff = static_cast<double>(u[k]) - static_cast<double>(v[k]);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  return cosine_impl(u, v);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  return cosine_impl(u, v);
}

double l2_distance(std::span<const float> u, std::span<const float> v) {
  return l2_impl(u, v);
}

double l2_distance(std::span<const double> u, std::span<const double> v) {
  return l2_impl(u, v);
}

double score_cosadd(std::span<const float> a, std::span<const float> b,
                    std::span<const float> c, std::span<const float> d) {
  return cosine(d, c) - cosine(d, a) + cosine(d, b);
}

double score_cosmul(std::span<const float> a, std::span<const float> b,
                    std::span<const float> c, std::span<const float> d,
                    double epsilon, bool shifted) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  double da = cosine(d, a);
  double db = cosine(d, b);
  double dc = cosine(d, c);
  if (shifted) {
    da = shifted_cosine(da);
    db = shifted_cosine(db);
    dc = shifted_cosine(dc);
  }
  return (dc * db) / (da + epsilon);
}

OffsetDirection::OffsetDirection(std::span<const float> a,
                                 std::span<const float> c)
    : offset_(a.size()) {
  check_dims(a, c);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    offset_[k] = static_cast<double>(a[k]) - static_cast<double>(c[k]);
    norm2 += offset_[k] * offset_[k];
  }
  norm_ = std::sqrt(norm2);
}

DirectionScore OffsetDirection::score(std::span<const float> b,
                                      std::span<const float> d,
                                      double delta) const {
  double norm2 = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double diff = static_cast<double>(b[k]) - static_cast<double>(d[k]);
    norm2 += diff * diff;
  }
  if (norm2 == 0.0 || norm_ == 0.0) {
    return {DirectionOutcome::kZeroDifference, 0.0};
  }
  const double norm = std::sqrt(norm2);
  if (norm > delta) return {DirectionOutcome::kBeyondThreshold, 0.0};
  double dot = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double diff = static_cast<double>(b[k]) - static_cast<double>(d[k]);
    dot += offset_[k] * diff;
  }
  return {DirectionOutcome::kScored, dot / (norm_ * norm)};
}

double score_bolukbasi(std::span<const float> a, std::span<const float> c,
                       std::span<const float> b, std::span<const float> d,
                       double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  check_dims(b, d);
  const OffsetDirection direction(a, c);
  if (b.size() != direction.offset().size()) {
    throw InvalidArgument("dimension mismatch between a - c and b - d");
  }
  return direction.score(b, d, delta).value;
}

}  // namespace embaudit
