#include "reference.h"

#include <algorithm>
#include <cmath>

namespace oracle {

Vec row(const embaudit::EmbeddingSet& set, std::size_t index) {
  const auto r = set.row(index);
  return Vec(r.begin(), r.end());
}

Vec sub(const Vec& x, const Vec& y) {
  Vec out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - y[k];
  return out;
}

double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double cos(const Vec& x, const Vec& y) {
  return dot(x, y) / (norm(x) * norm(y));
}

double score(const Vec& a, const Vec& b, const Vec& c, const Vec& d,
             const Settings& s) {
  switch (s.algo) {
    case Algo::kCosAdd:
      return cos(d, c) - cos(d, a) + cos(d, b);
    case Algo::kCosMul: {
      auto f = [&](double x) { return s.shifted ? (x + 1.0) / 2.0 : x; };
      return f(cos(d, c)) * f(cos(d, b)) / (f(cos(d, a)) + s.epsilon);
    }
    case Algo::kBolukbasi: {
      const Vec ac = sub(a, c);
      const Vec bd = sub(b, d);
      const double nbd = norm(bd);
      if (nbd == 0.0 || norm(ac) == 0.0 || nbd > s.delta) return 0.0;
      return cos(ac, bd);
    }
  }
  return 0.0;
}

std::vector<Entry> full_ranking(const embaudit::EmbeddingSet& set,
                                const std::vector<bool>& admitted,
                                std::size_t a, std::size_t b, std::size_t c,
                                const Settings& s) {
  const Vec va = row(set, a), vb = row(set, b), vc = row(set, c);
  std::vector<Entry> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!admitted[i]) continue;
    if (s.exclude_inputs && (i == a || i == b || i == c)) continue;
    out.push_back({i, score(va, vb, vc, row(set, i), s)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Entry& x, const Entry& y) {
    return x.score > y.score;
  });
  return out;
}

std::vector<Pair> all_pairs(const embaudit::EmbeddingSet& set,
                            const std::vector<bool>& admitted, std::size_t a,
                            std::size_t c, double delta) {
  const Vec ac = sub(row(set, a), row(set, c));
  std::vector<Pair> out;
  if (norm(ac) == 0.0) return out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!admitted[i]) continue;
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (!admitted[j] || i == j) continue;
      const Vec bd = sub(row(set, i), row(set, j));
      const double n = norm(bd);
      if (n == 0.0 || n > delta) continue;
      out.push_back({i, j, cos(ac, bd)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Pair& x, const Pair& y) {
    return x.score > y.score;
  });
  return out;
}

}  // namespace oracle
