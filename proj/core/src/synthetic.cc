#include "embaudit/synthetic.h"

#include <cmath>
#include <random>

#include "embaudit/errors.h"

namespace embaudit::synthetic {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

// `count` orthonormal vectors in R^dim (Gram-Schmidt on Gaussian draws).
std::vector<Vec> orthonormal_basis(std::size_t count, std::size_t dim,
                                   std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> basis;
  basis.reserve(count);
  while (basis.size() < count) {
    Vec v(dim);
    for (double& x : v) x = gauss(rng);
    for (const Vec& q : basis) {
      const double p = dot(v, q);
      for (std::size_t k = 0; k < dim; ++k) v[k] -= p * q[k];
    }
    const double n = std::sqrt(dot(v, v));
    if (n < 1e-6) continue;
    for (double& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  return basis;
}

void append_row(std::vector<float>& values, const Vec& v) {
  for (double x : v) values.push_back(static_cast<float>(x));
}

}  // namespace

EmbeddingSet random_set(std::size_t vocab_size, std::size_t dim,
                        std::uint64_t seed, bool normalize) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::vector<std::string> tokens;
  tokens.reserve(vocab_size);
  std::vector<float> values;
  values.reserve(vocab_size * dim);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    tokens.push_back("w" + std::to_string(i));
    for (std::size_t k = 0; k < dim; ++k) values.push_back(gauss(rng));
  }
  return EmbeddingSet::create(std::move(tokens), std::move(values), dim,
                              normalize);
}

OffsetFixture offset_fixture(const OffsetFixtureParams& p) {
  if (p.categories == 0 || p.pairs_per_category < 2) {
    throw InvalidArgument(
        "offset fixture needs a category with at least two pairs");
  }
  const std::size_t word_dirs = p.categories * p.pairs_per_category;
  const std::size_t jitter_dirs = p.jitter > 0.0 ? word_dirs : 0;
  const std::size_t structured = 1 + word_dirs + p.categories + jitter_dirs;
  const std::size_t dim = structured + 2;

  std::mt19937_64 rng(p.seed);
  const auto basis = orthonormal_basis(dim, dim, rng);
  const Vec& shared_dir = basis[0];
  auto word_dir = [&](std::size_t cat, std::size_t i) -> const Vec& {
    return basis[1 + cat * p.pairs_per_category + i];
  };
  auto relation_dir = [&](std::size_t cat) -> const Vec& {
    return basis[1 + word_dirs + cat];
  };
  auto jitter_dir = [&](std::size_t cat, std::size_t i) -> const Vec& {
    return basis[1 + word_dirs + p.categories + cat * p.pairs_per_category + i];
  };

  std::vector<std::string> tokens;
  std::vector<float> values;
  OffsetFixture fixture;

  for (std::size_t cat = 0; cat < p.categories; ++cat) {
    const std::string prefix = "rel" + std::to_string(cat);
    for (std::size_t i = 0; i < p.pairs_per_category; ++i) {
      Vec x(dim);
      Vec y(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = p.shared * shared_dir[k] + p.spread * word_dir(cat, i)[k];
        y[k] = x[k] + p.offset * relation_dir(cat)[k];
      }
      if (p.jitter > 0.0) {
        for (std::size_t k = 0; k < dim; ++k) {
          y[k] += p.jitter * jitter_dir(cat, i)[k];
        }
      }
      tokens.push_back(prefix + "_x" + std::to_string(i));
      append_row(values, x);
      tokens.push_back(prefix + "_y" + std::to_string(i));
      append_row(values, y);
    }

    AnalogyCategory category{prefix, {}};
    for (std::size_t i = 0; i < p.pairs_per_category; ++i) {
      for (std::size_t j = 0; j < p.pairs_per_category; ++j) {
        if (i == j) continue;
        category.quadruples.push_back({prefix + "_x" + std::to_string(i),
                                       prefix + "_y" + std::to_string(i),
                                       prefix + "_x" + std::to_string(j),
                                       prefix + "_y" + std::to_string(j)});
      }
    }
    fixture.dataset.categories.push_back(std::move(category));
  }

  // Distractors live mostly in the two spare directions.
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t n = 0; n < p.distractors; ++n) {
    Vec v(dim, 0.0);
    const double g1 = gauss(rng);
    const double g2 = gauss(rng);
    for (std::size_t k = 0; k < dim; ++k) {
      v[k] = g1 * basis[structured][k] + g2 * basis[structured + 1][k];
    }
    for (std::size_t b = 0; b < structured; ++b) {
      const double leak = 0.1 * gauss(rng);
      for (std::size_t k = 0; k < dim; ++k) v[k] += leak * basis[b][k];
    }
    tokens.push_back("noise" + std::to_string(n));
    append_row(values, v);
  }

  fixture.set = share(
      EmbeddingSet::create(std::move(tokens), std::move(values), dim, true));
  return fixture;
}

}  // namespace embaudit::synthetic
