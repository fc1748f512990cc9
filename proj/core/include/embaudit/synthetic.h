#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "embaudit/embedding_set.h"
#include "embaudit/evaluation.h"

namespace embaudit::synthetic {

// V Gaussian vectors named w0, w1, ... Unit-normalized when `normalize`.
EmbeddingSet random_set(std::size_t vocab_size, std::size_t dim,
                        std::uint64_t seed, bool normalize = true);

// Word set in which every category relation is an exact shared offset.
//
// Each base word x is  normalize(shared * u + spread * e_x)  and its partner
// y is  normalize(shared * u + spread * e_x + offset * f_cat), with u, e_x
// and f_cat mutually orthonormal directions drawn from a seeded random
// rotation. With jitter = 0 the offset is exact and the constrained CosAdd
// argmax of every quadruple (x_i, y_i, x_j, y_j) is y_j. `jitter` moves each
// y along its own orthogonal direction. Together with a large `shared` and a
// small `spread` this makes b outscore y_j once inputs may be returned
// (shared 3, spread 0.5, offset 0.5, jitter 0.7 does this for every question).
struct OffsetFixtureParams {
  std::size_t categories = 3;
  std::size_t pairs_per_category = 4;
  std::size_t distractors = 8;  // random unrelated words appended last
  double shared = 0.0;
  double spread = 1.0;
  double offset = 1.0;
  double jitter = 0.0;
  std::uint64_t seed = 7;
};

struct OffsetFixture {
  EmbeddingSetPtr set;
  AnalogyDataset dataset;  // every ordered pair (i, j), i != j, per category
};

OffsetFixture offset_fixture(const OffsetFixtureParams& params = {});

}  // namespace embaudit::synthetic
