#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embaudit {

// Word-shape filters used by vocabulary views.
//   max_len_20:     token must be shorter than 20 characters (code points)
//   no_punctuation: every character in [A-Za-z0-9_]
//   no_uppercase:   no Unicode uppercase letter
struct ShapeRules {
  bool max_len_20 = false;
  bool no_punctuation = false;
  bool no_uppercase = false;

  static ShapeRules all() { return {true, true, true}; }
  static ShapeRules none() { return {}; }

  std::uint8_t mask() const;
  bool empty() const { return mask() == 0; }
  std::vector<std::string> names() const;
  bool operator==(const ShapeRules&) const = default;

  // Accepts "max_len_20", "no_punctuation", "no_uppercase", "all", "none".
  static ShapeRules parse_list(std::span<const std::string> names);
  static ShapeRules parse_csv(std::string_view csv);
};

namespace shape_bits {
inline constexpr std::uint8_t kTooLong = 1;
inline constexpr std::uint8_t kPunctuation = 2;
inline constexpr std::uint8_t kUppercase = 4;
}  // namespace shape_bits

// Bits of shape_bits set for every rule `token` violates.
std::uint8_t shape_violations(std::string_view token);

// Throws InvalidArgument if `token` is empty or holds a space, newline or NUL.
void validate_token(std::string_view token);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Rank-ordered vocabulary and its dense vectors. Position in the token list
// is the frequency rank (0 = most frequent). Immutable once created; share it
// through std::shared_ptr<const EmbeddingSet>.
class EmbeddingSet {
 public:
  // `values` is row-major, tokens.size() x dim. With `normalize` every row is
  // scaled to unit L2 norm; an all-zero row is rejected.
  static EmbeddingSet create(std::vector<std::string> tokens,
                             std::vector<float> values, std::size_t dim,
                             bool normalize);

  EmbeddingSet(EmbeddingSet&&) noexcept = default;
  EmbeddingSet& operator=(EmbeddingSet&&) noexcept = default;
  EmbeddingSet(const EmbeddingSet&) = delete;
  EmbeddingSet& operator=(const EmbeddingSet&) = delete;

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return dim_; }
  bool normalized() const { return normalized_; }

  const std::string& token(std::size_t index) const { return tokens_[index]; }
  std::span<const std::string> tokens() const { return tokens_; }
  std::span<const float> row(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }
  std::span<const float> values() const { return values_; }

  // 1 / ||row||, computed in double precision.
  double inverse_norm(std::size_t index) const { return inverse_norms_[index]; }
  std::uint8_t shape_violations(std::size_t index) const {
    return violations_[index];
  }

  std::optional<std::size_t> find(std::string_view token) const;

 private:
  EmbeddingSet() = default;

  std::vector<std::string> tokens_;
  std::vector<float> values_;
  std::vector<double> inverse_norms_;
  std::vector<std::uint8_t> violations_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      index_;
  std::size_t dim_ = 0;
  bool normalized_ = false;
};

using EmbeddingSetPtr = std::shared_ptr<const EmbeddingSet>;

inline EmbeddingSetPtr share(EmbeddingSet set) {
  return std::make_shared<const EmbeddingSet>(std::move(set));
}

}  // namespace embaudit
