#include "embaudit/embedding_set.h"

#include <clocale>
#include <cmath>
#include <cwctype>
#include <limits>
#include <locale.h>

#include "embaudit/errors.h"
#include "text_util.h"

namespace embaudit {

namespace {

bool is_word_char(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
         (ch >= '0' && ch <= '9') || ch == '_';
}

}  // namespace

std::uint8_t ShapeRules::mask() const {
  std::uint8_t m = 0;
  if (max_len_20) m |= shape_bits::kTooLong;
  if (no_punctuation) m |= shape_bits::kPunctuation;
  if (no_uppercase) m |= shape_bits::kUppercase;
  return m;
}

std::vector<std::string> ShapeRules::names() const {
  std::vector<std::string> out;
  if (max_len_20) out.emplace_back("max_len_20");
  if (no_punctuation) out.emplace_back("no_punctuation");
  if (no_uppercase) out.emplace_back("no_uppercase");
  return out;
}

ShapeRules ShapeRules::parse_list(std::span<const std::string> names) {
  ShapeRules rules;
  for (const auto& raw : names) {
    const std::string_view name = detail::trim(raw);
    if (name.empty() || name == "none") continue;
    if (name == "all") {
      rules = ShapeRules::all();
    } else if (name == "max_len_20") {
      rules.max_len_20 = true;
    } else if (name == "no_punctuation") {
      rules.no_punctuation = true;
    } else if (name == "no_uppercase") {
      rules.no_uppercase = true;
    } else {
      throw InvalidArgument("unknown shape rule '" + std::string(name) +
                            "' (expected max_len_20, no_punctuation, "
                            "no_uppercase, all or none)");
    }
  }
  return rules;
}

ShapeRules ShapeRules::parse_csv(std::string_view csv) {
  std::vector<std::string> names;
  for (auto part : detail::split(csv, ',')) names.emplace_back(part);
  return parse_list(names);
}

std::uint8_t shape_violations(std::string_view token) {
  std::uint8_t bits = 0;
  std::size_t length = 0;
  std::size_t pos = 0;
  while (pos < token.size()) {
    const auto ch = static_cast<unsigned char>(token[pos]);
    if (ch < 0x80) {
      if (!is_word_char(ch)) bits |= shape_bits::kPunctuation;
      if (ch >= 'A' && ch <= 'Z') bits |= shape_bits::kUppercase;
      ++pos;
    } else {
      // Anything outside ASCII is outside [A-Za-z0-9_].
      bits |= shape_bits::kPunctuation;
      const char32_t cp = detail::decode_utf8(token, pos);
      if (detail::is_unicode_upper(cp)) bits |= shape_bits::kUppercase;
    }
    ++length;
  }
  if (length >= 20) bits |= shape_bits::kTooLong;
  return bits;
}

void validate_token(std::string_view token) {
  if (token.empty()) throw InvalidArgument("empty token");
  for (char ch : token) {
    if (ch == ' ' || ch == '\n' || ch == '\0') {
      throw InvalidArgument("token '" + std::string(token) +
                            "' contains a space, newline or NUL byte");
    }
  }
}

EmbeddingSet EmbeddingSet::create(std::vector<std::string> tokens,
                                  std::vector<float> values, std::size_t dim,
                                  bool normalize) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
  if (tokens.empty()) throw InvalidArgument("embedding set has no tokens");
  if (tokens.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("vocabulary larger than 2^32 - 1 tokens");
  }
  if (values.size() != tokens.size() * dim) {
    throw InvalidArgument("expected " + std::to_string(tokens.size() * dim) +
                          " values for " + std::to_string(tokens.size()) +
                          " tokens of dimension " + std::to_string(dim) +
                          ", got " + std::to_string(values.size()));
  }

  EmbeddingSet set;
  set.dim_ = dim;
  set.normalized_ = normalize;
  set.index_.reserve(tokens.size());
  set.violations_.reserve(tokens.size());
  set.inverse_norms_.resize(tokens.size());

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    embaudit::validate_token(tokens[i]);
    auto [it, inserted] =
        set.index_.emplace(tokens[i], static_cast<std::uint32_t>(i));
    if (!inserted) {
      throw InvalidArgument("duplicate token '" + tokens[i] + "' at rank " +
                            std::to_string(i) + " (first seen at rank " +
                            std::to_string(it->second) + ")");
    }
    set.violations_.push_back(embaudit::shape_violations(tokens[i]));

    float* row = values.data() + i * dim;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!std::isfinite(row[k])) {
        throw InvalidArgument("non-finite value in vector of '" + tokens[i] +
                              "'");
      }
      norm2 += static_cast<double>(row[k]) * row[k];
    }
    const double norm = std::sqrt(norm2);
    if (normalize) {
      if (norm == 0.0) {
        throw InvalidArgument("zero vector for token '" + tokens[i] +
                              "' cannot be normalized");
      }
      norm2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        row[k] = static_cast<float>(row[k] / norm);
        norm2 += static_cast<double>(row[k]) * row[k];
      }
      set.inverse_norms_[i] = 1.0 / std::sqrt(norm2);
    } else {
      set.inverse_norms_[i] = norm == 0.0 ? 0.0 : 1.0 / norm;
    }
  }

  set.tokens_ = std::move(tokens);
  set.values_ = std::move(values);
  return set;
}

std::optional<std::size_t> EmbeddingSet::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace embaudit
