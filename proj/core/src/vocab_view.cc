#include "embaudit/vocab_view.h"

#include <algorithm>
#include <charconv>

#include "text_util.h"

namespace embaudit {

Cutoff Cutoff::top(std::size_t k) {
  if (k == 0) throw InvalidArgument("cutoff must be at least 1");
  Cutoff c;
  c.k_ = k;
  return c;
}

Cutoff Cutoff::parse(std::string_view text) {
  const std::string_view trimmed = detail::trim(text);
  if (trimmed == "all" || trimmed == "full") return all();
  std::string digits;
  for (char ch : trimmed) {
    if (ch == ',' || ch == '_') continue;
    digits.push_back(ch);
  }
  std::size_t k = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size()) {
    throw InvalidArgument("invalid cutoff '" + std::string(text) +
                          "' (expected 'all' or a positive integer)");
  }
  return top(k);
}

std::size_t Cutoff::limit(std::size_t vocab_size) const {
  return k_ ? std::min(*k_, vocab_size) : vocab_size;
}

std::string Cutoff::str() const {
  return k_ ? std::to_string(*k_) : std::string("all");
}

VocabView::VocabView(EmbeddingSetPtr base, Cutoff cutoff, ShapeRules rules)
    : base_(std::move(base)),
      cutoff_(cutoff),
      rules_(rules),
      mask_(rules.mask()) {
  if (!base_) throw InvalidArgument("vocabulary view over a null set");
  prefix_ = cutoff_.limit(base_->size());
  if (mask_ == 0) {
    admitted_count_ = prefix_;
  } else {
    for (std::size_t i = 0; i < prefix_; ++i) {
      if ((base_->shape_violations(i) & mask_) == 0) ++admitted_count_;
    }
  }
  if (admitted_count_ == 0) {
    throw InvalidArgument("vocabulary view (cutoff " + cutoff_.str() +
                          ") admits no token");
  }
}

LookupResult VocabView::lookup(std::string_view token) const {
  const auto index = base_->find(token);
  if (!index) return {LookupStatus::kUnknown, 0};
  return {admits(*index) ? LookupStatus::kFound : LookupStatus::kFiltered,
          *index};
}

std::vector<std::uint32_t> VocabView::admitted_indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(admitted_count_);
  for_each_admitted(
      [&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
  return out;
}

}  // namespace embaudit
