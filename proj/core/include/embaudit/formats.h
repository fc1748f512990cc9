#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "embaudit/embedding_set.h"

namespace embaudit {

// On-disk layouts:
//   kWord2VecBinary  "<V> <dim>\n" then V x (token, 0x20, dim little-endian
//                    float32), records optionally separated by 0x0A
//   kWord2VecText    "<V> <dim>\n" then V lines "token v1 ... vdim"
//   kHeaderlessText  GloVe style: the text layout without a header
enum class Format { kWord2VecBinary, kWord2VecText, kHeaderlessText };

// "bin", "txt", "glove" (also the long names "word2vec-binary",
// "word2vec-text", "headerless-text").
Format parse_format(std::string_view name);
const char* format_name(Format format);

struct LoadOptions {
  Format format = Format::kWord2VecBinary;
  bool normalize = true;
  // Lowercase tokens; on a collision the more frequent token is kept.
  bool lowercase = false;
};

EmbeddingSet read_embeddings(std::istream& in, const LoadOptions& options);
void write_embeddings(const EmbeddingSet& set, std::ostream& out,
                      Format format);

EmbeddingSet load(const std::filesystem::path& path,
                  const LoadOptions& options);
void save(const EmbeddingSet& set, const std::filesystem::path& path,
          Format format);

}  // namespace embaudit
