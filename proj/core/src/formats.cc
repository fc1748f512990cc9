#include "embaudit/formats.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <streambuf>
#include <string>
#include <unordered_set>

#include "embaudit/errors.h"
#include "text_util.h"

namespace embaudit {

namespace {

// Guards the up-front allocation against absurd headers.
constexpr std::size_t kMaxReserveFloats = std::size_t{1} << 31;

struct RawEmbeddings {
  std::vector<std::string> tokens;
  std::vector<float> values;
  std::size_t dim = 0;
};

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) |
           (v >> 24);
  }
}

std::pair<std::size_t, std::size_t> parse_header(const std::string& line) {
  const auto fields = detail::split_whitespace(line);
  std::size_t v = 0;
  std::size_t dim = 0;
  auto parse = [](std::string_view f, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    return ec == std::errc() && ptr == f.data() + f.size();
  };
  if (fields.size() != 2 || !parse(fields[0], v) || !parse(fields[1], dim)) {
    throw FormatError("malformed header '" + line +
                      "' (expected \"<vocab size> <dimension>\")");
  }
  if (dim == 0) throw FormatError("header declares dimension 0");
  if (v == 0) throw FormatError("header declares an empty vocabulary");
  return {v, dim};
}

void reserve_for(RawEmbeddings& raw, std::size_t v, std::size_t dim) {
  raw.tokens.reserve(std::min<std::size_t>(v, kMaxReserveFloats / 8));
  if (dim != 0 && v <= kMaxReserveFloats / dim) raw.values.reserve(v * dim);
}

RawEmbeddings read_binary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("missing header");
  const auto [vocab, dim] = parse_header(header);

  RawEmbeddings raw;
  raw.dim = dim;
  reserve_for(raw, vocab, dim);

  std::streambuf* buf = in.rdbuf();
  using traits = std::char_traits<char>;
  std::vector<char> payload(dim * sizeof(float));
  std::string token;
  for (std::size_t r = 0; r < vocab; ++r) {
    int ch = buf->sbumpc();
    if (ch == '\n') ch = buf->sbumpc();
    token.clear();
    while (ch != traits::eof() && ch != ' ') {
      token.push_back(static_cast<char>(ch));
      ch = buf->sbumpc();
    }
    if (ch == traits::eof()) {
      throw FormatError("token/vector count mismatch: header declares " +
                        std::to_string(vocab) + " records, file ends after " +
                        std::to_string(r));
    }
    if (token.empty() || token.find('\n') != std::string::npos) {
      throw FormatError("malformed token at record " + std::to_string(r));
    }
    const auto got = buf->sgetn(payload.data(),
                                static_cast<std::streamsize>(payload.size()));
    if (got != static_cast<std::streamsize>(payload.size())) {
      throw FormatError("truncated vector for token '" + token +
                        "' at record " + std::to_string(r));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      std::uint32_t bits;
      std::memcpy(&bits, payload.data() + k * sizeof(float), sizeof(bits));
      raw.values.push_back(std::bit_cast<float>(to_little_endian(bits)));
    }
    raw.tokens.push_back(token);
  }

  // Only whitespace may follow the declared records.
  for (int ch = buf->sbumpc(); ch != traits::eof(); ch = buf->sbumpc()) {
    if (ch != '\n' && ch != ' ' && ch != '\r') {
      throw FormatError("token/vector count mismatch: data after the " +
                        std::to_string(vocab) + " declared records");
    }
  }
  return raw;
}

void parse_text_line(std::string_view line, std::size_t line_no,
                     RawEmbeddings& raw) {
  const auto fields = detail::split_whitespace(line);
  if (fields.size() < 2) {
    throw FormatError("line " + std::to_string(line_no) +
                      ": expected a token followed by its vector");
  }
  if (raw.dim == 0) raw.dim = fields.size() - 1;
  if (fields.size() - 1 != raw.dim) {
    throw FormatError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(raw.dim) + " values, got " +
                      std::to_string(fields.size() - 1));
  }
  raw.tokens.emplace_back(fields[0]);
  for (std::size_t k = 1; k < fields.size(); ++k) {
    float value = 0.0f;
    const auto f = fields[k];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": invalid number '" + std::string(f) + "'");
    }
    raw.values.push_back(value);
  }
}

RawEmbeddings read_text(std::istream& in, bool has_header) {
  RawEmbeddings raw;
  std::size_t declared = 0;
  std::size_t line_no = 0;
  std::string line;
  if (has_header) {
    if (!std::getline(in, line)) throw FormatError("missing header");
    ++line_no;
    const auto [vocab, dim] = parse_header(line);
    declared = vocab;
    raw.dim = dim;
    reserve_for(raw, vocab, dim);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (has_header && raw.tokens.size() == declared) {
      throw FormatError("token/vector count mismatch: more than the " +
                        std::to_string(declared) + " declared records");
    }
    parse_text_line(line, line_no, raw);
  }
  if (has_header && raw.tokens.size() != declared) {
    throw FormatError("token/vector count mismatch: header declares " +
                      std::to_string(declared) + " records, found " +
                      std::to_string(raw.tokens.size()));
  }
  if (raw.tokens.empty()) throw FormatError("no embeddings found");
  return raw;
}

// Lowercases tokens, keeping the first (most frequent) of colliding ones.
void lowercase_merge(RawEmbeddings& raw) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> tokens;
  std::vector<float> values;
  tokens.reserve(raw.tokens.size());
  values.reserve(raw.values.size());
  for (std::size_t i = 0; i < raw.tokens.size(); ++i) {
    std::string lower = detail::to_lower_utf8(raw.tokens[i]);
    if (!seen.insert(lower).second) continue;
    tokens.push_back(std::move(lower));
    const auto* row = raw.values.data() + i * raw.dim;
    values.insert(values.end(), row, row + raw.dim);
  }
  raw.tokens = std::move(tokens);
  raw.values = std::move(values);
}

void write_float_text(std::ostream& out, float value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.write(buffer, ptr - buffer);
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "bin" || name == "word2vec-binary") return Format::kWord2VecBinary;
  if (name == "txt" || name == "word2vec-text") return Format::kWord2VecText;
  if (name == "glove" || name == "headerless-text") {
    return Format::kHeaderlessText;
  }
  throw InvalidArgument("unknown embedding format '" + std::string(name) +
                        "' (expected bin, txt or glove)");
}

const char* format_name(Format format) {
  switch (format) {
    case Format::kWord2VecBinary:
      return "bin";
    case Format::kWord2VecText:
      return "txt";
    case Format::kHeaderlessText:
      return "glove";
  }
  return "bin";
}

EmbeddingSet read_embeddings(std::istream& in, const LoadOptions& options) {
  RawEmbeddings raw = options.format == Format::kWord2VecBinary
                          ? read_binary(in)
                          : read_text(in, options.format ==
                                              Format::kWord2VecText);
  if (options.lowercase) lowercase_merge(raw);
  try {
    return EmbeddingSet::create(std::move(raw.tokens), std::move(raw.values),
                                raw.dim, options.normalize);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

void write_embeddings(const EmbeddingSet& set, std::ostream& out,
                      Format format) {
  if (format != Format::kHeaderlessText) {
    out << set.size() << ' ' << set.dim() << '\n';
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << set.token(i);
    const auto row = set.row(i);
    if (format == Format::kWord2VecBinary) {
      out.put(' ');
      for (float value : row) {
        const std::uint32_t bits =
            to_little_endian(std::bit_cast<std::uint32_t>(value));
        out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
      }
    } else {
      for (float value : row) {
        out.put(' ');
        write_float_text(out, value);
      }
    }
    out.put('\n');
  }
}

EmbeddingSet load(const std::filesystem::path& path,
                  const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings file " + path.string());
  try {
    return read_embeddings(in, options);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save(const EmbeddingSet& set, const std::filesystem::path& path,
          Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_embeddings(set, out, format);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace embaudit
