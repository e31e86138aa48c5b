#include "adrcnn/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>

#include "adrcnn/errors.hpp"
#include "adrcnn/textprep.hpp"

namespace adrcnn {

std::span<const double> PretrainedLexicon::vector_of(const std::string& token) const {
  auto it = offsets_.find(token);
  if (it == offsets_.end())
    throw InvalidArgument("lexicon: unknown token \"" + token + "\"");
  return {values_.data() + it->second, dim_};
}

bool PretrainedLexicon::insert(const std::string& token, std::span<const double> values) {
  if (values.size() != dim_) throw InvalidArgument("lexicon: vector width mismatch");
  auto [it, inserted] = offsets_.try_emplace(token, values_.size());
  if (!inserted) {
    ++duplicate_tokens_;
    return false;
  }
  values_.insert(values_.end(), values.begin(), values.end());
  return true;
}

namespace {

bool parse_double(std::string_view field, double& out) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start < line.size()) {
    auto end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

}  // namespace

PretrainedLexicon load_glove_text(std::istream& in) {
  std::string line;
  long lineno = 0;
  PretrainedLexicon lexicon;
  std::vector<double> vec;
  bool dim_known = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!dim_known) {
      if (fields.size() < 2)
        throw ParseError("first line must contain a token and at least one value", lineno);
      lexicon = PretrainedLexicon(fields.size() - 1);
      dim_known = true;
    }
    const std::size_t dim = lexicon.dim();
    if (fields.size() < dim + 1)
      throw ParseError("expected " + std::to_string(dim) + " values", lineno);
    vec.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_double(fields[fields.size() - dim + i], vec[i]))
        throw ParseError("non-numeric embedding value", lineno);
    }
    if (fields.size() > dim + 1) {
      // token contains internal spaces; a rare artifact, not an error
      lexicon.note_skipped();
      continue;
    }
    lexicon.insert(std::string(fields[0]), vec);
  }
  if (!dim_known) throw ParseError("empty embedding stream: cannot infer dimension");
  return lexicon;
}

namespace {

float decode_float_le(const unsigned char bytes[4]) {
  const std::uint32_t u = static_cast<std::uint32_t>(bytes[0]) |
                          static_cast<std::uint32_t>(bytes[1]) << 8 |
                          static_cast<std::uint32_t>(bytes[2]) << 16 |
                          static_cast<std::uint32_t>(bytes[3]) << 24;
  return std::bit_cast<float>(u);
}

}  // namespace

PretrainedLexicon load_word2vec_binary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw ParseError("missing word2vec header");
  long long count = -1, dim = -1;
  {
    const auto fields = split_fields(header);
    if (fields.size() == 2) {
      auto parse_ll = [](std::string_view f, long long& out) {
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
        return ec == std::errc() && ptr == f.data() + f.size();
      };
      if (!parse_ll(fields[0], count) || !parse_ll(fields[1], dim)) count = -1;
    }
    if (count < 0 || dim <= 0)
      throw ParseError("word2vec header must be \"count dim\"", 1);
  }

  PretrainedLexicon lexicon(static_cast<std::size_t>(dim));
  std::vector<unsigned char> raw(static_cast<std::size_t>(dim) * 4);
  std::vector<double> vec(static_cast<std::size_t>(dim));
  for (long long entry = 0; entry < count; ++entry) {
    std::string token;
    int c;
    while ((c = in.get()) != std::streambuf::traits_type::eof() && c != ' ') {
      if (c == '\n' && token.empty()) continue;  // separator from previous entry
      token.push_back(static_cast<char>(c));
    }
    if (c == std::streambuf::traits_type::eof())
      throw ParseError("truncated word2vec stream: expected " + std::to_string(count) +
                       " entries, got " + std::to_string(entry));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
      throw ParseError("truncated word2vec stream: expected " + std::to_string(count) +
                       " entries, got " + std::to_string(entry));
    for (long long i = 0; i < dim; ++i)
      vec[static_cast<std::size_t>(i)] =
          static_cast<double>(decode_float_le(raw.data() + i * 4));
    lexicon.insert(token, vec);
  }
  return lexicon;
}

EmbeddingMatrix assemble_matrix(const Vocabulary& vocab, const PretrainedLexicon& lexicon) {
  EmbeddingMatrix matrix;
  matrix.rows = vocab.size();
  matrix.cols = lexicon.dim();
  matrix.values.assign(matrix.rows * matrix.cols, 0.0);  // PAD and UNK stay zero
  const auto& tokens = vocab.content_tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!lexicon.contains(tokens[i]))
      throw InvalidArgument("assemble_matrix: vocabulary token \"" + tokens[i] +
                            "\" missing from lexicon");
    const auto vec = lexicon.vector_of(tokens[i]);
    std::memcpy(matrix.row(i + 2), vec.data(), matrix.cols * sizeof(double));
  }
  return matrix;
}

}  // namespace adrcnn
