#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace adrcnn {

class Vocabulary;

// Immutable token -> vector store parsed from a pretrained embedding file.
// Values are kept contiguously; the engine works in double precision, so
// 32-bit file values are widened on load.
class PretrainedLexicon {
 public:
  PretrainedLexicon() = default;
  explicit PretrainedLexicon(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return offsets_.size(); }
  bool contains(const std::string& token) const { return offsets_.count(token) != 0; }
  std::span<const double> vector_of(const std::string& token) const;

  // Parse diagnostics: lines skipped (tokens with internal spaces) and
  // duplicate tokens dropped (first occurrence wins).
  long skipped_lines() const { return skipped_lines_; }
  long duplicate_tokens() const { return duplicate_tokens_; }

  // Returns false when the token was a duplicate.
  bool insert(const std::string& token, std::span<const double> values);

  void note_skipped() { ++skipped_lines_; }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> offsets_;  // token -> values_ offset
  std::vector<double> values_;
  long skipped_lines_ = 0;
  long duplicate_tokens_ = 0;
};

// Trainable V x M grid.  Row 0 (PAD) and row 1 (UNK) start all-zero; rows
// 2..V-1 start as the pretrained vector of their vocabulary token.
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double* row(std::size_t r) { return values.data() + r * cols; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
};

// GloVe text layout: one line per token, "token v1 v2 ... vM"; the dimension
// is inferred from the first line.
PretrainedLexicon load_glove_text(std::istream& in);

// word2vec binary layout: ASCII header "count dim\n", then per entry the
// token bytes terminated by 0x20 followed by dim little-endian float32
// values, optionally followed by 0x0A.
PretrainedLexicon load_word2vec_binary(std::istream& in);

EmbeddingMatrix assemble_matrix(const Vocabulary& vocab, const PretrainedLexicon& lexicon);

}  // namespace adrcnn
