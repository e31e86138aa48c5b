#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adrcnn {

class PretrainedLexicon;

// Token -> index map with two reserved slots.  Content tokens occupy dense
// indices starting at 2, ranked by training-set frequency.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr std::size_t kDefaultMaxContent = 20000;

  Vocabulary() = default;

  // Content tokens in index order (index of tokens[i] is i + 2).
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::size_t max_content = kDefaultMaxContent);

  int index_of(const std::string& token) const;  // kUnk when absent
  bool contains(const std::string& token) const;
  std::size_t size() const { return tokens_.size() + 2; }  // incl. PAD/UNK
  std::size_t content_size() const { return tokens_.size(); }
  std::size_t max_content_size() const { return max_content_; }
  const std::vector<std::string>& content_tokens() const { return tokens_; }

  // Two-column "token<TAB>index" listing of the content tokens.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::size_t max_content_ = kDefaultMaxContent;
};

// Fixed-length index sequence feeding the network input grid.
struct EncodedSentence {
  std::vector<int> indices;
  std::size_t true_length = 0;  // non-PAD prefix length
};

// Kim-style cleaning: clitic groups ('s 've n't 're 'd 'll) are split off,
// then every non-alphabetic character becomes a space and whitespace runs
// collapse.  Case is preserved.
std::string clean_text(std::string_view raw);

// Splits a cleaned string on single spaces.
std::vector<std::string> tokenize(const std::string& cleaned);

// Frequency-ranked vocabulary over the training sentences, capped at
// max_content, keeping only tokens covered by the pretrained lexicon.
// Ties in frequency break lexicographically ascending.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_lists,
                            const PretrainedLexicon& pretrained,
                            std::size_t max_content = Vocabulary::kDefaultMaxContent);

// Maps tokens to indices (UNK for unknowns), truncates at max_len and right
// pads with PAD.  A tokenless sentence encodes as a single UNK.
EncodedSentence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                       std::size_t max_len);

}  // namespace adrcnn
