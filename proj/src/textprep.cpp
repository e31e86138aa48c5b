#include "adrcnn/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <ostream>

#include "adrcnn/embeddings.hpp"
#include "adrcnn/errors.hpp"

namespace adrcnn {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::size_t max_content)
    : tokens_(std::move(tokens)), max_content_(max_content) {
  if (tokens_.size() > max_content_)
    throw InvalidArgument("vocabulary exceeds max content size");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i) + 2).second)
      throw InvalidArgument("duplicate vocabulary token: " + tokens_[i]);
  }
}

int Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return index_.count(token) != 0;
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    out << tokens_[i] << '\t' << i + 2 << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("expected \"token<TAB>index\"", lineno);
    long index = 0;
    try {
      index = std::stol(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError("non-numeric vocabulary index", lineno);
    }
    if (index != static_cast<long>(tokens.size()) + 2)
      throw ParseError("vocabulary indices must be dense from 2", lineno);
    tokens.push_back(line.substr(0, tab));
  }
  return Vocabulary(std::move(tokens), std::max(tokens.size(), kDefaultMaxContent));
}

namespace {

// Inserts a space before every occurrence of `group`, mirroring the clitic
// separation of Kim's clean_str.
void separate_clitic(std::string& s, std::string_view group) {
  std::size_t pos = 0;
  while ((pos = s.find(group, pos)) != std::string::npos) {
    if (pos > 0 && s[pos - 1] != ' ') {
      s.insert(pos, 1, ' ');
      ++pos;
    }
    pos += group.size();
  }
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string s(raw);
  static constexpr std::array<std::string_view, 6> kClitics = {"'s", "'ve", "n't",
                                                               "'re", "'d", "'ll"};
  for (const auto group : kClitics) separate_clitic(s, group);

  for (char& c : s) {
    const bool alpha = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    if (!alpha) c = ' ';
  }

  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> tokenize(const std::string& cleaned) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < cleaned.size()) {
    auto end = cleaned.find(' ', start);
    if (end == std::string::npos) end = cleaned.size();
    if (end > start) tokens.push_back(cleaned.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_lists,
                            const PretrainedLexicon& pretrained,
                            std::size_t max_content) {
  std::unordered_map<std::string, long> freq;
  for (const auto& sentence : token_lists)
    for (const auto& token : sentence) ++freq[token];

  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_content) ranked.resize(max_content);

  std::vector<std::string> kept;
  kept.reserve(ranked.size());
  for (auto& [token, count] : ranked)
    if (pretrained.contains(token)) kept.push_back(std::move(token));
  return Vocabulary(std::move(kept), max_content);
}

EncodedSentence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                       std::size_t max_len) {
  if (max_len < 1) throw InvalidArgument("encode: max_len must be >= 1");
  EncodedSentence enc;
  enc.indices.assign(max_len, Vocabulary::kPad);
  if (tokens.empty()) {
    enc.indices[0] = Vocabulary::kUnk;
    enc.true_length = 1;
    return enc;
  }
  enc.true_length = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < enc.true_length; ++i)
    enc.indices[i] = vocab.index_of(tokens[i]);
  return enc;
}

}  // namespace adrcnn
