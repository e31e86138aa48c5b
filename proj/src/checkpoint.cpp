#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "adrcnn/errors.hpp"
#include "adrcnn/model.hpp"
#include "json.hpp"

namespace adrcnn {

namespace {

using nlohmann::json;

void write_doubles_le(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    out.write(bytes, 8);
  }
}

void read_doubles_le(std::istream& in, std::vector<double>& values, std::size_t count,
                     const std::string& tensor) {
  values.resize(count);
  std::vector<char> raw(count * 8);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw ParseError("checkpoint: truncated value block for tensor " + tensor);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b)
      u |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[i * 8 + b])) << (8 * b);
    values[i] = std::bit_cast<double>(u);
  }
}

json tensor_entry(const std::string& name, std::vector<std::size_t> shape) {
  return json{{"name", name}, {"shape", shape}};
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  validate_parameters(ckpt.params);
  const auto& p = ckpt.params;

  json tensors = json::array();
  tensors.push_back(tensor_entry("embedding", {p.embedding.rows, p.embedding.cols}));
  for (std::size_t i = 0; i < p.conv_banks.size(); ++i) {
    const auto& bank = p.conv_banks[i];
    tensors.push_back(tensor_entry("conv" + std::to_string(i) + ".weights",
                                   {bank.window, bank.in_channels, bank.out_channels}));
    tensors.push_back(
        tensor_entry("conv" + std::to_string(i) + ".bias", {bank.out_channels}));
  }
  tensors.push_back(tensor_entry("head.w", {p.head.w.size()}));
  tensors.push_back(tensor_entry("head.b", {1}));

  json manifest{{"format", "adrcnn-checkpoint"},
                {"version", 1},
                {"architecture", architecture_name(p.arch)},
                {"init_seed", p.init_seed},
                {"max_len", ckpt.max_len},
                {"lowercase", ckpt.lowercase},
                {"threshold", ckpt.threshold},
                {"vocab", ckpt.vocab.content_tokens()},
                {"tensors", tensors}};
  out << manifest.dump() << '\n';

  write_doubles_le(out, p.embedding.values);
  for (const auto& bank : p.conv_banks) {
    write_doubles_le(out, bank.weights);
    write_doubles_le(out, bank.bias);
  }
  write_doubles_le(out, p.head.w);
  write_doubles_le(out, {p.head.b});
}

Checkpoint load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("checkpoint: missing manifest");
  json manifest;
  try {
    manifest = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: bad manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "adrcnn-checkpoint")
    throw ParseError("checkpoint: unrecognized format tag");

  Checkpoint ckpt;
  ckpt.params.arch = architecture_from_name(manifest.at("architecture").get<std::string>());
  ckpt.params.init_seed = manifest.at("init_seed").get<std::uint64_t>();
  ckpt.max_len = manifest.at("max_len").get<std::size_t>();
  ckpt.lowercase = manifest.value("lowercase", false);
  ckpt.threshold = manifest.value("threshold", 0.5);
  auto tokens = manifest.at("vocab").get<std::vector<std::string>>();
  const std::size_t cap = std::max(tokens.size(), Vocabulary::kDefaultMaxContent);
  ckpt.vocab = Vocabulary(std::move(tokens), cap);

  auto shape_of = [](const json& t) {
    auto dims = t.at("shape").get<std::vector<std::size_t>>();
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return std::pair{dims, n};
  };

  const json& tensors = manifest.at("tensors");
  std::size_t ti = 0;
  auto next_tensor = [&](const std::string& expected) -> std::pair<std::vector<std::size_t>, std::size_t> {
    if (ti >= tensors.size())
      throw ParseError("checkpoint: manifest missing tensor " + expected);
    const json& t = tensors[ti++];
    if (t.at("name").get<std::string>() != expected)
      throw ParseError("checkpoint: expected tensor " + expected);
    return shape_of(t);
  };

  {
    auto [dims, n] = next_tensor("embedding");
    if (dims.size() != 2) throw ParseError("checkpoint: embedding shape must be rank 2");
    ckpt.params.embedding.rows = dims[0];
    ckpt.params.embedding.cols = dims[1];
    read_doubles_le(in, ckpt.params.embedding.values, n, "embedding");
    if (ckpt.params.embedding.rows != ckpt.vocab.size())
      throw ParseError("checkpoint: embedding rows do not match vocabulary size");
  }
  const std::size_t bank_count = ckpt.params.arch == Architecture::Huynh ? 1 : 4;
  for (std::size_t i = 0; i < bank_count; ++i) {
    auto [wdims, wn] = next_tensor("conv" + std::to_string(i) + ".weights");
    if (wdims.size() != 3)
      throw ParseError("checkpoint: conv weights shape must be rank 3");
    ConvFilterBank bank(wdims[0], wdims[1], wdims[2]);
    read_doubles_le(in, bank.weights, wn, "conv weights");
    auto [bdims, bn] = next_tensor("conv" + std::to_string(i) + ".bias");
    if (bdims.size() != 1 || bn != bank.out_channels)
      throw ParseError("checkpoint: conv bias shape mismatch");
    read_doubles_le(in, bank.bias, bn, "conv bias");
    ckpt.params.conv_banks.push_back(std::move(bank));
  }
  {
    auto [dims, n] = next_tensor("head.w");
    read_doubles_le(in, ckpt.params.head.w, n, "head.w");
    auto [bdims, bn] = next_tensor("head.b");
    if (bn != 1) throw ParseError("checkpoint: head.b must hold one value");
    std::vector<double> b;
    read_doubles_le(in, b, 1, "head.b");
    ckpt.params.head.b = b[0];
  }
  validate_parameters(ckpt.params);
  return ckpt;
}

}  // namespace adrcnn
