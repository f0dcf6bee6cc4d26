#include "nclab/codec.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "nclab/errors.hpp"

namespace nclab {

DecodingMatrix::DecodingMatrix(FieldPtr field, std::size_t n, std::vector<Symbol> entries)
    : field_(std::move(field)), n_(n), rate_(0), entries_(std::move(entries)) {
  if (!field_) throw UsageError("decoding matrix needs a field");
  if (n_ == 0) throw UsageError("decoding matrix needs n >= 1");
  if (entries_.size() != n_ * n_) throw UsageError(fmt::format("expected {} entries, got {}", n_ * n_, entries_.size()));
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const Symbol v = entries_[i * n_ + j];
      if (!field_->contains(v)) throw UsageError(fmt::format("entry ({}, {}) = {} not in {}", i, j, v, field_->spec().name()));
      nonzero += v != 0;
    }
    if (nonzero == 0) throw UsageError(fmt::format("row {} is zero", i));
    if (i == 0) rate_ = nonzero;
    else if (nonzero != rate_) throw UsageError(fmt::format("row {} has {} nonzeros, row 0 has {}", i, nonzero, rate_));
  }
}

std::vector<std::size_t> DecodingMatrix::support(std::size_t i) const {
  std::vector<std::size_t> out;
  out.reserve(rate_);
  for (std::size_t j = 0; j < n_; ++j)
    if (at(i, j) != 0) out.push_back(j);
  return out;
}

BitSet DecodingMatrix::required(std::size_t i) const {
  BitSet out(n_);
  for (std::size_t j = 0; j < n_; ++j)
    if (at(i, j) != 0) out.set(j);
  return out;
}

std::optional<LuFactors> LuFactors::factorize(const GaloisField& field, std::size_t n, std::span<const Symbol> a) {
  if (a.size() != n * n) throw UsageError("factorize: matrix size mismatch");
  LuFactors f;
  f.n_ = n;
  f.lu_.assign(a.begin(), a.end());
  f.pivot_rows_.resize(n);
  std::iota(f.pivot_rows_.begin(), f.pivot_rows_.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return std::span<Symbol>(f.lu_.data() + i * n, n); };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && f.lu_[p * n + k] == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != k) {
      std::swap_ranges(row(p).begin(), row(p).end(), row(k).begin());
      std::swap(f.pivot_rows_[p], f.pivot_rows_[k]);
    }
    const Symbol pivot_inv = field.inv(f.lu_[k * n + k]);
    const auto pivot_tail = row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      Symbol& lead = f.lu_[i * n + k];
      if (lead == 0) continue;
      const Symbol factor = field.mul(lead, pivot_inv);
      lead = factor;
      field.axpy(row(i).subspan(k + 1), field.neg(factor), pivot_tail);
    }
  }
  return f;
}

namespace {

// Solves columns [c0, c1) of an n x width block against the factors.
void solve_columns(const GaloisField& field, std::size_t n, std::span<const Symbol> lu, std::span<const std::size_t> pivots,
                   std::span<Symbol> block, std::size_t width, std::size_t c0, std::size_t c1) {
  const std::size_t w = c1 - c0;
  std::vector<Symbol> y(n * w);
  for (std::size_t k = 0; k < n; ++k)
    std::copy_n(block.begin() + static_cast<std::ptrdiff_t>(pivots[k] * width + c0), w, y.begin() + static_cast<std::ptrdiff_t>(k * w));
  auto yrow = [&](std::size_t i) { return std::span<Symbol>(y.data() + i * w, w); };

  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) {
      const Symbol l = lu[i * n + k];
      if (l != 0) field.axpy(yrow(i), field.neg(l), yrow(k));
    }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const Symbol u = lu[i * n + k];
      if (u != 0) field.axpy(yrow(i), field.neg(u), yrow(k));
    }
    field.scale(yrow(i), field.inv(lu[i * n + i]));
  }
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(y.begin() + static_cast<std::ptrdiff_t>(i * w), w, block.begin() + static_cast<std::ptrdiff_t>(i * width + c0));
}

constexpr std::size_t kColumnChunk = 256;

}  // namespace

void LuFactors::solve_in_place(const GaloisField& field, std::span<Symbol> block, std::size_t width) const {
  if (block.size() != n_ * width) throw UsageError("solve: block size mismatch");
  if (width == 0) return;
  solve_columns(field, n_, lu_, pivot_rows_, block, width, 0, width);
}

void LuFactors::solve_in_place_columns(const GaloisField& field, std::span<Symbol> block, std::size_t width, std::size_t c0,
                                       std::size_t c1) const {
  if (block.size() != n_ * width || c0 > c1 || c1 > width) throw UsageError("solve: column range mismatch");
  if (c0 == c1) return;
  solve_columns(field, n_, lu_, pivot_rows_, block, width, c0, c1);
}

bool is_invertible(const GaloisField& field, std::size_t n, std::span<const Symbol> a) {
  // Cheap structural check first: an empty column makes A singular.
  for (std::size_t j = 0; j < n; ++j) {
    bool covered = false;
    for (std::size_t i = 0; i < n && !covered; ++i) covered = a[i * n + j] != 0;
    if (!covered) return false;
  }
  return LuFactors::factorize(field, n, a).has_value();
}

namespace {

std::vector<Symbol> assemble_rows(const std::vector<PermutationPair>& keys, const PublicKeySets& pub, std::size_t n) {
  std::vector<Symbol> entries;
  entries.reserve(n * n);
  for (const auto& k : keys) {
    const auto row = derive_row(k, pub, n);
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return entries;
}

}  // namespace

KeyedMatrix generate_matrix(std::size_t n, std::size_t r, FieldPtr field, std::vector<PermutationPair> keys, Rng& rng) {
  if (!field) throw UsageError("generate_matrix: missing field");
  if (n == 0) throw UsageError("generate_matrix: n must be positive");
  if (r < 1 || r > n || r > field->order() - 1)
    throw UsageError(fmt::format("rate r={} must satisfy 1 <= r <= min(n={}, q-1={})", r, n, field->order() - 1));
  if (keys.size() != n) throw UsageError(fmt::format("expected {} key pairs, got {}", n, keys.size()));
  for (const auto& k : keys)
    if (!k.is_valid(n, field->order())) throw UsageError("invalid permutation pair");

  GenerationStats stats;
  PublicKeySets pub;
  for (std::size_t attempt = 0; attempt <= kPublicSetRetries; ++attempt) {
    pub = gen_public_sets(n, r, *field, rng);
    auto entries = assemble_rows(keys, pub, n);
    if (is_invertible(*field, n, entries)) {
      stats.public_resamples = attempt;
      return {DecodingMatrix(field, n, std::move(entries)), std::move(pub), std::move(keys), stats};
    }
  }
  stats.public_resamples = kPublicSetRetries;

  std::vector<std::uint32_t> targets(n);
  for (std::size_t attempt = 1; attempt <= kPermutationRetries; ++attempt) {
    std::iota(targets.begin(), targets.end(), 0U);
    rng.shuffle(std::span(targets));
    for (std::size_t i = 0; i < n; ++i) redraw_positions_anchored(keys[i], pub.positions[0], targets[i], rng);
    auto entries = assemble_rows(keys, pub, n);
    if (is_invertible(*field, n, entries)) {
      stats.permutation_resamples = attempt;
      return {DecodingMatrix(field, n, std::move(entries)), std::move(pub), std::move(keys), stats};
    }
  }
  throw GenerationFailure(fmt::format("no invertible decoding matrix for n={} r={} over {}", n, r, field->spec().name()));
}

KeyedMatrix generate_keyed_matrix(std::size_t n, std::size_t r, FieldPtr field, Rng& rng) {
  if (!field) throw UsageError("generate_keyed_matrix: missing field");
  std::vector<PermutationPair> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) keys.push_back(gen_permutations(n, *field, rng));
  return generate_matrix(n, r, std::move(field), std::move(keys), rng);
}

std::vector<Message> random_messages(std::size_t n, std::size_t m_len, const GaloisField& field, Rng& rng) {
  std::vector<Message> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].owner = i;
    out[i].payload.resize(m_len);
    for (auto& s : out[i].payload) s = static_cast<Symbol>(rng.below(field.order()));
  }
  return out;
}

namespace {

std::vector<Symbol> message_block(const DecodingMatrix& a, std::span<const Message> messages, std::size_t& width) {
  const std::size_t n = a.size();
  if (messages.size() != n) throw UsageError(fmt::format("encode: expected {} messages, got {}", n, messages.size()));
  width = messages.front().payload.size();
  std::vector<Symbol> block(n * width);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = messages[i].payload;
    if (p.size() != width) throw UsageError("encode: messages must share one length");
    for (auto s : p)
      if (!a.field().contains(s)) throw UsageError("encode: message symbol outside the field");
    std::copy(p.begin(), p.end(), block.begin() + static_cast<std::ptrdiff_t>(i * width));
  }
  return block;
}

std::vector<Packet> packets_from_block(std::span<const Symbol> block, std::size_t n, std::size_t width) {
  std::vector<Packet> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j].id = j;
    out[j].payload.assign(block.begin() + static_cast<std::ptrdiff_t>(j * width),
                          block.begin() + static_cast<std::ptrdiff_t>((j + 1) * width));
  }
  return out;
}

}  // namespace

std::vector<Packet> encode(const DecodingMatrix& a, std::span<const Message> messages) {
  std::size_t width = 0;
  auto block = message_block(a, messages, width);
  const auto lu = LuFactors::factorize(a.field(), a.size(), a.entries());
  if (!lu) throw UsageError("encode: decoding matrix is singular");
  const std::size_t chunks = (width + kColumnChunk - 1) / kColumnChunk;
  const auto& field = a.field();
  // Each chunk owns a disjoint column range of the block.
  std::span<Symbol> view(block);
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kColumnChunk;
    const std::size_t c1 = std::min(width, c0 + kColumnChunk);
    lu->solve_in_place_columns(field, view, width, c0, c1);
  }
  return packets_from_block(block, a.size(), width);
}

std::vector<Packet> encode_serial(const DecodingMatrix& a, std::span<const Message> messages) {
  std::size_t width = 0;
  auto block = message_block(a, messages, width);
  const auto lu = LuFactors::factorize(a.field(), a.size(), a.entries());
  if (!lu) throw UsageError("encode: decoding matrix is singular");
  lu->solve_in_place(a.field(), block, width);
  return packets_from_block(block, a.size(), width);
}

Message decode_with_row(const GaloisField& field, std::size_t owner, std::span<const Symbol> row, const PacketBuffer& have) {
  Message out{owner, {}};
  bool sized = false;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 0) continue;
    if (!have.contains(j)) throw NotYetDecodable(fmt::format("client {} is missing packet {}", owner, j));
    const auto& p = have.get(j);
    if (!sized) {
      out.payload.assign(p.size(), 0);
      sized = true;
    } else if (p.size() != out.payload.size()) {
      throw UsageError("decode: packets differ in length");
    }
    field.axpy(out.payload, row[j], p);
  }
  return out;
}

Message decode_client(const DecodingMatrix& a, std::size_t client, const PacketBuffer& have) {
  if (client >= a.size()) throw UsageError("decode_client: client index out of range");
  return decode_with_row(a.field(), client, a.row(client), have);
}

Instance make_instance(std::size_t n, std::size_t r, const FieldSpec& spec, std::size_t m_len, std::uint64_t seed) {
  if (m_len == 0) throw UsageError("m_len must be positive");
  Rng rng(seed);
  auto field = make_field(spec);
  auto keyed = generate_keyed_matrix(n, r, field, rng);
  auto messages = random_messages(n, m_len, *field, rng);
  auto packets = encode(keyed.matrix, messages);
  Instance inst{spec, n, r, seed, m_len, {}, {}, {}};
  inst.matrix.assign(keyed.matrix.entries().begin(), keyed.matrix.entries().end());
  for (auto& m : messages) inst.messages.push_back(std::move(m.payload));
  for (auto& p : packets) inst.packets.push_back(std::move(p.payload));
  return inst;
}

namespace {

void write_rows(std::ostream& out, std::span<const Symbol> values, std::size_t width) {
  for (std::size_t k = 0; k < values.size(); k += width) {
    for (std::size_t c = 0; c < width; ++c) out << (c ? " " : "") << values[k + c];
    out << '\n';
  }
}

}  // namespace

void write_instance(std::ostream& out, const Instance& inst) {
  out << "nclab-instance 1\n";
  out << "field " << inst.field.name() << '\n';
  out << "n " << inst.n << '\n';
  out << "r " << inst.r << '\n';
  out << "seed " << inst.seed << '\n';
  out << "mlen " << inst.m_len << '\n';
  out << "matrix\n";
  write_rows(out, inst.matrix, inst.n);
  out << "messages\n";
  for (const auto& m : inst.messages) write_rows(out, m, inst.m_len);
  out << "packets\n";
  for (const auto& p : inst.packets) write_rows(out, p, inst.m_len);
  out << "end\n";
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw UsageError("instance: unexpected end of file");
  }

  std::uint64_t keyed(const std::string& key) {
    std::istringstream ls(next());
    std::string k;
    std::uint64_t v = 0;
    if (!(ls >> k >> v) || k != key) fail(fmt::format("expected '{} <value>'", key));
    return v;
  }

  std::vector<Symbol> row(std::size_t width) {
    std::istringstream ls(next());
    std::vector<Symbol> out(width);
    for (auto& s : out)
      if (!(ls >> s)) fail(fmt::format("expected {} values", width));
    std::string extra;
    if (ls >> extra) fail("too many values on row");
    return out;
  }

  void expect(const std::string& word) {
    std::istringstream ls(next());
    std::string w;
    ls >> w;
    if (w != word) fail(fmt::format("expected '{}'", word));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError(fmt::format("instance line {}: {}", line_no_, what));
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

Instance read_instance(std::istream& in) {
  LineReader reader(in);
  {
    std::istringstream ls(reader.next());
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "nclab-instance" || version != 1) reader.fail("not an nclab-instance v1 file");
  }
  Instance inst;
  {
    std::istringstream ls(reader.next());
    std::string key, name;
    if (!(ls >> key >> name) || key != "field") reader.fail("expected 'field <name>'");
    inst.field = FieldSpec::parse(name);
  }
  inst.n = reader.keyed("n");
  inst.r = reader.keyed("r");
  inst.seed = reader.keyed("seed");
  inst.m_len = reader.keyed("mlen");
  if (inst.n == 0 || inst.m_len == 0) reader.fail("n and mlen must be positive");
  reader.expect("matrix");
  for (std::size_t i = 0; i < inst.n; ++i) {
    auto row = reader.row(inst.n);
    inst.matrix.insert(inst.matrix.end(), row.begin(), row.end());
  }
  reader.expect("messages");
  for (std::size_t i = 0; i < inst.n; ++i) inst.messages.push_back(reader.row(inst.m_len));
  reader.expect("packets");
  for (std::size_t i = 0; i < inst.n; ++i) inst.packets.push_back(reader.row(inst.m_len));
  reader.expect("end");
  for (auto v : inst.matrix)
    if (v >= inst.field.order) reader.fail("matrix entry outside the field");
  return inst;
}

}  // namespace nclab
