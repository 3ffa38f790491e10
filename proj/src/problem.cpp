#include "seb/problem.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

namespace seb {

Instance::Instance(std::size_t n, Vector radii, Vector centers)
    : n_(n), radii_(std::move(radii)), centers_(std::move(centers)) {
  if (radii_.empty()) throw std::invalid_argument("m must be >= 1");
  if (n_ == 0) throw std::invalid_argument("n must be >= 1");
  if (centers_.size() / n_ != radii_.size() || centers_.size() % n_ != 0)
    throw std::invalid_argument("center buffer does not hold m*n coordinates");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] >= 0.0) || !std::isfinite(radii_[i]))
      throw std::invalid_argument("radius of ball " + std::to_string(i) +
                                  " must be finite and >= 0");
  }
  for (double c : centers_) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite center coordinate");
  }
}

Instance Instance::from_balls(std::span<const Ball> balls) {
  if (balls.empty()) throw std::invalid_argument("m must be >= 1");
  const std::size_t n = balls.front().center.size();
  Vector radii;
  Vector centers;
  radii.reserve(balls.size());
  centers.reserve(balls.size() * n);
  for (const Ball& b : balls) {
    if (b.center.size() != n)
      throw std::invalid_argument("all balls must share the same dimension");
    radii.push_back(b.radius);
    centers.insert(centers.end(), b.center.begin(), b.center.end());
  }
  return Instance(n, std::move(radii), std::move(centers));
}

Ball Instance::ball(std::size_t i) const {
  auto c = center(i);
  return Ball{Vector(c.begin(), c.end()), radii_[i]};
}

std::pair<GeneratorState, double> generator_next(GeneratorState state) noexcept {
  state.psi = (445u * state.psi + 1u) % 4096u;
  return {state, static_cast<double>(state.psi) / 40.96};
}

Instance generate_instance(std::size_t m, std::size_t n) {
  if (m == 0) throw std::invalid_argument("m must be >= 1");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (n > std::numeric_limits<std::size_t>::max() / m) throw std::length_error("m*n overflows");

  Vector radii(m);
  Vector centers(m * n);
  GeneratorState state;
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::tie(state, value) = generator_next(state);
    radii[i] = value;
    for (std::size_t j = 0; j < n; ++j) {
      std::tie(state, value) = generator_next(state);
      centers[i * n + j] = value;
    }
  }
  return Instance(n, std::move(radii), std::move(centers));
}

FormatError::FormatError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

namespace {

constexpr std::array<char, 4> kMagic{'S', 'E', 'B', '1'};

// ---- text ----

class TextParser {
 public:
  explicit TextParser(std::string data) : data_(std::move(data)) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= data_.size(); }

  void skip_blank() {
    while (pos_ < data_.size() && (data_[pos_] == ' ' || data_[pos_] == '\t' || data_[pos_] == '\r'))
      ++pos_;
  }

  // Skips empty lines; returns false at end of input.
  bool next_line() {
    for (;;) {
      skip_blank();
      if (at_end()) return false;
      if (data_[pos_] != '\n') return true;
      ++pos_;
    }
  }

  bool end_of_line() {
    skip_blank();
    return at_end() || data_[pos_] == '\n';
  }

  void consume_eol() {
    skip_blank();
    if (at_end()) return;
    if (data_[pos_] != '\n') throw FormatError("unexpected trailing token on line", pos_);
    ++pos_;
  }

  std::uint64_t read_count(const char* name) {
    skip_blank();
    const char* first = data_.data() + pos_;
    const char* last = data_.data() + data_.size();
    if (first < last && *first == '-')
      throw FormatError(std::string(name) + " must be a non-negative integer", pos_);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || !token_ends(ptr))
      throw FormatError(std::string("malformed header: expected integer ") + name, pos_);
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  double read_real() {
    skip_blank();
    const char* first = data_.data() + pos_;
    const char* last = data_.data() + data_.size();
    if (first < last && *first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || !token_ends(ptr)) throw FormatError("malformed real number", pos_);
    pos_ = static_cast<std::size_t>(ptr - data_.data());
    return v;
  }

 private:
  bool token_ends(const char* p) const {
    const char* last = data_.data() + data_.size();
    return p == last || *p == ' ' || *p == '\t' || *p == '\r' || *p == '\n';
  }

  std::string data_;
  std::size_t pos_ = 0;
};

Instance read_text(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  TextParser p(std::move(data));

  if (!p.next_line()) throw FormatError("truncated stream: missing header", p.pos());
  const std::size_t header_pos = p.pos();
  const std::uint64_t m = p.read_count("m");
  const std::uint64_t n = p.read_count("n");
  if (!p.end_of_line()) throw FormatError("malformed header: expected \"m n\"", p.pos());
  p.consume_eol();
  if (m == 0) throw FormatError("m must be >= 1", header_pos);
  if (n == 0) throw FormatError("n must be >= 1", header_pos);

  Vector radii;
  Vector centers;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!p.next_line())
      throw FormatError("truncated stream: expected " + std::to_string(m) + " balls, found " +
                            std::to_string(i),
                        p.pos());
    const std::size_t line_pos = p.pos();
    const double r = p.read_real();
    if (!(r >= 0.0) || !std::isfinite(r))
      throw FormatError("negative or non-finite radius for ball " + std::to_string(i), line_pos);
    radii.push_back(r);
    for (std::uint64_t j = 0; j < n; ++j) {
      if (p.end_of_line())
        throw FormatError("dimension mismatch: ball " + std::to_string(i) + " has " +
                              std::to_string(j) + " coordinates, expected " + std::to_string(n),
                          p.pos());
      const std::size_t at = p.pos();
      const double c = p.read_real();
      if (!std::isfinite(c)) throw FormatError("non-finite coordinate", at);
      centers.push_back(c);
    }
    if (!p.end_of_line())
      throw FormatError("dimension mismatch: ball " + std::to_string(i) +
                            " has more than " + std::to_string(n) + " coordinates",
                        p.pos());
    p.consume_eol();
  }
  if (p.next_line()) throw FormatError("trailing data after last ball", p.pos());
  return Instance(static_cast<std::size_t>(n), std::move(radii), std::move(centers));
}

void write_text(const Instance& inst, std::ostream& out) {
  const std::size_t m = inst.size();
  const std::size_t n = inst.dimension();
  out << m << ' ' << n << '\n';
  std::array<char, 64> buf{};
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    out.write(buf.data(), ptr - buf.data());
  };
  for (std::size_t i = 0; i < m; ++i) {
    put(inst.radius(i));
    for (double c : inst.center(i)) {
      out.put(' ');
      put(c);
    }
    out.put('\n');
  }
}

// ---- binary ----

template <class T>
T from_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U u = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) u |= static_cast<U>(p[k]) << (8 * k);
  return std::bit_cast<T>(u);
}

template <class T>
void to_le(T value, unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U u = std::bit_cast<U>(value);
  for (std::size_t k = 0; k < sizeof(T); ++k) p[k] = static_cast<unsigned char>(u >> (8 * k));
}

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint64_t offset() const { return offset_; }

  void read(unsigned char* dst, std::size_t count, const char* what) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != count)
      throw FormatError(std::string("truncated stream while reading ") + what, offset_ + got);
    offset_ += count;
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

Instance read_binary(std::istream& in) {
  BinaryReader r(in);
  std::array<unsigned char, 8> word{};
  r.read(word.data(), 4, "magic");
  if (std::memcmp(word.data(), kMagic.data(), 4) != 0)
    throw FormatError("malformed header: bad magic (expected \"SEB1\")", 0);
  r.read(word.data(), 8, "m");
  const auto m = from_le<std::uint64_t>(word.data());
  r.read(word.data(), 8, "n");
  const auto n = from_le<std::uint64_t>(word.data());
  if (m == 0) throw FormatError("m must be >= 1", 4);
  if (n == 0) throw FormatError("n must be >= 1", 12);
  if (n >= std::numeric_limits<std::uint64_t>::max() / 8 / m)
    throw FormatError("malformed header: m*n too large", 4);

  // Grow incrementally so a corrupt header cannot force a huge allocation
  // before truncation is detected.
  Vector radii;
  Vector centers;
  constexpr std::uint64_t kReserveCap = std::uint64_t{1} << 24;
  radii.reserve(static_cast<std::size_t>(std::min(m, kReserveCap)));
  centers.reserve(static_cast<std::size_t>(std::min(m * n, kReserveCap)));

  std::vector<unsigned char> record(static_cast<std::size_t>((n + 1) * 8));
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t start = r.offset();
    r.read(record.data(), record.size(), "ball record");
    const double radius = from_le<double>(record.data());
    if (!(radius >= 0.0) || !std::isfinite(radius))
      throw FormatError("negative or non-finite radius for ball " + std::to_string(i), start);
    radii.push_back(radius);
    for (std::uint64_t j = 0; j < n; ++j) {
      const double c = from_le<double>(record.data() + 8 * (j + 1));
      if (!std::isfinite(c)) throw FormatError("non-finite coordinate", start + 8 * (j + 1));
      centers.push_back(c);
    }
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing data after last ball", r.offset());
  return Instance(static_cast<std::size_t>(n), std::move(radii), std::move(centers));
}

void write_binary(const Instance& inst, std::ostream& out) {
  std::array<unsigned char, 8> word{};
  out.write(kMagic.data(), 4);
  to_le<std::uint64_t>(inst.size(), word.data());
  out.write(reinterpret_cast<const char*>(word.data()), 8);
  to_le<std::uint64_t>(inst.dimension(), word.data());
  out.write(reinterpret_cast<const char*>(word.data()), 8);

  std::vector<unsigned char> record((inst.dimension() + 1) * 8);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    to_le(inst.radius(i), record.data());
    auto c = inst.center(i);
    for (std::size_t j = 0; j < c.size(); ++j) to_le(c[j], record.data() + 8 * (j + 1));
    out.write(reinterpret_cast<const char*>(record.data()),
              static_cast<std::streamsize>(record.size()));
  }
}

}  // namespace

Instance read_instance(std::istream& source, Format format) {
  return format == Format::text ? read_text(source) : read_binary(source);
}

void write_instance(const Instance& instance, std::ostream& sink, Format format) {
  if (format == Format::text)
    write_text(instance, sink);
  else
    write_binary(instance, sink);
  if (!sink) throw std::runtime_error("failed to write instance");
}

Instance load_instance(const std::string& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in, format);
}

void save_instance(const Instance& instance, const std::string& path, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_instance(instance, out, format);
  out.flush();
  if (!out) throw std::runtime_error("failed to write " + path);
}

Format detect_format(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::array<char, 4> head{};
  in.read(head.data(), 4);
  return (in.gcount() == 4 && head == kMagic) ? Format::binary : Format::text;
}

}  // namespace seb
