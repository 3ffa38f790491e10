#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seb {

using Vector = std::vector<double>;

/// A ball B = { y : |y - center| <= radius }.
struct Ball {
  Vector center;
  double radius = 0.0;

  friend bool operator==(const Ball&, const Ball&) = default;
};

/// m balls in R^n. Centers are stored row-major in one contiguous buffer so
/// the evaluation kernels can stream over them; immutable after construction.
class Instance {
 public:
  /// Takes ownership of m radii and m*n center coordinates (row-major).
  /// Throws std::invalid_argument when m == 0, n == 0, the buffer sizes
  /// disagree, or a radius is negative or non-finite.
  Instance(std::size_t n, Vector radii, Vector centers);

  static Instance from_balls(std::span<const Ball> balls);

  std::size_t size() const noexcept { return radii_.size(); }
  std::size_t dimension() const noexcept { return n_; }

  std::span<const double> center(std::size_t i) const noexcept {
    return {centers_.data() + i * n_, n_};
  }
  double radius(std::size_t i) const noexcept { return radii_[i]; }
  Ball ball(std::size_t i) const;

  std::span<const double> radii() const noexcept { return radii_; }
  std::span<const double> centers() const noexcept { return centers_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t n_;
  Vector radii_;
  Vector centers_;
};

// Linear congruential sequence psi_{i+1} = (445 psi_i + 1) mod 4096 with the
// emitted value psi_{i+1} / 40.96, seeded at psi_0 = 7.
struct GeneratorState {
  std::uint32_t psi = 7;
};

std::pair<GeneratorState, double> generator_next(GeneratorState state) noexcept;

/// Deterministic test instance: r_1, c_1(1..n), r_2, c_2(1..n), ... are filled
/// with successive generator values starting after the seed.
Instance generate_instance(std::size_t m, std::size_t n);

enum class Format { text, binary };

/// Raised for malformed instance streams; offset is the byte position at
/// which the problem was detected.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

Instance read_instance(std::istream& source, Format format);
void write_instance(const Instance& instance, std::ostream& sink, Format format);

Instance load_instance(const std::string& path, Format format);
void save_instance(const Instance& instance, const std::string& path, Format format);

/// Guesses the format from the first bytes of a file ("SEB1" magic -> binary).
Format detect_format(const std::string& path);

}  // namespace seb
