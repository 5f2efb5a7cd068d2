#pragma once

#include "csiaug/error.hpp"

#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

namespace csiaug {

/// Exact compression ratio num/den, kept reduced. Parsed from "1/32" or "1".
class Ratio {
public:
  constexpr Ratio() = default;

  Ratio(std::uint32_t num, std::uint32_t den) : num_(num), den_(den) {
    if (num == 0 || den == 0) {
      throw InvalidInput("ratio must be positive, got " + std::to_string(num) + "/" +
                         std::to_string(den));
    }
    const std::uint32_t g = std::gcd(num, den);
    num_ /= g;
    den_ /= g;
  }

  static Ratio parse(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num_text = text.substr(0, slash);
    const std::string_view den_text = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
    return Ratio(parse_part(num_text, text), parse_part(den_text, text));
  }

  constexpr std::uint32_t num() const noexcept { return num_; }
  constexpr std::uint32_t den() const noexcept { return den_; }
  constexpr double value() const noexcept { return static_cast<double>(num_) / den_; }

  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  /// round(ratio * dim), halves rounded up, in exact integer arithmetic.
  constexpr std::uint64_t scale(std::uint64_t dim) const noexcept {
    return (2 * static_cast<std::uint64_t>(num_) * dim + den_) / (2 * static_cast<std::uint64_t>(den_));
  }

  friend constexpr bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr bool operator<(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<std::uint64_t>(a.num_) * b.den_ < static_cast<std::uint64_t>(b.num_) * a.den_;
  }

private:
  static std::uint32_t parse_part(std::string_view part, std::string_view whole) {
    std::uint32_t value = 0;
    const auto* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc{} || ptr != end) {
      throw InvalidInput("cannot parse ratio '" + std::string(whole) + "'");
    }
    return value;
  }

  std::uint32_t num_ = 1;
  std::uint32_t den_ = 1;
};

} // namespace csiaug
