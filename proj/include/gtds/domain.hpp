#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gtds/field.hpp"

namespace gtds {

/// Points of F_q^n are numbered in mixed radix q with x_1 most significant,
/// so index order is lexicographic order of the encoded coordinates.
class Domain {
 public:
  /// Throws DomainTooLarge when q^n exceeds `limit`.
  Domain(std::uint64_t q, std::size_t n, std::uint64_t limit);

  std::uint64_t q() const noexcept { return q_; }
  std::size_t width() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }

  void decode(std::uint64_t index, std::span<Element> out) const noexcept;
  Vec decode(std::uint64_t index) const;
  std::uint64_t encode(std::span<const Element> x) const noexcept;

 private:
  std::uint64_t q_;
  std::size_t n_;
  std::uint64_t size_;
};

inline constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 20;

/// Exhaustive injectivity (hence bijectivity) test of a map F_q^n -> F_q^n.
template <class Map>
bool is_bijection(const Domain& domain, Map&& map) {
  std::vector<bool> seen(domain.size(), false);
  Vec x(domain.width());
  for (std::uint64_t idx = 0; idx < domain.size(); ++idx) {
    domain.decode(idx, x);
    const Vec y = map(std::span<const Element>(x));
    const std::uint64_t image = domain.encode(y);
    if (seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

}  // namespace gtds
