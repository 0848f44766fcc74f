#include "gtds/domain.hpp"

#include <sstream>

#include "gtds/error.hpp"

namespace gtds {

Domain::Domain(std::uint64_t q, std::size_t n, std::uint64_t limit) : q_(q), n_(n), size_(1) {
  for (std::size_t i = 0; i < n; ++i) {
    if (size_ > limit / q) {
      std::ostringstream msg;
      msg << "domain " << q << "^" << n << " exceeds the limit of " << limit << " points";
      fail(ErrorCode::DomainTooLarge, msg.str());
    }
    size_ *= q;
  }
  if (size_ > limit) fail(ErrorCode::DomainTooLarge, "domain exceeds the configured limit");
}

void Domain::decode(std::uint64_t index, std::span<Element> out) const noexcept {
  for (std::size_t i = n_; i-- > 0;) {
    out[i] = Element{index % q_};
    index /= q_;
  }
}

Vec Domain::decode(std::uint64_t index) const {
  Vec x(n_);
  decode(index, x);
  return x;
}

std::uint64_t Domain::encode(std::span<const Element> x) const noexcept {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < n_; ++i) index = index * q_ + x[i].value;
  return index;
}

}  // namespace gtds
