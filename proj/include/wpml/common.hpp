// Shared vocabulary: element ids, bitmask sets, the error type.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpml {

/// Dense element id; index into the `elements` list of a finite structure.
using Id = std::size_t;

/// A subset of a structure with at most 64 elements.
using Mask = std::uint64_t;

inline constexpr std::size_t kMaxElements = 64;

constexpr Mask bit(Id i) noexcept { return Mask{1} << i; }
constexpr bool has(Mask m, Id i) noexcept { return ((m >> i) & 1U) != 0; }
constexpr bool subset(Mask a, Mask b) noexcept { return (a & ~b) == 0; }
constexpr Mask full_mask(std::size_t n) noexcept {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}
inline int popcount(Mask m) noexcept { return std::popcount(m); }

/// Calls `fn(i)` for every member of `m` in increasing order.
template <typename Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    const auto i = static_cast<Id>(std::countr_zero(m));
    fn(i);
    m &= m - 1;
  }
}

inline std::vector<Id> members(Mask m) {
  std::vector<Id> out;
  for_each_bit(m, [&](Id i) { out.push_back(i); });
  return out;
}

enum class ErrorKind {
  Parse,
  Validation,
  Precondition,
  ResourceBound,
  UndefinedLetter,
  InternalInconsistency,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Precondition: return "PreconditionViolated";
    case ErrorKind::ResourceBound: return "ResourceBound";
    case ErrorKind::UndefinedLetter: return "UndefinedLetter";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::Io: return "IOError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void check_size(std::size_t n, const char* what) {
  if (n > kMaxElements) {
    throw Error(ErrorKind::ResourceBound,
                std::string(what) + " has " + std::to_string(n) + " elements; the cap is 64");
  }
}

/// Witness of a failed structural check: which condition, and the least
/// offending tuple of element ids.
struct Violation {
  std::string condition;
  std::vector<Id> witness;

  bool operator==(const Violation&) const = default;
};

}  // namespace wpml
