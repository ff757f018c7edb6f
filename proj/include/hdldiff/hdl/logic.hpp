#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hdldiff {

enum class Bit : std::uint8_t { Zero, One, X, Z };

/// Four-state bit vector of up to 64 bits.
///
/// Encoding per bit (aval, bval): 0 = (0,0), 1 = (1,0), Z = (0,1), X = (1,1).
class LogicVec {
 public:
  static constexpr unsigned kMaxWidth = 64;

  LogicVec() = default;
  LogicVec(unsigned width, std::uint64_t value);

  static LogicVec all_x(unsigned width);
  static LogicVec all_z(unsigned width);
  static LogicVec from_bits(unsigned width, std::uint64_t aval, std::uint64_t bval);

  unsigned width() const { return width_; }
  std::uint64_t aval() const { return aval_; }
  std::uint64_t bval() const { return bval_; }

  bool is_known() const { return bval_ == 0; }
  bool has_z() const { return (bval_ & ~aval_) != 0; }
  std::uint64_t value() const { return aval_; }  // meaningful only when is_known()

  Bit bit(unsigned i) const;
  void set_bit(unsigned i, Bit b);

  /// Zero-extends or truncates.
  LogicVec resized(unsigned width) const;

  /// Truth value for if/for conditions: 1 if any bit is 1, 0 if all 0, else unknown.
  Bit truth() const;

  /// "8'b0000xx01"
  std::string to_string() const;
  static LogicVec parse(std::string_view text);

  friend bool operator==(const LogicVec&, const LogicVec&) = default;

 private:
  unsigned width_ = 1;
  std::uint64_t aval_ = 0;
  std::uint64_t bval_ = 0;
};

std::uint64_t width_mask(unsigned width);

// Operators follow Verilog 4-state rules. Arithmetic, comparison and shift
// results are all-X when any operand bit is X or Z.
LogicVec logic_not(const LogicVec& a);
LogicVec logic_neg(const LogicVec& a);
LogicVec logic_lnot(const LogicVec& a);
LogicVec logic_and(const LogicVec& a, const LogicVec& b);
LogicVec logic_or(const LogicVec& a, const LogicVec& b);
LogicVec logic_xor(const LogicVec& a, const LogicVec& b);
LogicVec logic_add(const LogicVec& a, const LogicVec& b);
LogicVec logic_sub(const LogicVec& a, const LogicVec& b);
LogicVec logic_eq(const LogicVec& a, const LogicVec& b);
LogicVec logic_ne(const LogicVec& a, const LogicVec& b);
LogicVec logic_lt(const LogicVec& a, const LogicVec& b);
LogicVec logic_gt(const LogicVec& a, const LogicVec& b);
LogicVec logic_shl(const LogicVec& a, const LogicVec& b);
LogicVec logic_shr(const LogicVec& a, const LogicVec& b);

}  // namespace hdldiff
