#include "hdldiff/hdl/logic.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdldiff {

std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

LogicVec::LogicVec(unsigned width, std::uint64_t value)
    : width_(width), aval_(value & width_mask(width)), bval_(0) {
  if (width == 0 || width > kMaxWidth) throw std::invalid_argument("LogicVec width out of range");
}

LogicVec LogicVec::all_x(unsigned width) {
  LogicVec v(width, 0);
  v.aval_ = width_mask(width);
  v.bval_ = width_mask(width);
  return v;
}

LogicVec LogicVec::all_z(unsigned width) {
  LogicVec v(width, 0);
  v.bval_ = width_mask(width);
  return v;
}

LogicVec LogicVec::from_bits(unsigned width, std::uint64_t aval, std::uint64_t bval) {
  LogicVec v(width, 0);
  v.aval_ = aval & width_mask(width);
  v.bval_ = bval & width_mask(width);
  return v;
}

Bit LogicVec::bit(unsigned i) const {
  const bool a = (aval_ >> i) & 1U;
  const bool b = (bval_ >> i) & 1U;
  if (!b) return a ? Bit::One : Bit::Zero;
  return a ? Bit::X : Bit::Z;
}

void LogicVec::set_bit(unsigned i, Bit b) {
  const std::uint64_t m = std::uint64_t{1} << i;
  aval_ &= ~m;
  bval_ &= ~m;
  if (b == Bit::One || b == Bit::X) aval_ |= m;
  if (b == Bit::X || b == Bit::Z) bval_ |= m;
}

LogicVec LogicVec::resized(unsigned width) const {
  return from_bits(width, aval_, bval_);
}

Bit LogicVec::truth() const {
  if ((aval_ & ~bval_) != 0) return Bit::One;
  if (bval_ == 0) return Bit::Zero;
  return Bit::X;
}

std::string LogicVec::to_string() const {
  std::string out = std::to_string(width_) + "'b";
  for (unsigned i = width_; i-- > 0;) {
    switch (bit(i)) {
      case Bit::Zero: out += '0'; break;
      case Bit::One: out += '1'; break;
      case Bit::X: out += 'x'; break;
      case Bit::Z: out += 'z'; break;
    }
  }
  return out;
}

LogicVec LogicVec::parse(std::string_view text) {
  const auto tick = text.find("'b");
  if (tick == std::string_view::npos) throw std::invalid_argument("bad logic value: " + std::string(text));
  const auto head = text.substr(0, tick);
  if (head.empty() || head.size() > 2 || head.find_first_not_of("0123456789") != std::string_view::npos)
    throw std::invalid_argument("bad logic value: " + std::string(text));
  const unsigned width = static_cast<unsigned>(std::stoul(std::string(head)));
  if (width < 1 || width > kMaxWidth) throw std::invalid_argument("bad logic value width: " + std::string(text));
  const auto digits = text.substr(tick + 2);
  if (digits.size() != width) throw std::invalid_argument("bad logic value width: " + std::string(text));
  LogicVec v(width, 0);
  for (unsigned i = 0; i < width; ++i) {
    const char c = digits[width - 1 - i];
    switch (c) {
      case '0': v.set_bit(i, Bit::Zero); break;
      case '1': v.set_bit(i, Bit::One); break;
      case 'x': v.set_bit(i, Bit::X); break;
      case 'z': v.set_bit(i, Bit::Z); break;
      default: throw std::invalid_argument("bad logic digit: " + std::string(text));
    }
  }
  return v;
}

namespace {

unsigned common_width(const LogicVec& a, const LogicVec& b) { return std::max(a.width(), b.width()); }

// Z reads as X for every operator.
std::uint64_t unknown_mask(const LogicVec& v) { return v.bval(); }

}  // namespace

LogicVec logic_not(const LogicVec& a) {
  const std::uint64_t unk = unknown_mask(a);
  return LogicVec::from_bits(a.width(), ~a.aval() | unk, unk);
}

LogicVec logic_neg(const LogicVec& a) {
  if (!a.is_known()) return LogicVec::all_x(a.width());
  return LogicVec(a.width(), ~a.value() + 1);
}

LogicVec logic_lnot(const LogicVec& a) {
  switch (a.truth()) {
    case Bit::One: return LogicVec(1, 0);
    case Bit::Zero: return LogicVec(1, 1);
    default: return LogicVec::all_x(1);
  }
}

LogicVec logic_and(const LogicVec& a0, const LogicVec& b0) {
  const unsigned w = common_width(a0, b0);
  const LogicVec a = a0.resized(w), b = b0.resized(w);
  const std::uint64_t a_one = a.aval() & ~a.bval(), b_one = b.aval() & ~b.bval();
  const std::uint64_t a_zero = ~a.aval() & ~a.bval(), b_zero = ~b.aval() & ~b.bval();
  const std::uint64_t one = a_one & b_one;
  const std::uint64_t zero = a_zero | b_zero;
  const std::uint64_t unk = ~(one | zero);
  return LogicVec::from_bits(w, one | unk, unk);
}

LogicVec logic_or(const LogicVec& a0, const LogicVec& b0) {
  const unsigned w = common_width(a0, b0);
  const LogicVec a = a0.resized(w), b = b0.resized(w);
  const std::uint64_t a_one = a.aval() & ~a.bval(), b_one = b.aval() & ~b.bval();
  const std::uint64_t a_zero = ~a.aval() & ~a.bval(), b_zero = ~b.aval() & ~b.bval();
  const std::uint64_t one = a_one | b_one;
  const std::uint64_t zero = a_zero & b_zero;
  const std::uint64_t unk = ~(one | zero);
  return LogicVec::from_bits(w, one | unk, unk);
}

LogicVec logic_xor(const LogicVec& a0, const LogicVec& b0) {
  const unsigned w = common_width(a0, b0);
  const LogicVec a = a0.resized(w), b = b0.resized(w);
  const std::uint64_t unk = a.bval() | b.bval();
  return LogicVec::from_bits(w, (a.aval() ^ b.aval()) | unk, unk);
}

LogicVec logic_add(const LogicVec& a, const LogicVec& b) {
  const unsigned w = common_width(a, b);
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(w);
  return LogicVec(w, a.value() + b.value());
}

LogicVec logic_sub(const LogicVec& a, const LogicVec& b) {
  const unsigned w = common_width(a, b);
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(w);
  return LogicVec(w, a.value() - b.value());
}

LogicVec logic_eq(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(1);
  return LogicVec(1, a.value() == b.value() ? 1 : 0);
}

LogicVec logic_ne(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(1);
  return LogicVec(1, a.value() != b.value() ? 1 : 0);
}

LogicVec logic_lt(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(1);
  return LogicVec(1, a.value() < b.value() ? 1 : 0);
}

LogicVec logic_gt(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(1);
  return LogicVec(1, a.value() > b.value() ? 1 : 0);
}

LogicVec logic_shl(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(a.width());
  if (b.value() >= a.width()) return LogicVec(a.width(), 0);
  return LogicVec(a.width(), a.value() << b.value());
}

LogicVec logic_shr(const LogicVec& a, const LogicVec& b) {
  if (!a.is_known() || !b.is_known()) return LogicVec::all_x(a.width());
  if (b.value() >= a.width()) return LogicVec(a.width(), 0);
  return LogicVec(a.width(), a.value() >> b.value());
}

}  // namespace hdldiff
