#include "stochopt/subset.hpp"

#include "stochopt/error.hpp"

namespace stochopt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NotSubmodular: return "NotSubmodular";
    case ErrorKind::DegenerateInstance: return "DegenerateInstance";
    case ErrorKind::UncertifiedScheme: return "UncertifiedScheme";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::vector<int> members(Mask s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(cardinality(s)));
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

Mask from_members(const std::vector<int>& items) {
  Mask s = 0;
  for (int i : items) s |= bit(i);
  return s;
}

bool lex_less(Mask a, Mask b) {
  if (a == b) return false;
  const Mask diff = a ^ b;
  const int first = std::countr_zero(diff);
  const Mask above = ~full_mask(first + 1);
  // The sequences agree below `first`; whichever holds `first` continues with
  // it while the other continues with something larger, unless it has ended.
  if (contains(a, first)) return (b & above) != 0;
  return (a & above) == 0;
}

std::string format_mask(Mask s, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (int i : members(s)) {
    if (!first) out += ",";
    first = false;
    out += i < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(i)] : std::to_string(i);
  }
  return out + "}";
}

}  // namespace stochopt
