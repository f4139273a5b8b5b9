#include "qmcs/weight.hpp"

#include <charconv>
#include <stdexcept>

namespace qmcs {
namespace {

boost::multiprecision::cpp_int parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("sign without digits");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
  }
  std::string digits(text.substr(start));
  boost::multiprecision::cpp_int value(digits);
  return text.front() == '-' ? boost::multiprecision::cpp_int(-value) : value;
}

}  // namespace

Weight parse_weight(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Weight(parse_integer(text));
  auto num = parse_integer(text.substr(0, slash));
  auto den = parse_integer(text.substr(slash + 1));
  if (den <= 0) throw std::invalid_argument("denominator must be positive");
  return Weight(num, den);
}

std::string format_weight(const Weight& w) {
  const auto& den = boost::multiprecision::denominator(w);
  if (den == 1) return boost::multiprecision::numerator(w).str();
  return boost::multiprecision::numerator(w).str() + "/" + den.str();
}

double to_double(const Weight& w) { return w.convert_to<double>(); }

std::int64_t denominator_of(const Weight& w) {
  const auto& den = boost::multiprecision::denominator(w);
  if (den > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  return den.convert_to<std::int64_t>();
}

}  // namespace qmcs
