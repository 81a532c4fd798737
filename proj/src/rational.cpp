#include "qpi/rational.hpp"

#include <cctype>

#include "qpi/errors.hpp"

namespace qpi {

std::string rational_to_string(const Rational& r) {
  return r.get_str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw UsageError("empty rational literal");
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') ++i;
  bool saw_digit = false, saw_slash = false;
  for (; i < text.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      saw_digit = true;
    } else if (text[i] == '/' && !saw_slash && saw_digit) {
      saw_slash = true;
      saw_digit = false;
    } else {
      throw UsageError("bad rational literal '" + text + "'");
    }
  }
  if (!saw_digit) throw UsageError("bad rational literal '" + text + "'");
  Rational r;
  if (r.set_str(text[0] == '+' ? text.substr(1) : text, 10) != 0)
    throw UsageError("bad rational literal '" + text + "'");
  if (r.get_den() == 0) throw UsageError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

}  // namespace qpi
