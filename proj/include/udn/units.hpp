#pragma once

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace udn {

/// Parses an SIR threshold that is either a plain linear value ("0.25") or a
/// decibel value with an explicit suffix ("-6dB", "0 dB"). Everything past
/// the CLI boundary works on linear scale only.
inline double parse_theta0(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  bool db = false;
  if (s.size() >= 2) {
    const char a = s[s.size() - 2], b = s.back();
    if ((a == 'd' || a == 'D') && (b == 'b' || b == 'B')) {
      db = true;
      s.resize(s.size() - 2);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    }
  }
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("theta0: cannot parse '" + std::string(text) + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size())
    throw std::invalid_argument("theta0: trailing characters in '" + std::string(text) + "'");
  const double linear = db ? std::pow(10.0, v / 10.0) : v;
  if (!(linear >= 0.0)) throw std::invalid_argument("theta0: must be nonnegative (linear)");
  return linear;
}

}  // namespace udn
