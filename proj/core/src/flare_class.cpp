#include "flarevt/flare_class.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "flarevt/error.hpp"

namespace flarevt {

namespace {

constexpr char kLetters[] = {'A', 'B', 'C', 'M', 'X'};

std::string one_decimal(char letter, double number) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%.1f", letter, number);
  return buf;
}

// Powers of ten are exact, so dividing gives correctly rounded fluxes (X45 -> 0.0045).
double class_divisor(char letter) {
  switch (letter) {
    case 'A': return 1e8;
    case 'B': return 1e7;
    case 'C': return 1e6;
    case 'M': return 1e5;
    default: return 1e4;
  }
}

}  // namespace

double class_multiplier(char letter) {
  switch (letter) {
    case 'A': return 1e-8;
    case 'B': return 1e-7;
    case 'C': return 1e-6;
    case 'M': return 1e-5;
    case 'X': return 1e-4;
    default:
      throw ParseError(std::string("unknown flare class letter '") + letter + "'");
  }
}

double parse_flare_class(std::string_view label) {
  const std::string token(label);
  if (label.size() < 2) {
    throw ParseError("malformed flare class '" + token + "'");
  }
  const char letter = label.front();
  if (letter != 'A' && letter != 'B' && letter != 'C' && letter != 'M' && letter != 'X') {
    throw ParseError("malformed flare class '" + token + "': unknown letter");
  }
  const std::string_view digits = label.substr(1);
  // from_chars would accept a leading '-' and exponents; only plain decimals are labels.
  for (char c : digits) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.')) {
      throw ParseError("malformed flare class '" + token + "'");
    }
  }
  double number = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), number);
  if (ec != std::errc{} || end != digits.data() + digits.size()) {
    throw ParseError("malformed flare class '" + token + "'");
  }
  if (!(number > 0.0)) {
    throw ParseError("flare class '" + token + "' must have a positive magnitude");
  }
  return number / class_divisor(letter);
}

std::string format_flare_class(double flux) {
  if (!(flux > 0.0) || !std::isfinite(flux)) {
    throw DomainError("flare class requires a positive finite flux");
  }
  for (char letter : kLetters) {
    const double mult = class_multiplier(letter);
    const double number = flux / mult;
    // Rounding to one decimal may push e.g. M9.96 up to "M10.0"; move to the next letter then.
    if (letter == 'X' || std::round(number * 10.0) < 100.0) {
      return one_decimal(letter, number);
    }
  }
  return one_decimal('X', flux / 1e-4);
}

std::string format_half_x_class(double flux) {
  if (!(flux >= 1e-4)) return format_flare_class(flux);
  const double halves = std::round(flux / 1e-4 * 2.0) / 2.0;
  char buf[32];
  if (halves == std::floor(halves)) {
    std::snprintf(buf, sizeof buf, "X%.0f", halves);
  } else {
    std::snprintf(buf, sizeof buf, "X%.1f", halves);
  }
  return buf;
}

}  // namespace flarevt
