#pragma once

#include <string>
#include <string_view>

namespace flarevt {

/// Converts a GOES class label ("X9.3", "M2", "A1") into peak flux in W m^-2.
/// Throws ParseError naming the offending token.
double parse_flare_class(std::string_view label);

/// Formats a flux as a class label with one decimal ("X9.3", "M2.0").
/// Letters A..M carry numbers in [1, 10); X is open-ended ("X45.0").
std::string format_flare_class(double flux);

/// Class label rounded to the nearest half unit of the X scale ("X24.5").
/// Fluxes below X1 fall back to format_flare_class.
std::string format_half_x_class(double flux);

/// Multiplier for a class letter, e.g. 'M' -> 1e-5. Throws on unknown letters.
double class_multiplier(char letter);

}  // namespace flarevt
