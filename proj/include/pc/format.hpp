#pragma once

#include <string>

namespace pc {

/// Locale-independent decimal with 17 significant digits; "inf", "-inf" and "nan" for non-finite.
std::string fmt17(double v);

}  // namespace pc
