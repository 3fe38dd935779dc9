#pragma once

#include <complex>
#include <string>

namespace opdyn {

// Shortest round-trip decimal form.
std::string format_double(double v);
// "a+bi" style, omitting zero parts.
std::string format_complex(std::complex<double> z);

}  // namespace opdyn
