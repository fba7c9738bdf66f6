#pragma once

#include <string>

#include "poly.hpp"
#include "strata.hpp"

namespace sendovlab {

// Zero list format: an optional header "n m" or "n=N m=M", then one
// statement per zero, "re im mult"; statements are separated by newlines or
// semicolons.  The macro "roots_of_unity:N" stands alone.
ZeroConfig parse_zeros(const std::string& text, const Tolerances& tol = {});

// Exact round-trip form: header plus one "re im mult" line per zero.
std::string serialize(const ZeroConfig& config);

// Stratum notation "n:mu_1,...,mu_m/nu_1,...,nu_k".
Structure parse_stratum(const std::string& text);
std::string format_stratum(const Structure& st);

// 17 significant digits, enough to reproduce any double exactly.
std::string fmt_real(double x);
std::string fmt_complex(Complex z);

}  // namespace sendovlab
