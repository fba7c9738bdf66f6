#include "io.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

namespace sendovlab {
namespace {

struct Statement {
  std::string text;
  int line;
  int column;  // of the first non-space character
};

std::vector<Statement> split_statements(const std::string& text) {
  std::vector<Statement> out;
  int line = 1, col = 1;
  Statement cur{"", 1, 1};
  bool started = false;
  auto flush = [&] {
    while (!cur.text.empty() && std::isspace((unsigned char)cur.text.back()))
      cur.text.pop_back();
    if (!cur.text.empty()) out.push_back(cur);
    cur.text.clear();
    started = false;
  };
  for (char ch : text) {
    if (ch == '\n' || ch == ';') {
      flush();
      if (ch == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      continue;
    }
    if (!started && !std::isspace((unsigned char)ch)) {
      started = true;
      cur.line = line;
      cur.column = col;
    }
    if (started) cur.text.push_back(ch);
    ++col;
  }
  flush();
  return out;
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  std::string t;
  for (char ch : s) {
    if (std::isspace((unsigned char)ch) || ch == ',') {
      if (!t.empty()) out.push_back(std::move(t));
      t.clear();
    } else {
      t.push_back(ch);
    }
  }
  if (!t.empty()) out.push_back(std::move(t));
  return out;
}

double parse_double(const std::string& tok, const Statement& st) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error("not a number: '" + tok + "'", st.line, st.column);
  if (!std::isfinite(v))
    throw parse_error("non-finite number: '" + tok + "'", st.line, st.column);
  return v;
}

long parse_int(const std::string& tok, const Statement& st) {
  long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error("not an integer: '" + tok + "'", st.line, st.column);
  return v;
}

}  // namespace

ZeroConfig parse_zeros(const std::string& text, const Tolerances& tol) {
  const std::vector<Statement> stmts = split_statements(text);
  if (stmts.empty()) throw parse_error("empty zero list", 1, 1);

  if (stmts[0].text.rfind("roots_of_unity:", 0) == 0) {
    if (stmts.size() > 1)
      throw parse_error("macro must stand alone", stmts[1].line,
                        stmts[1].column);
    const long n = parse_int(stmts[0].text.substr(15), stmts[0]);
    if (n < 2 || n > kMaxDegree)
      throw parse_error("roots_of_unity order out of range", stmts[0].line,
                        stmts[0].column);
    return ZeroConfig::roots_of_unity(static_cast<int>(n), tol);
  }

  size_t first = 0;
  long n = -1, m = -1;
  {
    auto toks = tokens_of(stmts[0].text);
    auto strip = [](std::string t, const char* key) -> std::string {
      const std::string k = std::string(key) + "=";
      if (t.rfind(k, 0) == 0) return t.substr(k.size());
      return t;
    };
    const bool keyed = !toks.empty() && toks[0].rfind("n=", 0) == 0;
    if (toks.size() == 2 && (keyed || toks[0].find('.') == std::string::npos)) {
      // try to read a header; a zero statement has three tokens
      try {
        n = parse_int(strip(toks[0], "n"), stmts[0]);
        m = parse_int(strip(toks[1], "m"), stmts[0]);
        first = 1;
      } catch (const parse_error&) {
        if (keyed) throw;
      }
    }
  }

  std::vector<Zero> zeros;
  for (size_t si = first; si < stmts.size(); ++si) {
    const Statement& st = stmts[si];
    const auto toks = tokens_of(st.text);
    if (toks.size() != 3)
      throw parse_error("expected 're im mult'", st.line, st.column);
    const double re = parse_double(toks[0], st);
    const double im = parse_double(toks[1], st);
    const long mult = parse_int(toks[2], st);
    if (mult < 1)
      throw parse_error("multiplicity must be >= 1", st.line, st.column);
    const Complex loc(re, im);
    for (const Zero& z : zeros)
      if (z.location == loc)
        throw parse_error("duplicate zero location", st.line, st.column);
    zeros.push_back({loc, static_cast<int>(mult)});
  }
  if (zeros.empty()) throw parse_error("no zeros given", 1, 1);

  long mu_sum = 0;
  for (const Zero& z : zeros) mu_sum += z.multiplicity;
  if (m >= 0 && m != static_cast<long>(zeros.size()))
    throw parse_error("header m disagrees with the zero count (" +
                          std::to_string(zeros.size()) + " given)",
                      stmts[0].line, stmts[0].column);
  if (n >= 0 && n != mu_sum)
    throw parse_error("multiplicities sum to " + std::to_string(mu_sum) +
                          ", header says n=" + std::to_string(n),
                      stmts[0].line, stmts[0].column);
  try {
    return ZeroConfig(std::move(zeros), tol);
  } catch (const contract_error& e) {
    throw parse_error(e.what(), 1, 1);
  }
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_complex(Complex z) {
  return fmt_real(z.real()) + " " + fmt_real(z.imag());
}

std::string serialize(const ZeroConfig& config) {
  std::string out = "n=" + std::to_string(config.degree()) +
                    " m=" + std::to_string(config.distinct_count()) + "\n";
  for (const Zero& z : config.zeros())
    out += fmt_complex(z.location) + " " + std::to_string(z.multiplicity) +
           "\n";
  return out;
}

Structure parse_stratum(const std::string& text) {
  const auto colon = text.find(':');
  const auto slash = text.find('/');
  if (colon == std::string::npos || slash == std::string::npos ||
      slash < colon)
    throw parse_error("expected 'n:mu_1,../nu_1,..'", 1, 1);
  Statement st{text, 1, 1};
  const long n = parse_int(text.substr(0, colon), st);
  std::vector<int> mu, nu;
  for (const auto& t :
       tokens_of(text.substr(colon + 1, slash - colon - 1)))
    mu.push_back(static_cast<int>(parse_int(t, st)));
  for (const auto& t : tokens_of(text.substr(slash + 1)))
    nu.push_back(static_cast<int>(parse_int(t, st)));
  try {
    Structure out(std::move(mu), std::move(nu));
    if (out.n != n)
      throw contract_error("stratum multiplicities sum to " +
                           std::to_string(out.n) + ", not " +
                           std::to_string(n));
    return out;
  } catch (const contract_error& e) {
    throw parse_error(e.what(), 1, 1);
  }
}

std::string format_stratum(const Structure& st) {
  std::string out = std::to_string(st.n) + ":";
  for (int i = 0; i < st.m; ++i)
    out += (i ? "," : "") + std::to_string(st.mu[i]);
  out += "/";
  for (int j = 0; j < st.k; ++j)
    out += (j ? "," : "") + std::to_string(st.nu[j]);
  return out;
}

}  // namespace sendovlab
